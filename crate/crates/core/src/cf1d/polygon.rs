use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::surd::{cf_expand, QuadNum, QuadraticSurd};
use crate::error::{Error, Result};
use crate::exactint::IntMatrix;
use crate::json;

/// One of the four open cones `{u(1,α) + v(1,β) : sign u = s₀, sign v = s₁}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quadrant(pub [i8; 2]);

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant([1, 1]), Quadrant([1, -1]), Quadrant([-1, 1]), Quadrant([-1, -1])];

    pub fn new(s0: i8, s1: i8) -> Result<Self> {
        if s0.abs() != 1 || s1.abs() != 1 {
            return Err(Error::DegenerateCone);
        }
        Ok(Quadrant([s0, s1]))
    }

    pub fn antipode(self) -> Self {
        Quadrant([-self.0[0], -self.0[1]])
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&q| q == self).expect("valid signs")
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |s: i8| if s > 0 { '+' } else { '-' };
        write!(f, "{},{}", c(self.0[0]), c(self.0[1]))
    }
}

impl FromStr for Quadrant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs: Vec<i8> = s
            .split(',')
            .enumerate()
            .map(|(i, t)| match t.trim() {
                "+" | "+1" | "1" => Ok(1),
                "-" | "-1" => Ok(-1),
                _ => Err(Error::parse(i, format!("bad sign {t:?}"))),
            })
            .collect::<Result<_>>()?;
        match signs[..] {
            [a, b] => Quadrant::new(a, b),
            _ => Err(Error::parse(0, "expected two signs")),
        }
    }
}

impl Serialize for Quadrant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Quadrant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact order of two quadratic irrationals, possibly from different fields.
pub fn compare_surds(x: &QuadraticSurd, y: &QuadraticSurd) -> Ordering {
    if x.value() == y.value() {
        return Ordering::Equal;
    }
    let (cx, cy) = (cf_expand(x).expect("irrational"), cf_expand(y).expect("irrational"));
    let bound = cx.preperiod.len() + cy.preperiod.len() + 2 * cx.period.len() * cy.period.len() + 2;
    for k in 0..bound {
        match cx.quotient(k).cmp(cy.quotient(k)) {
            Ordering::Equal => continue,
            o if k % 2 == 0 => return o,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// Lattice point with exact membership tests for one cone.
#[derive(Clone, Debug)]
pub struct ConeTest {
    alpha: QuadNum,
    beta: QuadNum,
    quadrant: Quadrant,
    alpha_gt_beta: bool,
}

impl ConeTest {
    pub fn new(alpha: &QuadraticSurd, beta: &QuadraticSurd, quadrant: Quadrant) -> Result<Self> {
        let o = compare_surds(alpha, beta);
        if o == Ordering::Equal {
            return Err(Error::DegenerateCone);
        }
        Ok(ConeTest { alpha: alpha.value(), beta: beta.value(), quadrant, alpha_gt_beta: o == Ordering::Greater })
    }

    /// Signs of the coordinates `(u, v)` of `(x, y) = u(1,α) + v(1,β)`.
    pub fn signs(&self, x: &BigInt, y: &BigInt) -> [Ordering; 2] {
        let da = self.alpha.parts().3.clone();
        let db = self.beta.parts().3.clone();
        // u(α - β) = y - xβ, v(α - β) = xα - y
        let u = QuadNum::from_int(y.clone(), &db).sub(&self.beta.mul(&QuadNum::from_int(x.clone(), &db)));
        let v = self.alpha.mul(&QuadNum::from_int(x.clone(), &da)).sub(&QuadNum::from_int(y.clone(), &da));
        let flip = |o: Ordering| if self.alpha_gt_beta { o } else { o.reverse() };
        [flip(u.signum()), flip(v.signum())]
    }

    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        let want = |s: i8| if s > 0 { Ordering::Greater } else { Ordering::Less };
        let [su, sv] = self.signs(x, y);
        su == want(self.quadrant.0[0]) && sv == want(self.quadrant.0[1])
    }
}

/// A run of consecutive vertices of the Klein polygon of a cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleinPolygon {
    pub cone: Quadrant,
    /// Vertices in order along the sail boundary.
    #[serde(with = "json::bigint_rows")]
    pub vertices: Vec<Vec<BigInt>>,
    /// Unimodular map taking the cone to `{x > 0, β'x < y < α'x}` with `β' < 0 < α'`.
    pub normalizer: IntMatrix,
    pub upper_slope: String,
    pub lower_slope: String,
}

impl KleinPolygon {
    pub fn vertex_points(&self) -> Vec<[BigInt; 2]> {
        self.vertices.iter().map(|v| [v[0].clone(), v[1].clone()]).collect()
    }

    /// Integer lengths of the edges between consecutive vertices.
    pub fn edge_lengths(&self) -> Vec<BigInt> {
        self.vertices.windows(2).map(|w| (&w[1][0] - &w[0][0]).gcd(&(&w[1][1] - &w[0][1]))).collect()
    }

    /// Integer angles `|det(e_in, e_out)|` of primitive edge directions at
    /// interior vertices of the run.
    pub fn vertex_angles(&self) -> Vec<BigInt> {
        let dirs: Vec<[BigInt; 2]> = self
            .vertices
            .windows(2)
            .map(|w| {
                let e = [&w[1][0] - &w[0][0], &w[1][1] - &w[0][1]];
                let g = e[0].gcd(&e[1]);
                [&e[0] / &g, &e[1] / &g]
            })
            .collect();
        dirs.windows(2).map(|d| (&d[0][0] * &d[1][1] - &d[0][1] * &d[1][0]).abs()).collect()
    }
}

/// Affine ray image tracked exactly in its own quadratic field.
#[derive(Clone)]
struct Ray {
    x: QuadNum,
    y: QuadNum,
}

impl Ray {
    fn apply(&self, m: [[i64; 2]; 2]) -> Ray {
        let d = self.x.parts().3.clone();
        let k = |v: i64| QuadNum::from_int(v.into(), &d);
        Ray {
            x: self.x.mul(&k(m[0][0])).add(&self.y.mul(&k(m[0][1]))),
            y: self.x.mul(&k(m[1][0])).add(&self.y.mul(&k(m[1][1]))),
        }
    }

    fn slope(&self) -> QuadNum {
        self.y.div(&self.x).expect("nonzero first coordinate")
    }
}

fn mat_mul(a: [[i64; 2]; 2], b: &IntMatrix) -> IntMatrix {
    IntMatrix::from_i64(a).mul(b)
}

fn apply_big(m: &IntMatrix, r: &Ray) -> Ray {
    let d = r.x.parts().3.clone();
    let k = |v: &BigInt| QuadNum::from_int(v.clone(), &d);
    Ray {
        x: r.x.mul(&k(m.get(0, 0))).add(&r.y.mul(&k(m.get(0, 1)))),
        y: r.x.mul(&k(m.get(1, 0))).add(&r.y.mul(&k(m.get(1, 1)))),
    }
}

/// Simplest rational strictly between two distinct irrationals.
fn fraction_between(lo: &QuadNum, hi: &QuadNum) -> (BigInt, BigInt) {
    let (fl, fh) = (lo.floor(), hi.floor());
    if fl != fh {
        return (fl + 1, BigInt::one());
    }
    // both in (a, a+1): recurse on 1/(hi - a) < 1/(lo - a)
    let d_lo = lo.parts().3.clone();
    let d_hi = hi.parts().3.clone();
    let nl = hi.sub(&QuadNum::from_int(fl.clone(), &d_hi)).inv().expect("irrational");
    let nh = lo.sub(&QuadNum::from_int(fl.clone(), &d_lo)).inv().expect("irrational");
    let (p, q) = fraction_between(&nl, &nh);
    // a + q/p
    (&fl * &p + q, p)
}

/// Extended gcd completion: `(x, y)` with `w0·y - w1·x = 1` for primitive `w`.
fn complete_row(w0: &BigInt, w1: &BigInt) -> (BigInt, BigInt) {
    let e = w0.extended_gcd(w1);
    debug_assert!(e.gcd.is_one());
    // w0·e.x + w1·e.y = 1  ⇒  x = -e.y, y = e.x
    (-e.y, e.x)
}

fn convergents(s: &QuadraticSurd, count: usize) -> Result<Vec<(BigInt, BigInt)>> {
    let cf = cf_expand(s)?;
    let (mut p, mut q) = (BigInt::one(), BigInt::zero());
    let (mut pp, mut qp) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(count);
    for a in cf.quotients().take(count) {
        let np = a * &p + &pp;
        let nq = a * &q + &qp;
        pp = std::mem::replace(&mut p, np);
        qp = std::mem::replace(&mut q, nq);
        out.push((p.clone(), q.clone()));
    }
    Ok(out)
}

/// `count` consecutive vertices of the Klein polygon of the cone selected by
/// `quadrant` between the directions `(1, α)` and `(1, β)`, centred on the
/// edge crossed by the normalized first axis and ordered along the boundary.
/// Vertices come from even convergents of the normalized boundary slopes;
/// every pair of neighbours is checked to span an empty lattice triangle with
/// the origin and every turn to be strictly convex.
pub fn klein_polygon(
    alpha: &QuadraticSurd,
    beta: &QuadraticSurd,
    quadrant: Quadrant,
    count: usize,
) -> Result<KleinPolygon> {
    let test = ConeTest::new(alpha, beta, quadrant)?;
    let s = |x: i8| BigInt::from(x);
    let ray = |v: &QuadraticSurd, sign: i8| {
        let val = v.value();
        let d = val.parts().3.clone();
        Ray { x: QuadNum::from_int(s(sign), &d), y: val.mul(&QuadNum::from_int(s(sign), &d)) }
    };
    let mut r1 = ray(alpha, quadrant.0[0]);
    let mut r2 = ray(beta, quadrant.0[1]);

    // first coordinate positive on both rays
    let mut u = IntMatrix::identity(2);
    if quadrant.0[0] != quadrant.0[1] {
        let (lo, hi, a_high) = if test.alpha_gt_beta {
            (beta.value(), alpha.value(), true)
        } else {
            (alpha.value(), beta.value(), false)
        };
        let (p, q) = fraction_between(&lo, &hi);
        // covector (-p, q) is positive on (1, hi) and negative on (1, lo)
        let pos_on_r1 = (quadrant.0[0] > 0) == a_high;
        let w = if pos_on_r1 { [-p.clone(), q.clone()] } else { [p.clone(), -q.clone()] };
        let (x, y) = complete_row(&w[0], &w[1]);
        u = IntMatrix::from_rows(vec![vec![w[0].clone(), w[1].clone()], vec![x, y]])?;
    } else if quadrant.0[0] < 0 {
        u = u.neg();
    }
    r1 = apply_big(&u, &r1);
    r2 = apply_big(&u, &r2);
    debug_assert!(r1.x.signum() == Ordering::Greater && r2.x.signum() == Ordering::Greater);

    // Euclid-like normalization until an integer separates the slopes
    let k_final = loop {
        let (f1, f2) = (r1.slope().floor(), r2.slope().floor());
        if f1 != f2 {
            break f1.min(f2) + BigInt::one();
        }
        let k = i64::try_from(&f1).map_err(|_| Error::StructureViolation("slope overflow".into()))?;
        let shear = [[1, 0], [-k, 1]];
        let rot = [[0, 1], [-1, 0]];
        u = mat_mul(rot, &mat_mul(shear, &u));
        r1 = r1.apply(shear).apply(rot);
        r2 = r2.apply(shear).apply(rot);
    };
    let shear = IntMatrix::from_rows(vec![vec![BigInt::one(), BigInt::zero()], vec![-k_final, BigInt::one()]])?;
    u = shear.mul(&u);
    r1 = apply_big(&shear, &r1);
    r2 = apply_big(&shear, &r2);
    let (m1, m2) = (r1.slope(), r2.slope());
    let above = compare_surds(&m1.to_surd()?, &m2.to_surd()?) == Ordering::Greater;
    let (upper, lower) = if above { (m1, m2) } else { (m2, m1) };

    let lower_neg = lower.neg();
    let n_low = count / 2;
    let n_up = count - n_low + 1;
    let up = convergents(&upper.to_surd()?, 2 * n_up + 1)?;
    let low = convergents(&lower_neg.to_surd()?, 2 * n_low + 3)?;
    let mut upper_chain: Vec<[BigInt; 2]> = up.iter().step_by(2).map(|(p, q)| [q.clone(), p.clone()]).collect();
    let mut lower_chain: Vec<[BigInt; 2]> = low.iter().step_by(2).map(|(p, q)| [q.clone(), -p]).collect();
    if lower_chain[0] == upper_chain[0] {
        lower_chain.remove(0);
    }
    lower_chain.truncate(n_low);
    upper_chain.truncate(count - lower_chain.len());
    lower_chain.reverse();
    lower_chain.extend(upper_chain);

    let inv = u.inverse_unimodular().expect("unimodular");
    let vertices: Vec<Vec<BigInt>> =
        lower_chain.iter().map(|v| inv.mul_vec(&[v[0].clone(), v[1].clone()])).collect();
    certify_chain(&vertices, &test)?;
    Ok(KleinPolygon {
        cone: quadrant,
        vertices,
        normalizer: u,
        upper_slope: upper.to_string(),
        lower_slope: lower.to_string(),
    })
}

/// Consecutive vertices bound empty triangles with the origin and turn convexly.
fn certify_chain(vs: &[Vec<BigInt>], test: &ConeTest) -> Result<()> {
    let fail = |m: String| Err(Error::StructureViolation(m));
    for v in vs {
        if !test.contains(&v[0], &v[1]) {
            return fail(format!("vertex ({}, {}) outside the cone", v[0], v[1]));
        }
    }
    for w in vs.windows(2) {
        let det = (&w[0][0] * &w[1][1] - &w[0][1] * &w[1][0]).abs();
        let len = (&w[1][0] - &w[0][0]).gcd(&(&w[1][1] - &w[0][1]));
        if det != len {
            return fail(format!("edge ({}, {})-({}, {}) is not a sail edge", w[0][0], w[0][1], w[1][0], w[1][1]));
        }
    }
    let mut sign = 0;
    for w in vs.windows(3) {
        let e1 = [&w[1][0] - &w[0][0], &w[1][1] - &w[0][1]];
        let e2 = [&w[2][0] - &w[1][0], &w[2][1] - &w[1][1]];
        let t = (&e1[0] * &e2[1] - &e1[1] * &e2[0]).signum();
        let t = if t.is_positive() { 1 } else if t.is_negative() { -1 } else { 0 };
        if t == 0 || (sign != 0 && t != sign) {
            return fail("chain is not strictly convex".into());
        }
        sign = t;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<Vec<BigInt>> {
        v.iter().map(|&(x, y)| vec![x.into(), y.into()]).collect()
    }

    #[test]
    fn golden_first_quadrant() {
        let a = QuadraticSurd::from_i64(1, 2, 5).unwrap();
        let b = a.conjugate();
        let poly = klein_polygon(&a, &b, Quadrant([1, 1]), 6).unwrap();
        assert_eq!(poly.vertices, pts(&[(5, -3), (2, -1), (1, 0), (1, 1), (2, 3), (5, 8)]));
    }

    #[test]
    fn every_cone_certifies() {
        let a = QuadraticSurd::sqrt(7).unwrap();
        let b = a.conjugate();
        for q in Quadrant::ALL {
            let p = klein_polygon(&a, &b, q, 7).unwrap();
            assert_eq!(p.vertices.len(), 7);
        }
    }

    #[test]
    fn thin_cone_between_two_fields() {
        // √2 and (2 + √3)/2 ≈ 1.866 share a floor
        let a = QuadraticSurd::sqrt(2).unwrap();
        let b = QuadraticSurd::from_i64(2, 2, 3).unwrap();
        for q in Quadrant::ALL {
            let p = klein_polygon(&a, &b, q, 5).unwrap();
            assert_eq!(p.vertices.len(), 5);
        }
        assert_eq!(klein_polygon(&a, &a, Quadrant([1, 1]), 3).unwrap_err(), Error::DegenerateCone);
    }

    #[test]
    fn quadrant_parsing() {
        assert_eq!("+,-".parse::<Quadrant>().unwrap(), Quadrant([1, -1]));
        assert!("+".parse::<Quadrant>().is_err());
    }
}
