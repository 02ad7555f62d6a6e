use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::polygon::Quadrant;
use super::surd::{cf_expand, QuadNum, QuadraticSurd};
use crate::error::{Error, Result};
use crate::exactint::{is_hyperbolic, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    Dirichlet,
    Palindromic,
}

/// Exact eigen-data of a hyperbolic 2×2 operator: left eigenvectors
/// `ℓ_i = (a₁₀, λ_i - a₀₀)` for `λ₁ > λ₂`. The cone of a point `p` is the sign
/// pattern of `(ℓ₁·p, ℓ₂·p)`.
#[derive(Clone, Debug)]
pub struct EigenCones2d {
    a: IntMatrix,
    lambdas: [QuadNum; 2],
    reps: [[BigInt; 2]; 4],
}

impl EigenCones2d {
    pub fn new(a: &IntMatrix) -> Result<Self> {
        if a.dim() != 2 {
            return Err(Error::UnsupportedDimension(a.dim()));
        }
        if !is_hyperbolic(a)? {
            return Err(Error::NotHyperbolic);
        }
        let tr = a.trace();
        let disc = &tr * &tr - BigInt::from(4) * a.det();
        let two = BigInt::from(2);
        let l1 = QuadNum::new(tr.clone(), BigInt::one(), two.clone(), disc.clone())?;
        let l2 = QuadNum::new(tr, -BigInt::one(), two, disc)?;
        let mut me = EigenCones2d { a: a.clone(), lambdas: [l1, l2], reps: Default::default() };
        let mut found: [Option<[BigInt; 2]>; 4] = Default::default();
        let mut r = 1i64;
        while found.iter().any(Option::is_none) {
            for x in -r..=r {
                for y in -r..=r {
                    let p = [BigInt::from(x), BigInt::from(y)];
                    if let Some(q) = me.try_locate(&p) {
                        let slot = &mut found[q.index()];
                        if slot.is_none() {
                            *slot = Some(p);
                        }
                    }
                }
            }
            r += 1;
        }
        me.reps = found.map(|p| p.expect("all cones found"));
        Ok(me)
    }

    fn coord(&self, i: usize, p: &[BigInt; 2]) -> QuadNum {
        let d = self.lambdas[i].parts().3.clone();
        let k = |v: BigInt| QuadNum::from_int(v, &d);
        let l0 = k(self.a.get(1, 0).clone());
        let l1 = self.lambdas[i].sub(&k(self.a.get(0, 0).clone()));
        l0.mul(&k(p[0].clone())).add(&l1.mul(&k(p[1].clone())))
    }

    fn try_locate(&self, p: &[BigInt; 2]) -> Option<Quadrant> {
        let s: Vec<i8> = (0..2)
            .map(|i| match self.coord(i, p).signum() {
                Ordering::Greater => 1,
                Ordering::Less => -1,
                Ordering::Equal => 0,
            })
            .collect();
        Quadrant::new(s[0], s[1]).ok()
    }

    /// Cone of a nonzero lattice point; lattice points never lie on eigenlines.
    pub fn locate(&self, p: &[BigInt; 2]) -> Quadrant {
        self.try_locate(p).expect("irrational eigenlines")
    }

    pub fn representative(&self, q: Quadrant) -> &[BigInt; 2] {
        &self.reps[q.index()]
    }

    /// Image of every cone under `g`, indexed like `Quadrant::ALL`.
    pub fn cone_action(&self, g: &IntMatrix) -> Vec<Quadrant> {
        Quadrant::ALL
            .iter()
            .map(|&q| {
                let p = self.representative(q);
                let img = g.mul_vec(p);
                self.locate(&[img[0].clone(), img[1].clone()])
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport2d {
    pub g: IntMatrix,
    pub kind: SymmetryKind,
    #[serde(with = "crate::json::int_str")]
    pub det: i8,
    /// Image of each cone, in the order `+,+`, `+,-`, `-,+`, `-,-`.
    pub cone_images: Vec<Quadrant>,
    pub fixed_cones: Vec<Quadrant>,
}

fn adj2(m: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

fn mul2(a: [[i128; 2]; 2], b: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// All `G ∈ GL₂(Z)` with entries bounded by `entry_bound` that permute the
/// eigenlines of `a`, i.e. `GAG⁻¹` commutes with `A`. Ordered by the
/// entries of `G` row-major.
pub fn find_symmetries_2d(a: &IntMatrix, entry_bound: u32) -> Result<Vec<SymmetryReport2d>> {
    let cones = EigenCones2d::new(a)?;
    let am: [[i128; 2]; 2] = [0, 1].map(|i| [0, 1].map(|j| a.get(i, j).to_i128().expect("small operator")));
    let b = entry_bound as i128;
    let mut out = Vec::new();
    for g00 in -b..=b {
        for g01 in -b..=b {
            for g10 in -b..=b {
                for g11 in -b..=b {
                    let det = g00 * g11 - g01 * g10;
                    if det != 1 && det != -1 {
                        continue;
                    }
                    let g = [[g00, g01], [g10, g11]];
                    // G⁻¹ = det·adj(G)
                    let ginv = adj2(g).map(|r| r.map(|x| x * det));
                    let c = mul2(mul2(g, am), ginv);
                    if mul2(c, am) != mul2(am, c) {
                        continue;
                    }
                    let kind =
                        if mul2(g, am) == mul2(am, g) { SymmetryKind::Dirichlet } else { SymmetryKind::Palindromic };
                    let gm = IntMatrix::from_i64([[g00 as i64, g01 as i64], [g10 as i64, g11 as i64]]);
                    let cone_images = cones.cone_action(&gm);
                    let fixed_cones =
                        Quadrant::ALL.iter().zip(&cone_images).filter(|(q, img)| q == img).map(|(q, _)| *q).collect();
                    out.push(SymmetryReport2d { g: gm, kind, det: det as i8, cone_images, fixed_cones });
                }
            }
        }
    }
    Ok(out)
}

/// Slopes `α, α'` of the eigenlines `y = αx` of a hyperbolic 2×2 operator.
pub fn eigen_slopes(a: &IntMatrix) -> Result<(QuadraticSurd, QuadraticSurd)> {
    if a.dim() != 2 {
        return Err(Error::UnsupportedDimension(a.dim()));
    }
    if !is_hyperbolic(a)? {
        return Err(Error::NotHyperbolic);
    }
    let (a00, a01, a11) = (a.get(0, 0), a.get(0, 1), a.get(1, 1));
    let tr = a00 + a11;
    let d = &tr * &tr - BigInt::from(4) * a.det();
    let s = QuadraticSurd::new(a11 - a00, BigInt::from(2) * a01, d)?;
    let c = s.conjugate();
    Ok((s, c))
}

/// Hyperbolic operator with eigenvector `(1, α)`: built from the continued
/// fraction matrices of `α` and then conjugated by the coordinate swap.
pub fn operator_from_surd(s: &QuadraticSurd) -> Result<IntMatrix> {
    let cf = cf_expand(s)?;
    let prod = |qs: &[BigInt]| {
        qs.iter().fold(IntMatrix::identity(2), |acc, a| {
            acc.mul(
                &IntMatrix::from_rows(vec![vec![a.clone(), BigInt::one()], vec![BigInt::one(), BigInt::zero()]])
                    .expect("2x2"),
            )
        })
    };
    let m = prod(&cf.period);
    let p = prod(&cf.preperiod);
    let a = p.conjugate(&m).expect("unimodular");
    let j = IntMatrix::from_i64([[0, 1], [1, 0]]);
    Ok(j.mul(&a).mul(&j))
}

/// `det G` of a palindromic symmetry against the cone dichotomy: `-1` fixes
/// exactly two opposite cones, `+1` moves all four.
pub fn dichotomy_holds(r: &SymmetryReport2d) -> bool {
    match (r.kind, r.det) {
        (SymmetryKind::Palindromic, -1) => r.fixed_cones.len() == 2 && r.fixed_cones[0] == r.fixed_cones[1].antipode(),
        (SymmetryKind::Palindromic, 1) => r.fixed_cones.is_empty(),
        _ => true,
    }
}

/// Signs of `ℓ·p` are irrational-exact; this helper exposes the sign of the
/// first eigen-coordinate for tests and reports.
pub fn eigen_coordinate_sign(cones: &EigenCones2d, i: usize, p: &[BigInt; 2]) -> Ordering {
    cones.coord(i, p).signum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_rotation_is_palindromic() {
        let a = IntMatrix::from_i64([[1, 1], [1, 0]]);
        let syms = find_symmetries_2d(&a, 2).unwrap();
        let rot = IntMatrix::from_i64([[0, -1], [1, 0]]);
        let r = syms.iter().find(|r| r.g == rot).expect("rotation found");
        assert_eq!(r.kind, SymmetryKind::Palindromic);
        assert_eq!(r.det, 1);
        assert!(r.fixed_cones.is_empty());
        let me = syms.iter().find(|r| r.g == a).unwrap();
        assert_eq!(me.kind, SymmetryKind::Dirichlet);
        assert!(syms.iter().all(dichotomy_holds));
    }

    #[test]
    fn operator_has_surd_eigenvector() {
        let s = QuadraticSurd::from_i64(1, 2, 5).unwrap();
        let a = operator_from_surd(&s).unwrap();
        assert_eq!(a, IntMatrix::from_i64([[0, 1], [1, 1]]));
        let s = QuadraticSurd::sqrt(3).unwrap();
        let a = operator_from_surd(&s).unwrap();
        // A (1, √3)ᵀ ∝ (1, √3)ᵀ
        let d = BigInt::from(3);
        let alpha = s.value();
        let k = |v: &BigInt| QuadNum::from_int(v.clone(), &d);
        let x = k(a.get(0, 0)).add(&k(a.get(0, 1)).mul(&alpha));
        let y = k(a.get(1, 0)).add(&k(a.get(1, 1)).mul(&alpha));
        assert_eq!(y, x.mul(&alpha));
        assert!(is_hyperbolic(&a).unwrap());
    }

    #[test]
    fn golden_eigen_slopes() {
        let (a, b) = eigen_slopes(&IntMatrix::from_i64([[0, 1], [1, 1]])).unwrap();
        assert_eq!(a.to_string(), "(1+sqrt(5))/2");
        assert_eq!(b, a.conjugate());
    }

    #[test]
    fn rejects_non_hyperbolic() {
        assert_eq!(find_symmetries_2d(&IntMatrix::from_i64([[1, 1], [0, 1]]), 1).unwrap_err(), Error::NotHyperbolic);
    }
}
