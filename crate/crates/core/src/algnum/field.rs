use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::interval::{eval_interval, isolate_real_roots, pow2_neg, refine_root, RatInterval};
use crate::error::{Error, Result};
use crate::exactint::{IntMatrix, RatMatrix};
use crate::json;
use crate::poly::{IntPolynomial, RatPoly};

/// Width, in bits, to which root intervals are refined at construction.
const STORED_ROOT_BITS: u32 = 96;

/// Totally real number field `Q[x]/(f)` with a designated real root `θ`.
///
/// Embeddings are indexed from 0: embedding 0 sends `θ` to the designated
/// root, the rest follow in ascending order of root value.
#[derive(Debug)]
pub struct NumberField {
    poly: IntPolynomial,
    root_index: usize,
    roots: Vec<RatInterval>,
    roots_f64: Vec<f64>,
    order: Vec<usize>,
    automorphisms: OnceLock<Vec<Vec<BigRational>>>,
}

#[derive(Serialize, Deserialize)]
struct FieldDescriptor {
    #[serde(with = "json::bigint_vec")]
    minpoly: Vec<BigInt>,
    root_index: usize,
}

impl NumberField {
    /// `root_index` selects `θ` among the real roots in ascending order.
    pub fn new(f: &IntPolynomial, root_index: usize) -> Result<Arc<Self>> {
        let poly = f.normalized();
        let n = poly.degree();
        if n == 0 || n > 3 {
            return Err(Error::InvalidField(format!("degree {n} of {poly}")));
        }
        if poly.is_irreducible_low_degree() != Some(true) {
            return Err(Error::InvalidField(format!("{poly} is reducible")));
        }
        let isolated = isolate_real_roots(&poly)?;
        if isolated.len() != n {
            return Err(Error::InvalidField(format!("{poly} has {} real roots of {n}", isolated.len())));
        }
        if root_index >= n {
            return Err(Error::InvalidField(format!("root index {root_index} out of range")));
        }
        let fr = poly.to_rat();
        let roots: Vec<RatInterval> =
            isolated.iter().map(|iv| refine_root(&fr, iv, &pow2_neg(STORED_ROOT_BITS))).collect();
        let roots_f64 = roots.iter().map(|iv| iv.to_f64()).collect();
        let mut order = vec![root_index];
        order.extend((0..n).filter(|&i| i != root_index));
        Ok(Arc::new(NumberField { poly, root_index, roots, roots_f64, order, automorphisms: OnceLock::new() }))
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    /// Root intervals in ascending order of root value.
    pub fn root_intervals(&self) -> &[RatInterval] {
        &self.roots
    }

    /// Position in the ascending root list of the image of `θ` under embedding `i`.
    pub fn embedding_root(&self, i: usize) -> usize {
        self.order[i]
    }

    /// Value of `θ` under embedding `i`, as a double.
    pub fn root_f64(&self, i: usize) -> f64 {
        self.roots_f64[self.order[i]]
    }

    /// Isolating interval of `σ_i(θ)` of width at most `width`.
    pub fn root_interval(&self, i: usize, width: &BigRational) -> RatInterval {
        let iv = &self.roots[self.order[i]];
        if &iv.width() <= width {
            iv.clone()
        } else {
            refine_root(&self.poly.to_rat(), iv, width)
        }
    }

    pub fn same_field(&self, other: &NumberField) -> bool {
        std::ptr::eq(self, other) || (self.poly == other.poly && self.root_index == other.root_index)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FieldDescriptor { minpoly: self.poly.coeffs().to_vec(), root_index: self.root_index })
            .expect("descriptor serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Arc<Self>> {
        let d: FieldDescriptor =
            serde_json::from_value(v.clone()).map_err(|e| Error::parse(0, e.to_string()))?;
        Self::new(&IntPolynomial::new(d.minpoly), d.root_index)
    }

    pub fn discriminant_is_square(&self) -> bool {
        match self.poly.discriminant() {
            Some(d) if !d.is_negative() => {
                let r = d.sqrt();
                &r * &r == d
            }
            _ => self.degree() == 1,
        }
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({}) at root {}", self.poly, self.root_index)
    }
}

/// Element of a number field in power-basis coordinates `1, θ, …, θ^{n-1}`.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field.same_field(&other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = json::rat_to_string(&a);
            match (k, a.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{coef}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{coef}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                field.degree(),
                coords.len()
            )));
        }
        Ok(FieldElement { field: field.clone(), coords })
    }

    pub fn from_i64(field: &Arc<NumberField>, coords: &[i64]) -> Self {
        let c: Vec<BigRational> = coords.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        Self::from_poly(field, &RatPoly::new(c))
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[0] = q;
        FieldElement { field: field.clone(), coords }
    }

    pub fn from_int(field: &Arc<NumberField>, k: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(k.into()))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn theta(field: &Arc<NumberField>) -> Self {
        if field.degree() == 1 {
            // θ is the rational root itself
            let r = field.poly().rational_roots();
            return Self::from_rational(field, r[0].clone());
        }
        Self::from_poly(field, &RatPoly::new(vec![BigRational::zero(), BigRational::one()]))
    }

    /// Reduce a polynomial in `θ` modulo the field polynomial.
    pub fn from_poly(field: &Arc<NumberField>, p: &RatPoly) -> Self {
        let r = p.rem(&field.poly.to_rat());
        let mut coords = r.coeffs().to_vec();
        coords.resize(field.degree(), BigRational::zero());
        FieldElement { field: field.clone(), coords }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn to_poly(&self) -> RatPoly {
        RatPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_integral_coords(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    fn check(&self, other: &Self) {
        assert!(self.field.same_field(&other.field), "elements of different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|a| a * q).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        Self::from_poly(&self.field, &self.to_poly().mul(&other.to_poly()))
    }

    /// Matrix of `x ↦ self·x` on the power basis; column `j` holds `self·θ^j`.
    pub fn mult_matrix(&self) -> RatMatrix {
        let n = self.field.degree();
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        let theta = Self::theta(&self.field);
        for j in 0..n {
            if j > 0 {
                cur = cur.mul(&theta);
            }
            cols.push(cur.coords.clone());
        }
        let rows = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        RatMatrix::from_rows(rows).expect("square")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.mult_matrix().inverse()?;
        let coords = (0..self.field.degree()).map(|i| m.get(i, 0).clone()).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> BigRational {
        let m = self.mult_matrix();
        (0..self.field.degree()).map(|i| m.get(i, i).clone()).sum()
    }

    pub fn norm(&self) -> BigRational {
        self.mult_matrix().det()
    }

    /// Characteristic polynomial of multiplication by `self`, monic.
    pub fn charpoly(&self) -> RatPoly {
        let m = self.mult_matrix();
        let d = m.common_denominator();
        let n = m.dim();
        let scaled = m.rows().iter().map(|r| r.iter().map(|x| (x * &d).to_integer()).collect()).collect();
        let chi = IntMatrix::from_rows(scaled).expect("square").charpoly();
        // det(xI - N/d) = d^-n det(d x I - N)
        let dn = BigRational::from_integer(d.pow(n as u32));
        let coeffs = chi
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| BigRational::from_integer(c * d.pow(k as u32)) / &dn)
            .collect();
        RatPoly::new(coeffs)
    }

    /// Minimal polynomial over Q, primitive with positive leading coefficient.
    pub fn minpoly(&self) -> IntPolynomial {
        let chi = self.charpoly();
        let g = chi.gcd(&chi.derivative());
        let (q, _) = chi.div_rem(&g);
        q.to_int_normalized()
    }

    /// `self(g)`: substitute `g` for `θ`.
    pub fn compose(&self, g: &Self) -> Self {
        self.check(g);
        let mut acc = Self::zero(&self.field);
        for c in self.coords.iter().rev() {
            acc = acc.mul(g).add(&Self::from_rational(&self.field, c.clone()));
        }
        acc
    }

    /// Interval containing `σ_i(self)` of width at most `width`.
    pub fn embed(&self, i: usize, width: &BigRational) -> RatInterval {
        let p = self.to_poly();
        if self.is_rational() {
            return RatInterval::point(self.coords[0].clone());
        }
        let mut bits = STORED_ROOT_BITS;
        loop {
            let root = self.field.root_interval(i, &pow2_neg(bits));
            let v = eval_interval(&p, &root);
            if &v.width() <= width {
                return v;
            }
            bits += 32;
        }
    }

    /// Exact sign of `σ_i(self)`.
    pub fn sign_at(&self, i: usize) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let p = self.to_poly();
        let mut bits = 64;
        loop {
            let root = self.field.root_interval(i, &pow2_neg(bits));
            if let Some(s) = eval_interval(&p, &root).sign() {
                return s;
            }
            bits *= 2;
        }
    }

    pub fn embed_f64(&self, i: usize) -> f64 {
        let x = self.field.root_f64(i);
        self.coords.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn embeddings_f64(&self) -> Vec<f64> {
        (0..self.field.degree()).map(|i| self.embed_f64(i)).collect()
    }

    /// For an automorphism image `g = τ(θ)`: the permutation `π` with
    /// `σ_i(g) = σ_{π(i)}(θ)`.
    pub fn root_permutation(&self) -> Option<Vec<usize>> {
        let n = self.field.degree();
        let mut perm = Vec::with_capacity(n);
        for i in 0..n {
            let mut bits = 64;
            let j = loop {
                let v = self.embed(i, &pow2_neg(bits));
                let hits: Vec<usize> =
                    (0..n).filter(|&j| v.overlaps(&self.field.root_interval(j, &pow2_neg(bits)))).collect();
                match hits.len() {
                    0 => return None,
                    1 => break hits[0],
                    _ => bits *= 2,
                }
                if bits > 4096 {
                    return None;
                }
            };
            perm.push(j);
        }
        Some(perm)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json::rat_vec::serialize(&self.coords, s)
    }
}

/// All `g ∈ K` with `f(g) = 0`, identity first, the rest ordered by
/// `σ_0(g)`.
pub fn automorphisms(field: &Arc<NumberField>) -> Vec<FieldElement> {
    let coords = field.automorphisms.get_or_init(|| compute_automorphisms(field));
    coords.iter().map(|c| FieldElement { field: field.clone(), coords: c.clone() }).collect()
}

fn compute_automorphisms(field: &Arc<NumberField>) -> Vec<Vec<BigRational>> {
    let n = field.degree();
    let theta = FieldElement::theta(field);
    let mut out = vec![theta.coords.clone()];
    if n == 1 || !field.discriminant_is_square() {
        return out;
    }
    if n == 2 {
        // θ ↦ -b/a - θ
        let c = field.poly.coeffs();
        let s = BigRational::new(-c[1].clone(), c[2].clone());
        out.push(FieldElement::from_rational(field, s).sub(&theta).coords);
        return out;
    }
    let disc = field.poly.discriminant().expect("cubic").abs();
    let lead = field.poly.leading().abs();
    let denom_bound = &disc * lead.pow(n as u32) + BigInt::one();
    let base_bits = 2 * denom_bound.bits() as u32 + 64;
    let f = field.poly.to_rat();
    let target_order: Vec<usize> = (0..n).filter(|&j| j != field.root_index).collect();
    for &target in &target_order {
        'perm: for perm in permutations_with_first(n, target, field) {
            for attempt in 0..3 {
                let bits = base_bits << attempt;
                let roots: Vec<BigRational> =
                    (0..n).map(|i| field.root_interval(i, &pow2_neg(bits)).midpoint()).collect();
                let vander = RatMatrix::from_rows(
                    roots.iter().map(|r| (0..n).map(|m| r.pow(m as i32)).collect()).collect(),
                )
                .expect("square");
                let Ok(inv) = vander.inverse() else { continue };
                let rhs: Vec<BigRational> = perm.iter().map(|&j| roots[j].clone()).collect();
                let approx = inv.mul_vec(&rhs);
                let coords: Vec<BigRational> = approx.iter().map(|x| best_rational(x, &denom_bound)).collect();
                let g = FieldElement { field: field.clone(), coords };
                if compose_poly(&f, &g).is_zero() {
                    if !out.contains(&g.coords) {
                        out.push(g.coords);
                    }
                    break 'perm;
                }
            }
        }
    }
    out
}

/// `f(g)` computed in the field.
fn compose_poly(f: &RatPoly, g: &FieldElement) -> FieldElement {
    let field = g.field();
    let mut acc = FieldElement::zero(field);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(g).add(&FieldElement::from_rational(field, c.clone()));
    }
    acc
}

/// Permutations of embedding indices sending embedding 0 to the given root
/// position, expressed as embedding indices.
fn permutations_with_first(n: usize, target_root: usize, field: &NumberField) -> Vec<Vec<usize>> {
    let target = (0..n).find(|&i| field.order[i] == target_root).expect("root present");
    let rest: Vec<usize> = (0..n).filter(|&i| i != target).collect();
    let mut out = Vec::new();
    let mut stack = vec![(vec![target], rest)];
    while let Some((prefix, remaining)) = stack.pop() {
        if remaining.is_empty() {
            out.push(prefix);
            continue;
        }
        for (k, &r) in remaining.iter().enumerate() {
            let mut p = prefix.clone();
            p.push(r);
            let mut rem = remaining.clone();
            rem.remove(k);
            stack.push((p, rem));
        }
    }
    out.sort();
    out
}

/// Best rational approximation of `x` with denominator at most `bound`,
/// taken from the continued fraction convergents of `x`.
pub fn best_rational(x: &BigRational, bound: &BigInt) -> BigRational {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if &q2 > bound {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        num = std::mem::replace(&mut den, r);
    }
    if q1.is_zero() {
        return BigRational::from_integer(x.floor().to_integer());
    }
    BigRational::new(p1, q1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_examples() {
        let k = NumberField::new(&IntPolynomial::from_i64(&[1, -3, 0, 1]), 2).unwrap();
        let t = FieldElement::theta(&k);
        let t2 = t.mul(&t);
        assert_eq!(t.mul(&t2), FieldElement::from_i64(&k, &[-1, 3]));
        assert!(t.mul(&t.inv().unwrap()).is_one());
        assert!(t.add(&t.neg()).is_zero());
        assert_eq!(t.trace(), q(0, 1));
        assert_eq!(t.norm(), q(-1, 1));
        let half = FieldElement::from_rational(&k, q(1, 2));
        assert_eq!(half.trace(), q(3, 2));
        assert_eq!(half.norm(), q(1, 8));
        assert_eq!(t.minpoly(), IntPolynomial::from_i64(&[1, -3, 0, 1]));
        assert_eq!(half.minpoly(), IntPolynomial::from_i64(&[-1, 2]));
        assert_eq!(FieldElement::zero(&k).inv(), Err(Error::DivisionByZero));

        let k2 = NumberField::new(&IntPolynomial::from_i64(&[1, -2, -1, 1]), 0).unwrap();
        let t = FieldElement::theta(&k2);
        assert_eq!(t.trace(), q(1, 1));
        assert_eq!(t.norm(), q(-1, 1));
    }

    #[test]
    fn embeddings_follow_fixed_order() {
        let k = NumberField::new(&IntPolynomial::from_i64(&[1, -3, 0, 1]), 1).unwrap();
        let t = FieldElement::theta(&k);
        let v = t.embeddings_f64();
        assert!((v[0] - 0.3472964).abs() < 1e-6);
        assert!((v[1] + 1.8793852).abs() < 1e-6);
        assert!((v[2] - 1.5320889).abs() < 1e-6);
        let w = pow2_neg(64);
        for i in 0..3 {
            assert!(t.embed(i, &w).width() <= w);
            assert_eq!(FieldElement::from_rational(&k, q(1, 2)).embed(i, &w), RatInterval::point(q(1, 2)));
        }
        assert_eq!(t.sign_at(1), Ordering::Less);
    }

    #[test]
    fn automorphism_examples() {
        let k = NumberField::new(&IntPolynomial::from_i64(&[1, -3, 0, 1]), 2).unwrap();
        let auts = automorphisms(&k);
        assert_eq!(auts.len(), 3);
        let expected = [FieldElement::from_i64(&k, &[-2, 0, 1]), FieldElement::from_i64(&k, &[2, -1, -1])];
        for e in &expected {
            assert!(auts.contains(e), "{e} missing from {auts:?}");
        }
        let sum = auts.iter().fold(FieldElement::zero(&k), |acc, a| acc.add(a));
        assert!(sum.is_zero());
        for a in &auts {
            let mut perm = a.root_permutation().unwrap();
            perm.sort();
            assert_eq!(perm, vec![0, 1, 2]);
        }

        let k = NumberField::new(&IntPolynomial::from_i64(&[1, -2, -1, 1]), 0).unwrap();
        let auts = automorphisms(&k);
        assert_eq!(auts.len(), 3);
        assert!(auts.contains(&FieldElement::from_i64(&k, &[-1, -1, 1])));

        let k = NumberField::new(&IntPolynomial::from_i64(&[1, -4, 0, 1]), 0).unwrap();
        assert_eq!(automorphisms(&k).len(), 1);
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(NumberField::new(&IntPolynomial::from_i64(&[-1, -1, 0, 1]), 0).is_err());
        assert!(NumberField::new(&IntPolynomial::from_i64(&[0, -1, 0, 1]), 0).is_err());
    }

    #[test]
    fn best_rational_recovers_fractions() {
        let x = q(355, 113) + pow2_neg(80);
        assert_eq!(best_rational(&x, &BigInt::from(1000)), q(355, 113));
        assert_eq!(best_rational(&q(-7, 3), &BigInt::from(10)), q(-7, 3));
    }
}
