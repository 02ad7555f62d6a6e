use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::poly::{IntPolynomial, RatPoly};

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatInterval {
    #[serde(with = "json::rat")]
    pub lo: BigRational,
    #[serde(with = "json::rat")]
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `Some(sign)` when the interval excludes zero or is the point zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn neg(&self) -> Self {
        RatInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ps = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = ps.iter().min().unwrap().clone();
        let hi = ps.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let a = &self.lo * s;
        let b = &self.hi * s;
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

/// Evaluate a rational polynomial on an interval (Horner form).
pub fn eval_interval(p: &RatPoly, x: &RatInterval) -> RatInterval {
    let mut acc = RatInterval::point(BigRational::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&RatInterval::point(c.clone()));
    }
    acc
}

/// Sturm sequence of a squarefree polynomial.
fn sturm_sequence(f: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn cauchy_bound(f: &IntPolynomial) -> BigRational {
    let lead = f.leading().abs();
    let m = f.coeffs()[..f.degree()].iter().map(|c| c.abs()).max().unwrap_or_default();
    BigRational::one() + BigRational::new(m, lead)
}

/// Disjoint isolating intervals of the real roots of `f`, ascending. `f` is
/// nonzero with opposite signs at the two endpoints of every interval.
pub fn isolate_real_roots(f: &IntPolynomial) -> Result<Vec<RatInterval>> {
    if f.degree() == 0 {
        return Ok(Vec::new());
    }
    let fr = f.to_rat();
    if fr.gcd(&fr.derivative()).degree() > 0 {
        return Err(Error::NotSquarefree);
    }
    let seq = sturm_sequence(&fr);
    let b = cauchy_bound(f);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((a, b)) = stack.pop() {
        let count = sign_changes(&seq, &a) - sign_changes(&seq, &b);
        match count {
            0 => {}
            1 => out.push(RatInterval::new(a, b)),
            _ => {
                let m = split_point(&fr, &a, &b);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// A point strictly inside (a, b) that is not a root of `f`.
fn split_point(f: &RatPoly, a: &BigRational, b: &BigRational) -> BigRational {
    let w = b - a;
    let mut den = BigInt::from(2);
    loop {
        let mut k = BigInt::one();
        while k < den {
            let m = a + &w * BigRational::new(k.clone(), den.clone());
            if !f.eval(&m).is_zero() {
                return m;
            }
            k += 2;
        }
        den *= 2;
    }
}

/// Shrink an isolating interval of a simple root to width at most `width`.
pub fn refine_root(f: &RatPoly, iv: &RatInterval, width: &BigRational) -> RatInterval {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    if lo == hi {
        return iv.clone();
    }
    if f.eval(&lo).is_zero() {
        return RatInterval::point(lo);
    }
    if f.eval(&hi).is_zero() {
        return RatInterval::point(hi);
    }
    let lo_neg = f.eval(&lo).is_negative();
    while &(&hi - &lo) > width {
        let m = (&lo + &hi) / BigInt::from(2);
        let v = f.eval(&m);
        if v.is_zero() {
            return RatInterval::point(m);
        }
        if v.is_negative() == lo_neg {
            lo = m;
        } else {
            hi = m;
        }
    }
    RatInterval::new(lo, hi)
}

/// `2^-k` as a rational.
pub fn pow2_neg(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolate_examples() {
        let r = isolate_real_roots(&IntPolynomial::from_i64(&[-2, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        let w = pow2_neg(30);
        let f = IntPolynomial::from_i64(&[-2, 0, 1]).to_rat();
        let a = refine_root(&f, &r[0], &w).to_f64();
        let b = refine_root(&f, &r[1], &w).to_f64();
        assert!((a + 2f64.sqrt()).abs() < 1e-8 && (b - 2f64.sqrt()).abs() < 1e-8);

        let g = IntPolynomial::from_i64(&[1, -3, 0, 1]);
        let r = isolate_real_roots(&g).unwrap();
        let approx: Vec<f64> = r.iter().map(|iv| refine_root(&g.to_rat(), iv, &w).to_f64()).collect();
        for (x, e) in approx.iter().zip([-1.8793852, 0.3472964, 1.5320889]) {
            assert!((x - e).abs() < 1e-6);
        }
        assert!(isolate_real_roots(&IntPolynomial::from_i64(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(isolate_real_roots(&IntPolynomial::from_i64(&[1, -2, 1])), Err(Error::NotSquarefree));
    }

    #[test]
    fn rational_roots_are_isolated() {
        // x(x-1)(x+1)
        let f = IntPolynomial::from_i64(&[0, -1, 0, 1]);
        let r = isolate_real_roots(&f).unwrap();
        assert_eq!(r.len(), 3);
        let fr = f.to_rat();
        for (iv, root) in r.iter().zip([-1, 0, 1]) {
            let tight = refine_root(&fr, iv, &pow2_neg(40));
            assert!(tight.contains(&BigRational::from_integer(root.into())));
            assert!(tight.width() <= pow2_neg(40));
        }
    }
}
