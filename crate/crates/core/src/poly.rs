//! Dense univariate polynomials over Z and Q, constant term first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::json;

/// Integer polynomial `c0 + c1 x + ... + cn x^n` with `cn != 0`.
///
/// The zero polynomial is represented by an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    #[serde(with = "json::bigint_vec")]
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    pub fn is_normalized(&self) -> bool {
        !self.is_zero() && self.content().is_one() && self.leading().is_positive()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// Discriminant for degree 2 and 3; `None` otherwise.
    pub fn discriminant(&self) -> Option<BigInt> {
        let c = &self.coeffs;
        match self.degree() {
            2 if c.len() == 3 => Some(&c[1] * &c[1] - BigInt::from(4) * &c[2] * &c[0]),
            3 => {
                let (d, cc, b, a) = (&c[0], &c[1], &c[2], &c[3]);
                let t1 = BigInt::from(18) * a * b * cc * d;
                let t2 = BigInt::from(4) * b * b * b * d;
                let t3 = b * b * cc * cc;
                let t4 = BigInt::from(4) * a * cc * cc * cc;
                let t5 = BigInt::from(27) * a * a * d * d;
                Some(t1 - t2 + t3 - t4 - t5)
            }
            _ => None,
        }
    }

    /// All rational roots, by the rational root test.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.is_zero() {
            return Vec::new();
        }
        let p = self.normalized();
        let mut roots = Vec::new();
        // strip the factor x^k first
        let lowest = p.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if lowest > 0 {
            roots.push(BigRational::zero());
        }
        let trimmed: Vec<BigInt> = p.coeffs[lowest..].to_vec();
        let c0 = trimmed[0].abs();
        let cn = trimmed.last().unwrap().abs();
        let q = IntPolynomial::new(trimmed);
        if q.degree() == 0 {
            return roots;
        }
        let dn = divisors(&c0);
        let dd = divisors(&cn);
        for num in &dn {
            for den in &dd {
                if !num.gcd(den).is_one() {
                    continue;
                }
                for sign in [1i32, -1] {
                    let r = BigRational::new(num * BigInt::from(sign), den.clone());
                    if q.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Irreducibility over Q for degree <= 3 (rational root test).
    pub fn is_irreducible_low_degree(&self) -> Option<bool> {
        match self.degree() {
            0 => Some(false),
            1 => Some(true),
            2 | 3 => Some(self.rational_roots().is_empty()),
            _ => None,
        }
    }
}

/// Positive divisors by trial division.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Rational polynomial, constant term first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    pub(crate) coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lead = divisor.leading();
        if rem.len() < divisor.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        self.scale(&(BigRational::one() / l))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Clears denominators and returns the primitive integer polynomial
    /// with positive leading coefficient.
    pub fn to_int_normalized(&self) -> IntPolynomial {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPolynomial::new(self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect())
            .normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_discriminant() {
        let f = IntPolynomial::from_i64(&[1, -3, 0, 1]);
        assert_eq!(f.to_string(), "x^3 - 3x + 1");
        assert_eq!(f.discriminant(), Some(BigInt::from(81)));
        let g = IntPolynomial::from_i64(&[1, -2, -1, 1]);
        assert_eq!(g.discriminant(), Some(BigInt::from(49)));
        let h = IntPolynomial::from_i64(&[-1, -1, 1]);
        assert_eq!(h.discriminant(), Some(BigInt::from(5)));
    }

    #[test]
    fn rational_roots_and_irreducibility() {
        let f = IntPolynomial::from_i64(&[-6, 11, -6, 1]);
        let r: Vec<String> = f.rational_roots().iter().map(|x| x.to_string()).collect();
        assert_eq!(r, ["1", "2", "3"]);
        assert_eq!(IntPolynomial::from_i64(&[1, -3, 0, 1]).is_irreducible_low_degree(), Some(true));
        assert_eq!(IntPolynomial::from_i64(&[-1, 0, 2]).rational_roots().len(), 0);
        assert_eq!(IntPolynomial::from_i64(&[-1, 0, 4]).rational_roots().len(), 2);
        assert_eq!(IntPolynomial::from_i64(&[0, 0, 1]).is_irreducible_low_degree(), Some(false));
    }

    #[test]
    fn div_rem_and_gcd() {
        let a = IntPolynomial::from_i64(&[-1, 0, 1]).to_rat();
        let b = IntPolynomial::from_i64(&[1, 1]).to_rat();
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q.to_int_normalized(), IntPolynomial::from_i64(&[-1, 1]));
        let g = a.gcd(&IntPolynomial::from_i64(&[-1, 1]).to_rat().mul(&IntPolynomial::from_i64(&[2, 1]).to_rat()));
        assert_eq!(g.to_int_normalized(), IntPolynomial::from_i64(&[-1, 1]));
    }
}
