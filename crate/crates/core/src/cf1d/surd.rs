use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Exact element `(a + b√d)/c` of a real quadratic field, `c > 0`, `d > 0`
/// not a square. Stored in lowest terms.
#[derive(Clone, Debug)]
pub struct QuadNum {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadNum {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !d.is_positive() || is_square(&d) {
            return Err(Error::PerfectSquareD(d.to_string()));
        }
        Ok(Self::reduced(a, b, c, d))
    }

    fn reduced(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: BigInt) -> Self {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadNum { a, b, c, d }
    }

    pub fn from_int(k: BigInt, d: &BigInt) -> Self {
        QuadNum { a: k, b: BigInt::zero(), c: BigInt::one(), d: d.clone() }
    }

    pub fn sqrt_d(d: &BigInt) -> Self {
        QuadNum { a: BigInt::zero(), b: BigInt::one(), c: BigInt::one(), d: d.clone() }
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.a.clone(), self.c.clone())
    }

    fn same_d(&self, o: &Self) {
        assert_eq!(self.d, o.d, "quadratic numbers from different fields");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_d(o);
        Self::reduced(&self.a * &o.c + &o.a * &self.c, &self.b * &o.c + &o.b * &self.c, &self.c * &o.c, self.d.clone())
    }

    pub fn neg(&self) -> Self {
        QuadNum { a: -&self.a, b: -&self.b, c: self.c.clone(), d: self.d.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_d(o);
        let a = &self.a * &o.a + &self.b * &o.b * &self.d;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::reduced(a, b, &self.c * &o.c, self.d.clone())
    }

    pub fn conj(&self) -> Self {
        QuadNum { a: self.a.clone(), b: -&self.b, c: self.c.clone(), d: self.d.clone() }
    }

    /// `a² - b²d` over `c²`.
    pub fn norm(&self) -> BigRational {
        BigRational::new(&self.a * &self.a - &self.b * &self.b * &self.d, &self.c * &self.c)
    }

    pub fn trace(&self) -> BigRational {
        BigRational::new(BigInt::from(2) * &self.a, self.c.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/x = c·x̄ / (a² - b²d)
        let n = &self.a * &self.a - &self.b * &self.b * &self.d;
        Ok(Self::reduced(&self.c * &self.a, -&self.c * &self.b, n, self.d.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        // sign of a + b√d
        let sa = self.a.sign();
        let sb = self.b.sign();
        use num_bigint::Sign::*;
        match (sa, sb) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
            (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
            (Plus, Minus) => (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.d)),
            (Minus, Plus) => (&self.b * &self.b * &self.d).cmp(&(&self.a * &self.a)),
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.div_floor(&self.c);
        }
        let m = (&self.b * &self.b * &self.d).sqrt();
        if self.b.is_positive() {
            (&self.a + m).div_floor(&self.c)
        } else {
            (&self.a - m - BigInt::one()).div_floor(&self.c)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * d.sqrt())
            / self.c.to_f64().unwrap_or(f64::NAN)
    }

    /// The same number as a surd `(P + √D)/Q`.
    pub fn to_surd(&self) -> Result<QuadraticSurd> {
        if self.b.is_zero() {
            return Err(Error::PerfectSquareD("0".into()));
        }
        let bb = &self.b * &self.b * &self.d;
        if self.b.is_positive() {
            QuadraticSurd::new(self.a.clone(), self.c.clone(), bb)
        } else {
            QuadraticSurd::new(-&self.a, -&self.c, bb)
        }
    }
}

impl PartialEq for QuadNum {
    /// Values are compared, so `√8` equals `2√2`: rational parts must agree
    /// and so must the squares and signs of the irrational parts.
    fn eq(&self, o: &Self) -> bool {
        if &self.a * &o.c != &o.a * &self.c || self.b.sign() != o.b.sign() {
            return false;
        }
        &self.b * &self.b * &self.d * &o.c * &o.c == &o.b * &o.b * &o.d * &self.c * &self.c
    }
}

impl Eq for QuadNum {}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.b.is_zero(), self.c.is_one()) {
            (true, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}/{}", self.a, self.c),
            _ => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                let b = self.b.abs();
                let rad = if b.is_one() { format!("sqrt({})", self.d) } else { format!("{b}*sqrt({})", self.d) };
                if self.c.is_one() {
                    write!(f, "{}{sign}{rad}", self.a)
                } else {
                    write!(f, "({}{sign}{rad})/{}", self.a, self.c)
                }
            }
        }
    }
}

/// Quadratic irrational `(P + √D)/Q` in the canonical form `Q | D - P²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSurd")]
pub struct QuadraticSurd {
    #[serde(rename = "P", with = "json::bigint")]
    p: BigInt,
    #[serde(rename = "Q", with = "json::bigint")]
    q: BigInt,
    #[serde(rename = "D", with = "json::bigint")]
    d: BigInt,
}

#[derive(Deserialize)]
struct RawSurd {
    #[serde(rename = "P", with = "json::bigint")]
    p: BigInt,
    #[serde(rename = "Q", with = "json::bigint")]
    q: BigInt,
    #[serde(rename = "D", with = "json::bigint")]
    d: BigInt,
}

impl TryFrom<RawSurd> for QuadraticSurd {
    type Error = Error;

    fn try_from(r: RawSurd) -> Result<Self> {
        QuadraticSurd::new(r.p, r.q, r.d)
    }
}

impl QuadraticSurd {
    pub fn new(p: BigInt, q: BigInt, d: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !d.is_positive() || is_square(&d) {
            return Err(Error::PerfectSquareD(d.to_string()));
        }
        if (&d - &p * &p).is_multiple_of(&q) {
            Ok(QuadraticSurd { p, q, d })
        } else {
            let aq = q.abs();
            Ok(QuadraticSurd { p: &p * &aq, q: &q * &aq, d: &d * &aq * &aq })
        }
    }

    pub fn from_i64(p: i64, q: i64, d: i64) -> Result<Self> {
        Self::new(p.into(), q.into(), d.into())
    }

    /// `√D`.
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::from_i64(0, 1, d)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn value(&self) -> QuadNum {
        QuadNum::reduced(self.p.clone(), BigInt::one(), self.q.clone(), self.d.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64()
    }

    pub fn floor(&self) -> BigInt {
        let s = self.d.sqrt();
        if self.q.is_positive() {
            (&self.p + s).div_floor(&self.q)
        } else {
            (&self.p + s + BigInt::one()).div_floor(&self.q)
        }
    }

    /// Partial quotient and the next complete quotient `1/(x - a)`.
    pub fn step(&self) -> (BigInt, QuadraticSurd) {
        let a = self.floor();
        let p = &a * &self.q - &self.p;
        let q = (&self.d - &p * &p) / &self.q;
        (a, QuadraticSurd { p, q, d: self.d.clone() })
    }

    pub fn conjugate(&self) -> QuadraticSurd {
        // (P - √D)/Q = (-P + √D)/(-Q)
        QuadraticSurd { p: -&self.p, q: -&self.q, d: self.d.clone() }
    }

    pub fn trace(&self) -> BigRational {
        self.value().trace()
    }

    pub fn norm(&self) -> BigRational {
        self.value().norm()
    }

    /// Reduced: `x > 1` and `-1 < x' < 0`, equivalently purely periodic.
    pub fn is_reduced(&self) -> bool {
        let v = self.value();
        let one = QuadNum::from_int(BigInt::one(), &self.d);
        let c = v.conj();
        v.sub(&one).signum() == Ordering::Greater
            && c.signum() == Ordering::Less
            && c.add(&one).signum() == Ordering::Greater
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+sqrt({}))/{}", self.p, self.d, self.q)
    }
}

impl FromStr for QuadraticSurd {
    type Err = Error;

    /// Accepts `(P+sqrt(D))/Q`, `(P-sqrt(D))/Q`, `P+sqrt(D)` and `sqrt(D)`,
    /// with optional whitespace.
    fn from_str(s: &str) -> Result<Self> {
        Parser { s: s.as_bytes(), pos: 0 }.surd()
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::parse(self.pos, format!("expected '{}'", c as char))),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        BigInt::from_str(text).map_err(|_| Error::parse(start, "expected an integer"))
    }

    fn sqrt(&mut self) -> Result<BigInt> {
        if !self.keyword("sqrt") {
            return Err(Error::parse(self.pos, "expected 'sqrt'"));
        }
        self.expect(b'(')?;
        let d = self.int()?;
        self.expect(b')')?;
        Ok(d)
    }

    /// `P ± sqrt(D)` or `sqrt(D)`; returns (P, sign, D).
    fn numerator(&mut self) -> Result<(BigInt, bool, BigInt)> {
        if self.peek() == Some(b's') {
            return Ok((BigInt::zero(), true, self.sqrt()?));
        }
        let p = self.int()?;
        let plus = match self.peek() {
            Some(b'+') => true,
            Some(b'-') => false,
            _ => return Err(Error::parse(self.pos, "expected '+' or '-'")),
        };
        self.pos += 1;
        Ok((p, plus, self.sqrt()?))
    }

    fn surd(&mut self) -> Result<QuadraticSurd> {
        let (p, plus, d, q) = if self.peek() == Some(b'(') {
            self.pos += 1;
            let (p, plus, d) = self.numerator()?;
            self.expect(b')')?;
            let q = if self.peek() == Some(b'/') {
                self.pos += 1;
                self.int()?
            } else {
                BigInt::one()
            };
            (p, plus, d, q)
        } else {
            let (p, plus, d) = self.numerator()?;
            (p, plus, d, BigInt::one())
        };
        if self.peek().is_some() {
            return Err(Error::parse(self.pos, "unexpected trailing input"));
        }
        let start = self.pos;
        let r = if plus { QuadraticSurd::new(p, q, d) } else { QuadraticSurd::new(-p, -q, d) };
        r.map_err(|e| match e {
            Error::DivisionByZero => Error::parse(start, "denominator is zero"),
            other => other,
        })
    }
}

/// Eventually periodic continued fraction `[pre…; (period)…]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicCF {
    #[serde(with = "json::bigint_vec")]
    pub preperiod: Vec<BigInt>,
    #[serde(with = "json::bigint_vec")]
    pub period: Vec<BigInt>,
}

impl PeriodicCF {
    /// Partial quotient number `k`.
    pub fn quotient(&self, k: usize) -> &BigInt {
        if k < self.preperiod.len() {
            &self.preperiod[k]
        } else {
            &self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn quotients(&self) -> impl Iterator<Item = &BigInt> + '_ {
        (0..).map(move |k| self.quotient(k))
    }

    /// Exact value as a quadratic number.
    pub fn value(&self) -> Result<QuadNum> {
        // purely periodic tail x satisfies q_k x² + (q_{k-1} - p_k) x - p_{k-1} = 0
        let (p, q, pp, qp) = convergent_matrix(&self.period);
        let a = q;
        let b = &qp - &p;
        let c = -pp;
        let disc = &b * &b - BigInt::from(4) * &a * &c;
        // the tail exceeds 1, so it is the larger root
        let two_a = BigInt::from(2) * &a;
        let x = QuadNum::new(-b, BigInt::one(), two_a, disc)?;
        let (p, q, pp, qp) = convergent_matrix(&self.preperiod);
        let d = x.parts().3.clone();
        let num = x.mul(&QuadNum::from_int(p, &d)).add(&QuadNum::from_int(pp, &d));
        let den = x.mul(&QuadNum::from_int(q, &d)).add(&QuadNum::from_int(qp, &d));
        num.div(&den)
    }
}

/// `(p_k, q_k, p_{k-1}, q_{k-1})` for a finite list of partial quotients.
fn convergent_matrix(quotients: &[BigInt]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (mut p, mut q) = (BigInt::one(), BigInt::zero());
    let (mut pp, mut qp) = (BigInt::zero(), BigInt::one());
    for a in quotients {
        let np = a * &p + &pp;
        let nq = a * &q + &qp;
        pp = std::mem::replace(&mut p, np);
        qp = std::mem::replace(&mut q, nq);
    }
    (p, q, pp, qp)
}

/// Continued fraction of a quadratic surd by complete-quotient iteration.
pub fn cf_expand(s: &QuadraticSurd) -> Result<PeriodicCF> {
    if is_square(&s.d) {
        return Err(Error::PerfectSquareD(s.d.to_string()));
    }
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients = Vec::new();
    let mut cur = s.clone();
    loop {
        if let Some(&start) = seen.get(&(cur.p.clone(), cur.q.clone())) {
            let period = minimal_period(&quotients[start..]);
            return Ok(PeriodicCF { preperiod: quotients[..start].to_vec(), period });
        }
        seen.insert((cur.p.clone(), cur.q.clone()), quotients.len());
        let (a, next) = cur.step();
        quotients.push(a);
        cur = next;
    }
}

/// Shortest `w` with `seq = w^k`.
pub fn minimal_period<T: Clone + PartialEq>(seq: &[T]) -> Vec<T> {
    let t = seq.len();
    for len in 1..=t {
        if t.is_multiple_of(len) && (len..t).all(|i| seq[i] == seq[i - len]) {
            return seq[..len].to_vec();
        }
    }
    seq.to_vec()
}

/// Rotation-invariant comparison of two cyclic words.
pub fn equal_up_to_rotation<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|r| (0..a.len()).all(|i| a[(i + r) % a.len()] == b[i])))
}

/// All reduced surds `(P + √D)/Q` with the given `D`.
pub fn reduced_surds(d: i64) -> Vec<QuadraticSurd> {
    let s = (d as f64).sqrt().floor() as i64;
    let mut out = Vec::new();
    // reduced: 0 < P < √D, √D - P < Q < √D + P, Q | D - P²
    for p in 1..=s {
        for q in (s - p + 1)..=(s + p) {
            if q > 0 && (d - p * p) % q == 0 {
                if let Ok(x) = QuadraticSurd::from_i64(p, q, d) {
                    if x.is_reduced() {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}
