use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::palindrome::is_cyclic_palindrome;
use super::surd::{cf_expand, QuadNum, QuadraticSurd};
use crate::error::Result;
use crate::json;

/// Trace/norm conditions on a Möbius image `ω` of a quadratic irrational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Prop1Condition {
    #[serde(rename = "trace=0")]
    TraceZero,
    #[serde(rename = "trace=1")]
    TraceOne,
    #[serde(rename = "norm=1")]
    NormOne,
    #[serde(rename = "norm=-1")]
    NormMinusOne,
}

impl Prop1Condition {
    pub const ALL: [Prop1Condition; 4] =
        [Prop1Condition::TraceZero, Prop1Condition::TraceOne, Prop1Condition::NormOne, Prop1Condition::NormMinusOne];

    /// Conventional label (а), (б), (в), (г).
    pub fn label(self) -> &'static str {
        match self {
            Prop1Condition::TraceZero => "(а)",
            Prop1Condition::TraceOne => "(б)",
            Prop1Condition::NormOne => "(в)",
            Prop1Condition::NormMinusOne => "(г)",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// `ω = (aα + b)/(cα + d)` with `ad - bc = det = ±1`, verified exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Witness {
    pub condition: Prop1Condition,
    #[serde(with = "json::bigint_vec")]
    pub transform: Vec<BigInt>,
    #[serde(with = "crate::json::int_str")]
    pub det: i8,
    pub omega: String,
    #[serde(with = "json::rat")]
    pub trace: BigRational,
    #[serde(with = "json::rat")]
    pub norm: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub surd: QuadraticSurd,
    #[serde(with = "json::bigint_vec")]
    pub period: Vec<BigInt>,
    pub period_is_palindrome: bool,
    #[serde(with = "crate::json::int_str")]
    pub height_bound: u32,
    pub witnesses: Vec<Prop1Witness>,
    /// Conditions with no witness up to the height bound. Absence is not a
    /// proof that the condition fails.
    pub inconclusive: Vec<Prop1Condition>,
}

impl Prop1Report {
    pub fn witness(&self, c: Prop1Condition) -> Option<&Prop1Witness> {
        self.witnesses.iter().find(|w| w.condition == c)
    }
}

/// 0, 1, -1, 2, -2, … in this order.
fn rank(x: i64) -> u64 {
    if x > 0 {
        2 * x as u64 - 1
    } else {
        2 * x.unsigned_abs()
    }
}

type Key = (i64, usize, u64, u64, u64, u64);

fn key(t: [i64; 4]) -> Key {
    let h = t.iter().map(|x| x.abs()).max().unwrap_or(0);
    let nnz = t.iter().filter(|&&x| x != 0).count();
    (h, nnz, rank(t[1]), rank(t[2]), rank(t[0]), rank(t[3]))
}

trait Ring: Clone + PartialEq + Zero + One + std::ops::Neg<Output = Self> {
    fn from_i64(x: i64) -> Self;
    fn rmul(&self, o: &Self) -> Self;
    fn radd(&self, o: &Self) -> Self;
}

impl Ring for i128 {
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
}

impl Ring for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
}

/// Best transform per condition. With `T = Q²·Tr(α) = 2PQ` and
/// `N = Q²·N(α) = P² - D`:
/// den = c²N + cdT + d²Q², Q²·Tr(ω)·den = 2acN + (ad+bc)T + 2bdQ², Q²·N(ω)·den = a²N + abT + b²Q².
fn search<R: Ring>(p: R, q: R, d: R, h: i64) -> [Option<(Key, [i64; 4])>; 4] {
    let two = R::from_i64(2);
    let n = p.rmul(&p).radd(&-d);
    let t = two.rmul(&p).rmul(&q);
    let q2 = q.rmul(&q);
    let mut best: [Option<(Key, [i64; 4])>; 4] = [None, None, None, None];
    let mut consider = |tr: [i64; 4]| {
        let [a, b, c, dd] = tr.map(R::from_i64);
        let den = c.rmul(&c).rmul(&n).radd(&c.rmul(&dd).rmul(&t)).radd(&dd.rmul(&dd).rmul(&q2));
        let trn = two
            .rmul(&a)
            .rmul(&c)
            .rmul(&n)
            .radd(&a.rmul(&dd).radd(&b.rmul(&c)).rmul(&t))
            .radd(&two.rmul(&b).rmul(&dd).rmul(&q2));
        let nrm = a.rmul(&a).rmul(&n).radd(&a.rmul(&b).rmul(&t)).radd(&b.rmul(&b).rmul(&q2));
        let hits = [trn.is_zero(), trn == den, nrm == den, nrm == -den.clone()];
        for (i, hit) in hits.into_iter().enumerate() {
            if hit {
                let k = key(tr);
                if best[i].as_ref().is_none_or(|(bk, _)| k < *bk) {
                    best[i] = Some((k, tr));
                }
            }
        }
    };
    for a in -h..=h {
        for b in -h..=h {
            for c in -h..=h {
                if a == 0 {
                    if b * c == 1 || b * c == -1 {
                        for dd in -h..=h {
                            consider([a, b, c, dd]);
                        }
                    }
                    continue;
                }
                for e in [1, -1] {
                    let num = b * c + e;
                    if num % a == 0 {
                        let dd = num / a;
                        if dd.abs() <= h {
                            consider([a, b, c, dd]);
                        }
                    }
                }
            }
        }
    }
    best
}

fn moebius(alpha: &QuadNum, t: &[i64; 4]) -> Result<QuadNum> {
    let d = alpha.parts().3.clone();
    let k = |x: i64| QuadNum::from_int(x.into(), &d);
    let num = alpha.mul(&k(t[0])).add(&k(t[1]));
    let den = alpha.mul(&k(t[2])).add(&k(t[3]));
    num.div(&den)
}

/// Search Möbius images `ω = (aα+b)/(cα+d)`, `ad - bc = ±1`, `|a|,…,|d| ≤ h`,
/// for each trace/norm condition. For each condition the reported witness is
/// minimal by height, then by number of nonzero entries, then by a fixed
/// order on the entries. Every witness is re-verified in exact arithmetic.
pub fn prop1_witness_search(s: &QuadraticSurd, height_bound: u32) -> Result<Prop1Report> {
    let cf = cf_expand(s)?;
    let h = height_bound as i64;
    let small = |x: &BigInt| x.abs().to_i64().is_some_and(|v| v < 1 << 30);
    let best = if small(s.p()) && small(s.q()) && s.d().to_i64().is_some_and(|v| v < 1 << 60) && h < 1 << 15 {
        let c = |x: &BigInt| x.to_i128().expect("checked");
        search::<i128>(c(s.p()), c(s.q()), c(s.d()), h)
    } else {
        search::<BigInt>(s.p().clone(), s.q().clone(), s.d().clone(), h)
    };
    let alpha = s.value();
    let mut witnesses = Vec::new();
    let mut inconclusive = Vec::new();
    for cond in Prop1Condition::ALL {
        let Some((_, t)) = best[cond.index()] else {
            inconclusive.push(cond);
            continue;
        };
        let omega = moebius(&alpha, &t)?;
        let (trace, norm) = (omega.trace(), omega.norm());
        let ok = match cond {
            Prop1Condition::TraceZero => trace.is_zero(),
            Prop1Condition::TraceOne => trace.is_one(),
            Prop1Condition::NormOne => norm.is_one(),
            Prop1Condition::NormMinusOne => norm == -BigRational::one(),
        };
        assert!(ok, "witness {t:?} failed exact re-verification for {s}");
        witnesses.push(Prop1Witness {
            condition: cond,
            transform: t.iter().map(|&x| x.into()).collect(),
            det: (t[0] * t[3] - t[1] * t[2]) as i8,
            omega: omega.to_string(),
            trace,
            norm,
        });
    }
    Ok(Prop1Report {
        surd: s.clone(),
        period_is_palindrome: is_cyclic_palindrome(&cf.period).is_palindrome,
        period: cf.period,
        height_bound,
        witnesses,
        inconclusive,
    })
}
