use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::units::{log_vector, units_with_t2};
use crate::algnum::FieldElement;
use crate::error::{Error, Result};
use crate::exactint::{commutant_lattice, IntMatrix};
use crate::json;
use crate::sail3d::GeoCF;

/// `Dir(A) = {±1} × ⟨ε₁, ε₂⟩` up to finite index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletGroup {
    pub torsion: IntMatrix,
    pub generators: Vec<IntMatrix>,
    pub commutant_basis: Vec<IntMatrix>,
    /// `log|σ_i(ε_j)|`, one row per generator.
    pub log_vectors: Vec<LogVector>,
    /// `|det|` of the first two log coordinates of the generators.
    #[serde(with = "json::f64_str")]
    pub regulator: f64,
    /// The pair is certified independent, not fundamental.
    pub fundamental_certified: bool,
    #[serde(with = "json::int_str")]
    pub candidates: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogVector(#[serde(with = "f64_vec")] pub Vec<f64>);

mod f64_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

/// A unit of the commutant as matrix and as eigenvalue on `v`.
#[derive(Clone, Debug)]
pub(crate) struct Unit {
    pub matrix: IntMatrix,
    pub value: FieldElement,
}

impl Unit {
    fn logs(&self) -> Vec<f64> {
        log_vector(&self.value)
    }

    fn mul(&self, other: &Unit) -> Unit {
        Unit { matrix: self.matrix.mul(&other.matrix), value: self.value.mul(&other.value) }
    }

    fn pow(&self, k: i64) -> Unit {
        let m = if k >= 0 {
            self.matrix.pow(k as u32)
        } else {
            self.matrix.inverse_unimodular().expect("unit").pow((-k) as u32)
        };
        Unit { matrix: m, value: self.value.pow(k).expect("nonzero unit") }
    }

    fn positive(self) -> Unit {
        if self.value.sign_at(0) == Ordering::Less {
            Unit { matrix: self.matrix.neg(), value: self.value.neg() }
        } else {
            self
        }
    }
}

fn det2(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lagrange reduction of a pair of units in log space.
fn gauss_reduce(mut u: Unit, mut w: Unit) -> (Unit, Unit) {
    for _ in 0..200 {
        let (lu, lw) = (u.logs(), w.logs());
        if dot(&lu, &lu) > dot(&lw, &lw) {
            std::mem::swap(&mut u, &mut w);
            continue;
        }
        let k = (dot(&lu, &lw) / dot(&lu, &lu)).round() as i64;
        if k == 0 {
            break;
        }
        w = w.mul(&u.pow(-k));
    }
    (u.positive(), w.positive())
}

/// Whether `ε₁^p ε₂^q = ±I` for some `(p, q) ≠ (0, 0)` with `|p|, |q| ≤ bound`.
pub fn has_small_relation(e1: &IntMatrix, e2: &IntMatrix, bound: u32) -> bool {
    let id = IntMatrix::identity(e1.dim());
    let inv1 = e1.inverse_unimodular().expect("unit");
    let inv2 = e2.inverse_unimodular().expect("unit");
    let b = bound as i64;
    let pw = |m: &IntMatrix, inv: &IntMatrix, k: i64| if k >= 0 { m.pow(k as u32) } else { inv.pow((-k) as u32) };
    for p in -b..=b {
        let a = pw(e1, &inv1, p);
        for q in -b..=b {
            if p == 0 && q == 0 {
                continue;
            }
            let m = a.mul(&pw(e2, &inv2, q));
            if m == id || m == id.neg() {
                return true;
            }
        }
    }
    false
}

pub fn dirichlet_group(a: &IntMatrix, depth: usize) -> Result<DirichletGroup> {
    dirichlet_with(&GeoCF::from_operator(a)?, depth)
}

/// Units of the commutant enumerated by increasing `T2` of their eigenvalue,
/// spending at most `depth` candidates.
pub(crate) fn dirichlet_with(geo: &GeoCF, depth: usize) -> Result<DirichletGroup> {
    let a = geo.operator();
    let basis = commutant_lattice(a)?;
    let v = geo.eigenvector();
    let lambdas: Vec<FieldElement> = basis
        .iter()
        .map(|c| {
            (0..3).fold(FieldElement::zero(geo.field()), |acc, k| {
                acc.add(&v[k].scale(&num_rational::BigRational::from_integer(c.get(0, k).clone())))
            })
        })
        .collect();
    let to_matrix = |x: &[i64]| {
        basis.iter().zip(x).fold(IntMatrix::zero(3), |acc, (c, &k)| acc.add(&c.scale(&BigInt::from(k))))
    };
    let mut spent = 0usize;
    let mut bound = 8.0;
    let mut best: Option<(Unit, Unit)> = None;
    let mut rank = 0;
    let mut extra_round = false;
    while spent < depth {
        let found = units_with_t2(&lambdas, bound, depth - spent);
        spent += found.visited;
        let units: Vec<Unit> =
            found.units.iter().map(|(x, e)| Unit { matrix: to_matrix(x), value: e.clone() }).collect();
        let logs: Vec<Vec<f64>> = units.iter().map(Unit::logs).collect();
        let mut pick: Option<(usize, usize, f64)> = None;
        for i in 0..units.len() {
            for j in i + 1..units.len() {
                let d = det2(&logs[i], &logs[j]).abs();
                if d > 1e-6 && pick.is_none_or(|(_, _, b)| d < b - 1e-9) {
                    pick = Some((i, j, d));
                }
            }
        }
        rank = rank.max(match (pick, units.is_empty()) {
            (Some(_), _) => 2,
            (None, false) => 1,
            (None, true) => 0,
        });
        if let Some((i, j, _)) = pick {
            best = Some((units[i].clone(), units[j].clone()));
        }
        if found.truncated || (best.is_some() && extra_round) {
            break;
        }
        if best.is_some() {
            extra_round = true;
        }
        bound *= 4.0;
    }
    let Some((u, w)) = best else {
        return Err(Error::InsufficientDepth { found: rank });
    };
    let (e1, e2) = gauss_reduce(u, w);
    let (l1, l2) = (e1.logs(), e2.logs());
    let regulator = det2(&l1, &l2).abs();
    for e in [&e1.matrix, &e2.matrix] {
        if !e.commutes_with(a) || !e.det().abs().is_one() {
            return Err(Error::StructureViolation(format!("{e} is not a unit commuting with A")));
        }
    }
    if !e1.matrix.commutes_with(&e2.matrix) || has_small_relation(&e1.matrix, &e2.matrix, 5) {
        return Err(Error::StructureViolation("generators are dependent".into()));
    }
    Ok(DirichletGroup {
        torsion: IntMatrix::identity(3).neg(),
        generators: vec![e1.matrix, e2.matrix],
        commutant_basis: basis,
        log_vectors: vec![LogVector(l1), LogVector(l2)],
        regulator,
        fundamental_certified: false,
        candidates: spent,
    })
}

impl DirichletGroup {
    /// Sup norms of the two generator log vectors.
    pub fn log_sup_norms(&self) -> (f64, f64) {
        let s = |v: &LogVector| v.0.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        (s(&self.log_vectors[0]), s(&self.log_vectors[1]))
    }
}
