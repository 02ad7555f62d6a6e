use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::algnum::FieldElement;
use crate::lattice::short_vectors;

/// Gram matrix of the trace form `Tr(x y)` on the span of `b`.
pub(crate) fn t2_gram(b: &[FieldElement]) -> Vec<Vec<f64>> {
    b.iter()
        .map(|x| b.iter().map(|y| x.mul(y).trace().to_f64().unwrap_or(f64::INFINITY)).collect())
        .collect()
}

pub(crate) fn combine(b: &[FieldElement], x: &[i64]) -> FieldElement {
    let field = b[0].field();
    b.iter().zip(x).fold(FieldElement::zero(field), |acc, (e, &c)| {
        acc.add(&e.scale(&BigRational::from_integer(BigInt::from(c))))
    })
}

pub(crate) fn is_norm_pm1(e: &FieldElement) -> bool {
    e.norm().abs().is_one()
}

pub(crate) fn log_vector(e: &FieldElement) -> Vec<f64> {
    e.embeddings_f64().iter().map(|x| x.abs().ln()).collect()
}


/// Elements of norm `±1` (not `±1` itself) in the span of `b` with
/// `T2 ≤ bound`, as coefficient vectors. `truncated` when the candidate limit
/// was hit.
pub(crate) struct UnitCandidates {
    pub units: Vec<(Vec<i64>, FieldElement)>,
    pub visited: usize,
    pub truncated: bool,
}

pub(crate) fn units_with_t2(b: &[FieldElement], bound: f64, limit: usize) -> UnitCandidates {
    let e = short_vectors(&t2_gram(b), bound, limit);
    let units = e
        .vectors
        .into_iter()
        .map(|x| {
            let u = combine(b, &x);
            (x, u)
        })
        .filter(|(_, u)| !u.is_rational() && is_norm_pm1(u))
        .collect();
    UnitCandidates { units, visited: e.visited, truncated: e.truncated }
}
