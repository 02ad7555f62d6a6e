use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::symmetry::is_cf_symmetry;
use super::units::units_with_t2;
use crate::algnum::{automorphisms, FieldElement, FullModule, NumberField};
use crate::cf1d::{Prop1Condition, SymmetryKind};
use crate::error::{Error, Result};
use crate::exactint::{is_hyperbolic, IntMatrix};
use crate::poly::IntPolynomial;
use crate::sail3d::geocf_from_unit;

/// Candidate budget for the unit search in [`make_class_example`].
pub const CLASS_UNIT_DEPTH: usize = 10_000;

/// The matrices `F₁ … F₄`.
pub fn canonical_matrix(class_id: usize) -> IntMatrix {
    match class_id {
        1 => IntMatrix::from_i64([[1, 0, 0], [0, 0, 1], [0, -1, -1]]),
        2 => IntMatrix::from_i64([[1, 0, 0], [0, 0, 1], [1, -1, -1]]),
        3 => IntMatrix::from_i64([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        4 => IntMatrix::from_i64([[0, 0, 1], [-1, 0, 0], [0, -1, 0]]),
        _ => panic!("class id {class_id} not in 1..=4"),
    }
}

pub fn class_condition(class_id: usize) -> Prop1Condition {
    match class_id {
        1 => Prop1Condition::TraceZero,
        2 => Prop1Condition::TraceOne,
        3 => Prop1Condition::NormOne,
        4 => Prop1Condition::NormMinusOne,
        _ => panic!("class id {class_id} not in 1..=4"),
    }
}

pub fn condition_holds(c: Prop1Condition, x: &FieldElement) -> bool {
    let one = BigRational::one();
    match c {
        Prop1Condition::TraceZero => x.trace().is_zero(),
        Prop1Condition::TraceOne => x.trace() == one,
        Prop1Condition::NormOne => x.norm() == one,
        Prop1Condition::NormMinusOne => x.norm() == -one,
    }
}

/// `β` of class `class_id` for a given `τ(α)`.
fn class_beta(class_id: usize, tau_alpha: &FieldElement) -> Result<FieldElement> {
    Ok(match class_id {
        1 | 2 => tau_alpha.clone(),
        3 => tau_alpha.inv()?,
        4 => tau_alpha.inv()?.neg(),
        _ => return Err(Error::ConditionViolated(format!("class id {class_id} not in 1..=4"))),
    })
}

/// Whether `(α, β)` satisfy the defining relations of class `class_id` for
/// some nontrivial automorphism `τ`.
pub fn class_relation_holds(class_id: usize, alpha: &FieldElement, beta: &FieldElement) -> bool {
    if !condition_holds(class_condition(class_id), alpha) {
        return false;
    }
    automorphisms(alpha.field())
        .iter()
        .skip(1)
        .any(|tau| class_beta(class_id, &alpha.compose(tau)).is_ok_and(|b| &b == beta))
}

/// `(1, α, β)` with `α = θ` and `β` given by the first nontrivial automorphism
/// for which the three are independent.
pub fn class_basis(class_id: usize, field: &Arc<NumberField>) -> Result<Vec<FieldElement>> {
    if !(1..=4).contains(&class_id) {
        return Err(Error::ConditionViolated(format!("class id {class_id} not in 1..=4")));
    }
    let autos = automorphisms(field);
    if autos.len() < field.degree() || field.degree() != 3 {
        return Err(Error::NotGalois);
    }
    let alpha = FieldElement::theta(field);
    let c = class_condition(class_id);
    if !condition_holds(c, &alpha) {
        return Err(Error::ConditionViolated(format!(
            "{} fails for a root of {}: trace {}, norm {}",
            c.label(),
            field.poly(),
            alpha.trace(),
            alpha.norm()
        )));
    }
    // one of the two automorphisms may put β in the span of 1 and α
    for tau in autos.iter().skip(1) {
        let beta = class_beta(class_id, &alpha.compose(tau))?;
        let basis = vec![FieldElement::one(field), alpha.clone(), beta];
        if FullModule::from_basis(&basis).is_ok() {
            return Ok(basis);
        }
    }
    Err(Error::ConditionViolated(format!("β lies in Q + Qα for every automorphism of {}", field.poly())))
}

fn max_abs(e: &FieldElement) -> f64 {
    e.embeddings_f64().iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Nontorsion unit of the multiplier ring of `m` with the smallest largest
/// embedding, sign chosen so that embedding is positive.
fn smallest_unit(m: &FullModule, depth: usize) -> Result<FieldElement> {
    let basis = m.multiplier_ring()?.canonical_basis();
    let mut bound = 8.0;
    let mut spent = 0;
    while spent < depth {
        let c = units_with_t2(&basis, bound, depth - spent);
        spent += c.visited;
        let best = c.units.iter().map(|(_, e)| e).min_by(|a, b| max_abs(a).total_cmp(&max_abs(b)));
        if let Some(e) = best {
            let need = 3.0 * max_abs(e).powi(2) * (1.0 + 1e-9);
            let e = if need > bound && !c.truncated && spent < depth {
                let again = units_with_t2(&basis, need, depth - spent);
                again.units.into_iter().map(|(_, e)| e).min_by(|a, b| max_abs(a).total_cmp(&max_abs(b))).unwrap_or(e.clone())
            } else {
                e.clone()
            };
            let top = (0..3).max_by(|&i, &j| e.embed_f64(i).abs().total_cmp(&e.embed_f64(j).abs())).expect("cubic");
            return Ok(if e.sign_at(top) == Ordering::Less { e.neg() } else { e });
        }
        if c.truncated {
            break;
        }
        bound *= 4.0;
    }
    Err(Error::NoUnitFound)
}

/// An operator `A` whose eigenvector is `(1, α, β)` of class `class_id`, so
/// that `F_{class_id}` is a palindromic symmetry of `CF(A)`. The designated
/// root of `f` is its largest real root.
pub fn make_class_example(class_id: usize, f: &IntPolynomial, unit_hint: Option<&FieldElement>) -> Result<IntMatrix> {
    let field = NumberField::new(f, 2)?;
    let basis = class_basis(class_id, &field)?;
    let m = FullModule::from_basis(&basis)?;
    let eps = match unit_hint {
        Some(e) => {
            if !e.field().same_field(&field) {
                return Err(Error::ConditionViolated("unit hint lives in a different field".into()));
            }
            let e = FieldElement::new(&field, e.coords().to_vec())?;
            if e.is_rational() || !m.is_unit(&e) {
                return Err(Error::NotAUnit);
            }
            e
        }
        None => smallest_unit(&m, CLASS_UNIT_DEPTH)?,
    };
    let a = geocf_from_unit(&basis, &eps)?;
    if !is_hyperbolic(&a)? {
        return Err(Error::StructureViolation(format!("{a} is not hyperbolic")));
    }
    let r = is_cf_symmetry(&canonical_matrix(class_id), &a)?;
    if r.kind != SymmetryKind::Palindromic {
        return Err(Error::StructureViolation(format!("F{class_id} is not palindromic for {a}")));
    }
    Ok(a)
}

/// Fields used for the standard examples of each class.
pub fn class_field(class_id: usize) -> IntPolynomial {
    match class_id {
        1 => IntPolynomial::from_i64(&[1, -3, 0, 1]),
        2 | 4 => IntPolynomial::from_i64(&[1, -2, -1, 1]),
        3 => IntPolynomial::from_i64(&[-1, -2, 1, 1]),
        _ => panic!("class id {class_id} not in 1..=4"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sail3d::GeoCF;

    #[test]
    fn class_one_gives_b_example_family() {
        let a = make_class_example(1, &class_field(1), None).unwrap();
        assert_eq!(a.charpoly().coeffs().len(), 4);
        let g = GeoCF::from_operator(&a).unwrap();
        let v = g.eigenvector();
        assert!(class_relation_holds(1, &v[1], &v[2]));
    }

    #[test]
    fn all_classes_admit_their_matrix() {
        for i in 1..=4 {
            let a = make_class_example(i, &class_field(i), None).unwrap();
            let g = GeoCF::from_operator(&a).unwrap();
            let v = g.eigenvector();
            assert!(class_relation_holds(i, &v[1], &v[2]), "class {i}: {a}");
        }
    }

    #[test]
    fn wrong_condition_and_non_galois_are_rejected() {
        assert!(matches!(make_class_example(2, &class_field(1), None), Err(Error::ConditionViolated(_))));
        let non_galois = IntPolynomial::from_i64(&[1, -4, 0, 1]);
        assert_eq!(make_class_example(1, &non_galois, None).unwrap_err(), Error::NotGalois);
    }
}
