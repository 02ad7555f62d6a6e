use std::sync::Arc;

use klein_core::algnum::{FieldElement, NumberField};
use klein_core::cf1d::{cf_expand, equal_up_to_rotation, galois_reversal, is_cyclic_palindrome, reduced_surds, PeriodicCF};
use klein_core::sail3d::{sail_patch, Cone, GeoCF};
use klein_core::sym3d::{class_field, find_palindromic, is_cf_symmetry, make_class_example, SearchStatus};
use klein_core::{IntMatrix, IntPolynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-6i64..=6, 9)
        .prop_map(|v| IntMatrix::from_vec_i64(&[v[0..3].to_vec(), v[3..6].to_vec(), v[6..9].to_vec()]).unwrap())
}

fn unimodular() -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-2i64..=2, 9)
        .prop_map(|v| IntMatrix::from_vec_i64(&[v[0..3].to_vec(), v[3..6].to_vec(), v[6..9].to_vec()]).unwrap())
        .prop_filter("unimodular", |m| m.is_unimodular())
}

fn field() -> Arc<NumberField> {
    NumberField::new(&IntPolynomial::from_i64(&[1, -3, 0, 1]), 2).unwrap()
}

fn element() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative(a in small_matrix(), b in small_matrix()) {
        prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
    }

    #[test]
    fn adjugate_inverts(a in small_matrix()) {
        let d = a.det();
        prop_assert_eq!(a.mul(&a.adjugate()), IntMatrix::identity(3).scale(&d));
    }

    #[test]
    fn charpoly_kills_matrix(a in small_matrix()) {
        let c = a.charpoly();
        let mut acc = IntMatrix::zero(3);
        for k in (0..c.coeffs().len()).rev() {
            acc = acc.mul(&a).add(&IntMatrix::identity(3).scale(&c.coeffs()[k]));
        }
        prop_assert!(acc == IntMatrix::zero(3));
    }

    #[test]
    fn galois_reversal_is_an_involution(d in 2i64..300, k in 0usize..64) {
        let surds = reduced_surds(d);
        prop_assume!(!surds.is_empty());
        let s = &surds[k % surds.len()];
        let back = galois_reversal(&galois_reversal(s).unwrap()).unwrap();
        prop_assert_eq!(&back, s);
        let p = cf_expand(s).unwrap().period;
        let mut r = p.clone();
        r.reverse();
        prop_assert!(equal_up_to_rotation(&cf_expand(&galois_reversal(s).unwrap()).unwrap().period, &r));
    }

    #[test]
    fn periodic_cf_round_trips(
        head in -5i64..=5,
        pre in prop::collection::vec(1i64..=6, 0..3),
        period in prop::collection::vec(1i64..=6, 1..5),
    ) {
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let mut preperiod = vec![head];
        preperiod.extend(&pre);
        let cf = PeriodicCF { preperiod: big(&preperiod), period: big(&period) };
        let v = cf.value().unwrap();
        let again = cf_expand(&v.to_surd().unwrap()).unwrap();
        prop_assert_eq!(again.value().unwrap(), v);
        prop_assert!(again.period.len() <= period.len());
    }

    #[test]
    fn palindromes_are_rotation_invariant(v in prop::collection::vec(1u8..4, 1..8), k in 0usize..8) {
        let mut r = v.clone();
        r.rotate_left(k % v.len());
        prop_assert_eq!(is_cyclic_palindrome(&v).is_palindrome, is_cyclic_palindrome(&r).is_palindrome);
    }

    #[test]
    fn norm_is_multiplicative_and_trace_additive(x in element(), y in element()) {
        let f = field();
        let (a, b) = (FieldElement::from_i64(&f, &x), FieldElement::from_i64(&f, &y));
        prop_assert_eq!(a.mul(&b).norm(), a.norm() * b.norm());
        prop_assert_eq!(a.add(&b).trace(), a.trace() + b.trace());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn symmetry_search_is_conjugation_equivariant(x in unimodular(), class in 1usize..=4) {
        let a = make_class_example(class, &class_field(class), None).unwrap();
        let b = x.conjugate(&a).unwrap();
        let c = find_palindromic(&b, 10_000).unwrap();
        prop_assert_eq!(c.status, SearchStatus::Found);
        let g = c.symmetry.unwrap().g;
        // X⁻¹ G X is a palindromic symmetry of A
        let back = x.inverse_unimodular().unwrap().conjugate(&g).unwrap();
        let r = is_cf_symmetry(&back, &a).unwrap();
        prop_assert_eq!(r.kind, klein_core::cf1d::SymmetryKind::Palindromic);
    }

    #[test]
    fn sail_patch_points_lie_in_their_cone(k in 0usize..8) {
        let a = IntMatrix::from_i64([[0, 1, 0], [2, 0, 1], [-1, 1, 0]]);
        let g = GeoCF::from_operator(&a).unwrap();
        let cone = Cone::all(3)[k].clone();
        let p = sail_patch(&g, &cone, &BigRational::from_integer(6.into())).unwrap();
        prop_assert!(p.certified().count() > 0);
        for v in &p.vertices {
            prop_assert_eq!(g.locate_cone(&v.coords).unwrap(), cone.clone());
        }
        for f in &p.faces {
            prop_assert!(f.len() >= 3 && f.iter().all(|&i| i < p.vertices.len()));
        }
    }
}
