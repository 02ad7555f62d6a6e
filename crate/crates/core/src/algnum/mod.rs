//! Real algebraic numbers, arithmetic in totally real fields of degree at
//! most 3, full modules and their multiplier rings.

mod field;
mod interval;
mod module;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

pub use field::{automorphisms, best_rational, FieldElement, NumberField};
pub use interval::{eval_interval, isolate_real_roots, pow2_neg, refine_root, RatInterval};
pub use module::{is_unit_of_module, module_from_basis, multiplier_ring, FullModule};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// A real root of an irreducible integer polynomial, pinned by an interval
/// containing no other root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicReal {
    pub minpoly: IntPolynomial,
    pub interval: RatInterval,
}

impl AlgebraicReal {
    /// All real roots of `f`, ascending.
    pub fn roots_of(f: &IntPolynomial) -> Result<Vec<Self>> {
        let minpoly = f.normalized();
        Ok(isolate_real_roots(&minpoly)?
            .into_iter()
            .map(|interval| AlgebraicReal { minpoly: minpoly.clone(), interval })
            .collect())
    }

    pub fn refined(&self, width: &num_rational::BigRational) -> Self {
        AlgebraicReal {
            minpoly: self.minpoly.clone(),
            interval: refine_root(&self.minpoly.to_rat(), &self.interval, width),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.refined(&pow2_neg(60)).interval.to_f64()
    }

    /// Exact comparison. Roots of one minimal polynomial are equal iff their
    /// isolating intervals share the root; roots of distinct irreducible
    /// polynomials differ, so refinement separates them.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let mut bits = 16;
        loop {
            let a = self.refined(&pow2_neg(bits)).interval;
            let b = other.refined(&pow2_neg(bits)).interval;
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if self.minpoly == other.minpoly {
                let roots = isolate_real_roots(&self.minpoly).expect("squarefree");
                let pos = |iv: &RatInterval| roots.iter().position(|r| r.overlaps(iv) && r.contains(&iv.midpoint()));
                if let (Some(i), Some(j)) = (pos(&a), pos(&b)) {
                    return i.cmp(&j);
                }
            }
            bits *= 2;
        }
    }
}

/// Validate that `f` defines a totally real field of degree 1..=3.
pub fn check_totally_real(f: &IntPolynomial) -> Result<()> {
    NumberField::new(f, 0).map(|_| ()).map_err(|e| match e {
        Error::NotSquarefree => Error::InvalidField(format!("{f} is not squarefree")),
        other => other,
    })
}
