//! Quadratic irrationals: periodic continued fractions, cyclic palindromes,
//! trace/norm witnesses, Klein polygons and symmetries in GL₂(Z).

mod palindrome;
mod polygon;
mod prop1;
mod surd;
mod sym2d;

pub use palindrome::{is_cyclic_palindrome, Axis, AxisEnd, AxisKind, PalindromeAxes};
pub use polygon::{compare_surds, klein_polygon, ConeTest, KleinPolygon, Quadrant};
pub use prop1::{prop1_witness_search, Prop1Condition, Prop1Report, Prop1Witness};
pub use surd::{cf_expand, equal_up_to_rotation, minimal_period, reduced_surds, PeriodicCF, QuadNum, QuadraticSurd};
pub use sym2d::{
    dichotomy_holds, eigen_coordinate_sign, eigen_slopes, find_symmetries_2d, operator_from_surd, EigenCones2d, SymmetryKind,
    SymmetryReport2d,
};

use crate::error::Result;

pub fn surd_conjugate(s: &QuadraticSurd) -> QuadraticSurd {
    s.conjugate()
}

pub fn surd_trace(s: &QuadraticSurd) -> num_rational::BigRational {
    s.trace()
}

pub fn surd_norm(s: &QuadraticSurd) -> num_rational::BigRational {
    s.norm()
}

/// `-1/α'` as a surd.
pub fn galois_reversal(s: &QuadraticSurd) -> Result<QuadraticSurd> {
    s.conjugate().value().inv()?.neg().to_surd()
}
