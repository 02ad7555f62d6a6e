//! Symmetries of two-dimensional algebraic continued fractions: the exact
//! symmetry test, Dirichlet groups, the complete palindromic search and the
//! reduction of palindromic symmetries to the canonical classes.

mod classes;
mod dirichlet;
mod palindromic;
mod symmetry;
mod units;

pub use classes::{
    canonical_matrix, class_basis, class_condition, class_field, class_relation_holds, condition_holds,
    make_class_example, CLASS_UNIT_DEPTH,
};
pub use dirichlet::{dirichlet_group, has_small_relation, DirichletGroup, LogVector};
pub use palindromic::{
    canonicalize, find_palindromic, theorem_check, Canonical, Conjugator, MainCase, PalindromeCertificate,
    SearchStatus,
};
pub use symmetry::{
    cone_orbits, g_plus_minus, is_cf_symmetry, order3_analysis, symmetry_report, ConeOrbits, Order3Data,
    SymmetryReport,
};

/// Default candidate budget.
pub const DEFAULT_DEPTH: usize = 10_000;
