//! Two-dimensional geometric continued fractions: eigenlines of hyperbolic
//! 3×3 operators, the eight cones and certified patches of their sails.

mod geocf;
mod hull;
mod patch;

pub use geocf::{geocf_from_operator, geocf_from_unit, Cone, EigenAction, GeoCF};
pub use hull::{convex_hull, Facet};
pub use patch::{cone_points, default_radius, export_patch, sail_patch, PatchFormat, SailPatch, SailVertex};
