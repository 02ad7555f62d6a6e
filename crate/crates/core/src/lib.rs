//! Exact geometric continued fractions: Klein polygons and sails, Dirichlet
//! groups of hyperbolic integer operators, and palindromic symmetries in
//! dimensions 2 and 3.

pub mod algnum;
pub mod cf1d;
pub mod error;
pub mod exactint;
pub mod json;
pub mod lattice;
pub mod poly;
pub mod render;
pub mod sail3d;
pub mod sym3d;
pub mod verify;

pub use error::{Error, Result};
pub use exactint::{IntMatrix, RatMatrix};
pub use poly::{IntPolynomial, RatPoly};
