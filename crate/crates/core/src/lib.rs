//! Frobenius-manifold local analysis, Givental R-matrix reconstruction of
//! cohomological field theories as stable-graph sums, and tautological
//! relations obtained from pole cancellation along the discriminant.
//!
//! All arithmetic is exact over the rationals. Series carry explicit
//! truncation orders so that every reported coefficient is certified.

pub mod error;
pub mod exactalg;
pub mod frobenius;
pub mod intersect;
pub mod modgraphs;
pub mod reconstruct;
pub mod relations;
pub mod rmatrix;

pub use error::{Error, Result};
