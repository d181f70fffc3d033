//! Exact arithmetic: rationals, the radical/Laurent coefficient ring,
//! truncated Puiseux series and matrices of series.

pub mod linalg;
pub mod matrix;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod series;

pub use matrix::SeriesMatrix;
pub use monomial::{Monomial, Symbol};
pub use parse::{parse_poly, parse_rational};
pub use poly::MultiPoly;
pub use rational::{fr, q, qi, Frac, Rational};
pub use series::Series;
