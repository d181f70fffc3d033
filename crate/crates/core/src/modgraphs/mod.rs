//! Stable graphs, decorated strata and the strata-algebra operations used by
//! the reconstruction and the relation closure.

pub mod enumerate;
pub mod graph;
pub mod strata;

pub use enumerate::{enumerate_stable_graphs, GraphWithAut};
pub use graph::{DecoratedGraph, Incidence, StableGraph};
pub use strata::{
    compositions, dilaton_series, forget_last_term, gluing_pushforward, graft, kappa_to_psi, partitions, psi_kappa_monomials,
    strata_basis, Class, Coefficient, Position, StrataVector,
};
