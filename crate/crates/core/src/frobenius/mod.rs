//! Frobenius manifolds near the discriminant.

pub mod chart;
pub mod charts;
pub mod frame;
pub mod roots;
pub mod structure;

pub use chart::{ChartSpec, ExpansionSpec, FrobeniusChart};
pub use frame::{FrameOptions, IdempotentFrame};
pub use structure::{local_structure_probe, psi0_frame, Psi0Frame, StructureReport};
