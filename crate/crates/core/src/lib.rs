//! Anyon condensation as quantum channels.
//!
//! An uncondensed anyon system is reduced to its sector labels and quantum
//! dimensions. A condensable algebra is described by its branching matrix
//! `n[a][t]`, which says how each source sector `a` restricts onto the sectors
//! `t` of the condensed theory. From that matrix the crate builds
//!
//! - the restriction channel (a conditional expectation) and the lifting map,
//!   both on diagonal sector states and as explicit Kraus matrices,
//! - the Jones index `λ = Σ_a n[a][φ] d_a`,
//! - the relative-entropy order parameter `S(ρ‖ρ̃)` with `ρ̃ = lift(restrict(ρ))`,
//!   which is bounded above by `log λ`,
//! - an exhaustive search for integer branching solutions and for permutation
//!   dualities between two condensations.
//!
//! The worked examples (`Z_N`, the toric code and `Rep(S_3)`) ship as a built-in
//! [`catalog`].

pub mod branching;
pub mod catalog;
pub mod channels;
pub mod duality;
pub mod entropy;
pub mod enumerate;
pub mod error;
pub mod io;
pub mod kraus;
pub mod report;
pub mod sampling;
pub mod sweep;
pub mod system;

pub use branching::{BranchingData, CondensableAlgebraView};
pub use channels::{DiagonalOperator, SectorState};
pub use entropy::{EntropyReport, LogBase};
pub use error::{Error, Result};
pub use kraus::{KrausDirection, KrausSet};
pub use report::{ValidationReport, Violation};
pub use system::{AnyonSystem, SectorLabel, Tolerance};
