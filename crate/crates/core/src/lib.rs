//! Exact analysis of orthogonal torus representations through their integer
//! weight systems, together with involutive extensions `T^k ∪ ωT^k` and a
//! floating-point laboratory for the `SO(2)×SO(n)` family.
//!
//! The exact side never touches floating point: weights are integer
//! covectors, lattices are row spans of integer matrices, and involutions are
//! rational matrices. Only [`numlab`] samples points and reads ranks off
//! singular values.

pub mod cli;
pub mod involution;
pub mod io;
pub mod lattice;
pub mod numlab;
pub mod split;
pub mod strata;
pub mod sweep;
pub mod weights;

pub use involution::{InvolutionSplit, InvolutiveExtension, Verdict};
pub use lattice::{IntMatrix, RationalMatrix};
pub use split::{BlockDecomposition, SplitWitness};
pub use strata::StratumRecord;
pub use weights::{IsotypicalComponent, Weight, WeightSystem};
