//! First-price set-system auctions over totally unimodular systems, with
//! exact computation of the max and min frugality benchmarks.
//!
//! An [`Instance`] holds `(A, b, c)` and defines the parametric program
//! `P(lambda): min c·x  s.t.  A x = lambda b, 0 <= x <= 1`. The winners of
//! the auction at level `k` are the columns of the lexicographically smallest
//! optimal solution of `P(k)`. All arithmetic is exact rational arithmetic,
//! so every identity the crate checks is an equality, not a tolerance.

pub mod benchmark_max;
pub mod benchmark_min;
pub mod decompose;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod instance;
mod lp;
pub mod parametric;
pub mod report;
pub mod scalar;
pub mod solution;
pub mod solver;
pub mod unimodular;
pub mod verify;

pub use error::{Error, Result};
pub use instance::{kflow_instance, Edge, Instance, KFlowGraph};
pub use lp::{LinearProgram, LpOptimum, LpOutcome, Relation};
pub use scalar::Scalar;
pub use solution::SolutionVector;
