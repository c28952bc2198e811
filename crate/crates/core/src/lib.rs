//! Solver core for atomic bad-events over independently assigned variables.
//!
//! The crate models finite product probability spaces with atomic bad-events
//! (conjunctions of variable-value demands), evaluates a family of
//! convergence criteria for the resampling algorithm (from the symmetric
//! local lemma up to the exact orderable-set form), runs the sequential and
//! parallel resampling algorithms with full witness-tree instrumentation,
//! and builds instances for k-SAT, hypergraph coloring, independent
//! transversals, second Hamiltonian cycles, and toy-scale Ramsey coloring.
//!
//! The crate is `no_std` (alloc required). All randomness is drawn from
//! counter-based keyed streams (see [`rng`]), so every run is a pure
//! function of one root seed.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod apps;
pub mod criteria;
pub mod error;
pub mod math;
pub mod model;
pub mod parallel;
pub mod rng;
pub mod sequential;
pub mod vcmep;
pub mod witness;

/// Root seed used by the CLI and test suites when none is given.
pub const DEFAULT_SEED: u64 = 0x006c_6c6c_6d74;

pub use model::{Assignment, BadEvent, Instance, VariableSpace};
