//! Self-consistent learnability analysis for gate set Pauli noise.
//!
//! Given a set of Clifford layers whose state preparation, measurement and
//! gate noise are Pauli channels drawn from a chosen ansatz, this crate
//! computes which noise parameters are learnable and which are gauge,
//! designs the experiments that learn them (including germ-repetition
//! families for relative precision), simulates those experiments exactly,
//! and recovers the learnable parameters from the simulated data.
//!
//! All learnability linear algebra is carried out over exact rationals
//! ([`Rat`]); only simulated expectation values and estimates are floats.

pub mod cases;
pub mod clifford;
pub mod design;
pub mod estimate;
pub mod learn;
pub mod linalg;
pub mod model;
pub mod pauli;
pub mod ptg;
pub mod scalar;
pub mod schema;
pub mod sim;
pub mod space;

mod error;

pub use error::{Error, Result};
pub use scalar::{Rat, Scalar};

/// Default cap for operations that enumerate all `4^n` Pauli labels.
pub const DEFAULT_N_MAX: usize = 6;
