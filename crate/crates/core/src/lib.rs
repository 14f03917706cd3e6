//! Quantum-state texture resource theory toolkit.
//!
//! Texture quantifies how far a density matrix's entries deviate from the
//! uniform matrix `f` whose entries are all `1/d` in a fixed computational
//! basis. This crate implements the measure families built on affinity,
//! Hellinger distance, Tsallis relative entropy and convex roofs, the free
//! operations fixing `|f>`, optimal stochastic state conversions for qubits,
//! and verification suites for the identities tying texture to coherence,
//! imaginarity, predictability and skew information.

pub mod channels;
pub mod error;
pub mod exec;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod registry;
pub mod relations;
pub mod rng;
pub mod roof;
pub mod states;
pub mod tol;
pub mod transforms;

pub use error::{Error, Result};
pub use tol::Tolerances;
