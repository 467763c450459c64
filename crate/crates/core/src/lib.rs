//! Fault simulation for noisy Clifford circuits.
//!
//! Two interchangeable Monte-Carlo engines estimate logical failure rates:
//!
//! - the **naive** engine propagates every sampled fault forward through the
//!   circuit (cumulant streaming) and reads measurement flips off the
//!   propagated operator;
//! - the **abc** engine skips propagation entirely: check and logical rows
//!   are back-propagated once, and each shot's syndrome is a handful of
//!   commutators with the sampled fault, O(|F|) per shot on sparse codes.
//!
//! The two are per-shot bit-identical by construction, which the test suite
//! pins down.

pub mod bench;
pub mod bits;
pub mod circuit;
pub mod error;
pub mod pauli;
pub mod decoder;
pub mod engine;
pub mod families;
pub mod io;
pub mod noise;
pub mod propagation;
pub mod random;
pub mod spacetime;
pub mod stabilizer;

pub use circuit::{CliffordCircuit, FaultOperator, FaultSite};
pub use error::{Error, Result};
pub use pauli::{CliffordTableau, NamedGate, PauliOperator};
