//! Non-stabilizerness measures of pure states and their Haar-measure densities.
//!
//! The crate is organised around four layers:
//!
//! - [`statevec`]: pure states of qubit registers or a single qudit, Haar
//!   sampling, Bloch-sphere conversion and the single-qubit Clifford group.
//! - [`pauli`] and [`measures`]: the full spectrum of Pauli (or
//!   Weyl-Heisenberg) expectation values of a state, and everything derived
//!   from it: stabilizer purities, stabilizer Renyi entropies, incompatibility,
//!   l1-coherence and plain observable expectations.
//! - [`exact`]: closed-form single-qubit densities. The order-2 purity density
//!   is evaluated by singularity-aware quadrature, including its logarithmic
//!   divergence at the saddle value `n = 1/2`.
//! - [`montecarlo`]: a deterministic, chunk-parallel Haar sampler with
//!   histogramming, log-divergence fits and goodness-of-fit tests against
//!   the exact curves.
//!
//! All entropies are in nats; [`measures::LogBase`] converts at presentation.

pub mod bessel;
pub mod clifford;
pub mod error;
pub mod exact;
pub mod input;
pub mod measures;
pub mod montecarlo;
pub mod pauli;
pub mod quadrature;
pub mod rng;
pub mod statevec;

pub use error::{Error, Result};
pub use measures::{magic_report, LogBase, MagicReport};
pub use pauli::PauliSpectrum;
pub use rng::SeededRng;
pub use statevec::{BlochVector, PureState, Register};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
