//! Desk-scale simulation of a driven qubit's non-equilibrium
//! thermodynamics.
//!
//! A spin starts in a Gibbs state, its energy gap is ramped by a
//! time-dependent Hamiltonian, and the library computes the irreversible
//! entropy produced, splits it into coherence and population-mismatch
//! contributions, and checks the Bures-length lower bound along with the
//! Jarzynski equality. The `sweep` binary reproduces the driving-time
//! sweeps as CSV tables and SVG plots.
//!
//! Conventions: h = 1 so energies are frequencies in Hz, times are in
//! seconds, inverse temperatures in 1/Hz, and entropies in nats.

pub mod drive;
pub mod error;
pub mod hermitian;
pub mod matrix;
pub mod metrics;
pub mod sweep;
pub mod thermal;

pub use error::{Error, Result};
pub use hermitian::{DensityMatrix, HermitianOperator, PauliAxis, SpectralDecomposition};
pub use matrix::ComplexMatrix;
pub use thermal::ThermalSpec;

#[cfg(test)]
mod testutil;
