//! Random Gaussian restricted-Boltzmann-machine spin states.
//!
//! The crate samples zero-bias RBM wavefunctions from the complex Gaussian
//! ensemble, computes exact finite-size entanglement diagnostics, and solves
//! the large-`N` replica free-energy models that predict them.
//!
//! - [`rbm`]: weight sampling and amplitude evaluation
//! - [`statmech`]: replica free energies, minimizers, analytic Page curves
//! - [`entanglement`]: reduced density matrices, spectra, entropies, level statistics
//! - [`ensemble`]: reproducible Monte Carlo sweeps, fits, design checks

pub mod ensemble;
pub mod entanglement;
pub mod error;
pub mod numerics;
pub mod output;
pub mod rbm;
pub mod rng;
pub mod statmech;

pub use error::{Error, Result};
pub use rbm::{RbmParams, StateVector, WeightMatrix};
