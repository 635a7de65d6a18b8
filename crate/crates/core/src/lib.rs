//! Entangled qubit probes for estimating the spectral width `γ` of
//! Ornstein–Uhlenbeck dephasing noise.
//!
//! The crate is organized bottom-up:
//!
//! - [`noise`]: the OU process, its phase-variance function `β(t)` and a
//!   Monte Carlo sampler.
//! - [`state`] and [`dynamics`]: probe states and the dephasing channel.
//! - [`qfi`] and [`closed_form`]: quantum Fisher information, general and
//!   analytic.
//! - [`analysis`]: time-optimized comparisons between GHZ and separable
//!   probes, thresholds and purity requirements.
//! - [`family`]: Haar-random probes and the excitation class family search.
//! - [`bayes`]: simulated measurements and grid Bayesian estimation.
//! - [`cli`]: the command line front end.

pub mod analysis;
pub mod bayes;
pub mod cli;
pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod family;
pub mod noise;
pub mod optim;
pub mod qfi;
pub mod rng;
pub mod state;

pub use analysis::{max_qfi, qfi_ratio, threshold_gamma0, threshold_purity, MixingModel, Probe};
pub use dynamics::EvolutionSpec;
pub use error::{Error, Result};
pub use noise::{beta, dbeta_dgamma, NoiseKernel, NoiseParams};
pub use state::{ghz_state, DensityMatrix, ProbeState};
