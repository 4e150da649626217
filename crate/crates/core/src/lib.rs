//! Ergodic capacity of RIS-aided MIMO Rician channels.
//!
//! The crate covers the whole analysis chain:
//!
//! - [`channel_model`]: steering vectors, LoS path sets, channel realizations
//!   and the exact mean/covariance of the effective channel.
//! - [`matrix_analysis`]: principal-minor expansion, non-central Wishart
//!   determinant and log-determinant moments, digamma, eigenvalue sandwich.
//! - [`capacity_bounds`]: Monte Carlo ergodic capacity and closed-form
//!   upper/lower bounds.
//! - [`asymptotics`]: high-SNR slope/offset, large-RIS limits and power
//!   scaling.
//! - [`phase_optimizer`]: genetic-algorithm phase design on the upper bound.
//! - [`experiment`]: config files, CSV sweeps and the validation report used
//!   by the `ris-capacity` binary.
//!
//! Runnable walkthroughs of each piece live in `examples/`.

pub mod asymptotics;
pub mod capacity_bounds;
pub mod channel_model;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod matrix_analysis;
pub mod monte_carlo;
pub mod phase_optimizer;
pub mod rng;

pub use error::{Error, Result};
