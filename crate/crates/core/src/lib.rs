//! Narrowband interference recovery for CP-OFDM by cross-entropy sparse
//! learning.
//!
//! The crate covers the whole chain: CP-OFDM frames through a Vehicular-A
//! channel with tone interferers ([`signal_model`], [`channel`],
//! [`nbi_model`]), the temporal differential measurement over the IBI-free
//! CP region ([`measurement`]), the cross-entropy learners SCEM, RSCEM and
//! S-SCEM ([`sparse_learn`]), greedy and exhaustive baselines
//! ([`baselines`]), and the Monte Carlo harness with cancellation and
//! metrics ([`experiments`]).

pub mod baselines;
pub mod channel;
pub mod config;
pub mod dft;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod measurement;
pub mod nbi_model;
pub mod random;
pub mod recovery;
pub mod signal_model;
pub mod sparse_learn;

pub use config::SystemConfig;
pub use error::{Error, Result};
pub use measurement::{MeasurementSet, ObservationMatrix};
pub use recovery::RecoveryResult;
pub use sparse_learn::{rscem, scem, sscem, CemParams};
