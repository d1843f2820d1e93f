//! Monte Carlo experiment harness: instance generation through the full
//! receive chain, recovery, cancellation, metrics, sweeps and CSV output.
//!
//! Seeds: the instance of trial `t` at sweep index `i` is drawn from
//! `mix_seed([base_seed, i, t])`; recovery randomness comes from
//! `mix_seed([instance_seed, 0xA16])`. Every algorithm therefore sees the
//! same instance and the same recovery stream.

mod metrics;
mod spec;
mod sweep;
mod trial;

pub use metrics::{
    cancel_nbi, crlb, mse_full, mse_on_support, post_cancel_interference_db, shifted_from_differential,
    support_covers, symbol_error_probe, MIN_DIFFERENTIAL_GAIN, SUCCESS_MSE,
};
pub use spec::{Algorithm, ExperimentSpec, SweepAxis};
pub use sweep::{run_sweep, Summary, SweepTable, CSV_COLUMNS};
pub use trial::{generate_instance, instance_seed, run_algorithm, run_trial, Instance, TrialRecord};
