//! Error metrics, the CRLB reference, interference cancellation and the
//! uncoded symbol-error probe.

use num_complex::Complex64;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::nbi_model::{differential_gain, phase_shift};
use crate::signal_model::Constellation;

/// Offsets whose differential gain `|1 - e^{j2πα}|` falls below this are
/// refused by [`cancel_nbi`].
pub const MIN_DIFFERENTIAL_GAIN: f64 = 1e-3;

/// MSE threshold used by the success flag.
pub const SUCCESS_MSE: f64 = 1e-3;

/// Subtracts the block-aligned interference implied by a differential
/// estimate: `X - e^{j2πα} Δê_B / (1 - e^{j2πα})`.
pub fn cancel_nbi(freq_rx: &[Complex64], diff_estimate: &[Complex64], alpha: f64) -> Result<Vec<Complex64>> {
    if freq_rx.len() != diff_estimate.len() {
        return Err(Error::LengthMismatch { expected: freq_rx.len(), actual: diff_estimate.len() });
    }
    let gain = differential_gain(alpha);
    if gain.norm() < MIN_DIFFERENTIAL_GAIN {
        return Err(Error::DegenerateOffset { alpha, gain: gain.norm() });
    }
    let factor = phase_shift(alpha) / gain;
    Ok(freq_rx.iter().zip(diff_estimate).map(|(x, d)| x - factor * d).collect())
}

/// Block-aligned interference implied by a differential estimate.
pub fn shifted_from_differential(diff_estimate: &[Complex64], alpha: f64) -> Result<Vec<Complex64>> {
    let zeros = vec![Complex64::new(0.0, 0.0); diff_estimate.len()];
    Ok(cancel_nbi(&zeros, diff_estimate, alpha)?.into_iter().map(|x| -x).collect())
}

/// `2σ_w² K / G`.
pub fn crlb(config: &SystemConfig) -> f64 {
    2.0 * config.noise_var() * config.sparsity() as f64 / config.ibi_free_len() as f64
}

/// `(1/N) ‖estimate - truth‖²`.
pub fn mse_full(estimate: &[Complex64], truth: &[Complex64]) -> f64 {
    let n = truth.len() as f64;
    estimate.iter().zip(truth).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / n
}

/// As [`mse_full`] but summing only over `support`; still divided by `N`.
pub fn mse_on_support(estimate: &[Complex64], truth: &[Complex64], support: &[usize]) -> f64 {
    let n = truth.len() as f64;
    support.iter().map(|&i| (estimate[i] - truth[i]).norm_sqr()).sum::<f64>() / n
}

/// Whether the estimated support contains every true bin.
pub fn support_covers(estimated: &[usize], truth: &[usize]) -> bool {
    truth.iter().all(|t| estimated.binary_search(t).is_ok())
}

/// Residual interference power per sub-carrier after cancellation, in dB
/// relative to the noise variance.
pub fn post_cancel_interference_db(shifted_truth: &[Complex64], shifted_estimate: &[Complex64], noise_var: f64) -> f64 {
    let p = mse_full(shifted_estimate, shifted_truth);
    10.0 * (p / noise_var).log10()
}

/// Fraction of sub-carriers whose hard decision after zero-forcing differs
/// from the transmitted symbol.
///
/// `response` is the per-sub-carrier gain from a unit-energy constellation
/// point to the received sample, i.e. the channel frequency response times
/// the data amplitude. `freq_tx` holds the transmitted samples at the same
/// amplitude.
pub fn symbol_error_probe(
    freq_clean: &[Complex64],
    freq_tx: &[Complex64],
    response: &[Complex64],
    amplitude: f64,
    constellation: &Constellation,
) -> Result<f64> {
    let n = freq_tx.len();
    for len in [freq_clean.len(), response.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, actual: len });
        }
    }
    if n == 0 {
        return Ok(0.0);
    }
    let errors = (0..n)
        .filter(|&k| {
            let sent = constellation.nearest(freq_tx[k] / amplitude);
            let eq = if response[k].norm() > 0.0 { freq_clean[k] / response[k] } else { Complex64::new(0.0, 0.0) };
            constellation.nearest(eq) != sent
        })
        .count();
    Ok(errors as f64 / n as f64)
}
