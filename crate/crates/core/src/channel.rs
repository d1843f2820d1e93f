//! Tapped-delay-line multipath channels.

use num_complex::Complex64;
use rand::Rng;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::random::complex_gaussian;

/// ITU-R M.1225 Vehicular-A path delays in nanoseconds.
pub const VEHICULAR_A_DELAYS_NS: [f64; 6] = [0.0, 310.0, 710.0, 1090.0, 1730.0, 2510.0];
/// ITU-R M.1225 Vehicular-A relative path powers in dB.
pub const VEHICULAR_A_POWERS_DB: [f64; 6] = [0.0, -1.0, -9.0, -10.0, -15.0, -20.0];

/// One quasi-static baseband impulse response, zero-padded to `L` taps.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub taps: Vec<Complex64>,
    pub profile_name: String,
}

impl ChannelRealization {
    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|h| h.norm_sqr()).sum()
    }
}

/// Sample index of each Vehicular-A path at the given sample rate.
pub fn vehicular_a_tap_indices(sample_rate_hz: f64) -> [usize; 6] {
    VEHICULAR_A_DELAYS_NS.map(|d| (d * 1e-9 * sample_rate_hz).round() as usize)
}

/// Draws a Rayleigh-faded Vehicular-A realization. Path powers are
/// normalized so the expected total energy is one; paths that round to the
/// same sample add up.
pub fn vehicular_a_channel<R: Rng + ?Sized>(
    rng: &mut R,
    config: &SystemConfig,
    sample_rate_hz: f64,
) -> Result<ChannelRealization> {
    let l = config.channel_len();
    let idx = vehicular_a_tap_indices(sample_rate_hz);
    let last = idx[5];
    if last >= l {
        return Err(Error::DelayTooLong { delay: last, channel_len: l });
    }
    let lin: Vec<f64> = VEHICULAR_A_POWERS_DB.iter().map(|p| 10f64.powf(p / 10.0)).collect();
    let total: f64 = lin.iter().sum();
    let mut taps = vec![Complex64::new(0.0, 0.0); l];
    for (&i, &p) in idx.iter().zip(&lin) {
        taps[i] += complex_gaussian(rng, p / total);
    }
    Ok(ChannelRealization { taps, profile_name: "vehicular-a".into() })
}
