//! Narrowband interference: sparse tone interferers, fractional frequency
//! offset leakage, and the phase relation between the CP and its duplicate.
//!
//! Frequency-domain vectors live on the same `N` bins as the data. The CP-side
//! vector is `ẽ_B = F_Nᴴ Λ F_N ẽ`, with `Λ = diag{exp(j2παn/N)}`. Because the
//! duplicate sits exactly `N` samples later, its vector is `ẽ_BX = e^{j2πα} ẽ_B`
//! and the differential is `Δẽ_B = (1 - e^{j2πα}) ẽ_B`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::config::SystemConfig;
use crate::dft;
use crate::error::{Error, Result};
use crate::random::complex_gaussian;
use crate::signal_model::NbiTime;

/// `exp(j2πα)`.
pub fn phase_shift(alpha: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * alpha)
}

/// `1 - exp(j2πα)`.
pub fn differential_gain(alpha: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) - phase_shift(alpha)
}

/// Which time region a frequency vector is projected onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbiRegion {
    /// The IBI-free end of the CP.
    Cp,
    /// The duplicate region at the end of the block.
    BlockTail,
}

/// Ground-truth interference for one frame on one antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct NbiGroundTruth {
    /// Sorted tone bins `Π`.
    pub tone_support: Vec<usize>,
    /// `ẽ`: nonzero only on `tone_support`.
    pub tone_values: Vec<Complex64>,
    /// `ẽ_B`.
    pub block_sparse: Vec<Complex64>,
    /// `ẽ_BX`.
    pub shifted: Vec<Complex64>,
    /// `Δẽ_B`.
    pub differential: Vec<Complex64>,
    pub freq_offset: f64,
    /// Distance between the CP and its duplicate, always `N`.
    pub block_distance: usize,
}

impl NbiGroundTruth {
    /// Assembles all derived vectors from a tone vector.
    pub fn from_tones(tone_support: Vec<usize>, tone_values: Vec<Complex64>, alpha: f64) -> Self {
        let block_sparse = apply_frequency_offset(&tone_values, alpha);
        let shift = phase_shift(alpha);
        let gain = differential_gain(alpha);
        let shifted = block_sparse.iter().map(|&x| x * shift).collect();
        let differential = block_sparse.iter().map(|&x| x * gain).collect();
        let block_distance = tone_values.len();
        NbiGroundTruth {
            tone_support,
            tone_values,
            block_sparse,
            shifted,
            differential,
            freq_offset: alpha,
            block_distance,
        }
    }

    /// The last `G` time samples of the interference over the given region.
    pub fn time_domain(&self, region: NbiRegion, config: &SystemConfig) -> Vec<Complex64> {
        let freq = match region {
            NbiRegion::Cp => &self.block_sparse,
            NbiRegion::BlockTail => &self.shifted,
        };
        nbi_time_domain(freq, config.ibi_free_len())
    }

    /// Interference samples over the full CP and the full block.
    pub fn stream_samples(&self, config: &SystemConfig) -> NbiTime {
        let n = config.n_subcarriers();
        let v = config.cp_len();
        let cp_side = dft::idft(&self.block_sparse);
        NbiTime {
            cp: cp_side[n - v..].to_vec(),
            block: dft::idft(&self.shifted),
        }
    }
}

/// Draws `K` distinct tone bins uniformly and one complex Gaussian amplitude
/// of variance `σ_e² = γ σ_w²` per tone.
pub fn generate_tones<R: Rng + ?Sized>(
    config: &SystemConfig,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<Complex64>)> {
    let n = config.n_subcarriers();
    let k = config.sparsity();
    if k > n {
        return Err(Error::InvalidConfig(format!("sparsity {k} exceeds dimension {n}")));
    }
    let mut support = rand::seq::index::sample(rng, n, k).into_vec();
    support.sort_unstable();
    let values = tone_values_on(&support, config, rng);
    Ok((support, values))
}

/// Draws fresh amplitudes on a fixed support.
pub fn tone_values_on<R: Rng + ?Sized>(support: &[usize], config: &SystemConfig, rng: &mut R) -> Vec<Complex64> {
    let var = config.tone_var();
    let mut values = vec![Complex64::new(0.0, 0.0); config.n_subcarriers()];
    for &i in support {
        values[i] = complex_gaussian(rng, var);
    }
    values
}

/// `F_Nᴴ Λ_FO F_N v`, computed by transform, phase ramp, inverse transform.
pub fn apply_frequency_offset(values: &[Complex64], alpha: f64) -> Vec<Complex64> {
    if alpha == 0.0 {
        return values.to_vec();
    }
    let n = values.len() as f64;
    let mut t = dft::idft(values);
    for (i, x) in t.iter_mut().enumerate() {
        *x *= Complex64::from_polar(1.0, 2.0 * PI * alpha * i as f64 / n);
    }
    dft::dft(&t)
}

/// Last `g` rows of `F_N` applied to a frequency vector.
pub fn nbi_time_domain(freq: &[Complex64], g: usize) -> Vec<Complex64> {
    let t = dft::idft(freq);
    t[t.len() - g..].to_vec()
}

/// Draws a complete ground truth for one antenna.
pub fn make_ground_truth<R: Rng + ?Sized>(config: &SystemConfig, rng: &mut R) -> Result<NbiGroundTruth> {
    let (support, values) = generate_tones(config, rng)?;
    Ok(NbiGroundTruth::from_tones(support, values, config.freq_offset()))
}

/// Ground truth on a given support with freshly drawn amplitudes, as seen by
/// another antenna of the same receiver.
pub fn ground_truth_on_support<R: Rng + ?Sized>(
    support: &[usize],
    config: &SystemConfig,
    rng: &mut R,
) -> NbiGroundTruth {
    let values = tone_values_on(support, config, rng);
    NbiGroundTruth::from_tones(support.to_vec(), values, config.freq_offset())
}
