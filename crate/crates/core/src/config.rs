//! Scalar model parameters shared by every stage of the simulation.

use crate::error::{Error, Result};

/// Active sub-carriers of a 10 MHz LTE carrier (50 resource blocks).
pub const LTE_ACTIVE_SUBCARRIERS: usize = 600;
/// Normal CP length on the 600-carrier grid.
pub const LTE_CP_LEN: usize = 144;
/// Taps in the channel impulse response. The largest delay the CP must
/// absorb is 76 samples, so `G = V - L + 1 = 68`.
pub const LTE_CHANNEL_LEN: usize = 77;
/// Sample rate of the 1024-point 10 MHz grid.
pub const LTE_SAMPLE_RATE_HZ: f64 = 15.36e6;
/// Sub-carrier spacing.
pub const LTE_SUBCARRIER_SPACING_HZ: f64 = 15.0e3;

/// Default AWGN variance per complex sample. Together with unit-power data
/// symbols this is a 30 dB data SNR.
pub const DEFAULT_NOISE_VAR: f64 = 1e-3;

/// Parameters of one CP-OFDM link with narrowband interference.
///
/// The IBI-free length `G = V - L + 1` is derived from the CP and channel
/// lengths and is never set directly.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    n_subcarriers: usize,
    cp_len: usize,
    channel_len: usize,
    sparsity: usize,
    freq_offset: f64,
    noise_var: f64,
    inr_db: f64,
    data_snr_db: f64,
    subcarrier_spacing_hz: f64,
    sample_rate_hz: f64,
}

impl SystemConfig {
    /// A configuration with the given dimensions and defaults for the rest
    /// (on-grid interference, 15 dB INR, 30 dB data SNR).
    pub fn new(n_subcarriers: usize, cp_len: usize, channel_len: usize, sparsity: usize) -> Result<Self> {
        let cfg = SystemConfig {
            n_subcarriers,
            cp_len,
            channel_len,
            sparsity,
            freq_offset: 0.0,
            noise_var: DEFAULT_NOISE_VAR,
            inr_db: 15.0,
            data_snr_db: 30.0,
            subcarrier_spacing_hz: LTE_SUBCARRIER_SPACING_HZ,
            sample_rate_hz: LTE_SAMPLE_RATE_HZ,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The 10 MHz LTE operating point: N = 600, V = 144, L = 77 taps (G = 68),
    /// K = 13 tones, α = 0.2, INR 15 dB.
    pub fn lte_10mhz() -> Self {
        SystemConfig::new(LTE_ACTIVE_SUBCARRIERS, LTE_CP_LEN, LTE_CHANNEL_LEN, 13)
            .and_then(|c| c.with_freq_offset(0.2))
            .expect("LTE preset is valid")
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_subcarriers == 0 || self.cp_len == 0 || self.channel_len == 0 {
            return bad("N, V and L must be positive".into());
        }
        if self.channel_len > self.cp_len {
            return bad(format!(
                "channel length {} exceeds CP length {}",
                self.channel_len, self.cp_len
            ));
        }
        if self.cp_len >= self.n_subcarriers {
            return bad(format!(
                "CP length {} must be shorter than the block length {}",
                self.cp_len, self.n_subcarriers
            ));
        }
        if self.sparsity > self.ibi_free_len() {
            return bad(format!(
                "sparsity {} exceeds the IBI-free length {}",
                self.sparsity,
                self.ibi_free_len()
            ));
        }
        if !(self.freq_offset > -0.5 && self.freq_offset <= 0.5) {
            return bad(format!("frequency offset {} outside (-1/2, 1/2]", self.freq_offset));
        }
        if !(self.noise_var > 0.0 && self.noise_var.is_finite()) {
            return bad(format!("noise variance {} must be positive", self.noise_var));
        }
        if !self.inr_db.is_finite() || !self.data_snr_db.is_finite() {
            return bad("INR and data SNR must be finite".into());
        }
        if !(self.subcarrier_spacing_hz > 0.0) || !(self.sample_rate_hz > 0.0) {
            return bad("sub-carrier spacing and sample rate must be positive".into());
        }
        Ok(())
    }

    fn with(mut self, f: impl FnOnce(&mut Self)) -> Result<Self> {
        f(&mut self);
        self.validate()?;
        Ok(self)
    }

    pub fn with_freq_offset(self, alpha: f64) -> Result<Self> {
        self.with(|c| c.freq_offset = alpha)
    }

    pub fn with_noise_var(self, noise_var: f64) -> Result<Self> {
        self.with(|c| c.noise_var = noise_var)
    }

    pub fn with_inr_db(self, inr_db: f64) -> Result<Self> {
        self.with(|c| c.inr_db = inr_db)
    }

    pub fn with_data_snr_db(self, snr_db: f64) -> Result<Self> {
        self.with(|c| c.data_snr_db = snr_db)
    }

    pub fn with_sparsity(self, k: usize) -> Result<Self> {
        self.with(|c| c.sparsity = k)
    }

    pub fn with_cp_len(self, cp_len: usize) -> Result<Self> {
        self.with(|c| c.cp_len = cp_len)
    }

    pub fn with_channel_len(self, channel_len: usize) -> Result<Self> {
        self.with(|c| c.channel_len = channel_len)
    }

    pub fn with_n_subcarriers(self, n: usize) -> Result<Self> {
        self.with(|c| c.n_subcarriers = n)
    }

    pub fn with_subcarrier_spacing_hz(self, hz: f64) -> Result<Self> {
        self.with(|c| c.subcarrier_spacing_hz = hz)
    }

    pub fn with_sample_rate_hz(self, hz: f64) -> Result<Self> {
        self.with(|c| c.sample_rate_hz = hz)
    }

    /// Sets the CP length so that the IBI-free region has `g` samples.
    pub fn with_ibi_free_len(self, g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidConfig("IBI-free length must be positive".into()));
        }
        let cp = g + self.channel_len - 1;
        self.with_cp_len(cp)
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }

    pub fn channel_len(&self) -> usize {
        self.channel_len
    }

    /// `G = V - L + 1`.
    pub fn ibi_free_len(&self) -> usize {
        self.cp_len + 1 - self.channel_len
    }

    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    pub fn freq_offset(&self) -> f64 {
        self.freq_offset
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    pub fn inr_db(&self) -> f64 {
        self.inr_db
    }

    pub fn data_snr_db(&self) -> f64 {
        self.data_snr_db
    }

    pub fn subcarrier_spacing_hz(&self) -> f64 {
        self.subcarrier_spacing_hz
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    /// Linear INR `γ`.
    pub fn inr_linear(&self) -> f64 {
        10f64.powf(self.inr_db / 10.0)
    }

    /// Per-tone interference variance `σ_e² = γ σ_w²`.
    pub fn tone_var(&self) -> f64 {
        self.inr_linear() * self.noise_var
    }

    /// Average power of a transmitted data sub-carrier.
    pub fn data_power(&self) -> f64 {
        10f64.powf(self.data_snr_db / 10.0) * self.noise_var
    }

    /// Default residue threshold: the expected norm of the differential
    /// noise, `√(2σ_w² G)`, inflated by 10%.
    pub fn default_epsilon(&self) -> f64 {
        1.1 * (2.0 * self.noise_var * self.ibi_free_len() as f64).sqrt()
    }
}
