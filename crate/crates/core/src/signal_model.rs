//! CP-OFDM frame synthesis, multipath propagation and IBI-free extraction.
//!
//! A frame is transmitted as the stream `[prev_tail | cp | block]`, where
//! `prev_tail` holds the last `L - 1` samples of the preceding block. The
//! stream is linearly convolved with the channel taps, so the first `L - 1`
//! CP samples carry inter-block interference and the last `G = V - L + 1`
//! CP samples do not.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::ChannelRealization;
use crate::config::SystemConfig;
use crate::dft;
use crate::error::{Error, Result};
use crate::random::complex_gaussian;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A unit-average-power symbol alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    name: String,
    points: Vec<Complex64>,
}

impl Constellation {
    /// Builds a constellation from raw points, normalizing to unit average
    /// power.
    pub fn from_points(name: impl Into<String>, points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfig("constellation must not be empty".into()));
        }
        let power = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64;
        if power <= 0.0 {
            return Err(Error::InvalidConfig("constellation has zero power".into()));
        }
        let scale = power.sqrt().recip();
        Ok(Constellation {
            name: name.into(),
            points: points.into_iter().map(|p| p * scale).collect(),
        })
    }

    /// Square M-QAM with `side × side` points.
    fn square_qam(name: &str, side: usize) -> Self {
        let levels: Vec<f64> = (0..side).map(|i| 2.0 * i as f64 - (side as f64 - 1.0)).collect();
        let points = levels
            .iter()
            .flat_map(|&re| levels.iter().map(move |&im| Complex64::new(re, im)))
            .collect();
        Constellation::from_points(name, points).expect("square QAM is non-degenerate")
    }

    pub fn qpsk() -> Self {
        Self::square_qam("qpsk", 2)
    }

    pub fn qam16() -> Self {
        Self::square_qam("16qam", 4)
    }

    pub fn qam64() -> Self {
        Self::square_qam("64qam", 8)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "qpsk" | "4qam" => Ok(Self::qpsk()),
            "16qam" | "qam16" => Ok(Self::qam16()),
            "64qam" | "qam64" => Ok(Self::qam64()),
            other => Err(Error::InvalidConfig(format!("unknown constellation '{other}'"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the nearest point; ties go to the lower index.
    pub fn nearest(&self, y: Complex64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    fn random_symbol<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        self.points[rng.random_range(0..self.points.len())]
    }
}

/// One transmitted CP-OFDM frame.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmFrame {
    /// Frequency-domain symbols `X` before channel, NBI and noise.
    pub freq_data: Vec<Complex64>,
    /// `F_N · freq_data`.
    pub time_block: Vec<Complex64>,
    /// Last `V` samples of `time_block`.
    pub cp: Vec<Complex64>,
    /// Last `L - 1` samples of an independent preceding block.
    pub prev_tail: Vec<Complex64>,
}

impl OfdmFrame {
    /// Builds a frame from given frequency data and preceding tail.
    pub fn from_parts(freq_data: Vec<Complex64>, prev_tail: Vec<Complex64>, config: &SystemConfig) -> Result<Self> {
        let n = config.n_subcarriers();
        let v = config.cp_len();
        if freq_data.len() != n {
            return Err(Error::LengthMismatch { expected: n, actual: freq_data.len() });
        }
        if prev_tail.len() != config.channel_len() - 1 {
            return Err(Error::LengthMismatch {
                expected: config.channel_len() - 1,
                actual: prev_tail.len(),
            });
        }
        let time_block = dft::idft(&freq_data);
        let cp = time_block[n - v..].to_vec();
        Ok(OfdmFrame { freq_data, time_block, cp, prev_tail })
    }

    /// Transmitted stream `[prev_tail | cp | time_block]`.
    pub fn stream(&self) -> Vec<Complex64> {
        let mut s = Vec::with_capacity(self.prev_tail.len() + self.cp.len() + self.time_block.len());
        s.extend_from_slice(&self.prev_tail);
        s.extend_from_slice(&self.cp);
        s.extend_from_slice(&self.time_block);
        s
    }
}

/// The received CP and block of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedFrame {
    pub rx_cp: Vec<Complex64>,
    pub rx_block: Vec<Complex64>,
    /// `F_Nᴴ · rx_block`.
    pub freq_rx: Vec<Complex64>,
}

impl ReceivedFrame {
    fn refresh_freq(&mut self) {
        self.freq_rx = dft::dft(&self.rx_block);
    }
}

/// Time-domain interference samples aligned with the CP and the block.
#[derive(Debug, Clone, PartialEq)]
pub struct NbiTime {
    pub cp: Vec<Complex64>,
    pub block: Vec<Complex64>,
}

impl NbiTime {
    pub fn zeros(config: &SystemConfig) -> Self {
        NbiTime {
            cp: vec![ZERO; config.cp_len()],
            block: vec![ZERO; config.n_subcarriers()],
        }
    }
}

/// Draws a frame of random constellation symbols scaled to the configured
/// data power. The preceding tail comes from an independent random block.
pub fn generate_frame<R: Rng + ?Sized>(
    config: &SystemConfig,
    rng: &mut R,
    constellation: &Constellation,
) -> OfdmFrame {
    let n = config.n_subcarriers();
    let amp = config.data_power().sqrt();
    let freq_data: Vec<Complex64> = (0..n).map(|_| constellation.random_symbol(rng) * amp).collect();
    let prev_freq: Vec<Complex64> = (0..n).map(|_| constellation.random_symbol(rng) * amp).collect();
    let prev_block = dft::idft(&prev_freq);
    let prev_tail = prev_block[n - (config.channel_len() - 1)..].to_vec();
    OfdmFrame::from_parts(freq_data, prev_tail, config).expect("lengths follow the config")
}

/// Noiseless reception: linear convolution of the transmitted stream with
/// the taps plus the interference samples.
pub fn propagate(
    frame: &OfdmFrame,
    channel: &ChannelRealization,
    nbi: &NbiTime,
    config: &SystemConfig,
) -> Result<ReceivedFrame> {
    let n = config.n_subcarriers();
    let v = config.cp_len();
    let l = config.channel_len();
    if channel.taps.len() != l {
        return Err(Error::LengthMismatch { expected: l, actual: channel.taps.len() });
    }
    if nbi.cp.len() != v {
        return Err(Error::LengthMismatch { expected: v, actual: nbi.cp.len() });
    }
    if nbi.block.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: nbi.block.len() });
    }
    let stream = frame.stream();
    let head = l - 1;
    // Output sample t (for t >= L-1) only needs stream[t-L+1..=t].
    let conv = |t: usize| -> Complex64 {
        channel
            .taps
            .iter()
            .enumerate()
            .map(|(k, &h)| h * stream[t - k])
            .sum()
    };
    let rx_cp: Vec<Complex64> = (0..v).map(|i| conv(head + i) + nbi.cp[i]).collect();
    let rx_block: Vec<Complex64> = (0..n).map(|i| conv(head + v + i) + nbi.block[i]).collect();
    let mut rx = ReceivedFrame { rx_cp, rx_block, freq_rx: Vec::new() };
    rx.refresh_freq();
    Ok(rx)
}

/// Adds complex AWGN of total variance `noise_var` per sample to the CP and
/// the block.
pub fn add_awgn<R: Rng + ?Sized>(rx: &mut ReceivedFrame, noise_var: f64, rng: &mut R) {
    for x in rx.rx_cp.iter_mut().chain(rx.rx_block.iter_mut()) {
        *x += complex_gaussian(rng, noise_var);
    }
    rx.refresh_freq();
}

/// Full reception: propagation, interference and AWGN at `config.noise_var()`.
pub fn apply_channel<R: Rng + ?Sized>(
    frame: &OfdmFrame,
    channel: &ChannelRealization,
    nbi: &NbiTime,
    config: &SystemConfig,
    rng: &mut R,
) -> Result<ReceivedFrame> {
    let mut rx = propagate(frame, channel, nbi, config)?;
    add_awgn(&mut rx, config.noise_var(), rng);
    Ok(rx)
}

/// The IBI-free CP region `p` (last `G` CP samples) and its duplicate `p_X`
/// (last `G` block samples).
pub fn extract_ibi_free(rx: &ReceivedFrame, config: &SystemConfig) -> (Vec<Complex64>, Vec<Complex64>) {
    let g = config.ibi_free_len();
    let p = rx.rx_cp[rx.rx_cp.len() - g..].to_vec();
    let p_x = rx.rx_block[rx.rx_block.len() - g..].to_vec();
    (p, p_x)
}
