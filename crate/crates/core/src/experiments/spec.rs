//! Experiment descriptions and the flat `key = value` configuration format.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::baselines::BaselineParams;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::sparse_learn::CemParams;

/// A recovery algorithm that a sweep can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Scem,
    Rscem,
    Sscem,
    Sp,
    Samp,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] =
        [Algorithm::Scem, Algorithm::Rscem, Algorithm::Sscem, Algorithm::Sp, Algorithm::Samp, Algorithm::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Scem => "scem",
            Algorithm::Rscem => "rscem",
            Algorithm::Sscem => "sscem",
            Algorithm::Sp => "sp",
            Algorithm::Samp => "samp",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Parses a comma-separated list such as `scem,rscem,oracle`.
    pub fn parse_list(s: &str) -> Result<Vec<Algorithm>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let a: Algorithm = part.parse()?;
            if !out.contains(&a) {
                out.push(a);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidConfig("empty algorithm list".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm `{s}`")))
    }
}

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    InrDb,
    G,
    K,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::InrDb => "inr_db",
            SweepAxis::G => "g",
            SweepAxis::K => "k",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inr_db" | "inr" => Ok(SweepAxis::InrDb),
            "g" => Ok(SweepAxis::G),
            "k" => Ok(SweepAxis::K),
            _ => Err(Error::InvalidConfig(format!("unknown sweep axis `{s}`"))),
        }
    }
}

/// A full Monte Carlo sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Configuration at the reference point; each sweep value overrides one
    /// field of it.
    pub config: SystemConfig,
    pub algorithms: Vec<Algorithm>,
    pub sweep_axis: SweepAxis,
    /// Strictly increasing.
    pub sweep_values: Vec<f64>,
    pub n_trials: usize,
    /// Receive antennas for the multi-antenna learner. Single-antenna
    /// algorithms use antenna 0.
    pub n_rx: usize,
    pub base_seed: u64,
    pub cem: CemParams,
    pub baseline: BaselineParams,
    /// Recompute `ε` from each point's noise level. Cleared when the
    /// configuration sets `epsilon` explicitly.
    pub auto_epsilon: bool,
    /// Per-antenna SNRs in dB driving the multi-antenna weights; empty means
    /// equal weights.
    pub snrs_db: Vec<f64>,
    /// Constellation name for the data symbols.
    pub constellation: String,
}

impl ExperimentSpec {
    /// The LTE reference configuration with the standard learner
    /// parameters, as a single sweep value on the given axis.
    pub fn reference(sweep_axis: SweepAxis) -> Self {
        let config = SystemConfig::lte_10mhz();
        let value = match sweep_axis {
            SweepAxis::InrDb => config.inr_db(),
            SweepAxis::G => config.ibi_free_len() as f64,
            SweepAxis::K => config.sparsity() as f64,
        };
        ExperimentSpec {
            cem: CemParams::standard(&config),
            baseline: BaselineParams::standard(&config),
            config,
            algorithms: vec![Algorithm::Scem, Algorithm::Rscem, Algorithm::Sscem],
            sweep_axis,
            sweep_values: vec![value],
            n_trials: 100,
            n_rx: 4,
            base_seed: 1,
            auto_epsilon: true,
            snrs_db: Vec::new(),
            constellation: "qam64".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.sweep_values.is_empty() {
            return bad("sweep_values must be non-empty".into());
        }
        if self.sweep_values.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("sweep_values must be strictly increasing".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected".into());
        }
        if self.n_trials == 0 || self.n_rx == 0 {
            return bad("n_trials and n_rx must be positive".into());
        }
        if !self.snrs_db.is_empty() && self.snrs_db.len() != self.n_rx {
            return bad(format!("snrs_db has {} entries for {} antennas", self.snrs_db.len(), self.n_rx));
        }
        if matches!(self.sweep_axis, SweepAxis::G | SweepAxis::K)
            && self.sweep_values.iter().any(|v| v.fract() != 0.0 || *v < 0.0)
        {
            return bad(format!("{} sweep needs non-negative integers", self.sweep_axis));
        }
        self.cem.validate()?;
        self.baseline.validate()?;
        for &v in &self.sweep_values {
            self.point(v)?;
        }
        Ok(())
    }

    /// System configuration, learner and baseline parameters at one sweep
    /// value.
    ///
    /// An INR point keeps the interference power and the data power of the
    /// reference configuration and moves the noise level instead.
    pub fn point(&self, value: f64) -> Result<(SystemConfig, CemParams, BaselineParams)> {
        let base = &self.config;
        let config = match self.sweep_axis {
            SweepAxis::InrDb => {
                let noise_var = base.tone_var() / 10f64.powf(value / 10.0);
                let data_power = base.data_power();
                base.clone()
                    .with_inr_db(value)?
                    .with_noise_var(noise_var)?
                    .with_data_snr_db(10.0 * (data_power / noise_var).log10())?
            }
            SweepAxis::G => base.clone().with_ibi_free_len(value as usize)?,
            SweepAxis::K => base.clone().with_sparsity(value as usize)?,
        };
        let mut cem = self.cem.clone();
        let mut baseline = self.baseline.clone();
        cem.sparsity = config.sparsity().max(1);
        if self.auto_epsilon {
            cem.epsilon = config.default_epsilon();
            baseline.epsilon = config.default_epsilon();
        }
        Ok((config, cem, baseline))
    }

    /// Reads a configuration file on top of the reference defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_config_str(&text)
    }

    /// Parses flat `key = value` lines; `#` starts a comment. Unknown keys
    /// and repeated keys are errors.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut spec = ExperimentSpec::reference(SweepAxis::InrDb);
        let mut seen: Vec<String> = Vec::new();
        let mut sweep_values = None;
        let mut system: Vec<(String, String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Parse { line: line_no, message: format!("expected `key = value`, got `{line}`") })?;
            if seen.iter().any(|s| s == key) {
                return Err(Error::Parse { line: line_no, message: format!("duplicate key `{key}`") });
            }
            seen.push(key.to_string());
            let wrap = |e: Error| Error::Parse { line: line_no, message: format!("{key}: {e}") };
            if SYSTEM_KEYS.contains(&key) {
                num::<f64>(value).map_err(wrap)?;
                system.push((key.to_string(), value.to_string(), line_no));
            } else {
                spec.set(key, value, &mut sweep_values).map_err(wrap)?;
            }
        }
        if !system.is_empty() {
            spec.config = build_config(&system)?;
        }
        if let Some(v) = sweep_values {
            spec.sweep_values = v;
        }
        // Keep ε consistent with the final noise level unless set.
        if spec.auto_epsilon {
            spec.cem.epsilon = spec.config.default_epsilon();
            spec.baseline.epsilon = spec.config.default_epsilon();
        }
        spec.cem.sparsity = spec.config.sparsity().max(1);
        spec.validate()?;
        Ok(spec)
    }

    fn set(&mut self, key: &str, value: &str, sweep_values: &mut Option<Vec<f64>>) -> Result<()> {
        match key {
            "n_candidates" => self.cem.n_candidates = num(value)?,
            "n_favorable" => self.cem.n_favorable = num(value)?,
            "max_iters" => self.cem.max_iters = num(value)?,
            "q_min" => self.cem.q_clamp.0 = num(value)?,
            "q_max" => self.cem.q_clamp.1 = num(value)?,
            "max_thinning_rounds" => self.cem.max_thinning_rounds = num(value)?,
            "epsilon" => {
                let e: f64 = num(value)?;
                self.cem.epsilon = e;
                self.baseline.epsilon = e;
                self.auto_epsilon = false;
            }
            "samp_step" => self.baseline.samp_step = num(value)?,
            "baseline_max_iters" => self.baseline.max_iters = num(value)?,
            "algorithms" => self.algorithms = Algorithm::parse_list(value)?,
            "sweep_axis" => self.sweep_axis = value.parse()?,
            "sweep_values" => {
                *sweep_values = Some(value.split(',').map(|v| num(v.trim())).collect::<Result<Vec<f64>>>()?);
            }
            "n_trials" => self.n_trials = num(value)?,
            "n_rx" => self.n_rx = num(value)?,
            "base_seed" => self.base_seed = num(value)?,
            "snrs_db" => self.snrs_db = value.split(',').map(|v| num(v.trim())).collect::<Result<Vec<f64>>>()?,
            "constellation" => {
                crate::signal_model::Constellation::by_name(value)?;
                self.constellation = value.to_string();
            }
            _ => return Err(Error::InvalidConfig(format!("unknown key `{key}`"))),
        }
        Ok(())
    }
}

/// Keys that describe the link itself. They are gathered first and applied
/// together, so their order in the file does not matter.
const SYSTEM_KEYS: [&str; 11] = [
    "n_subcarriers",
    "cp_len",
    "channel_len",
    "ibi_free_len",
    "sparsity",
    "freq_offset",
    "noise_var",
    "inr_db",
    "data_snr_db",
    "subcarrier_spacing_hz",
    "sample_rate_hz",
];

fn num<T: FromStr>(v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::InvalidConfig(format!("cannot parse `{v}`")))
}

/// The LTE preset with the given system keys applied. Errors point at the
/// last line that touched the failing group of keys.
fn build_config(system: &[(String, String, usize)]) -> Result<SystemConfig> {
    let base = SystemConfig::lte_10mhz();
    let find = |k: &str| system.iter().find(|(key, _, _)| key == k);
    let at = |keys: &[&str], e: Error| {
        let line = system.iter().filter(|(k, _, _)| keys.contains(&k.as_str())).map(|x| x.2).max().unwrap_or(0);
        Error::Parse { line, message: e.to_string() }
    };
    let int = |k: &str, default: usize| -> Result<usize> {
        match find(k) {
            Some((_, v, line)) => num(v).map_err(|e| Error::Parse { line: *line, message: format!("{k}: {e}") }),
            None => Ok(default),
        }
    };
    let dims = ["n_subcarriers", "cp_len", "channel_len", "ibi_free_len", "sparsity"];
    if let (Some(_), Some((_, _, line))) = (find("cp_len"), find("ibi_free_len")) {
        return Err(Error::Parse { line: *line, message: "set either cp_len or ibi_free_len, not both".into() });
    }
    let n = int("n_subcarriers", base.n_subcarriers())?;
    let l = int("channel_len", base.channel_len())?;
    let cp = match find("ibi_free_len") {
        Some(_) => int("ibi_free_len", 0)? + l.saturating_sub(1),
        None => int("cp_len", base.cp_len())?,
    };
    let k = int("sparsity", base.sparsity())?;
    let mut cfg = SystemConfig::new(n, cp, l, k).map_err(|e| at(&dims, e))?;
    let real = |k: &str, default: f64| find(k).map_or(Ok(default), |(_, v, _)| num::<f64>(v));
    type Setter = fn(SystemConfig, f64) -> Result<SystemConfig>;
    let steps: [(&str, Setter, f64); 6] = [
        ("freq_offset", SystemConfig::with_freq_offset, base.freq_offset()),
        ("noise_var", SystemConfig::with_noise_var, base.noise_var()),
        ("inr_db", SystemConfig::with_inr_db, base.inr_db()),
        ("data_snr_db", SystemConfig::with_data_snr_db, base.data_snr_db()),
        ("subcarrier_spacing_hz", SystemConfig::with_subcarrier_spacing_hz, base.subcarrier_spacing_hz()),
        ("sample_rate_hz", SystemConfig::with_sample_rate_hz, base.sample_rate_hz()),
    ];
    for (key, apply, default) in steps {
        let v = real(key, default).map_err(|e| at(&[key], e))?;
        cfg = apply(cfg, v).map_err(|e| at(&[key], e))?;
    }
    Ok(cfg)
}
