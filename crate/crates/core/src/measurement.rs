//! Temporal differential measurement and the least-squares primitives shared
//! by all recovery algorithms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::linalg::QrFactor;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `Ψ = S_{G,N} F_N`: the last `G` rows of the unitary IDFT matrix.
///
/// Stored column-major so a support's columns are contiguous slices.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMatrix {
    entries: Vec<Complex64>,
    n: usize,
    g: usize,
}

impl ObservationMatrix {
    pub fn new(n: usize, g: usize) -> Result<Self> {
        if g == 0 || g > n {
            return Err(Error::InvalidConfig(format!("need 0 < G <= N, got G={g}, N={n}")));
        }
        let scale = 1.0 / (n as f64).sqrt();
        let mut entries = Vec::with_capacity(n * g);
        for col in 0..n {
            for row in 0..g {
                let t = ((n - g + row) * col) % n;
                entries.push(Complex64::from_polar(scale, 2.0 * PI * t as f64 / n as f64));
            }
        }
        Ok(ObservationMatrix { entries, n, g })
    }

    /// Number of columns `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows `G`.
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[col * self.g + row]
    }

    pub fn column(&self, col: usize) -> &[Complex64] {
        &self.entries[col * self.g..(col + 1) * self.g]
    }

    /// `Ψ v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.g];
        for (col, &x) in v.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.column(col)) {
                *o += a * x;
            }
        }
        out
    }

    /// `Ψᴴ r`.
    pub fn adjoint_apply(&self, r: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|col| self.column(col).iter().zip(r).map(|(a, &x)| a.conj() * x).sum())
            .collect()
    }

    /// Column-major copy of the columns in `support`.
    pub fn submatrix(&self, support: &[usize]) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(support.len() * self.g);
        for &s in support {
            out.extend_from_slice(self.column(s));
        }
        out
    }

    fn check_support(&self, support: &[usize]) -> Result<()> {
        if support.len() > self.g {
            return Err(Error::SupportTooLarge { size: support.len(), rows: self.g });
        }
        let mut seen = vec![false; self.n];
        for &s in support {
            if s >= self.n {
                return Err(Error::IndexOutOfRange { index: s, dim: self.n });
            }
            if seen[s] {
                return Err(Error::DuplicateIndex(s));
            }
            seen[s] = true;
        }
        Ok(())
    }

    /// Factors the submatrix on `support` after validating it.
    pub fn factor(&self, support: &[usize]) -> Result<QrFactor> {
        self.check_support(support)?;
        QrFactor::new(self.submatrix(support), self.g, support.len())
    }
}

/// Builds `Ψ` for a configuration.
pub fn build_observation_matrix(config: &SystemConfig) -> ObservationMatrix {
    ObservationMatrix::new(config.n_subcarriers(), config.ibi_free_len()).expect("validated config has G <= N")
}

/// Differential measurements for one or more receive antennas.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    vectors: Vec<Vec<Complex64>>,
    snrs_db: Vec<f64>,
    noise_var_diff: f64,
}

impl MeasurementSet {
    pub fn new(vectors: Vec<Vec<Complex64>>, snrs_db: Vec<f64>, noise_var_diff: f64) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidConfig("at least one measurement vector is required".into()));
        }
        let g = vectors[0].len();
        if let Some(bad) = vectors.iter().find(|v| v.len() != g) {
            return Err(Error::LengthMismatch { expected: g, actual: bad.len() });
        }
        if snrs_db.len() != vectors.len() {
            return Err(Error::LengthMismatch { expected: vectors.len(), actual: snrs_db.len() });
        }
        if !(noise_var_diff > 0.0) {
            return Err(Error::InvalidConfig("differential noise variance must be positive".into()));
        }
        Ok(MeasurementSet { vectors, snrs_db, noise_var_diff })
    }

    /// A single-antenna set.
    pub fn single(vector: Vec<Complex64>, noise_var_diff: f64) -> Result<Self> {
        MeasurementSet::new(vec![vector], vec![0.0], noise_var_diff)
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn snrs_db(&self) -> &[f64] {
        &self.snrs_db
    }

    pub fn noise_var_diff(&self) -> f64 {
        self.noise_var_diff
    }

    pub fn n_rx(&self) -> usize {
        self.vectors.len()
    }

    /// Combining weights `β_t = ρ_t / Σ ρ_r` from the per-antenna SNRs.
    pub fn snr_weights(&self) -> Vec<f64> {
        let lin: Vec<f64> = self.snrs_db.iter().map(|s| 10f64.powf(s / 10.0)).collect();
        let total: f64 = lin.iter().sum();
        lin.iter().map(|r| r / total).collect()
    }
}

/// `Δp = p - p_X`.
pub fn differential_measurement(p: &[Complex64], p_x: &[Complex64]) -> Result<Vec<Complex64>> {
    if p.len() != p_x.len() {
        return Err(Error::LengthMismatch { expected: p.len(), actual: p_x.len() });
    }
    Ok(p.iter().zip(p_x).map(|(a, b)| a - b).collect())
}

/// A support together with its least-squares estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct LsEstimate {
    /// Length-`N` vector, zero off the support.
    pub vector: Vec<Complex64>,
    pub residue: f64,
}

/// Scatters support coefficients into a length-`n` vector.
pub fn scatter(support: &[usize], coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; n];
    for (&s, &c) in support.iter().zip(coeffs) {
        v[s] = c;
    }
    v
}

/// Least squares restricted to `support`: minimizes `‖Δp - Ψ_Π v‖₂` through a
/// QR factorization of the `G × |Π|` submatrix.
pub fn least_squares_on_support(dp: &[Complex64], psi: &ObservationMatrix, support: &[usize]) -> Result<LsEstimate> {
    if dp.len() != psi.g() {
        return Err(Error::LengthMismatch { expected: psi.g(), actual: dp.len() });
    }
    let qr = psi.factor(support)?;
    let (coeffs, residue) = qr.solve(dp);
    Ok(LsEstimate { vector: scatter(support, &coeffs, psi.n()), residue })
}

/// `‖Δp - Ψ v‖₂`.
pub fn residue_norm(dp: &[Complex64], psi: &ObservationMatrix, candidate: &[Complex64]) -> f64 {
    let fit = psi.apply(candidate);
    dp.iter().zip(&fit).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
}

/// Number of supports of size at most `k` over `n` bins, `Σ_{i≤k} C(n, i)`.
pub fn search_space_size(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..=k.min(n) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    total
}
