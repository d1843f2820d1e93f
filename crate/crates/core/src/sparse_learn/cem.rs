//! The iterative cross-entropy support learner and its three variants.

use num_complex::Complex64;
use rand::Rng;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::measurement::{scatter, MeasurementSet, ObservationMatrix};
use crate::recovery::RecoveryResult;

use super::distribution::{draw_candidate_support, SupportDistribution};
use super::favorable::{ce_update, regularized_ce_update, select_favorable, Candidate, FavorableSet};

/// Tuning of the cross-entropy learner.
#[derive(Debug, Clone, PartialEq)]
pub struct CemParams {
    /// `N_c`, candidate supports drawn per iteration.
    pub n_candidates: usize,
    /// `N_f`, favorable supports kept per iteration.
    pub n_favorable: usize,
    /// `I_m`; the loop stops once the iteration counter exceeds it.
    pub max_iters: usize,
    /// Residue threshold `ε`.
    pub epsilon: f64,
    /// Sparsity cap `K`.
    pub sparsity: usize,
    /// `(q_min, q_max)` applied after every update.
    pub q_clamp: (f64, f64),
    /// Thinning rounds before the top-`K` fallback.
    pub max_thinning_rounds: usize,
}

impl CemParams {
    pub const DEFAULT_Q_CLAMP: (f64, f64) = (0.005, 0.995);
    pub const DEFAULT_THINNING_ROUNDS: usize = 50;

    pub fn new(n_candidates: usize, n_favorable: usize, max_iters: usize, epsilon: f64, sparsity: usize) -> Result<Self> {
        let p = CemParams {
            n_candidates,
            n_favorable,
            max_iters,
            epsilon,
            sparsity,
            q_clamp: Self::DEFAULT_Q_CLAMP,
            max_thinning_rounds: Self::DEFAULT_THINNING_ROUNDS,
        };
        p.validate()?;
        Ok(p)
    }

    /// `N_c = 70`, `N_f = 15`, `I_m = 15`, with `ε` and `K` taken from the
    /// configuration.
    pub fn standard(config: &SystemConfig) -> Self {
        CemParams::new(70, 15, 15, config.default_epsilon(), config.sparsity().max(1))
            .expect("standard parameters are valid")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.n_candidates == 0 || self.n_favorable == 0 || self.max_iters == 0 || self.max_thinning_rounds == 0 {
            return bad("N_c, N_f, I_m and thinning rounds must be positive");
        }
        if self.n_favorable > self.n_candidates {
            return bad("N_f must not exceed N_c");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if self.sparsity == 0 {
            return bad("sparsity must be positive");
        }
        let (lo, hi) = self.q_clamp;
        if !(0.0 < lo && lo < hi && hi < 1.0) {
            return bad("q clamp must satisfy 0 < q_min < q_max < 1");
        }
        Ok(())
    }
}

/// How the support distribution is refit to the favorable set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateRule {
    /// Plain empirical frequencies.
    CrossEntropy,
    /// Residue-weighted frequencies.
    Regularized,
}

/// Scores a support by its (weighted) least-squares residue across antennas.
struct Scorer<'a> {
    psi: &'a ObservationMatrix,
    vectors: &'a [Vec<Complex64>],
    weights: Vec<f64>,
}

impl Scorer<'_> {
    fn residue(&self, support: &[usize]) -> Result<f64> {
        let qr = self.psi.factor(support)?;
        if self.vectors.len() == 1 {
            return Ok(qr.solve(&self.vectors[0]).1);
        }
        Ok(self
            .vectors
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| w * qr.solve(v).1)
            .sum())
    }

    fn estimates(&self, support: &[usize]) -> Result<Vec<Vec<Complex64>>> {
        let qr = self.psi.factor(support)?;
        Ok(self
            .vectors
            .iter()
            .map(|v| scatter(support, &qr.solve(v).0, self.psi.n()))
            .collect())
    }
}

fn draw_scored<R: Rng + ?Sized>(
    scorer: &Scorer<'_>,
    q: &SupportDistribution,
    params: &CemParams,
    rng: &mut R,
) -> Vec<Candidate> {
    let mut out = Vec::with_capacity(params.n_candidates);
    let mut retries = 0;
    while out.len() < params.n_candidates {
        let support = draw_candidate_support(q, params.sparsity, params.max_thinning_rounds, rng);
        match scorer.residue(&support) {
            Ok(residue) => out.push(Candidate { support, residue }),
            Err(e) => {
                log::debug!("redrawing degenerate candidate {support:?}: {e}");
                retries += 1;
                if retries > params.n_candidates {
                    break;
                }
            }
        }
    }
    out
}

/// The shared learner loop for all three variants.
pub fn cem_recover<R: Rng + ?Sized>(
    meas: &MeasurementSet,
    psi: &ObservationMatrix,
    params: &CemParams,
    rule: UpdateRule,
    rng: &mut R,
) -> Result<RecoveryResult> {
    params.validate()?;
    if let Some(v) = meas.vectors().iter().find(|v| v.len() != psi.g()) {
        return Err(Error::LengthMismatch { expected: psi.g(), actual: v.len() });
    }
    let scorer = Scorer {
        psi,
        vectors: meas.vectors(),
        weights: meas.snr_weights(),
    };
    let mut q = SupportDistribution::uniform(psi.n());
    let mut k = 0usize;
    let mut history = Vec::new();
    let mut best_ever: Option<Candidate> = None;
    let (last, converged) = loop {
        let candidates = draw_scored(&scorer, &q, params, rng);
        let fav: FavorableSet = select_favorable(&candidates, params.n_favorable, psi.n())?;
        let top = Candidate { support: fav.supports[0].clone(), residue: fav.residues[0] };
        history.push(top.residue);
        if best_ever.as_ref().is_none_or(|b| top.residue < b.residue) {
            best_ever = Some(top.clone());
        }
        q = match rule {
            UpdateRule::CrossEntropy => ce_update(&fav, params.q_clamp),
            UpdateRule::Regularized => match regularized_ce_update(&fav, params.q_clamp) {
                Ok(next) => next,
                // An exact fit: the threshold test below stops the run.
                Err(Error::ZeroResidue { .. }) => q,
                Err(e) => return Err(e),
            },
        };
        k += 1;
        let hit = top.residue <= params.epsilon;
        if hit || k > params.max_iters {
            break (top, hit);
        }
    };
    let estimates = scorer.estimates(&last.support)?;
    Ok(RecoveryResult {
        support: last.support,
        estimates,
        residue: last.residue,
        iterations: k,
        converged,
        final_distribution: Some(q),
        residue_history: history,
        best_ever: best_ever.map(|b| (b.support, b.residue)),
    })
}

/// Single-antenna learner with the plain cross-entropy update.
pub fn scem<R: Rng + ?Sized>(
    dp: &[Complex64],
    psi: &ObservationMatrix,
    params: &CemParams,
    rng: &mut R,
) -> Result<RecoveryResult> {
    let meas = MeasurementSet::single(dp.to_vec(), 1.0)?;
    cem_recover(&meas, psi, params, UpdateRule::CrossEntropy, rng)
}

/// Single-antenna learner with the residue-weighted update.
pub fn rscem<R: Rng + ?Sized>(
    dp: &[Complex64],
    psi: &ObservationMatrix,
    params: &CemParams,
    rng: &mut R,
) -> Result<RecoveryResult> {
    let meas = MeasurementSet::single(dp.to_vec(), 1.0)?;
    cem_recover(&meas, psi, params, UpdateRule::Regularized, rng)
}

/// Multi-antenna learner: candidates share one support and are ranked by
/// the SNR-weighted average of the per-antenna residues.
pub fn sscem<R: Rng + ?Sized>(
    meas: &MeasurementSet,
    psi: &ObservationMatrix,
    params: &CemParams,
    rng: &mut R,
) -> Result<RecoveryResult> {
    cem_recover(meas, psi, params, UpdateRule::CrossEntropy, rng)
}
