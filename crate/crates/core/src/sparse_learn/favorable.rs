//! Elite selection and the closed-form cross-entropy updates.

use std::cmp::Ordering;

use crate::error::{Error, Result};

use super::SupportDistribution;

/// A scored candidate support.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub support: Vec<usize>,
    pub residue: f64,
}

/// Sort order for candidates: residue, then support size, then
/// lexicographic index order.
pub fn candidate_order(a: &Candidate, b: &Candidate) -> Ordering {
    a.residue
        .total_cmp(&b.residue)
        .then(a.support.len().cmp(&b.support.len()))
        .then_with(|| a.support.cmp(&b.support))
}

/// The `N_f` lowest-residue candidates of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct FavorableSet {
    pub supports: Vec<Vec<usize>>,
    /// `f_[j],n`: row `j` marks the bins of `supports[j]`.
    pub indicators: Vec<Vec<bool>>,
    /// Ascending.
    pub residues: Vec<f64>,
}

impl FavorableSet {
    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    /// Dimension `N` of the indicator rows.
    pub fn dim(&self) -> usize {
        self.indicators.first().map_or(0, Vec::len)
    }
}

/// Picks the `n_favorable` best candidates over an `n`-bin problem.
pub fn select_favorable(candidates: &[Candidate], n_favorable: usize, n: usize) -> Result<FavorableSet> {
    if candidates.len() < n_favorable || n_favorable == 0 {
        return Err(Error::NotEnoughCandidates { needed: n_favorable.max(1), available: candidates.len() });
    }
    let mut order: Vec<&Candidate> = candidates.iter().collect();
    order.sort_by(|a, b| candidate_order(a, b));
    order.truncate(n_favorable);
    let supports: Vec<Vec<usize>> = order.iter().map(|c| c.support.clone()).collect();
    let indicators = supports
        .iter()
        .map(|s| {
            let mut row = vec![false; n];
            for &i in s {
                row[i] = true;
            }
            row
        })
        .collect();
    let residues = order.iter().map(|c| c.residue).collect();
    Ok(FavorableSet { supports, indicators, residues })
}

/// Regularization weights `λ_[j] = r̄ / r_[j]`.
///
/// Equal residues give exactly `λ = 1`. A zero residue has no finite weight
/// and is reported as [`Error::ZeroResidue`].
pub fn regularization_weights(residues: &[f64]) -> Result<Vec<f64>> {
    if let Some(j) = residues.iter().position(|&r| r == 0.0) {
        return Err(Error::ZeroResidue { index: j });
    }
    if residues.windows(2).all(|w| w[0] == w[1]) {
        return Ok(vec![1.0; residues.len()]);
    }
    let mean = residues.iter().sum::<f64>() / residues.len() as f64;
    Ok(residues.iter().map(|r| mean / r).collect())
}

/// `q_n = Σ_j w_j f_[j],n / Σ_j w_j`, before clamping.
pub fn weighted_frequencies(fav: &FavorableSet, weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    (0..fav.dim())
        .map(|n| {
            fav.indicators
                .iter()
                .zip(weights)
                .filter(|(row, _)| row[n])
                .map(|(_, w)| w)
                .sum::<f64>()
                / total
        })
        .collect()
}

/// Plain empirical frequencies `q_n = (1/N_f) Σ_j f_[j],n`, before clamping.
pub fn empirical_frequencies(fav: &FavorableSet) -> Vec<f64> {
    let nf = fav.len() as f64;
    (0..fav.dim())
        .map(|n| fav.indicators.iter().filter(|row| row[n]).count() as f64 / nf)
        .collect()
}

/// Cross-entropy minimizing update, clamped to `q_clamp`.
pub fn ce_update(fav: &FavorableSet, q_clamp: (f64, f64)) -> SupportDistribution {
    SupportDistribution::from_probs(empirical_frequencies(fav))
        .expect("frequencies lie in [0, 1]")
        .clamped(q_clamp)
}

/// Regularized (residue-weighted) update, clamped to `q_clamp`.
pub fn regularized_ce_update(fav: &FavorableSet, q_clamp: (f64, f64)) -> Result<SupportDistribution> {
    let weights = regularization_weights(&fav.residues)?;
    let probs = weighted_frequencies(fav, &weights)
        .into_iter()
        .map(|p| p.min(1.0))
        .collect();
    Ok(SupportDistribution::from_probs(probs)
        .expect("weighted frequencies lie in [0, 1]")
        .clamped(q_clamp))
}

/// Weighted negative log-likelihood of the favorable supports under
/// independent Bernoulli inclusion, `-(1/N_f) Σ_j w_j ln Pr(f_[j] | q)`.
pub fn cross_entropy_loss(fav: &FavorableSet, q: &[f64], weights: &[f64]) -> f64 {
    let nf = fav.len() as f64;
    -fav.indicators
        .iter()
        .zip(weights)
        .map(|(row, w)| {
            w * row
                .iter()
                .zip(q)
                .map(|(&f, &p)| if f { p.ln() } else { (1.0 - p).ln() })
                .sum::<f64>()
        })
        .sum::<f64>()
        / nf
}

/// Partial derivatives of [`cross_entropy_loss`] with respect to each `q_n`:
/// `-(1/N_f) Σ_j w_j [f/q - (1-f)/(1-q)]`.
pub fn cross_entropy_gradient(fav: &FavorableSet, q: &[f64], weights: &[f64]) -> Vec<f64> {
    let nf = fav.len() as f64;
    q.iter()
        .enumerate()
        .map(|(n, &p)| {
            -fav.indicators
                .iter()
                .zip(weights)
                .map(|(row, w)| if row[n] { w / p } else { -w / (1.0 - p) })
                .sum::<f64>()
                / nf
        })
        .collect()
}
