//! Reference recoverers: subspace pursuit, SAMP, the genie least-squares
//! estimator and the exhaustive search used as ground truth in tests.

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::SystemConfig;
use crate::dft;
use crate::error::{Error, Result};
use crate::measurement::{least_squares_on_support, search_space_size, LsEstimate, ObservationMatrix};
use crate::recovery::RecoveryResult;
use crate::sparse_learn::{candidate_order, Candidate};

/// Largest search space [`brute_force_oracle`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// Hard cap on subspace-pursuit refinement passes.
const SP_MAX_PASSES: usize = 64;

/// Parameters for the greedy baselines.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineParams {
    /// SAMP stage step size.
    pub samp_step: usize,
    /// Residue threshold shared with the learners.
    pub epsilon: f64,
    pub max_iters: usize,
}

impl BaselineParams {
    pub fn new(samp_step: usize, epsilon: f64, max_iters: usize) -> Result<Self> {
        let p = BaselineParams { samp_step, epsilon, max_iters };
        p.validate()?;
        Ok(p)
    }

    /// Step 1, the configuration's default `ε`, at most 100 iterations.
    pub fn standard(config: &SystemConfig) -> Self {
        BaselineParams { samp_step: 1, epsilon: config.default_epsilon(), max_iters: 100 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samp_step == 0 || self.max_iters == 0 {
            return Err(Error::InvalidConfig("samp_step and max_iters must be positive".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Indices of the `k` largest magnitudes, ties to the lower index, ascending.
fn top_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx.sort_unstable();
    idx
}

fn correlations(psi: &ObservationMatrix, r: &[Complex64]) -> Vec<f64> {
    psi.adjoint_apply(r).iter().map(|c| c.norm()).collect()
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Keeps the `k` coefficients of largest magnitude from an LS fit on `support`.
fn prune(support: &[usize], est: &LsEstimate, k: usize) -> Vec<usize> {
    let mags: Vec<f64> = support.iter().map(|&s| est.vector[s].norm()).collect();
    top_k(&mags, k).into_iter().map(|i| support[i]).collect()
}

fn result(support: Vec<usize>, est: LsEstimate, iterations: usize, converged: bool) -> RecoveryResult {
    RecoveryResult {
        support,
        estimates: vec![est.vector],
        residue: est.residue,
        iterations,
        converged,
        final_distribution: None,
        residue_history: Vec::new(),
        best_ever: None,
    }
}

/// Subspace pursuit with known sparsity `k`.
///
/// Stops when a refinement pass fails to lower the residue, when the residue
/// is numerically zero, or after a fixed number of passes. `iterations`
/// counts the initial fit as the first.
pub fn subspace_pursuit(dp: &[Complex64], psi: &ObservationMatrix, k: usize) -> Result<RecoveryResult> {
    if k > psi.g() {
        return Err(Error::SupportTooLarge { size: k, rows: psi.g() });
    }
    if dp.len() != psi.g() {
        return Err(Error::LengthMismatch { expected: psi.g(), actual: dp.len() });
    }
    let floor = 1e-12 * dft::norm(dp);
    let mut support = top_k(&correlations(psi, dp), k);
    let mut est = least_squares_on_support(dp, psi, &support)?;
    let mut iterations = 1;
    while iterations < SP_MAX_PASSES && est.residue > floor {
        let residual: Vec<Complex64> = dp.iter().zip(psi.apply(&est.vector)).map(|(a, b)| a - b).collect();
        // The merged set must stay solvable in G rows.
        let room = (psi.g() - support.len()).min(k);
        let grow = top_k(&correlations(psi, &residual), room);
        let merged = union(&support, &grow);
        let wide = least_squares_on_support(dp, psi, &merged)?;
        let next = prune(&merged, &wide, k);
        let next_est = least_squares_on_support(dp, psi, &next)?;
        iterations += 1;
        if next_est.residue >= est.residue || next == support {
            break;
        }
        support = next;
        est = next_est;
    }
    let converged = est.residue <= floor.max(f64::MIN_POSITIVE);
    Ok(result(support, est, iterations, converged))
}

/// Sparsity adaptive matching pursuit: the working size grows by
/// `samp_step` whenever an iteration fails to lower the residue.
pub fn samp(dp: &[Complex64], psi: &ObservationMatrix, params: &BaselineParams) -> Result<RecoveryResult> {
    params.validate()?;
    if dp.len() != psi.g() {
        return Err(Error::LengthMismatch { expected: psi.g(), actual: dp.len() });
    }
    let mut support: Vec<usize> = Vec::new();
    let mut est = least_squares_on_support(dp, psi, &support)?;
    if est.residue <= params.epsilon {
        return Ok(result(support, est, 0, true));
    }
    let mut size = params.samp_step;
    let mut iterations = 0;
    while iterations < params.max_iters {
        if 2 * size > psi.g() {
            break;
        }
        iterations += 1;
        let residual: Vec<Complex64> = dp.iter().zip(psi.apply(&est.vector)).map(|(a, b)| a - b).collect();
        let shortlist = top_k(&correlations(psi, &residual), size);
        let merged = union(&support, &shortlist);
        let wide = least_squares_on_support(dp, psi, &merged)?;
        let next = prune(&merged, &wide, size);
        let next_est = least_squares_on_support(dp, psi, &next)?;
        if next_est.residue <= params.epsilon {
            return Ok(result(next, next_est, iterations, true));
        }
        if next_est.residue >= est.residue {
            size += params.samp_step;
        } else {
            support = next;
            est = next_est;
        }
    }
    Ok(result(support, est, iterations, false))
}

/// Least squares on a known support.
pub fn oracle_ls(dp: &[Complex64], psi: &ObservationMatrix, true_support: &[usize]) -> Result<RecoveryResult> {
    let mut support = true_support.to_vec();
    support.sort_unstable();
    let est = least_squares_on_support(dp, psi, &support)?;
    Ok(result(support, est, 1, true))
}

/// Advances `c` to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if candidate_order(&b, &a) == Ordering::Less { b } else { a }),
        (a, b) => a.or(b),
    }
}

/// Best support of size `size` whose smallest index is `first`.
fn scan_from(dp: &[Complex64], psi: &ObservationMatrix, size: usize, first: usize) -> Option<Candidate> {
    let n = psi.n();
    let mut best = None;
    let mut tail: Vec<usize> = (first + 1..first + size).collect();
    if tail.last().is_some_and(|&l| l >= n) {
        return None;
    }
    loop {
        let mut support = Vec::with_capacity(size);
        support.push(first);
        support.extend_from_slice(&tail);
        if let Ok(qr) = psi.factor(&support) {
            let residue = qr.solve(dp).1;
            best = better(best, Some(Candidate { support, residue }));
        }
        if tail.is_empty() {
            break;
        }
        // Shift into the index range above `first`.
        let mut shifted: Vec<usize> = tail.iter().map(|t| t - first - 1).collect();
        if !next_combination(&mut shifted, n - first - 1) {
            break;
        }
        tail = shifted.iter().map(|t| t + first + 1).collect();
    }
    best
}

/// Exhaustive least squares over every support of size at most `k`.
///
/// `iterations` is the number of supports tried, including the empty one.
/// Rank-deficient supports are counted but never selected.
pub fn brute_force_oracle(dp: &[Complex64], psi: &ObservationMatrix, k: usize) -> Result<RecoveryResult> {
    if dp.len() != psi.g() {
        return Err(Error::LengthMismatch { expected: psi.g(), actual: dp.len() });
    }
    let count = search_space_size(psi.n(), k);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::SearchSpaceTooLarge { count, limit: BRUTE_FORCE_LIMIT });
    }
    let empty = least_squares_on_support(dp, psi, &[])?;
    let mut best = Some(Candidate { support: Vec::new(), residue: empty.residue });
    for size in 1..=k.min(psi.g()) {
        let found = (0..psi.n())
            .into_par_iter()
            .map(|first| scan_from(dp, psi, size, first))
            .reduce(|| None, better);
        best = better(best, found);
    }
    let best = best.expect("the empty support is always feasible");
    let est = least_squares_on_support(dp, psi, &best.support)?;
    Ok(result(best.support, est, count as usize, true))
}
