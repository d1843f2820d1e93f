use num_complex::Complex64;

use crate::sparse_learn::SupportDistribution;

/// Output of any sparse recoverer.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    /// Estimated support, ascending.
    pub support: Vec<usize>,
    /// One length-`N` estimate per receive antenna, zero off `support`.
    pub estimates: Vec<Vec<Complex64>>,
    /// Residue norm of the returned support (SNR-weighted average across
    /// antennas for the multi-antenna learner).
    pub residue: f64,
    /// Iterations performed at exit. For the exhaustive oracle this is the
    /// number of least-squares solves.
    pub iterations: usize,
    /// Whether the residue threshold, rather than the iteration cap, ended
    /// the run.
    pub converged: bool,
    /// Learnt support distribution, for the cross-entropy learners.
    pub final_distribution: Option<SupportDistribution>,
    /// Best residue seen in each iteration.
    pub residue_history: Vec<f64>,
    /// Lowest-residue support seen over the whole run (diagnostic only).
    pub best_ever: Option<(Vec<usize>, f64)>,
}

impl RecoveryResult {
    /// Estimate for the first antenna.
    pub fn estimate(&self) -> &[Complex64] {
        &self.estimates[0]
    }
}
