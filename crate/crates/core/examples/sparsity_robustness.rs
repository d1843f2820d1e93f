//! Success rate against the number of tones, with a larger candidate pool.

use nbi_cem::experiments::{run_sweep, Algorithm, ExperimentSpec, SweepAxis};

fn main() -> nbi_cem::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let mut spec = ExperimentSpec::reference(SweepAxis::K);
    spec.sweep_values = vec![13.0, 26.0, 39.0, 45.0];
    spec.algorithms = vec![Algorithm::Scem, Algorithm::Rscem, Algorithm::Sscem];
    spec.cem.n_candidates = 143;
    spec.cem.n_favorable = 32;
    spec.n_trials = trials;
    let table = run_sweep(&spec)?;
    for s in table.summaries() {
        println!(
            "{:<7} K={:<3} success {:.2}  support {:.2}  mse {:.3e}",
            s.algorithm.name(),
            s.sweep_value,
            s.success_rate,
            s.support_rate,
            s.mean_mse
        );
    }
    Ok(())
}
