//! How short can the IBI-free window get? MSE against G at fixed INR.

use nbi_cem::experiments::{run_sweep, Algorithm, ExperimentSpec, SweepAxis};

fn main() -> nbi_cem::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let mut spec = ExperimentSpec::reference(SweepAxis::G);
    spec.sweep_values = vec![24.0, 32.0, 40.0, 48.0, 68.0];
    spec.algorithms = vec![Algorithm::Scem, Algorithm::Sscem, Algorithm::Oracle];
    spec.n_trials = trials;
    let table = run_sweep(&spec)?;
    for s in table.summaries() {
        println!(
            "{:<7} G={:<3} mse {:.3e} (sd {:.2e})  support {:.2}",
            s.algorithm.name(),
            s.sweep_value,
            s.mean_mse,
            s.std_mse,
            s.support_rate
        );
    }
    Ok(())
}
