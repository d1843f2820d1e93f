//! Iterations to convergence of each learner, over successful trials only.

use nbi_cem::experiments::{run_sweep, Algorithm, ExperimentSpec, SweepAxis};

fn main() -> nbi_cem::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let mut spec = ExperimentSpec::reference(SweepAxis::K);
    spec.algorithms = vec![Algorithm::Sscem, Algorithm::Rscem, Algorithm::Scem, Algorithm::Samp];
    spec.n_trials = trials;
    let table = run_sweep(&spec)?;
    println!("{:<7} {:>10} {:>12} {:>10}", "algo", "successes", "iters(succ)", "iters(all)");
    for s in table.summaries() {
        println!(
            "{:<7} {:>10} {:>12.2} {:>10.2}",
            s.algorithm.name(),
            s.successes,
            s.mean_iterations_success,
            s.mean_iterations
        );
    }
    Ok(())
}
