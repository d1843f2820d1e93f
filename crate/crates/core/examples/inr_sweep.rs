//! Mean MSE of the three learners against INR, written to CSV.
//!
//! `cargo run --release --example inr_sweep -- [trials] [out.csv]`

use nbi_cem::experiments::{crlb, run_sweep, ExperimentSpec, SweepAxis};

fn main() -> nbi_cem::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(20);
    let out = args.next();
    let mut spec = ExperimentSpec::reference(SweepAxis::InrDb);
    spec.sweep_values = vec![0.0, 5.0, 10.0, 15.0, 20.0];
    spec.n_trials = trials;
    let table = run_sweep(&spec)?;
    println!("{:<7} {:>6} {:>11} {:>11} {:>8}", "algo", "inr", "mean_mse", "crlb", "support");
    for s in table.summaries() {
        let (cfg, _, _) = spec.point(s.sweep_value)?;
        println!(
            "{:<7} {:>6} {:>11.3e} {:>11.3e} {:>8.2}",
            s.algorithm.name(),
            s.sweep_value,
            s.mean_mse,
            crlb(&cfg),
            s.support_rate
        );
    }
    if let Some(path) = out {
        table.write_csv_file(path.as_ref())?;
        println!("wrote {path}");
    }
    Ok(())
}
