//! Drives a sweep from flat `key = value` text, the same format the
//! `nbi-sim --config` flag reads.

use nbi_cem::experiments::{run_sweep, ExperimentSpec};

const CONFIG: &str = "
# small system, quick to run
n_subcarriers = 64
cp_len = 24
channel_len = 9
sparsity = 2
freq_offset = 0.3
sample_rate_hz = 1.92e6
n_candidates = 40
n_favorable = 8
max_iters = 20
algorithms = scem,rscem,sp,oracle
sweep_axis = inr_db
sweep_values = 10,20,30
n_trials = 40
n_rx = 1
base_seed = 11
";

fn main() -> nbi_cem::Result<()> {
    let spec = ExperimentSpec::from_config_str(CONFIG)?;
    let table = run_sweep(&spec)?;
    for s in table.summaries() {
        println!(
            "{:<7} inr={:<3} mse {:.3e}  support {:.2}  iters {:.1}",
            s.algorithm.name(),
            s.sweep_value,
            s.mean_mse,
            s.support_rate,
            s.mean_iterations
        );
    }
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    let text = String::from_utf8_lossy(&csv);
    for line in text.lines().take(3) {
        println!("{line}");
    }

    match ExperimentSpec::from_config_str("sparsity = 2\nbogus_key = 1\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("unknown keys are errors"),
    }
    Ok(())
}
