//! Command-line driver for the Monte Carlo sweeps.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nbi_cem::experiments::{
    generate_instance, instance_seed, run_algorithm, run_sweep, Algorithm, ExperimentSpec, SweepAxis, SweepTable,
};
use nbi_cem::measurement::build_observation_matrix;
use nbi_cem::signal_model::Constellation;
use nbi_cem::Result;

#[derive(Parser)]
#[command(name = "nbi-sim", about = "Narrowband interference recovery sweeps for CP-OFDM")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed for all trials.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per sweep point.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Comma list from scem,rscem,sscem,sp,samp,oracle.
    #[arg(long, global = true)]
    algos: Option<String>,
    /// Write per-trial records to this CSV file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// MSE against INR.
    SweepInr {
        /// Sweep values in dB, comma separated.
        #[arg(long, default_value = "0,5,10,15,20")]
        values: String,
    },
    /// MSE against the IBI-free length G.
    SweepG {
        #[arg(long, default_value = "20,24,28,32,35,40,48,56,68")]
        values: String,
    },
    /// Success rate against the number of tones K.
    SweepK {
        #[arg(long, default_value = "13,26,39,45")]
        values: String,
    },
    /// Average iterations of successful trials at the reference point.
    Iters,
    /// One verbose trial.
    Demo {
        /// Trial index within the reference point.
        #[arg(long, default_value_t = 0)]
        trial: usize,
    },
}

fn parse_values(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| nbi_cem::Error::InvalidConfig(format!("bad sweep value `{v}`")))
        })
        .collect()
}

fn base_spec(cli: &Cli, axis: SweepAxis) -> Result<ExperimentSpec> {
    let mut spec = match &cli.config {
        Some(p) => ExperimentSpec::from_file(p)?,
        None => ExperimentSpec::reference(axis),
    };
    spec.sweep_axis = axis;
    spec.sweep_values = vec![match axis {
        SweepAxis::InrDb => spec.config.inr_db(),
        SweepAxis::G => spec.config.ibi_free_len() as f64,
        SweepAxis::K => spec.config.sparsity() as f64,
    }];
    if let Some(s) = cli.seed {
        spec.base_seed = s;
    }
    if let Some(t) = cli.trials {
        spec.n_trials = t;
    }
    if let Some(a) = &cli.algos {
        spec.algorithms = Algorithm::parse_list(a)?;
    }
    Ok(spec)
}

fn print_summaries(table: &SweepTable) {
    println!(
        "{:<8} {:>10} {:>12} {:>12} {:>9} {:>9} {:>9} {:>11}",
        "algo", table.sweep_axis.name(), "mean_mse", "std_mse", "support", "success", "iters", "iters_succ"
    );
    for s in table.summaries() {
        println!(
            "{:<8} {:>10} {:>12.4e} {:>12.4e} {:>9.3} {:>9.3} {:>9.2} {:>11.2}",
            s.algorithm.name(),
            s.sweep_value,
            s.mean_mse,
            s.std_mse,
            s.support_rate,
            s.success_rate,
            s.mean_iterations,
            s.mean_iterations_success
        );
    }
}

fn sweep(cli: &Cli, axis: SweepAxis, values: &str) -> Result<()> {
    let mut spec = base_spec(cli, axis)?;
    spec.sweep_values = parse_values(values)?;
    let table = run_sweep(&spec)?;
    print_summaries(&table);
    if let Some(out) = &cli.out {
        table.write_csv_file(out)?;
        log::info!("wrote {}", out.display());
    }
    Ok(())
}

fn demo(cli: &Cli, trial: usize) -> Result<()> {
    let spec = base_spec(cli, SweepAxis::InrDb)?;
    spec.validate()?;
    let (config, cem, baseline) = spec.point(spec.sweep_values[0])?;
    let psi = build_observation_matrix(&config);
    let q = Constellation::by_name(&spec.constellation)?;
    let seed = instance_seed(spec.base_seed, 0, trial);
    let inst = generate_instance(&config, spec.n_rx, &q, seed)?;
    println!(
        "N={} G={} K={} alpha={} INR={} dB noise_var={:e} epsilon={:.4e} seed={seed}",
        config.n_subcarriers(),
        config.ibi_free_len(),
        config.sparsity(),
        config.freq_offset(),
        config.inr_db(),
        config.noise_var(),
        cem.epsilon
    );
    println!("true support: {:?}", inst.support());
    let dp_norm = inst.measurements[0].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    println!("|dp| = {dp_norm:.4e}");
    for &a in &spec.algorithms {
        let r = run_algorithm(a, &inst, &psi, &cem, &baseline, &spec.snrs_db)?;
        let mse = nbi_cem::experiments::mse_full(r.estimate(), &inst.truths[0].differential);
        println!(
            "{:<7} iters={:<3} converged={:<5} residue={:.4e} mse(ant 0)={:.4e} support={:?}",
            a.name(),
            r.iterations,
            r.converged,
            r.residue,
            mse,
            r.support
        );
        if !r.residue_history.is_empty() {
            let h: Vec<String> = r.residue_history.iter().map(|x| format!("{x:.3e}")).collect();
            println!("        best residue per iteration: {}", h.join(" "));
        }
    }
    if let Some(out) = &cli.out {
        let mut s = spec.clone();
        s.n_trials = trial + 1;
        let table = run_sweep(&s)?;
        let only = SweepTable {
            sweep_axis: table.sweep_axis,
            records: table.records.into_iter().filter(|r| r.trial == trial).collect(),
        };
        only.write_csv_file(out)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::SweepInr { values } => sweep(cli, SweepAxis::InrDb, values),
        Command::SweepG { values } => sweep(cli, SweepAxis::G, values),
        Command::SweepK { values } => sweep(cli, SweepAxis::K, values),
        Command::Iters => {
            let mut spec = base_spec(cli, SweepAxis::K)?;
            if cli.algos.is_none() {
                spec.algorithms = vec![Algorithm::Sscem, Algorithm::Rscem, Algorithm::Scem, Algorithm::Samp];
            }
            let table = run_sweep(&spec)?;
            println!("{:<8} {:>9} {:>12} {:>12}", "algo", "success", "iters_succ", "iters_all");
            for s in table.summaries() {
                println!(
                    "{:<8} {:>4}/{:<4} {:>12.2} {:>12.2}",
                    s.algorithm.name(),
                    s.successes,
                    s.trials,
                    s.mean_iterations_success,
                    s.mean_iterations
                );
            }
            if let Some(out) = &cli.out {
                table.write_csv_file(out)?;
            }
            Ok(())
        }
        Command::Demo { trial } => demo(cli, *trial),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
