//! Every recoverer on one frame at the LTE operating point.
//!
//! `cargo run --release --example recover_single_frame -- [seed]`

use nbi_cem::experiments::{
    generate_instance, instance_seed, mse_full, run_algorithm, support_covers, Algorithm, ExperimentSpec, SweepAxis,
};
use nbi_cem::measurement::build_observation_matrix;
use nbi_cem::signal_model::Constellation;

fn main() -> nbi_cem::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let spec = ExperimentSpec::reference(SweepAxis::InrDb);
    let (cfg, cem, baseline) = spec.point(spec.sweep_values[0])?;
    let psi = build_observation_matrix(&cfg);
    let inst = generate_instance(&cfg, spec.n_rx, &Constellation::qam64(), instance_seed(seed, 0, 0))?;
    let dp_norm = inst.measurements[0].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    println!("true support {:?}", inst.support());
    println!("|dp| = {dp_norm:.4}, epsilon = {:.4}", cem.epsilon);
    println!("{:<7} {:>6} {:>11} {:>11} {:>8}", "algo", "iters", "residue", "mse", "support");
    for alg in [Algorithm::Scem, Algorithm::Rscem, Algorithm::Sscem, Algorithm::Sp, Algorithm::Samp, Algorithm::Oracle] {
        let r = run_algorithm(alg, &inst, &psi, &cem, &baseline, &spec.snrs_db)?;
        println!(
            "{:<7} {:>6} {:>11.4e} {:>11.4e} {:>8}",
            alg.name(),
            r.iterations,
            r.residue,
            mse_full(r.estimate(), &inst.truths[0].differential),
            support_covers(&r.support, inst.support())
        );
    }
    Ok(())
}
