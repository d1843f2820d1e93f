//! Recover, cancel, and look at what is left on the data sub-carriers.

use nbi_cem::dft::frequency_response;
use nbi_cem::experiments::{
    cancel_nbi, generate_instance, instance_seed, post_cancel_interference_db, run_algorithm,
    shifted_from_differential, symbol_error_probe, Algorithm, ExperimentSpec, SweepAxis,
};
use nbi_cem::measurement::build_observation_matrix;
use nbi_cem::signal_model::Constellation;

fn main() -> nbi_cem::Result<()> {
    let spec = ExperimentSpec::reference(SweepAxis::InrDb);
    let (cfg, cem, baseline) = spec.point(spec.sweep_values[0])?;
    let psi = build_observation_matrix(&cfg);
    let qam = Constellation::qam64();
    let amp = cfg.data_power().sqrt();
    let trials = 20;
    println!("{:<6} {:>9} {:>11} {:>11} {:>13}", "trial", "algo", "SER raw", "SER clean", "residual dB");
    for t in 0..trials {
        let inst = generate_instance(&cfg, 1, &qam, instance_seed(spec.base_seed, 0, t))?;
        let response: Vec<_> = frequency_response(&inst.channels[0].taps, cfg.n_subcarriers())
            .into_iter()
            .map(|h| h * amp)
            .collect();
        let rx = &inst.received[0].freq_rx;
        let raw = symbol_error_probe(rx, &inst.frame.freq_data, &response, amp, &qam)?;
        for alg in [Algorithm::Oracle, Algorithm::Scem] {
            let r = run_algorithm(alg, &inst, &psi, &cem, &baseline, &[])?;
            let clean = cancel_nbi(rx, r.estimate(), cfg.freq_offset())?;
            let ser = symbol_error_probe(&clean, &inst.frame.freq_data, &response, amp, &qam)?;
            let shifted = shifted_from_differential(r.estimate(), cfg.freq_offset())?;
            let resid = post_cancel_interference_db(&inst.truths[0].shifted, &shifted, cfg.noise_var());
            println!("{t:<6} {:>9} {raw:>11.4} {ser:>11.4} {resid:>13.2}", alg.name());
        }
    }
    Ok(())
}
