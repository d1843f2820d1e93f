//! Greedy baselines against the exhaustive oracle on a problem small enough
//! to enumerate.

use nbi_cem::baselines::{brute_force_oracle, samp, subspace_pursuit, BaselineParams};
use nbi_cem::experiments::mse_full;
use nbi_cem::measurement::{build_observation_matrix, search_space_size};
use nbi_cem::nbi_model::make_ground_truth;
use nbi_cem::random::{complex_gaussian, seeded_rng};
use nbi_cem::SystemConfig;

fn main() -> nbi_cem::Result<()> {
    let cfg = SystemConfig::new(16, 10, 3, 2)?.with_freq_offset(0.25)?.with_noise_var(1e-4)?;
    let psi = build_observation_matrix(&cfg);
    println!("N=16 G={} K=2: {} supports to check", psi.g(), search_space_size(16, 2));
    let params = BaselineParams::new(1, cfg.default_epsilon(), 100)?;
    let trials = 200;
    let (mut sp_hit, mut samp_hit) = (0, 0);
    let (mut sp_mse, mut samp_mse, mut bf_mse) = (0.0, 0.0, 0.0);
    for t in 0..trials {
        let mut rng = seeded_rng(t);
        let truth = make_ground_truth(&cfg, &mut rng)?;
        let mut dp = psi.apply(&truth.differential);
        for x in dp.iter_mut() {
            *x += complex_gaussian(&mut rng, 2.0 * cfg.noise_var());
        }
        let bf = brute_force_oracle(&dp, &psi, 2)?;
        let sp = subspace_pursuit(&dp, &psi, 2)?;
        let sa = samp(&dp, &psi, &params)?;
        sp_hit += usize::from(sp.support == bf.support);
        samp_hit += usize::from(sa.support == bf.support);
        bf_mse += mse_full(bf.estimate(), &truth.differential);
        sp_mse += mse_full(sp.estimate(), &truth.differential);
        samp_mse += mse_full(sa.estimate(), &truth.differential);
    }
    let n = trials as f64;
    println!("brute force  mse {:.3e}", bf_mse / n);
    println!("SP           mse {:.3e}  same support as brute force {sp_hit}/{trials}", sp_mse / n);
    println!("SAMP         mse {:.3e}  same support as brute force {samp_hit}/{trials}", samp_mse / n);
    Ok(())
}
