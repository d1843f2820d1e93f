//! Watches the cross-entropy learner find one tone on a tiny noiseless
//! problem: how the inclusion probabilities sharpen iteration by iteration.
//!
//! The tone sits on the grid, so the differential vector is exactly 1-sparse.
//! An off-grid tone (`alpha != 0`) leaks into every bin and no single bin
//! fits it exactly; the second half shows that case.

use nbi_cem::measurement::ObservationMatrix;
use nbi_cem::nbi_model::NbiGroundTruth;
use nbi_cem::measurement::least_squares_on_support;
use nbi_cem::random::seeded_rng;
use nbi_cem::{rscem, scem, CemParams};
use num_complex::Complex64;

fn main() -> nbi_cem::Result<()> {
    let (n, g) = (16, 8);
    let psi = ObservationMatrix::new(n, g)?;
    let mut diff = vec![Complex64::new(0.0, 0.0); n];
    diff[11] = Complex64::new(0.8, -0.6);
    let dp = psi.apply(&diff);

    for max_iters in 1..=4 {
        let params = CemParams::new(64, 8, max_iters, 1e-9, 1)?;
        let r = scem(&dp, &psi, &params, &mut seeded_rng(3))?;
        let q = r.final_distribution.as_ref().expect("learner returns q");
        let top: Vec<String> = q.probs().iter().map(|p| format!("{p:.2}")).collect();
        println!("cap {max_iters}: support {:?} residue {:.2e}", r.support, r.residue);
        println!("        q = [{}]", top.join(" "));
        if r.converged {
            println!("converged after {} iterations", r.iterations);
            break;
        }
    }

    let params = CemParams::new(64, 8, 20, 1e-9, 1)?;
    let (mut plain, mut weighted) = (0usize, 0usize);
    for seed in 0..50 {
        plain += scem(&dp, &psi, &params, &mut seeded_rng(seed))?.iterations;
        weighted += rscem(&dp, &psi, &params, &mut seeded_rng(seed))?.iterations;
    }
    println!("mean iterations over 50 runs: scem {:.2}, rscem {:.2}", plain as f64 / 50.0, weighted as f64 / 50.0);

    let truth = NbiGroundTruth::from_tones(vec![11], diff, 0.25);
    let dp = psi.apply(&truth.differential);
    let main_bin = least_squares_on_support(&dp, &psi, &[11])?;
    let r = scem(&dp, &psi, &CemParams::new(64, 8, 20, 1e-9, 1)?, &mut seeded_rng(3))?;
    println!(
        "off-grid (alpha = 0.25): best single bin {:?} residue {:.3e}, bin 11 alone {:.3e}",
        r.support, r.residue, main_bin.residue
    );
    Ok(())
}
