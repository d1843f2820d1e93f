//! Pushes one noiseless LTE frame through the channel and checks that the
//! differential measurement is exactly `Ψ Δẽ_B`: the data and the channel
//! drop out of the IBI-free part of the CP.

use nbi_cem::channel::vehicular_a_channel;
use nbi_cem::measurement::{build_observation_matrix, differential_measurement};
use nbi_cem::nbi_model::make_ground_truth;
use nbi_cem::random::seeded_rng;
use nbi_cem::signal_model::{extract_ibi_free, generate_frame, propagate, Constellation};
use nbi_cem::SystemConfig;

fn main() -> nbi_cem::Result<()> {
    let cfg = SystemConfig::lte_10mhz();
    println!(
        "N={} V={} L={} G={} K={} alpha={}",
        cfg.n_subcarriers(),
        cfg.cp_len(),
        cfg.channel_len(),
        cfg.ibi_free_len(),
        cfg.sparsity(),
        cfg.freq_offset()
    );
    let psi = build_observation_matrix(&cfg);
    let mut rng = seeded_rng(7);
    let frame = generate_frame(&cfg, &mut rng, &Constellation::qam64());
    let truth = make_ground_truth(&cfg, &mut rng)?;
    let channel = vehicular_a_channel(&mut rng, &cfg, cfg.sample_rate_hz())?;
    println!("tone bins: {:?}", truth.tone_support);
    println!("channel energy: {:.4}", channel.energy());

    let rx = propagate(&frame, &channel, &truth.stream_samples(&cfg), &cfg)?;
    let (p, p_x) = extract_ibi_free(&rx, &cfg);
    let dp = differential_measurement(&p, &p_x)?;
    let model = psi.apply(&truth.differential);
    let err = dp.iter().zip(&model).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("max |dp - Psi de_B| = {err:.3e}");

    // The same frame without interference leaves nothing behind.
    let quiet = nbi_cem::signal_model::NbiTime::zeros(&cfg);
    let rx0 = propagate(&frame, &channel, &quiet, &cfg)?;
    let (p0, px0) = extract_ibi_free(&rx0, &cfg);
    let leak = differential_measurement(&p0, &px0)?.iter().map(|x| x.norm()).fold(0.0, f64::max);
    println!("data leakage into dp without NBI = {leak:.3e}");
    Ok(())
}
