use nbi_cem::baselines::{brute_force_oracle, samp, subspace_pursuit, BaselineParams};
use nbi_cem::dft::{dft, idft};
use nbi_cem::experiments::{cancel_nbi, shifted_from_differential};
use nbi_cem::measurement::{least_squares_on_support, residue_norm, scatter, ObservationMatrix};
use nbi_cem::nbi_model::{apply_frequency_offset, NbiGroundTruth};
use nbi_cem::random::{mix_seed, seeded_rng};
use nbi_cem::sparse_learn::{
    ce_update, cross_entropy_gradient, draw_candidate_support, empirical_frequencies, regularization_weights,
    regularized_ce_update, select_favorable, weighted_frequencies, Candidate, FavorableSet, SupportDistribution,
};
use nbi_cem::{scem, CemParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn cvec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Random favorable sets: `(n, supports, residues ascending)`.
fn favorable() -> impl Strategy<Value = FavorableSet> {
    (2usize..24, 1usize..12)
        .prop_flat_map(|(n, nf)| {
            let support = prop::collection::btree_set(0..n, 0..=n.min(6));
            (
                Just(n),
                prop::collection::vec(support, nf),
                prop::collection::vec(1e-3..10.0f64, nf),
            )
        })
        .prop_map(|(n, sets, residues)| {
            let cands: Vec<Candidate> = sets
                .into_iter()
                .zip(residues)
                .map(|(s, r)| Candidate { support: s.into_iter().collect(), residue: r })
                .collect();
            select_favorable(&cands, cands.len(), n).unwrap()
        })
}

/// Random `(n, g, support)` with `|support| <= g`.
fn problem() -> impl Strategy<Value = (usize, usize, Vec<usize>)> {
    (4usize..32)
        .prop_flat_map(|n| (Just(n), 2..=n))
        .prop_flat_map(|(n, g)| (Just(n), Just(g), prop::collection::btree_set(0..n, 0..=g.min(6))))
        .prop_map(|(n, g, s)| (n, g, s.into_iter().collect()))
}

proptest! {
    #[test]
    fn ce_update_is_column_mean(fav in favorable()) {
        let q = empirical_frequencies(&fav);
        let nf = fav.len() as f64;
        for n in 0..fav.dim() {
            let mut count = 0.0;
            for row in &fav.indicators {
                if row[n] {
                    count += 1.0;
                }
            }
            prop_assert!((q[n] - count / nf).abs() <= 1e-15);
        }
    }

    #[test]
    fn regularized_update_is_weighted_mean(fav in favorable()) {
        let w = regularization_weights(&fav.residues).unwrap();
        let mean = fav.residues.iter().sum::<f64>() / fav.len() as f64;
        for (wj, rj) in w.iter().zip(&fav.residues) {
            prop_assert!((wj - mean / rj).abs() <= 1e-12 * wj.abs().max(1.0));
        }
        let q = weighted_frequencies(&fav, &w);
        let total: f64 = w.iter().sum();
        for n in 0..fav.dim() {
            let mut acc = 0.0;
            for (row, wj) in fav.indicators.iter().zip(&w) {
                if row[n] {
                    acc += wj;
                }
            }
            prop_assert!((q[n] - acc / total).abs() <= 1e-15);
        }
    }

    #[test]
    fn equal_residues_reduce_to_plain_update(mut fav in favorable(), r in 1e-3..10.0f64) {
        for x in fav.residues.iter_mut() {
            *x = r;
        }
        let clamp = CemParams::DEFAULT_Q_CLAMP;
        prop_assert_eq!(regularized_ce_update(&fav, clamp).unwrap(), ce_update(&fav, clamp));
    }

    #[test]
    fn updates_zero_the_loss_gradient(fav in favorable()) {
        let ones = vec![1.0; fav.len()];
        let q = empirical_frequencies(&fav);
        let g = cross_entropy_gradient(&fav, &q, &ones);
        for (p, d) in q.iter().zip(&g) {
            if *p > 0.0 && *p < 1.0 {
                prop_assert!(d.abs() <= 1e-10, "plain: q={p} grad={d}");
            }
        }
        let w = regularization_weights(&fav.residues).unwrap();
        let q = weighted_frequencies(&fav, &w);
        let g = cross_entropy_gradient(&fav, &q, &w);
        for (p, d) in q.iter().zip(&g) {
            if *p > 1e-12 && *p < 1.0 - 1e-12 {
                prop_assert!(d.abs() <= 1e-10, "weighted: q={p} grad={d}");
            }
        }
    }

    #[test]
    fn updates_stay_in_clamp(fav in favorable()) {
        let (lo, hi) = CemParams::DEFAULT_Q_CLAMP;
        for q in [ce_update(&fav, (lo, hi)), regularized_ce_update(&fav, (lo, hi)).unwrap()] {
            prop_assert!(q.probs().iter().all(|p| (lo..=hi).contains(p)));
        }
    }

    #[test]
    fn favorable_set_is_consistent(fav in favorable()) {
        prop_assert!(fav.residues.windows(2).all(|w| w[0] <= w[1]));
        for (s, row) in fav.supports.iter().zip(&fav.indicators) {
            for (n, &f) in row.iter().enumerate() {
                prop_assert_eq!(f, s.contains(&n));
            }
        }
    }

    #[test]
    fn drawn_supports_respect_the_cap(
        probs in prop::collection::vec(0.0..=1.0f64, 1..80),
        k in 0usize..10,
        seed in any::<u64>(),
    ) {
        let q = SupportDistribution::from_probs(probs).unwrap();
        let s = draw_candidate_support(&q, k, 50, &mut seeded_rng(seed));
        prop_assert!(s.len() <= k);
        prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(s.iter().all(|&i| i < q.len()));
    }

    #[test]
    fn dft_round_trip(x in cvec(37)) {
        let back = dft(&idft(&x));
        for (a, b) in x.iter().zip(&back) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        prop_assert!((norm(&idft(&x)) - norm(&x)).abs() < 1e-12);
    }

    #[test]
    fn frequency_offset_is_unitary(x in cvec(24), alpha in -0.49..0.5f64) {
        let y = apply_frequency_offset(&x, alpha);
        prop_assert!((norm(&y) - norm(&x)).abs() <= 1e-10);
    }

    #[test]
    fn ground_truth_phase_and_support(
        vals in cvec(20),
        mask in prop::collection::vec(any::<bool>(), 20),
        alpha in -0.49..0.5f64,
    ) {
        let support: Vec<usize> = (0..20).filter(|&i| mask[i]).collect();
        let tones: Vec<Complex64> = (0..20).map(|i| if mask[i] { vals[i] } else { Complex64::new(0.0, 0.0) }).collect();
        let t = NbiGroundTruth::from_tones(support, tones, alpha);
        let shift = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * alpha);
        for i in 0..20 {
            let b = t.block_sparse[i];
            prop_assert!((t.shifted[i] - b * shift).norm() <= 1e-12);
            prop_assert!((t.differential[i] - b * (1.0 - shift)).norm() <= 1e-12);
            if alpha != 0.0 {
                prop_assert_eq!(b == Complex64::new(0.0, 0.0), t.differential[i] == Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn cancellation_removes_known_interference(
        data in cvec(32),
        diff in cvec(32),
        alpha in prop_oneof![-0.49..-0.01f64, 0.01..0.5f64],
    ) {
        let shifted = shifted_from_differential(&diff, alpha).unwrap();
        let rx: Vec<Complex64> = data.iter().zip(&shifted).map(|(d, s)| d + s).collect();
        let clean = cancel_nbi(&rx, &diff, alpha).unwrap();
        for (a, b) in clean.iter().zip(&data) {
            prop_assert!((a - b).norm() <= 1e-10);
        }
    }

    #[test]
    fn observation_matrix_entries((n, g, _) in problem()) {
        let psi = ObservationMatrix::new(n, g).unwrap();
        let want = (g as f64 / n as f64).sqrt();
        for col in 0..n {
            prop_assert!((norm(psi.column(col)) - want).abs() <= 1e-12);
            for m in 0..g {
                let phase = 2.0 * std::f64::consts::PI * ((n - g + m) * col) as f64 / n as f64;
                let e = Complex64::from_polar(1.0 / (n as f64).sqrt(), phase);
                prop_assert!((psi.entry(m, col) - e).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn least_squares_is_optimal(
        (n, g, support) in problem(),
        seed in any::<u64>(),
        step in 1e-6..1e-1f64,
    ) {
        let psi = ObservationMatrix::new(n, g).unwrap();
        let mut rng = seeded_rng(seed);
        let dp: Vec<Complex64> = (0..g).map(|_| nbi_cem::random::complex_gaussian(&mut rng, 1.0)).collect();
        let est = least_squares_on_support(&dp, &psi, &support).unwrap();
        prop_assert!((est.residue - residue_norm(&dp, &psi, &est.vector)).abs() <= 1e-10);
        for (i, v) in est.vector.iter().enumerate() {
            if !support.contains(&i) {
                prop_assert_eq!(*v, Complex64::new(0.0, 0.0));
            }
        }
        for _ in 0..8 {
            let mut v = est.vector.clone();
            for &i in &support {
                v[i] += nbi_cem::random::complex_gaussian(&mut rng, step);
            }
            prop_assert!(residue_norm(&dp, &psi, &v) >= est.residue - 1e-12);
        }
    }

    #[test]
    fn larger_support_never_fits_worse((n, g, support) in problem(), extra in 0usize..32, seed in any::<u64>()) {
        prop_assume!(support.len() < g);
        let extra = extra % n;
        prop_assume!(!support.contains(&extra));
        let psi = ObservationMatrix::new(n, g).unwrap();
        let mut rng = seeded_rng(seed);
        let dp: Vec<Complex64> = (0..g).map(|_| nbi_cem::random::complex_gaussian(&mut rng, 1.0)).collect();
        let small = least_squares_on_support(&dp, &psi, &support).unwrap();
        let mut bigger = support.clone();
        bigger.push(extra);
        bigger.sort_unstable();
        let large = least_squares_on_support(&dp, &psi, &bigger).unwrap();
        prop_assert!(large.residue <= small.residue + 1e-12);
    }

    #[test]
    fn mixed_seeds_are_deterministic(a in any::<u64>(), b in any::<u64>()) {
        prop_assert_eq!(mix_seed(&[a, b]), mix_seed(&[a, b]));
        if a != b {
            prop_assert_ne!(mix_seed(&[a]), mix_seed(&[b]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn brute_force_is_never_beaten(seed in any::<u64>(), k in 1usize..=2) {
        let (n, g) = (12, 6);
        let psi = ObservationMatrix::new(n, g).unwrap();
        let mut rng = seeded_rng(seed);
        let dp: Vec<Complex64> = (0..g).map(|_| nbi_cem::random::complex_gaussian(&mut rng, 1.0)).collect();
        let best = brute_force_oracle(&dp, &psi, k).unwrap();
        let params = CemParams::new(40, 8, 10, 1e-9, k).unwrap();
        let others = [
            subspace_pursuit(&dp, &psi, k).unwrap(),
            samp(&dp, &psi, &BaselineParams::new(1, 1e-9, 50).unwrap()).unwrap(),
            scem(&dp, &psi, &params, &mut seeded_rng(seed ^ 1)).unwrap(),
        ];
        for r in &others {
            if r.support.len() <= k {
                prop_assert!(best.residue <= r.residue + 1e-12);
            }
        }
    }

    #[test]
    fn learner_output_is_well_formed(seed in any::<u64>(), k in 1usize..=4) {
        let (n, g) = (24, 10);
        let psi = ObservationMatrix::new(n, g).unwrap();
        let mut rng = seeded_rng(seed);
        let dp: Vec<Complex64> = (0..g).map(|_| nbi_cem::random::complex_gaussian(&mut rng, 1.0)).collect();
        let params = CemParams::new(30, 6, 6, 1e-3, k).unwrap();
        let r = scem(&dp, &psi, &params, &mut seeded_rng(seed)).unwrap();
        prop_assert!(r.support.len() <= k);
        prop_assert!(r.iterations >= 1 && r.iterations <= params.max_iters + 1);
        let est = r.estimate();
        let back = scatter(&r.support, &r.support.iter().map(|&i| est[i]).collect::<Vec<_>>(), n);
        prop_assert_eq!(&back[..], est);
        prop_assert!((r.residue - residue_norm(&dp, &psi, est)).abs() <= 1e-10);
        let (lo, hi) = params.q_clamp;
        prop_assert!(r.final_distribution.unwrap().probs().iter().all(|p| (lo..=hi).contains(p)));
    }
}
