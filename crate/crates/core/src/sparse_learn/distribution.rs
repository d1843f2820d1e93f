use rand::Rng;

/// Bernoulli inclusion probabilities `q_n` over the `N` bins.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportDistribution {
    probs: Vec<f64>,
}

impl SupportDistribution {
    /// The uninformed start, `q = ½·1`.
    pub fn uniform(n: usize) -> Self {
        SupportDistribution { probs: vec![0.5; n] }
    }

    /// Wraps raw probabilities; each must lie in `[0, 1]`.
    pub fn from_probs(probs: Vec<f64>) -> Option<Self> {
        probs.iter().all(|p| (0.0..=1.0).contains(p)).then_some(SupportDistribution { probs })
    }

    /// Clamps into `[q_min, q_max]`.
    pub fn clamped(mut self, (lo, hi): (f64, f64)) -> Self {
        for p in self.probs.iter_mut() {
            *p = p.clamp(lo, hi);
        }
        self
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Draws one candidate support by recursive Bernoulli thinning.
///
/// Starting from all `N` bins, each round keeps bin `n` with probability
/// `q_n`, until at most `k` bins remain. After `max_rounds` rounds the `k`
/// most probable survivors are kept (ties to the lower index). The result is
/// ascending.
pub fn draw_candidate_support<R: Rng + ?Sized>(
    q: &SupportDistribution,
    k: usize,
    max_rounds: usize,
    rng: &mut R,
) -> Vec<usize> {
    let probs = q.probs();
    let mut current: Vec<usize> = (0..probs.len()).collect();
    let mut rounds = 0;
    while current.len() > k {
        if rounds == max_rounds {
            current.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
            current.truncate(k);
            current.sort_unstable();
            break;
        }
        current.retain(|&n| rng.random::<f64>() < probs[n]);
        rounds += 1;
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded_rng;

    #[test]
    fn low_probabilities_give_small_supports() {
        let q = SupportDistribution::from_probs(vec![0.005; 600]).unwrap();
        let mut rng = seeded_rng(1);
        let mean = (0..1000).map(|_| draw_candidate_support(&q, 13, 50, &mut rng).len()).sum::<usize>() as f64 / 1000.0;
        assert!(mean < 6.0, "mean size {mean}");
    }

    #[test]
    fn concentrated_distribution_stays_inside_its_mass() {
        let mut probs = vec![0.005; 100];
        let hot = [3usize, 17, 42, 64, 90];
        for &h in &hot {
            probs[h] = 0.995;
        }
        let q = SupportDistribution::from_probs(probs).unwrap();
        let mut rng = seeded_rng(2);
        let inside = (0..1000)
            .filter(|_| draw_candidate_support(&q, 5, 50, &mut rng).iter().all(|i| hot.contains(i)))
            .count();
        // Per round: 0.995^5 · 0.995^95 ≈ 0.61.
        assert!(inside > 550, "{inside}");
    }

    #[test]
    fn fallback_keeps_most_probable() {
        // Every entry at 1 means thinning never shrinks the set.
        let mut probs = vec![1.0; 8];
        probs[2] = 0.9;
        probs[5] = 0.9;
        let q = SupportDistribution::from_probs(probs).unwrap();
        let s = draw_candidate_support(&q, 3, 50, &mut seeded_rng(3));
        assert_eq!(s, vec![0, 1, 3]);
    }

    #[test]
    fn sizes_never_exceed_k() {
        let q = SupportDistribution::uniform(600);
        let mut rng = seeded_rng(4);
        for _ in 0..500 {
            let s = draw_candidate_support(&q, 13, 50, &mut rng);
            assert!(s.len() <= 13);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn clamp_and_validation() {
        assert!(SupportDistribution::from_probs(vec![0.2, 1.1]).is_none());
        let q = SupportDistribution::from_probs(vec![0.0, 0.5, 1.0]).unwrap().clamped((0.005, 0.995));
        assert_eq!(q.probs(), &[0.005, 0.5, 0.995]);
    }
}
