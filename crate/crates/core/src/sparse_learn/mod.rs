//! Cross-entropy guided support learning.
//!
//! Each iteration draws `N_c` candidate supports from a product-Bernoulli
//! distribution `q`, scores them by least-squares residue, keeps the `N_f`
//! best, and refits `q` to those favorable supports. Three variants share
//! the loop:
//!
//! * [`scem`]: plain empirical-frequency refit,
//! * [`rscem`]: refit weighted by `λ_[j] = r̄ / r_[j]`,
//! * [`sscem`]: one support shared by several antennas, ranked by the
//!   SNR-weighted mean residue.

mod cem;
mod distribution;
mod favorable;

pub use cem::{cem_recover, rscem, scem, sscem, CemParams, UpdateRule};
pub use distribution::{draw_candidate_support, SupportDistribution};
pub use favorable::{
    candidate_order, ce_update, cross_entropy_gradient, cross_entropy_loss, empirical_frequencies,
    regularization_weights, regularized_ce_update, select_favorable, weighted_frequencies, Candidate,
    FavorableSet,
};
