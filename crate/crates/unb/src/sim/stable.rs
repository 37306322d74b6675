//! Exact sampling of the aggregate interference seen at a point from an
//! infinite-plane Poisson field with unit-mean exponential fading marks.
//!
//! For path-loss exponent alpha > 2 the total power `I = sum f_i y_i^-alpha`
//! is one-sided stable with index `delta = 2/alpha`:
//! `E[exp(-s I)] = exp(-(pi lambda / xi) s^delta)`,
//! which is the same Laplace functional the closed-form analysis evaluates.
//! Drawing `I` directly therefore realizes the analytic interference model
//! with no spatial truncation at all.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

/// Standard positive stable variate with `E[exp(-s X)] = exp(-s^delta)`,
/// drawn by Kanter's representation (0 < delta < 1).
pub fn one_sided_stable(delta: f64, rng: &mut impl Rng) -> f64 {
    debug_assert!(0.0 < delta && delta < 1.0);
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let w: f64 = Exp1.sample(rng);
    let pu = std::f64::consts::PI * u;
    let a = ((delta * pu).sin().powf(delta) * ((1.0 - delta) * pu).sin().powf(1.0 - delta)
        / pu.sin())
    .powf(1.0 / (1.0 - delta));
    (a / w).powf((1.0 - delta) / delta)
}

/// Aggregate interference at a point from an infinite-plane PPP of the given
/// density with unit-mean exponential marks, i.e. a draw with
/// `E[exp(-s I)] = exp(-(pi density / xi) s^delta)`.
pub fn field_interference(density: f64, delta: f64, xi: f64, rng: &mut impl Rng) -> f64 {
    if density <= 0.0 {
        return 0.0;
    }
    let scale = (std::f64::consts::PI * density / xi).powf(1.0 / delta);
    scale * one_sided_stable(delta, rng)
}
