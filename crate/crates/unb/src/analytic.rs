//! Closed-form success probabilities and transmission capacities for every
//! UNB access protocol, plus an exact-with-noise quadrature path.
//!
//! All functions here are pure. Probabilities are clamped to [0, 1]; the
//! degenerate limits are documented per function (no base stations, no
//! interference) and follow the interference-limited model.

use crate::error::{Error, Result};
use crate::model::{DerivedParams, Hopping, IncumbentConfig, NetworkConfig, Protocol, ProtocolSpec};
use crate::quad;

/// Exact binomial coefficient; panics on overflow (not reachable for N <= 60).
fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow")
            / (i + 1) as u128;
    }
    acc
}

/// Neumaier-compensated accumulator for the severely cancelling alternating sums.
#[derive(Default, Clone, Copy)]
struct Accum {
    sum: f64,
    comp: f64,
}

impl Accum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Harmonic number `H_N = sum_{k=1..N} 1/k`. `N = 0` is rejected.
pub fn harmonic(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("harmonic number requires N >= 1"));
    }
    Ok(harmonic_f(n))
}

/// `H_n` with the `H_0 = 0` convention used for empty bands.
pub(crate) fn harmonic_f(n: u32) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Exponential decay rate `num / den` with the degenerate conventions used
/// throughout: a zero numerator contributes nothing even against a zero
/// denominator, and a zero denominator with positive numerator decays
/// infinitely fast (certain success for that term).
fn decay_rate(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Success probability with nearest-BS association and random hopping.
///
/// Interference-limited: the noise ratio is ignored. Returns 0 when the BS
/// density is zero (degenerate: nothing can decode) and 1 when there is no
/// interference at all.
pub fn ps_nearest(d: &DerivedParams, cfg: &NetworkConfig) -> f64 {
    if cfg.bs_density == 0.0 {
        return 0.0;
    }
    let n = cfg.repetitions;
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let q = tau_d / d.xi * (d.thinned_devices + d.inc_interference) / cfg.bs_density;
    let mut acc = Accum::default();
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = binomial(n, k) as f64 / (1.0 + k as f64 * q);
        acc.add(sign * term);
    }
    clamp_prob(1.0 - acc.value())
}

/// Success probability in broadcast mode (no BS association), random hopping.
///
/// Returns 0 when the BS density is zero and 1 when the total interferer
/// density vanishes (degenerate interference-limited limit).
pub fn ps_no_assoc(d: &DerivedParams, cfg: &NetworkConfig) -> f64 {
    if cfg.bs_density == 0.0 {
        return 0.0;
    }
    let n = cfg.repetitions;
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let rate = decay_rate(
        d.xi / tau_d * harmonic_f(n) * cfg.bs_density,
        d.thinned_devices + d.inc_interference,
    );
    clamp_prob(-(-rate).exp_m1())
}

/// Nearest-BS success probability under PN hopping: devices sharing a pattern
/// collide on every repetition, so the UNB interferer set is common across
/// repetitions while incumbents refresh.
pub fn ps_pn_nearest(d: &DerivedParams, cfg: &NetworkConfig) -> f64 {
    if cfg.bs_density == 0.0 {
        return 0.0;
    }
    let n = cfg.repetitions;
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let mut acc = Accum::default();
    for k in 0..=n {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mix = kf.powf(d.delta) * d.thinned_devices + kf * d.inc_interference;
        let term = binomial(n, k) as f64 / (1.0 + tau_d / d.xi * mix / cfg.bs_density);
        acc.add(sign * term);
    }
    clamp_prob(1.0 - acc.value())
}

/// Broadcast-mode success probability under PN hopping.
pub fn ps_pn_no_assoc(d: &DerivedParams, cfg: &NetworkConfig) -> f64 {
    if cfg.bs_density == 0.0 {
        return 0.0;
    }
    if d.thinned_devices + d.inc_interference == 0.0 {
        return 1.0;
    }
    let n = cfg.repetitions;
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let mut acc = Accum::default();
    for k in 1..=n {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mix = kf.powf(d.delta) * d.thinned_devices + kf * d.inc_interference;
        acc.add(sign * binomial(n, k) as f64 * cfg.bs_density / mix);
    }
    // acc is negative; the exponent carries it with its sign.
    clamp_prob(-(d.xi / tau_d * acc.value()).exp_m1())
}

fn check_simplex(p: &[f64], m: u32) -> Result<()> {
    if p.len() != m as usize {
        return Err(Error::domain(format!(
            "band probability vector has length {}, expected {}",
            p.len(),
            m
        )));
    }
    if p.iter().any(|x| *x < 0.0 || !x.is_finite()) {
        return Err(Error::domain("band probabilities must be nonnegative"));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "band probabilities sum to {sum}, expected 1"
        )));
    }
    Ok(())
}

/// Success probability of the band-constrained multiband protocol (all N
/// repetitions in one uniformly chosen band; each BS listens to band m with
/// probability `p[m]`).
pub fn ps_band_constrained(
    d: &DerivedParams,
    cfg: &NetworkConfig,
    p: &[f64],
) -> Result<f64> {
    check_simplex(p, cfg.bands)?;
    if cfg.bs_density == 0.0 {
        return Ok(0.0);
    }
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let h = harmonic_f(cfg.repetitions);
    let mut fail = Accum::default();
    for (pm, q) in p.iter().zip(&d.band_inc_interference) {
        let rate = decay_rate(
            d.xi / tau_d * h * pm * cfg.bs_density,
            d.thinned_devices + q,
        );
        fail.add((-rate).exp());
    }
    Ok(clamp_prob(1.0 - fail.value() / cfg.bands as f64))
}

/// The ways of distributing N repetitions over M bands together with their
/// multinomial probabilities under uniform band choice.
#[derive(Debug, Clone)]
pub struct CompositionTable {
    /// Each entry sums to N; length M.
    pub counts: Vec<Vec<u32>>,
    /// Probability of each composition; sums to 1.
    pub weights: Vec<f64>,
}

impl CompositionTable {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

const COMPOSITION_GUARD: u128 = 1_000_000;

fn table_size(n: u32, m: u32) -> Option<u128> {
    // C(N + M - 1, M - 1), bailing out early once past the guard.
    let mut acc: u128 = 1;
    for i in 0..(m - 1) as u128 {
        acc = acc.checked_mul(n as u128 + i + 1)? / (i + 1);
        if acc > COMPOSITION_GUARD * 1_000 {
            return Some(acc);
        }
    }
    Some(acc)
}

fn multinomial(counts: &[u32]) -> Result<u128> {
    let mut total = 0u32;
    let mut acc: u128 = 1;
    for &c in counts {
        total += c;
        acc = acc
            .checked_mul(binomial(total, c))
            .ok_or_else(|| Error::Guard("multinomial coefficient overflows 128 bits".into()))?;
    }
    Ok(acc)
}

/// Enumerate all compositions of `n` repetitions over `m` bands with exact
/// multinomial weights. Guarded at 10^6 table entries; beyond that the Monte
/// Carlo engine is the practical route.
pub fn compositions(n: u32, m: u32) -> Result<CompositionTable> {
    if n == 0 || m == 0 {
        return Err(Error::domain("compositions require N >= 1 and M >= 1"));
    }
    let size = table_size(n, m).unwrap_or(u128::MAX);
    if size > COMPOSITION_GUARD {
        return Err(Error::Guard(format!(
            "composition table would hold {size} entries (limit {COMPOSITION_GUARD}); \
             use the Monte Carlo engine for this configuration"
        )));
    }
    let scale = (m as f64).powi(n as i32);
    let mut counts = Vec::with_capacity(size as usize);
    let mut weights = Vec::with_capacity(size as usize);
    let mut current = vec![0u32; m as usize];
    fill(n, 0, &mut current, &mut counts)?;
    for c in &counts {
        weights.push(multinomial(c)? as f64 / scale);
    }
    return Ok(CompositionTable { counts, weights });

    fn fill(
        remaining: u32,
        idx: usize,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        if idx + 1 == current.len() {
            current[idx] = remaining;
            out.push(current.clone());
            current[idx] = 0;
            return Ok(());
        }
        for take in (0..=remaining).rev() {
            current[idx] = take;
            fill(remaining - take, idx + 1, current, out)?;
        }
        current[idx] = 0;
        Ok(())
    }
}

/// Success probability of the band-hopped multiband protocol: each repetition
/// lands in a uniformly chosen band, each BS listens to band m with
/// probability `p[m]`. Averages the per-composition product form over the
/// multinomial table; empty bands contribute nothing (`H_0 = 0`).
pub fn ps_band_hopped(
    d: &DerivedParams,
    cfg: &NetworkConfig,
    p: &[f64],
) -> Result<f64> {
    check_simplex(p, cfg.bands)?;
    if cfg.bs_density == 0.0 {
        return Ok(0.0);
    }
    let table = compositions(cfg.repetitions, cfg.bands)?;
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let mut fail = Accum::default();
    for (counts, w) in table.counts.iter().zip(&table.weights) {
        let mut total = 0.0;
        for ((nm, pm), q) in counts.iter().zip(p).zip(&d.band_inc_interference) {
            if *nm == 0 {
                continue;
            }
            total += decay_rate(
                d.xi / tau_d * harmonic_f(*nm) * pm * cfg.bs_density,
                d.thinned_devices + q,
            );
        }
        fail.add(w * (-total).exp());
    }
    Ok(clamp_prob(1.0 - fail.value()))
}

/// A transmission-capacity value. Negative closed-form results are clamped to
/// zero and flagged: a supportable density cannot be negative, but the flag
/// preserves the information that incumbents dominate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity {
    /// Supportable IoT device density, per km².
    pub density: f64,
    /// True when the raw closed form was negative and clamped to zero.
    pub clamped: bool,
}

fn capacity_from_parts(prefactor: f64, bs_term: f64, inc_density: f64, n: f64) -> Capacity {
    let raw = prefactor * (bs_term - inc_density / n);
    if raw < 0.0 {
        Capacity {
            density: 0.0,
            clamped: true,
        }
    } else {
        Capacity {
            density: raw,
            clamped: false,
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0 < gamma && gamma < 1.0) {
        return Err(Error::domain(format!(
            "success constraint gamma must lie in (0, 1), got {gamma}"
        )));
    }
    Ok(())
}

fn duty_factor(d: &DerivedParams, cfg: &NetworkConfig) -> f64 {
    cfg.beta_time * cfg.beta_freq * cfg.signal_bw * d.activity
}

/// Transmission capacity under nearest-BS association. The closed form only
/// exists for a single transmission per packet (`N = 1`).
pub fn tc_nearest(gamma: f64, d: &DerivedParams, cfg: &NetworkConfig) -> Result<Capacity> {
    check_gamma(gamma)?;
    if cfg.repetitions != 1 {
        return Err(Error::domain(
            "the nearest-BS capacity closed form requires N = 1; use the numeric inversion",
        ));
    }
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let pre = gamma * (cfg.bands as f64 * cfg.band_bw) / duty_factor(d, cfg);
    let bs_term = d.xi / tau_d * cfg.bs_density / (gamma / (1.0 - gamma));
    Ok(capacity_from_parts(pre, bs_term, d.inc_interference, 1.0))
}

/// Transmission capacity in broadcast mode, any `N`.
pub fn tc_no_assoc(gamma: f64, d: &DerivedParams, cfg: &NetworkConfig) -> Result<Capacity> {
    check_gamma(gamma)?;
    let n = cfg.repetitions as f64;
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let pre = gamma * (cfg.bands as f64 * cfg.band_bw) / duty_factor(d, cfg);
    let bs_term = d.xi / tau_d * harmonic_f(cfg.repetitions) * cfg.bs_density
        / (n * (1.0 / (1.0 - gamma)).ln());
    Ok(capacity_from_parts(pre, bs_term, d.inc_interference, n))
}

/// Transmission capacity of the band-constrained multiband protocol with
/// uniform band selection. Closed form for Type-I (any bandwidth) and
/// homogeneous Type-II incumbents; heterogeneous Type-II has no closed form.
pub fn tc_band_constrained(
    gamma: f64,
    d: &DerivedParams,
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
) -> Result<Capacity> {
    check_gamma(gamma)?;
    let n = cfg.repetitions as f64;
    let tau_d = cfg.sinr_threshold.powf(d.delta);
    let pre = gamma * cfg.band_bw / duty_factor(d, cfg);
    let bs_term = d.xi / tau_d * harmonic_f(cfg.repetitions) * cfg.bs_density
        / (n * (1.0 / (1.0 - gamma)).ln());
    // M * min{1, B_I/(M B)} rewritten as min{M, B_I/B} so that the B_I < B case
    // reproduces the single-band expression bit for bit.
    let inc_density = match inc {
        IncumbentConfig::TypeI {
            power,
            bandwidth,
            density,
        } => {
            let p_hat = power * cfg.signal_bw / bandwidth / cfg.tx_power;
            let occ = (bandwidth / cfg.band_bw).min(cfg.bands as f64);
            p_hat.powf(d.delta) * occ * density
        }
        IncumbentConfig::TypeII { bands, .. } => {
            let (bw0, dens0) = bands[0];
            if bands.iter().any(|(bw, dens)| *bw != bw0 || *dens != dens0) {
                return Err(Error::domain(
                    "band-constrained capacity has no closed form for heterogeneous \
                     Type-II incumbents; use the numeric inversion",
                ));
            }
            d.band_inc_interference.iter().sum::<f64>()
        }
    };
    Ok(capacity_from_parts(pre, bs_term, inc_density, n))
}

/// Success probability of `spec` evaluated from the closed forms.
pub fn success_probability(
    spec: &ProtocolSpec,
    d: &DerivedParams,
    cfg: &NetworkConfig,
) -> Result<f64> {
    match (spec.protocol, spec.hopping) {
        (Protocol::NearestBs, Hopping::Random) => Ok(ps_nearest(d, cfg)),
        (Protocol::NearestBs, Hopping::Pn) => Ok(ps_pn_nearest(d, cfg)),
        (Protocol::NoAssociation | Protocol::BenchmarkMultiband, Hopping::Random) => {
            Ok(ps_no_assoc(d, cfg))
        }
        (Protocol::NoAssociation, Hopping::Pn) => Ok(ps_pn_no_assoc(d, cfg)),
        (Protocol::BandConstrained, Hopping::Random) => {
            ps_band_constrained(d, cfg, &spec.band_probs_or_uniform(cfg.bands))
        }
        (Protocol::BandHopped, Hopping::Random) => {
            ps_band_hopped(d, cfg, &spec.band_probs_or_uniform(cfg.bands))
        }
        (p, Hopping::Pn) => Err(Error::domain(format!(
            "PN hopping is not defined for the {} protocol",
            p.name()
        ))),
    }
}

/// Transmission capacity of `spec`: closed form where one exists,
/// numeric inversion of the success probability otherwise.
pub fn transmission_capacity(
    spec: &ProtocolSpec,
    gamma: f64,
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
) -> Result<Capacity> {
    check_gamma(gamma)?;
    let d = crate::model::derive_params(cfg, inc)?;
    match (spec.protocol, spec.hopping) {
        (Protocol::NearestBs, Hopping::Random) if cfg.repetitions == 1 => {
            tc_nearest(gamma, &d, cfg)
        }
        (Protocol::NoAssociation | Protocol::BenchmarkMultiband, Hopping::Random) => {
            tc_no_assoc(gamma, &d, cfg)
        }
        (Protocol::BandConstrained, Hopping::Random)
            if spec.band_probs.is_none() && tc_band_constrained(gamma, &d, cfg, inc).is_ok() =>
        {
            tc_band_constrained(gamma, &d, cfg, inc)
        }
        _ => capacity_numeric(spec, gamma, cfg, inc),
    }
}

/// Invert the success probability in the device density: the largest density
/// whose success probability still meets `gamma`, scaled by `gamma`.
pub fn capacity_numeric(
    spec: &ProtocolSpec,
    gamma: f64,
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
) -> Result<Capacity> {
    check_gamma(gamma)?;
    let ps_at = |density: f64| -> Result<f64> {
        let mut c = cfg.clone();
        c.device_density = density;
        let d = crate::model::derive_params(&c, inc)?;
        success_probability(spec, &d, &c)
    };
    if ps_at(0.0)? < gamma {
        return Ok(Capacity {
            density: 0.0,
            clamped: true,
        });
    }
    let mut hi = cfg.device_density.max(1.0);
    let mut grow = 0;
    while ps_at(hi)? > gamma {
        hi *= 4.0;
        grow += 1;
        if grow > 100 {
            return Err(Error::domain(
                "success probability never drops below gamma; capacity unbounded in this model",
            ));
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ps_at(mid)? >= gamma {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-13 * hi {
            break;
        }
    }
    Ok(Capacity {
        density: gamma * 0.5 * (lo + hi),
        clamped: false,
    })
}

/// Exact success probability keeping the thermal-noise factor, evaluated by
/// adaptive quadrature of the radial integrals. Converges to the
/// interference-limited closed forms as the noise power vanishes.
///
/// Only the nearest-BS and no-association protocols have this form.
pub fn ps_exact_with_noise(
    d: &DerivedParams,
    cfg: &NetworkConfig,
    protocol: Protocol,
) -> Result<f64> {
    const TARGET: f64 = 1e-9;
    const EXPONENT_BUDGET: f64 = 40.0;

    if cfg.bs_density == 0.0 {
        return Ok(0.0);
    }
    let n = cfg.repetitions;
    let tau = cfg.sinr_threshold;
    let tau_d = tau.powf(d.delta);
    let total_inc = d.thinned_devices + d.inc_interference;
    let p_noise = d.p_hat_noise;
    let pi = std::f64::consts::PI;

    // Integration endpoint: both exponential factors are below e^-40 of their
    // peak, putting the discarded tail under 1e-12 of the running integral.
    let x_max = |a: f64, c: f64| -> f64 {
        let xa = if a > 0.0 {
            (EXPONENT_BUDGET / a).sqrt()
        } else {
            f64::INFINITY
        };
        let xc = if c > 0.0 {
            (EXPONENT_BUDGET / c).powf(1.0 / cfg.path_loss_exp)
        } else {
            f64::INFINITY
        };
        xa.min(xc)
    };

    let mut achieved = 0.0f64;
    let value = match protocol {
        Protocol::NearestBs => {
            let mut acc = Accum::default();
            acc.add(1.0); // k = 0 term integrates exactly to 1
            for k in 1..=n {
                let kf = k as f64;
                let a = pi * (cfg.bs_density + kf * tau_d / d.xi * total_inc);
                let c = kf * tau * p_noise;
                let up = x_max(a, c);
                let coeff = binomial(n, k) as f64 * 2.0 * pi * cfg.bs_density;
                let tol = (TARGET / coeff).max(1e-16 / (2.0 * a));
                let r = quad::integrate(
                    |x| x * (-a * x * x - c * x.powf(cfg.path_loss_exp)).exp(),
                    0.0,
                    up,
                    tol,
                );
                achieved += coeff * r.abs_error;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc.add(sign * coeff * r.value);
            }
            1.0 - acc.value()
        }
        Protocol::NoAssociation => {
            if total_inc == 0.0 && p_noise == 0.0 {
                return Ok(1.0); // no interference and no noise: always decodable
            }
            let mut acc = Accum::default();
            for k in 1..=n {
                let kf = k as f64;
                let a = pi * kf * tau_d / d.xi * total_inc;
                let c = kf * tau * p_noise;
                let up = x_max(a, c);
                let coeff = binomial(n, k) as f64 * 2.0 * pi * cfg.bs_density;
                let tol = (TARGET / coeff).max(if a > 0.0 { 1e-16 / (2.0 * a) } else { 1e-16 });
                let r = quad::integrate(
                    |x| x * (-a * x * x - c * x.powf(cfg.path_loss_exp)).exp(),
                    0.0,
                    up,
                    tol,
                );
                achieved += coeff * r.abs_error;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc.add(sign * coeff * r.value);
            }
            -acc.value().exp_m1()
        }
        other => {
            return Err(Error::domain(format!(
                "the exact-with-noise form covers nearest/no-association only, not {}",
                other.name()
            )))
        }
    };
    if achieved > TARGET {
        return Err(Error::Quadrature {
            achieved,
            requested: TARGET,
        });
    }
    Ok(clamp_prob(value))
}

/// SINR threshold (dB) at which `ps_at_tau` crosses one half: the median of
/// the best-SINR distribution. `None` when the curve never crosses.
pub fn median_sinr_db(ps_at_tau: impl Fn(f64) -> f64) -> Option<f64> {
    let mut lo_db = -60.0;
    let mut hi_db = 80.0;
    let p_lo = ps_at_tau(crate::model::db_to_linear(lo_db));
    let p_hi = ps_at_tau(crate::model::db_to_linear(hi_db));
    if p_lo < 0.5 || p_hi > 0.5 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo_db + hi_db);
        if ps_at_tau(crate::model::db_to_linear(mid)) >= 0.5 {
            lo_db = mid;
        } else {
            hi_db = mid;
        }
    }
    Some(0.5 * (lo_db + hi_db))
}
