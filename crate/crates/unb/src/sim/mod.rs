//! Monte Carlo engine: homogeneous PPP draws, asynchronous time-frequency
//! traffic with repetitions and hopping, Rayleigh fading, per-protocol SINR
//! evaluation, and success estimation with Wilson intervals.
//!
//! Realizations are independent work units executed in parallel. Each one
//! seeds its own counter-based substream from the master seed, so estimates
//! are bitwise identical regardless of the worker count.

mod engine;
mod stable;
mod traffic;

pub use engine::{
    build_realization, evaluate_packet, sample_hppp, PacketOutcome, RealizationPoints,
    SpatialRealization,
};
pub use traffic::{generate_traffic, overlap, Access, CarrierMode, FreqPlan, PacketMarks, Slotting, TxMark};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{derive_params, IncumbentConfig, NetworkConfig, ProtocolSpec};

/// Monte Carlo run settings.
#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Simulation disc radius around the typical device, km. Defaults to
    /// `10 / sqrt(pi * lambda_B)`, putting ~100 BSs in the region; the
    /// edge-effect check in the test suite justifies the truncation.
    pub region_radius: Option<f64>,
    pub realizations: usize,
    pub seed: u64,
    /// Include thermal noise in the SINR denominator (mirrors the reference
    /// measurement setup; the closed forms are interference-limited).
    pub noise_enabled: bool,
    pub access: Access,
    /// Record the per-realization best SINR, enabling CCDF/median extraction
    /// and whole-threshold-sweep reuse of one sample set.
    pub sinr_record: bool,
    /// Interference is sampled out to `far_field_factor * region_radius`:
    /// devices and BSs live on the inner disc, while the annulus beyond it
    /// contributes interferers drawn at the thinned density per repetition.
    /// Path loss makes the far field a near-deterministic floor, but cutting
    /// it at the inner disc visibly inflates high-SINR tail probabilities.
    /// Set to 1.0 to disable.
    pub far_field_factor: f64,
    /// How interferer processes relate across base stations (see
    /// [`InterferenceDraw`]).
    pub interference: InterferenceDraw,
}

/// Correlation structure of the interference across base stations.
///
/// The network has one physical set of interferers, seen by every BS through
/// independent fading: that is [`InterferenceDraw::Physical`]. The
/// closed-form broadcast expressions instead factorize the failure
/// probability across BSs, which amounts to every BS experiencing an
/// independent draw of the interferer field; they are therefore upper bounds
/// on the physical success probability, visibly so when co-channel
/// interferers are sparse. [`InterferenceDraw::PerBsIndependent`] realizes
/// that reference model exactly and is the oracle the closed forms are
/// validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterferenceDraw {
    /// One shared interferer realization per repetition, independent fading
    /// per link.
    Physical,
    /// Each BS sees an independent interferer field (fresh per repetition
    /// under random hopping, common across repetitions under PN hopping).
    PerBsIndependent,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            region_radius: None,
            realizations: 10_000,
            seed: 7,
            noise_enabled: true,
            access: Access::unslotted(),
            sinr_record: false,
            far_field_factor: 6.0,
            interference: InterferenceDraw::Physical,
        }
    }
}

impl SimConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_realizations(mut self, n: usize) -> Self {
        self.realizations = n;
        self
    }

    pub fn recording(mut self) -> Self {
        self.sinr_record = true;
        self
    }

    /// Effective disc radius for a BS density.
    pub fn radius_for(&self, bs_density: f64) -> f64 {
        self.region_radius.unwrap_or_else(|| {
            if bs_density > 0.0 {
                10.0 / (std::f64::consts::PI * bs_density).sqrt()
            } else {
                1.0
            }
        })
    }
}

/// Estimated success probability with its 95% Wilson interval.
#[derive(Debug, Clone)]
pub struct SuccessEstimate {
    pub p_hat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub n_realizations: usize,
    /// Realizations with no base station anywhere in the region (counted as
    /// failures, tallied separately).
    pub no_bs_realizations: usize,
    /// Best-SINR sample per realization, when recording was requested.
    pub max_sinr: Option<Vec<f64>>,
}

impl SuccessEstimate {
    /// Width of the confidence interval.
    pub fn width(&self) -> f64 {
        self.wilson_hi - self.wilson_lo
    }

    /// Re-threshold recorded samples at a different decoding threshold.
    pub fn at_threshold(&self, tau: f64) -> Option<SuccessEstimate> {
        let samples = self.max_sinr.as_ref()?;
        let successes = samples.iter().filter(|s| **s >= tau).count();
        let (lo, hi) = wilson_interval(successes as u64, samples.len() as u64);
        Some(SuccessEstimate {
            p_hat: successes as f64 / samples.len() as f64,
            wilson_lo: lo,
            wilson_hi: hi,
            n_realizations: samples.len(),
            no_bs_realizations: self.no_bs_realizations,
            max_sinr: None,
        })
    }

    /// Empirical quantile of the recorded best-SINR samples, in dB: the value
    /// with fraction `q` of the samples below it (0.5 gives the median SINR,
    /// 0.05 the cell edge).
    pub fn sinr_quantile_db(&self, q: f64) -> Option<f64> {
        let samples = self.max_sinr.as_ref()?;
        if samples.is_empty() {
            return None;
        }
        let mut sorted = samples.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let idx = (q * (sorted.len() - 1) as f64).round() as usize;
        Some(crate::model::linear_to_db(sorted[idx]))
    }
}

/// 95% Wilson score interval for `successes` out of `n` trials.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054f64;
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn validate_sim(cfg: &NetworkConfig, sim: &SimConfig) -> Result<()> {
    if sim.realizations == 0 {
        return Err(Error::domain("realizations must be at least 1"));
    }
    let radius = sim.radius_for(cfg.bs_density);
    if !(radius > 0.0) {
        return Err(Error::domain("region radius must be positive"));
    }
    let window = 2.0 * cfg.repetitions as f64 * cfg.tx_duration;
    if window > cfg.report_period {
        return Err(Error::domain(
            "report period too short: the candidate window 2*N*T exceeds T_tot",
        ));
    }
    let area = std::f64::consts::PI * radius * radius;
    if cfg.bs_density * area > 1e6 {
        return Err(Error::domain(
            "simulation too large: expected BS count exceeds 10^6; shrink the region",
        ));
    }
    let sampler = traffic::CandidateSampler::new(cfg, sim.access);
    if sampler.mean_candidates(cfg.device_density, area) > 5e7 {
        return Err(Error::domain(
            "simulation too large: expected candidate interferer count exceeds 5*10^7",
        ));
    }
    Ok(())
}

/// Estimate the success probability of `spec` by Monte Carlo.
///
/// Deterministic for a fixed seed regardless of the rayon worker count:
/// realization `i` always consumes stream `i` of the master seed.
pub fn run(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    spec: &ProtocolSpec,
    sim: &SimConfig,
) -> Result<SuccessEstimate> {
    crate::model::validate(cfg, inc, Some(spec))?;
    validate_sim(cfg, sim)?;
    let d = derive_params(cfg, inc)?;
    let radius = sim.radius_for(cfg.bs_density);

    let nearest_only = spec.protocol == crate::model::Protocol::NearestBs;
    let outcomes: Vec<PacketOutcome> = (0..sim.realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
            rng.set_stream(i as u64);
            if nearest_only {
                // Only the nearest BS's interference column is ever read.
                engine::realize_nearest_outcome(cfg, inc, &d, spec, sim, radius, &mut rng)
            } else {
                let real = build_realization(cfg, inc, &d, spec, sim, radius, &mut rng, false);
                evaluate_packet(&real, spec.protocol, cfg.sinr_threshold)
                    .expect("mode chosen from the protocol is always compatible")
            }
        })
        .collect();

    let successes = outcomes.iter().filter(|o| o.success).count();
    let no_bs = outcomes.iter().filter(|o| o.no_bs).count();
    let (lo, hi) = wilson_interval(successes as u64, sim.realizations as u64);
    Ok(SuccessEstimate {
        p_hat: successes as f64 / sim.realizations as f64,
        wilson_lo: lo,
        wilson_hi: hi,
        n_realizations: sim.realizations,
        no_bs_realizations: no_bs,
        max_sinr: sim
            .sinr_record
            .then(|| outcomes.iter().map(|o| o.max_sinr).collect()),
    })
}

/// Aggregate thinning diagnostics: the empirical density of interfering UNB
/// signals per repetition, for comparison against the thinned-process value.
pub fn empirical_interferer_density(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    spec: &ProtocolSpec,
    sim: &SimConfig,
) -> Result<f64> {
    if sim.interference != InterferenceDraw::Physical {
        return Err(Error::domain(
            "thinning diagnostics require the physical interference mode",
        ));
    }
    crate::model::validate(cfg, inc, Some(spec))?;
    validate_sim(cfg, sim)?;
    let d = derive_params(cfg, inc)?;
    let radius = sim.radius_for(cfg.bs_density);
    let area = std::f64::consts::PI * radius * radius;

    let total_hits: u64 = (0..sim.realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
            rng.set_stream(i as u64);
            let real = build_realization(cfg, inc, &d, spec, sim, radius, &mut rng, false);
            real.unb_hits_per_rep.iter().map(|h| *h as u64).sum::<u64>()
        })
        .sum();
    let reps = sim.realizations as f64 * cfg.repetitions as f64;
    Ok(total_hits as f64 / (reps * area))
}

/// Serialize one realization as line-delimited records for debugging. The
/// schema is documented in the README.
pub fn dump_realization(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    spec: &ProtocolSpec,
    sim: &SimConfig,
    out: &mut impl std::io::Write,
) -> Result<()> {
    crate::model::validate(cfg, inc, Some(spec))?;
    validate_sim(cfg, sim)?;
    let d = derive_params(cfg, inc)?;
    let radius = sim.radius_for(cfg.bs_density);
    let mut rng = ChaCha8Rng::seed_from_u64(sim.seed);
    rng.set_stream(0);
    let real = build_realization(cfg, inc, &d, spec, sim, radius, &mut rng, true);

    writeln!(out, "region radius_km={radius}")?;
    for ((x, y), band) in real.bs_positions.iter().zip(&real.bs_bands) {
        writeln!(out, "bs x={x} y={y} band={band}")?;
    }
    for (rep, tx) in real.typical_reps.iter().enumerate() {
        writeln!(
            out,
            "typical rep={rep} t={} carrier_hz={} band={}",
            tx.time, tx.carrier, tx.band
        )?;
    }
    if let Some(points) = &real.points {
        for (x, y, rep) in &points.devices {
            writeln!(out, "interferer x={x} y={y} rep={rep}")?;
        }
        for (x, y, rep) in &points.incumbents {
            writeln!(out, "incumbent x={x} y={y} rep={rep}")?;
        }
    }
    Ok(())
}
