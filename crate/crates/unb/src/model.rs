//! Network configuration, incumbent models, and the derived quantities that
//! every closed-form expression and the simulator consume.
//!
//! Unit convention: Hz, seconds, watts, km, densities per km². dB and dBm
//! values are converted at the configuration boundary, never inside the math.

use crate::error::{Error, Result};

/// Physical and protocol parameters of the UNB network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    /// Bandwidth of one UNB signal, Hz (`b`).
    pub signal_bw: f64,
    /// Bandwidth of one multiplexing band, Hz (`B`).
    pub band_bw: f64,
    /// Number of multiplexing bands (`M`).
    pub bands: u32,
    /// Transmissions per packet (`N`).
    pub repetitions: u32,
    /// Unique packets per reporting period (`K`).
    pub packets_per_period: u32,
    /// Reporting period, seconds (`T_tot`).
    pub report_period: f64,
    /// Duration of a single transmission, seconds (`T`).
    pub tx_duration: f64,
    /// UNB transmit power, watts.
    pub tx_power: f64,
    /// Noise power over `signal_bw`, watts.
    pub noise_power: f64,
    /// Base-station density, per km².
    pub bs_density: f64,
    /// IoT device density, per km².
    pub device_density: f64,
    /// Path-loss exponent, must exceed 2.
    pub path_loss_exp: f64,
    /// SINR decoding threshold, linear.
    pub sinr_threshold: f64,
    /// Time overlap factor: 1 slotted, 2 unslotted, in between for partial sync.
    pub beta_time: f64,
    /// Frequency overlap factor, same convention.
    pub beta_freq: f64,
    /// Nominal center frequency, Hz. Simulator bookkeeping only.
    pub center_freq: f64,
}

/// Interfering (incumbent) network model.
///
/// Densities are effective active densities: temporal activity of the
/// incumbents is already folded in.
#[derive(Debug, Clone, PartialEq)]
pub enum IncumbentConfig {
    /// One wideband network whose occupied bandwidth may span any part of the
    /// spectrum, including all of it.
    TypeI {
        /// Incumbent transmit power over its own bandwidth, watts.
        power: f64,
        /// Occupied bandwidth, Hz. May exceed `bands * band_bw`.
        bandwidth: f64,
        /// Effective active density, per km².
        density: f64,
    },
    /// One (possibly different) network per multiplexing band.
    TypeII {
        /// Incumbent transmit power over its own bandwidth, watts.
        power: f64,
        /// Per-band (occupied bandwidth Hz, effective density per km²); length
        /// must equal the number of bands, with each bandwidth at most `band_bw`.
        bands: Vec<(f64, f64)>,
    },
}

impl IncumbentConfig {
    /// Incumbent-free network, expressed as a Type-I incumbent of zero density.
    pub fn none(band_bw: f64) -> Self {
        IncumbentConfig::TypeI {
            power: 0.0,
            bandwidth: band_bw,
            density: 0.0,
        }
    }
}

/// Which access protocol a device follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Device communicates only with its nearest BS.
    NearestBs,
    /// Broadcast mode: any BS may decode any repetition (Sigfox-like).
    NoAssociation,
    /// Every BS listens to all bands; devices hop over the whole spectrum.
    BenchmarkMultiband,
    /// Device sends all repetitions in one randomly selected band; each BS
    /// listens to one band.
    BandConstrained,
    /// Each repetition may land in a different band; each BS listens to one.
    BandHopped,
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::NearestBs => "nearest",
            Protocol::NoAssociation => "sigfox",
            Protocol::BenchmarkMultiband => "benchmark",
            Protocol::BandConstrained => "band-constrained",
            Protocol::BandHopped => "band-hopped",
        }
    }
}

/// Frequency-hopping scheme across a packet's repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hopping {
    /// Each repetition draws an independent carrier.
    Random,
    /// One orthogonal pattern drawn per packet; devices sharing a pattern
    /// collide on every repetition.
    Pn,
}

/// Protocol selection plus optional BS band-selection probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    pub protocol: Protocol,
    pub hopping: Hopping,
    /// Band-selection probability vector over the `M` bands. Only meaningful
    /// for `BandConstrained` / `BandHopped`; `None` means uniform.
    pub band_probs: Option<Vec<f64>>,
}

impl ProtocolSpec {
    pub fn new(protocol: Protocol) -> Self {
        ProtocolSpec {
            protocol,
            hopping: Hopping::Random,
            band_probs: None,
        }
    }

    pub fn pn(protocol: Protocol) -> Self {
        ProtocolSpec {
            protocol,
            hopping: Hopping::Pn,
            band_probs: None,
        }
    }

    pub fn with_band_probs(protocol: Protocol, p: Vec<f64>) -> Self {
        ProtocolSpec {
            protocol,
            hopping: Hopping::Random,
            band_probs: Some(p),
        }
    }

    /// Band-selection probabilities, defaulting to uniform over `m` bands.
    pub fn band_probs_or_uniform(&self, m: u32) -> Vec<f64> {
        self.band_probs
            .clone()
            .unwrap_or_else(|| vec![1.0 / m as f64; m as usize])
    }
}

/// Quantities derived from a (validated) configuration pair. All pure
/// functions of the inputs; construction via [`derive_params`].
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams {
    /// Per-device transmission activity fraction `K*T/T_tot`.
    pub activity: f64,
    /// `2 / alpha`.
    pub delta: f64,
    /// `sin(pi*delta) / (delta*pi)`.
    pub xi: f64,
    /// Noise-to-signal power ratio `P_N / P_IoT`.
    pub p_hat_noise: f64,
    /// Incumbent-to-signal power ratio per band, `(P_I * b / B_I) / P_IoT`.
    /// One entry for Type-I, one per band for Type-II.
    pub p_hat_inc: Vec<f64>,
    /// Density of co-channel interfering UNB devices per repetition.
    pub thinned_devices: f64,
    /// Effective interfering-incumbent density averaged over the spectrum.
    pub thinned_incumbents: f64,
    /// Incumbent density normalized to a single band's bandwidth.
    pub incumbents_one_band: f64,
    /// Power-weighted incumbent interference term entering the SINR
    /// denominators: mean over bands of `p_hat_inc^delta * (per-band density)`.
    pub inc_interference: f64,
    /// Per-band power-weighted incumbent interference terms, length `M`.
    pub band_inc_interference: Vec<f64>,
    /// Power-weighted counterpart of `incumbents_one_band`.
    pub inc_interference_one_band: f64,
}

/// Convert dB to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear ratio to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Convert dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

fn check(violations: &mut Vec<String>, ok: bool, msg: &str) {
    if !ok {
        violations.push(msg.to_string());
    }
}

/// Check every configuration invariant. Returns the full list of violations,
/// empty when the configuration is valid.
pub fn violations(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    proto: Option<&ProtocolSpec>,
) -> Vec<String> {
    let mut v = Vec::new();

    check(&mut v, cfg.signal_bw > 0.0, "signal_bw (b) must be positive");
    check(
        &mut v,
        cfg.signal_bw < cfg.band_bw,
        "signal_bw (b) must be smaller than band_bw (B)",
    );
    check(&mut v, cfg.path_loss_exp > 2.0, "path_loss_exp (alpha) must exceed 2");
    check(&mut v, cfg.sinr_threshold > 0.0, "sinr_threshold (tau) must be positive");
    check(&mut v, cfg.bands >= 1, "bands (M) must be at least 1");
    check(&mut v, cfg.repetitions >= 1, "repetitions (N) must be at least 1");
    check(
        &mut v,
        cfg.repetitions <= 60,
        "repetitions (N) above 60 are rejected: the alternating sums lose accuracy",
    );
    check(&mut v, cfg.packets_per_period >= 1, "packets_per_period (K) must be at least 1");
    check(&mut v, cfg.tx_duration > 0.0, "tx_duration (T) must be positive");
    check(&mut v, cfg.report_period > 0.0, "report_period (T_tot) must be positive");
    check(&mut v, cfg.tx_power > 0.0, "tx_power (P_IoT) must be positive");
    check(&mut v, cfg.noise_power >= 0.0, "noise_power (P_N) must be nonnegative");
    check(&mut v, cfg.bs_density >= 0.0, "bs_density (lambda_B) must be nonnegative");
    check(&mut v, cfg.device_density >= 0.0, "device_density (lambda_IoT) must be nonnegative");
    check(
        &mut v,
        (1.0..=2.0).contains(&cfg.beta_time),
        "beta_time must lie in [1, 2]",
    );
    check(
        &mut v,
        (1.0..=2.0).contains(&cfg.beta_freq),
        "beta_freq must lie in [1, 2]",
    );
    check(
        &mut v,
        cfg.packets_per_period as f64 * cfg.tx_duration <= cfg.report_period,
        "duty cycle infeasible: K*T must not exceed T_tot",
    );
    if cfg.tx_duration > 0.0 && cfg.report_period > 0.0 {
        let thin = cfg.repetitions as f64
            * cfg.beta_time
            * (cfg.packets_per_period as f64 * cfg.tx_duration / cfg.report_period)
            * cfg.beta_freq
            * cfg.signal_bw
            / (cfg.bands as f64 * cfg.band_bw);
        check(
            &mut v,
            thin <= 1.0,
            "thinning factor N*beta_T*lambda_T*beta_F*b/(M*B) exceeds 1; the interference model does not apply",
        );
    }

    match inc {
        IncumbentConfig::TypeI {
            power,
            bandwidth,
            density,
        } => {
            check(&mut v, *power >= 0.0, "incumbent power (P_I) must be nonnegative");
            check(&mut v, *bandwidth > 0.0, "incumbent bandwidth (B_I0) must be positive");
            check(&mut v, *density >= 0.0, "incumbent density (lambda_I0) must be nonnegative");
        }
        IncumbentConfig::TypeII { power, bands } => {
            check(&mut v, *power >= 0.0, "incumbent power (P_I) must be nonnegative");
            check(
                &mut v,
                bands.len() == cfg.bands as usize,
                "Type-II incumbent list length must equal the number of bands (M)",
            );
            for (i, (bw, dens)) in bands.iter().enumerate() {
                check(
                    &mut v,
                    *bw >= cfg.signal_bw,
                    &format!("incumbent bandwidth B_I{} must be at least signal_bw (b)", i + 1),
                );
                check(
                    &mut v,
                    *bw <= cfg.band_bw,
                    &format!("incumbent bandwidth B_I{} must not exceed band_bw (B)", i + 1),
                );
                check(
                    &mut v,
                    *dens >= 0.0,
                    &format!("incumbent density lambda_I{} must be nonnegative", i + 1),
                );
            }
        }
    }

    if let Some(spec) = proto {
        let banded = matches!(
            spec.protocol,
            Protocol::BandConstrained | Protocol::BandHopped
        );
        if let Some(p) = &spec.band_probs {
            check(
                &mut v,
                banded,
                "band-selection probabilities only apply to band-constrained/band-hopped protocols",
            );
            check(
                &mut v,
                p.len() == cfg.bands as usize,
                "band-selection probability vector length must equal the number of bands (M)",
            );
            check(&mut v, p.iter().all(|x| *x >= 0.0), "band-selection probabilities must be nonnegative");
            let sum: f64 = p.iter().sum();
            check(
                &mut v,
                (sum - 1.0).abs() <= 1e-9,
                "band-selection probabilities must sum to 1",
            );
        }
        if spec.hopping == Hopping::Pn {
            check(
                &mut v,
                matches!(spec.protocol, Protocol::NearestBs | Protocol::NoAssociation),
                "PN hopping is only defined for nearest-BS and no-association protocols",
            );
        }
    }

    v
}

/// Validate a configuration, returning every violated invariant at once.
pub fn validate(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    proto: Option<&ProtocolSpec>,
) -> Result<()> {
    let v = violations(cfg, inc, proto);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation { violations: v })
    }
}

/// Compute every derived quantity from a validated configuration pair.
///
/// Deterministic and pure: identical inputs always produce identical output.
pub fn derive_params(cfg: &NetworkConfig, inc: &IncumbentConfig) -> Result<DerivedParams> {
    validate(cfg, inc, None)?;

    let m = cfg.bands as f64;
    let spectrum = m * cfg.band_bw;
    let activity =
        cfg.packets_per_period as f64 * cfg.tx_duration / cfg.report_period;
    let delta = 2.0 / cfg.path_loss_exp;
    let xi = (std::f64::consts::PI * delta).sin() / (delta * std::f64::consts::PI);
    let p_hat_noise = cfg.noise_power / cfg.tx_power;

    let thinned_devices = cfg.repetitions as f64
        * cfg.beta_time
        * activity
        * (cfg.beta_freq * cfg.signal_bw / spectrum)
        * cfg.device_density;

    let (p_hat_inc, thinned_incumbents, incumbents_one_band, band_inc, one_band_inc);
    match inc {
        IncumbentConfig::TypeI {
            power,
            bandwidth,
            density,
        } => {
            let p_hat = power * cfg.signal_bw / bandwidth / cfg.tx_power;
            let pd = p_hat.powf(delta);
            let occupancy = (bandwidth / spectrum).min(1.0);
            p_hat_inc = vec![p_hat];
            thinned_incumbents = occupancy * density;
            incumbents_one_band = bandwidth / cfg.band_bw * density;
            band_inc = vec![pd * occupancy * density; cfg.bands as usize];
            one_band_inc = pd * incumbents_one_band;
        }
        IncumbentConfig::TypeII { power, bands } => {
            let mut p_hats = Vec::with_capacity(bands.len());
            let mut q = Vec::with_capacity(bands.len());
            let mut lam = 0.0;
            let mut lam_one = 0.0;
            let mut q_one = 0.0;
            for (bw, dens) in bands {
                let p_hat = power * cfg.signal_bw / bw / cfg.tx_power;
                let pd = p_hat.powf(delta);
                let occupied = bw / cfg.band_bw * dens;
                p_hats.push(p_hat);
                q.push(pd * occupied);
                lam += occupied;
                lam_one += occupied;
                q_one += pd * occupied;
            }
            p_hat_inc = p_hats;
            thinned_incumbents = lam / m;
            incumbents_one_band = lam_one;
            band_inc = q;
            one_band_inc = q_one;
        }
    }
    let inc_interference = band_inc.iter().sum::<f64>() / m;

    Ok(DerivedParams {
        activity,
        delta,
        xi,
        p_hat_noise,
        p_hat_inc,
        thinned_devices,
        thinned_incumbents,
        incumbents_one_band,
        inc_interference,
        band_inc_interference: band_inc,
        inc_interference_one_band: one_band_inc,
    })
}

impl NetworkConfig {
    /// Total spectrum width `M * B`, Hz.
    pub fn spectrum(&self) -> f64 {
        self.bands as f64 * self.band_bw
    }

    /// Replace the SINR threshold, in dB.
    pub fn with_tau_db(mut self, tau_db: f64) -> Self {
        self.sinr_threshold = db_to_linear(tau_db);
        self
    }
}
