//! Per-realization world building and SINR evaluation.
//!
//! One realization draws the BS process, the typical packet's marks, the
//! interfering UNB transmissions (through the windowed candidate sampler),
//! and fresh incumbent processes per repetition, then precomputes the
//! repetition-by-BS SINR matrix that every protocol's decode rule reads.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::error::{Error, Result};
use crate::model::{DerivedParams, Hopping, IncumbentConfig, NetworkConfig, Protocol, ProtocolSpec};

use super::stable::field_interference;
use super::traffic::{
    packet_marks, CandidatePacket, CandidateSampler, CarrierMode, FreqPlan, PacketMarks, Slotting,
    TxMark,
};
use super::{InterferenceDraw, SimConfig};

/// Draw a homogeneous Poisson point process on a disc of the given radius:
/// Poisson count with mean `density * pi * radius^2`, positions uniform.
pub fn sample_hppp(density: f64, radius: f64, rng: &mut impl Rng) -> Vec<(f64, f64)> {
    let mean = density * std::f64::consts::PI * radius * radius;
    if mean <= 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    (0..count)
        .map(|_| {
            let r = radius * rng.random_range(0.0f64..1.0).sqrt();
            let theta = rng.random_range(0.0..2.0 * std::f64::consts::PI);
            (r * theta.cos(), r * theta.sin())
        })
        .collect()
}

/// Diagnostic point records, kept only when a dump is requested.
#[derive(Debug, Clone, Default)]
pub struct RealizationPoints {
    /// Interfering UNB device positions per repetition hit (x, y, repetition).
    pub devices: Vec<(f64, f64, u32)>,
    /// Interfering incumbent positions (x, y, repetition).
    pub incumbents: Vec<(f64, f64, u32)>,
}

/// One Monte Carlo draw, reduced to what every decode rule needs.
#[derive(Debug, Clone)]
pub struct SpatialRealization {
    pub radius: f64,
    pub bs_positions: Vec<(f64, f64)>,
    /// Band each BS listens to (used by the banded protocols).
    pub bs_bands: Vec<u32>,
    pub typical_start: f64,
    pub typical_reps: Vec<TxMark>,
    pub typical_pattern: Option<u32>,
    /// Band the typical packet is constrained to, when applicable.
    pub typical_band: Option<u32>,
    /// SINR of repetition `n` at BS `j`.
    pub sinr: Vec<Vec<f64>>,
    /// Interfering UNB signal count per repetition (thinning diagnostics;
    /// physical interference mode only).
    pub unb_hits_per_rep: Vec<u32>,
    /// Carrier mode the traffic was drawn under; decode rules must match.
    pub mode: CarrierMode,
    pub points: Option<RealizationPoints>,
}

/// Decode outcome of the typical packet under one protocol.
#[derive(Debug, Clone, Copy)]
pub struct PacketOutcome {
    pub success: bool,
    /// Largest SINR over the eligible (repetition, BS) pairs; 0 when none.
    pub max_sinr: f64,
    /// No base station was present in the region at all.
    pub no_bs: bool,
}

pub(crate) fn carrier_mode(spec: &ProtocolSpec) -> CarrierMode {
    match (spec.protocol, spec.hopping) {
        (_, Hopping::Pn) => CarrierMode::PatternPerPacket,
        (Protocol::BandConstrained, _) => CarrierMode::BandPerPacket,
        _ => CarrierMode::FullSpan,
    }
}

/// Per-band incumbent hit density and power ratio: the density of active
/// incumbents whose emission covers the typical carrier in that band.
fn incumbent_hit_params(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    d: &DerivedParams,
    band: u32,
) -> (f64, f64) {
    match inc {
        IncumbentConfig::TypeI {
            density, bandwidth, ..
        } => {
            let occ = (bandwidth / cfg.spectrum()).min(1.0);
            (occ * density, d.p_hat_inc[0])
        }
        IncumbentConfig::TypeII { bands, .. } => {
            let (bw, dens) = bands[band as usize];
            (bw / cfg.band_bw * dens, d.p_hat_inc[band as usize])
        }
    }
}

/// Accumulate physical interference (shared interferer realization, per-link
/// fading) at the given BS positions. Returns the per-repetition-per-BS
/// interference, the UNB hit counts, and optional point records.
#[allow(clippy::too_many_arguments)]
fn physical_interference(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    d: &DerivedParams,
    sim: &SimConfig,
    radius: f64,
    mode: CarrierMode,
    typical: &PacketMarks,
    typ_start: f64,
    typ_slot: Option<i64>,
    bss: &[(f64, f64)],
    keep_points: bool,
    rng: &mut impl Rng,
) -> (Vec<Vec<f64>>, Vec<u32>, Option<RealizationPoints>) {
    let plan = FreqPlan::new(cfg);
    let n = cfg.repetitions as usize;
    let n_bs = bss.len();
    let half_alpha = cfg.path_loss_exp / 2.0;
    let area = std::f64::consts::PI * radius * radius;

    let mut interference = vec![vec![0.0f64; n_bs]; n];
    let mut unb_hits = vec![0u32; n];
    let mut points = keep_points.then(RealizationPoints::default);

    // Interfering UNB devices through the windowed candidate sampler.
    let sampler = CandidateSampler::new(cfg, sim.access);
    let n_cand = sampler.draw_count(cfg.device_density, area, rng);
    let mut dist_pow = vec![0.0f64; n_bs];
    for _ in 0..n_cand {
        let n_pkts = sampler.draw_packet_count(rng);
        let mut packets: Vec<CandidatePacket> = Vec::with_capacity(n_pkts as usize);
        for _ in 0..n_pkts {
            let (offset, rel_slot) = sampler.draw_offset(rng);
            let (start, slot) = match rel_slot {
                Some(rs) => (
                    typ_start + rs as f64 * cfg.tx_duration,
                    typ_slot.map(|t| t + rs),
                ),
                None => (typ_start + offset, None),
            };
            packets.push(CandidatePacket {
                marks: packet_marks(cfg, &plan, sim.access, mode, start, slot, rng),
            });
        }

        // Hits: (packet, repetition) pairs under PN (a shared pattern with any
        // span overlap collides on every repetition), or per-transmission
        // (packet, tx, repetition) triples otherwise.
        let mut pn_hits: Vec<(usize, usize)> = Vec::new();
        let mut tx_hits: Vec<(usize, usize, usize)> = Vec::new();
        match mode {
            CarrierMode::PatternPerPacket => {
                for (pi, pkt) in packets.iter().enumerate() {
                    if pkt.marks.pattern != typical.pattern {
                        continue;
                    }
                    let span_overlap = match (pkt.marks.txs[0].slot, typ_slot) {
                        (Some(s), Some(t)) => {
                            let diff = s - t;
                            diff > -(cfg.repetitions as i64) && diff < cfg.repetitions as i64
                        }
                        _ => {
                            (pkt.marks.start - typ_start).abs()
                                < cfg.repetitions as f64 * cfg.tx_duration
                        }
                    };
                    if span_overlap {
                        for rep in 0..n {
                            pn_hits.push((pi, rep));
                        }
                    }
                }
            }
            _ => {
                for (pi, pkt) in packets.iter().enumerate() {
                    for (ti, tx) in pkt.marks.txs.iter().enumerate() {
                        for (rep, typ_tx) in typical.txs.iter().enumerate() {
                            if super::traffic::overlap(tx, typ_tx, cfg.tx_duration, cfg.signal_bw)
                            {
                                tx_hits.push((pi, ti, rep));
                            }
                        }
                    }
                }
            }
        }
        if pn_hits.is_empty() && tx_hits.is_empty() {
            continue;
        }

        // Position and path loss drawn once per interfering device.
        let r = radius * rng.random_range(0.0f64..1.0).sqrt();
        let theta = rng.random_range(0.0..2.0 * std::f64::consts::PI);
        let (dx, dy) = (r * theta.cos(), r * theta.sin());
        for (j, (bx, by)) in bss.iter().enumerate() {
            let d2 = (dx - bx) * (dx - bx) + (dy - by) * (dy - by);
            dist_pow[j] = d2.powf(-half_alpha);
        }

        match mode {
            CarrierMode::PatternPerPacket => {
                // One channel for the whole packet: fading is drawn per BS and
                // shared across the repetitions it collides with.
                let mut seen_packet = vec![false; packets.len()];
                let mut fades = vec![0.0f64; n_bs];
                for (pi, rep) in pn_hits {
                    if !seen_packet[pi] {
                        for f in fades.iter_mut() {
                            *f = Exp1.sample(rng);
                        }
                        seen_packet[pi] = true;
                    }
                    unb_hits[rep] += 1;
                    if let Some(p) = points.as_mut() {
                        p.devices.push((dx, dy, rep as u32));
                    }
                    for j in 0..n_bs {
                        interference[rep][j] += fades[j] * dist_pow[j];
                    }
                }
            }
            _ => {
                for (_pi, _ti, rep) in tx_hits {
                    unb_hits[rep] += 1;
                    if let Some(p) = points.as_mut() {
                        p.devices.push((dx, dy, rep as u32));
                    }
                    for j in 0..n_bs {
                        let fade: f64 = Exp1.sample(rng);
                        interference[rep][j] += fade * dist_pow[j];
                    }
                }
            }
        }
    }

    // Far-field UNB interference: beyond the device disc the thinned process
    // loses its cross-repetition structure, so the annulus is drawn directly
    // at the thinned density. PN keeps one common set across repetitions,
    // random hopping refreshes it per repetition.
    let r_out = radius * sim.far_field_factor.max(1.0);
    let annulus_area = std::f64::consts::PI * (r_out * r_out - radius * radius);
    if annulus_area > 0.0 && d.thinned_devices > 0.0 && n_bs > 0 {
        let mean = d.thinned_devices * annulus_area;
        let shared_reps: Vec<Vec<usize>> = match mode {
            CarrierMode::PatternPerPacket => vec![(0..n).collect()],
            _ => (0..n).map(|rep| vec![rep]).collect(),
        };
        for reps in shared_reps {
            let count = Poisson::new(mean).expect("positive mean").sample(rng) as u64;
            for _ in 0..count {
                let r = (radius * radius
                    + rng.random_range(0.0f64..1.0) * (r_out * r_out - radius * radius))
                    .sqrt();
                let theta = rng.random_range(0.0..2.0 * std::f64::consts::PI);
                let (dx, dy) = (r * theta.cos(), r * theta.sin());
                for (j, (bx, by)) in bss.iter().enumerate() {
                    let d2 = (dx - bx) * (dx - bx) + (dy - by) * (dy - by);
                    let fade: f64 = Exp1.sample(rng);
                    let contrib = fade * d2.powf(-half_alpha);
                    for &rep in &reps {
                        interference[rep][j] += contrib;
                    }
                }
            }
        }
    }

    // Incumbents: a fresh draw per repetition at the hit density of that
    // repetition's band. Their field is truncated at twice the region radius:
    // a far incumbent contributes `P_hat` times less than a far co-channel
    // device, so the truncation is second order next to the UNB far field.
    let r_inc = radius * sim.far_field_factor.max(1.0).min(2.0);
    for (rep, typ_tx) in typical.txs.iter().enumerate() {
        let (hit_density, p_hat) = incumbent_hit_params(cfg, inc, d, typ_tx.band);
        for (ix, iy) in sample_hppp(hit_density, r_inc, rng) {
            if let Some(p) = points.as_mut() {
                p.incumbents.push((ix, iy, rep as u32));
            }
            for (j, (bx, by)) in bss.iter().enumerate() {
                let d2 = (ix - bx) * (ix - bx) + (iy - by) * (iy - by);
                let fade: f64 = Exp1.sample(rng);
                interference[rep][j] += p_hat * fade * d2.powf(-half_alpha);
            }
        }
    }

    (interference, unb_hits, points)
}

/// Interference under the per-BS independent reference model: every BS sees
/// its own infinite-plane interferer field, drawn exactly through the stable
/// law of Poisson shot noise. Fresh per repetition under random hopping,
/// common across repetitions under PN hopping; incumbents refresh per
/// repetition and BS.
fn reference_interference(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    d: &DerivedParams,
    mode: CarrierMode,
    typical: &PacketMarks,
    n_bs: usize,
    rng: &mut impl Rng,
) -> Vec<Vec<f64>> {
    let n = cfg.repetitions as usize;
    let mut interference = vec![vec![0.0f64; n_bs]; n];
    for j in 0..n_bs {
        match mode {
            CarrierMode::PatternPerPacket => {
                let shared = field_interference(d.thinned_devices, d.delta, d.xi, rng);
                for row in interference.iter_mut() {
                    row[j] += shared;
                }
            }
            _ => {
                for row in interference.iter_mut() {
                    row[j] += field_interference(d.thinned_devices, d.delta, d.xi, rng);
                }
            }
        }
        for (rep, typ_tx) in typical.txs.iter().enumerate() {
            let (hit_density, p_hat) = incumbent_hit_params(cfg, inc, d, typ_tx.band);
            interference[rep][j] += p_hat * field_interference(hit_density, d.delta, d.xi, rng);
        }
    }
    interference
}

fn draw_bs_bands(
    count: usize,
    band_probs: &[f64],
    bands: u32,
    rng: &mut impl Rng,
) -> Vec<u32> {
    (0..count)
        .map(|_| {
            let u: f64 = rng.random_range(0.0..1.0);
            let mut acc = 0.0;
            for (i, p) in band_probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    return i as u32;
                }
            }
            bands - 1
        })
        .collect()
}

fn draw_typical(
    cfg: &NetworkConfig,
    sim: &SimConfig,
    mode: CarrierMode,
    rng: &mut impl Rng,
) -> (PacketMarks, f64, Option<i64>) {
    let plan = FreqPlan::new(cfg);
    let slots = (cfg.report_period / cfg.tx_duration).floor() as i64;
    let (typ_start, typ_slot) = match sim.access.time {
        Slotting::Unslotted => (rng.random_range(0.0..cfg.report_period), None),
        Slotting::Slotted => {
            let s = rng.random_range(0..slots);
            (s as f64 * cfg.tx_duration, Some(s))
        }
    };
    let marks = packet_marks(cfg, &plan, sim.access, mode, typ_start, typ_slot, rng);
    (marks, typ_start, typ_slot)
}

/// Build one spatial realization for the given protocol's traffic mode.
#[allow(clippy::too_many_arguments)]
pub fn build_realization(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    d: &DerivedParams,
    spec: &ProtocolSpec,
    sim: &SimConfig,
    radius: f64,
    rng: &mut impl Rng,
    keep_points: bool,
) -> SpatialRealization {
    let n = cfg.repetitions as usize;
    let half_alpha = cfg.path_loss_exp / 2.0;
    let mode = carrier_mode(spec);

    // Base stations with their listening bands.
    let bs_positions = sample_hppp(cfg.bs_density, radius, rng);
    let n_bs = bs_positions.len();
    let band_probs = spec.band_probs_or_uniform(cfg.bands);
    let bs_bands = draw_bs_bands(n_bs, &band_probs, cfg.bands, rng);

    // Typical packet marks; its start is the time origin for interferers.
    let (typical, typ_start, typ_slot) = draw_typical(cfg, sim, mode, rng);

    let (interference, unb_hits, points) = match sim.interference {
        InterferenceDraw::Physical => physical_interference(
            cfg,
            inc,
            d,
            sim,
            radius,
            mode,
            &typical,
            typ_start,
            typ_slot,
            &bs_positions,
            keep_points,
            rng,
        ),
        InterferenceDraw::PerBsIndependent => (
            reference_interference(cfg, inc, d, mode, &typical, n_bs, rng),
            vec![0u32; n],
            None,
        ),
    };

    // Typical signal fading per (repetition, BS) and the SINR matrix.
    let noise = if sim.noise_enabled { d.p_hat_noise } else { 0.0 };
    let mut sinr = vec![vec![0.0f64; n_bs]; n];
    for (rep, row) in sinr.iter_mut().enumerate() {
        for (j, (bx, by)) in bs_positions.iter().enumerate() {
            let d2 = bx * bx + by * by;
            let h: f64 = Exp1.sample(rng);
            row[j] = h * d2.powf(-half_alpha) / (noise + interference[rep][j]);
        }
    }

    SpatialRealization {
        radius,
        bs_positions,
        bs_bands,
        typical_start: typ_start,
        typical_pattern: typical.pattern,
        typical_band: typical.band,
        typical_reps: typical.txs,
        sinr,
        unb_hits_per_rep: unb_hits,
        mode,
        points,
    }
}

/// Fast path for nearest-BS protocols: only the nearest BS's interference
/// column is ever read, so the field is accumulated at that one position.
pub(crate) fn realize_nearest_outcome(
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
    d: &DerivedParams,
    spec: &ProtocolSpec,
    sim: &SimConfig,
    radius: f64,
    rng: &mut impl Rng,
) -> PacketOutcome {
    let half_alpha = cfg.path_loss_exp / 2.0;
    let mode = carrier_mode(spec);
    let bs_positions = sample_hppp(cfg.bs_density, radius, rng);
    if bs_positions.is_empty() {
        return PacketOutcome {
            success: false,
            max_sinr: 0.0,
            no_bs: true,
        };
    }
    let nearest = bs_positions
        .iter()
        .copied()
        .min_by(|a, b| {
            (a.0 * a.0 + a.1 * a.1)
                .partial_cmp(&(b.0 * b.0 + b.1 * b.1))
                .unwrap()
        })
        .expect("nonempty");
    let (typical, typ_start, typ_slot) = draw_typical(cfg, sim, mode, rng);
    let interference = match sim.interference {
        InterferenceDraw::Physical => {
            physical_interference(
                cfg,
                inc,
                d,
                sim,
                radius,
                mode,
                &typical,
                typ_start,
                typ_slot,
                std::slice::from_ref(&nearest),
                false,
                rng,
            )
            .0
        }
        InterferenceDraw::PerBsIndependent => {
            reference_interference(cfg, inc, d, mode, &typical, 1, rng)
        }
    };
    let noise = if sim.noise_enabled { d.p_hat_noise } else { 0.0 };
    let d2 = nearest.0 * nearest.0 + nearest.1 * nearest.1;
    let mut max_sinr = 0.0f64;
    for row in &interference {
        let h: f64 = Exp1.sample(rng);
        max_sinr = max_sinr.max(h * d2.powf(-half_alpha) / (noise + row[0]));
    }
    PacketOutcome {
        success: max_sinr >= cfg.sinr_threshold,
        max_sinr,
        no_bs: false,
    }
}

/// Decode the typical packet under `protocol`: success when the maximum SINR
/// over the protocol's eligible (repetition, BS) pairs reaches `tau`.
pub fn evaluate_packet(
    real: &SpatialRealization,
    protocol: Protocol,
    tau: f64,
) -> Result<PacketOutcome> {
    let compatible = match protocol {
        Protocol::BandConstrained => real.mode == CarrierMode::BandPerPacket,
        Protocol::NearestBs | Protocol::NoAssociation => {
            real.mode == CarrierMode::FullSpan || real.mode == CarrierMode::PatternPerPacket
        }
        Protocol::BenchmarkMultiband | Protocol::BandHopped => real.mode == CarrierMode::FullSpan,
    };
    if !compatible {
        return Err(Error::domain(format!(
            "realization was drawn under {:?} traffic, incompatible with the {} protocol",
            real.mode,
            protocol.name()
        )));
    }
    let n_bs = real.bs_positions.len();
    if n_bs == 0 {
        return Ok(PacketOutcome {
            success: false,
            max_sinr: 0.0,
            no_bs: true,
        });
    }

    let mut max_sinr = 0.0f64;
    match protocol {
        Protocol::NearestBs => {
            let nearest = (0..n_bs)
                .min_by(|a, b| {
                    let da = dist2(real.bs_positions[*a]);
                    let db = dist2(real.bs_positions[*b]);
                    da.partial_cmp(&db).unwrap()
                })
                .expect("nonempty");
            for row in &real.sinr {
                max_sinr = max_sinr.max(row[nearest]);
            }
        }
        Protocol::NoAssociation | Protocol::BenchmarkMultiband => {
            for row in &real.sinr {
                for v in row {
                    max_sinr = max_sinr.max(*v);
                }
            }
        }
        Protocol::BandConstrained => {
            let band = real
                .typical_band
                .expect("band-constrained traffic carries its band");
            for row in &real.sinr {
                for (j, v) in row.iter().enumerate() {
                    if real.bs_bands[j] == band {
                        max_sinr = max_sinr.max(*v);
                    }
                }
            }
        }
        Protocol::BandHopped => {
            for (rep, row) in real.sinr.iter().enumerate() {
                let band = real.typical_reps[rep].band;
                for (j, v) in row.iter().enumerate() {
                    if real.bs_bands[j] == band {
                        max_sinr = max_sinr.max(*v);
                    }
                }
            }
        }
    }
    Ok(PacketOutcome {
        success: max_sinr >= tau,
        max_sinr,
        no_bs: false,
    })
}

fn dist2((x, y): (f64, f64)) -> f64 {
    x * x + y * y
}
