//! Time-frequency traffic marks, the overlap predicate, and the windowed
//! candidate sampler that makes drawing interferers from a multi-million
//! device process tractable without changing its distribution.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::model::NetworkConfig;

/// Slotted or unslotted access on one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slotting {
    Slotted,
    Unslotted,
}

/// Access discipline on the time and frequency axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Access {
    pub time: Slotting,
    pub freq: Slotting,
}

impl Access {
    pub fn unslotted() -> Self {
        Access {
            time: Slotting::Unslotted,
            freq: Slotting::Unslotted,
        }
    }

    pub fn slotted() -> Self {
        Access {
            time: Slotting::Slotted,
            freq: Slotting::Slotted,
        }
    }

    pub fn time_slotted() -> Self {
        Access {
            time: Slotting::Slotted,
            freq: Slotting::Unslotted,
        }
    }

    /// The overlap factors realized by this access case.
    pub fn betas(&self) -> (f64, f64) {
        let bt = if self.time == Slotting::Slotted { 1.0 } else { 2.0 };
        let bf = if self.freq == Slotting::Slotted { 1.0 } else { 2.0 };
        (bt, bf)
    }

    /// The access case matching a pair of overlap factors, when they are the
    /// exact slotted/unslotted endpoints.
    pub fn from_betas(beta_time: f64, beta_freq: f64) -> Option<Self> {
        let pick = |b: f64| match b {
            x if x == 1.0 => Some(Slotting::Slotted),
            x if x == 2.0 => Some(Slotting::Unslotted),
            _ => None,
        };
        Some(Access {
            time: pick(beta_time)?,
            freq: pick(beta_freq)?,
        })
    }
}

/// One transmission mark. Slot and channel indices are populated when the
/// corresponding axis is slotted, making boundary comparisons exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxMark {
    /// Start time, seconds (slot-aligned when time is slotted).
    pub time: f64,
    /// Carrier offset from the spectrum center, Hz (channel center when
    /// frequency is slotted).
    pub carrier: f64,
    /// Band index of the carrier.
    pub band: u32,
    pub slot: Option<i64>,
    pub channel: Option<i64>,
}

/// Marks of one packet: `N` back-to-back transmissions.
#[derive(Debug, Clone)]
pub struct PacketMarks {
    pub start: f64,
    /// Band the whole packet is constrained to, when applicable.
    pub band: Option<u32>,
    /// PN hopping pattern index, when applicable.
    pub pattern: Option<u32>,
    pub txs: Vec<TxMark>,
}

/// How a device picks carriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarrierMode {
    /// Every transmission hops independently over the whole spectrum.
    FullSpan,
    /// One uniformly chosen band per packet; hops inside it.
    BandPerPacket,
    /// One orthogonal pattern per packet on the channel grid; the pattern
    /// fixes the channel of every repetition.
    PatternPerPacket,
}

/// Frequency plan helpers shared by the traffic generator and the engine.
#[derive(Debug, Clone, Copy)]
pub struct FreqPlan {
    pub span: f64,
    pub band_bw: f64,
    pub bands: u32,
    pub signal_bw: f64,
    /// Channels per band on the slotted grid.
    pub channels_per_band: i64,
}

impl FreqPlan {
    pub fn new(cfg: &NetworkConfig) -> Self {
        FreqPlan {
            span: cfg.spectrum(),
            band_bw: cfg.band_bw,
            bands: cfg.bands,
            signal_bw: cfg.signal_bw,
            channels_per_band: (cfg.band_bw / cfg.signal_bw).floor() as i64,
        }
    }

    pub fn total_channels(&self) -> i64 {
        self.bands as i64 * self.channels_per_band
    }

    pub fn band_of_carrier(&self, carrier: f64) -> u32 {
        let idx = ((carrier + self.span / 2.0) / self.band_bw).floor() as i64;
        idx.clamp(0, self.bands as i64 - 1) as u32
    }

    pub fn carrier_of_channel(&self, channel: i64) -> f64 {
        let band = channel / self.channels_per_band;
        let local = channel % self.channels_per_band;
        -self.span / 2.0 + band as f64 * self.band_bw + (local as f64 + 0.5) * self.signal_bw
    }

    fn draw_carrier(&self, mode_band: Option<u32>, freq: Slotting, rng: &mut impl Rng) -> (f64, u32, Option<i64>) {
        match (mode_band, freq) {
            (None, Slotting::Unslotted) => {
                let f = rng.random_range(-self.span / 2.0..self.span / 2.0);
                (f, self.band_of_carrier(f), None)
            }
            (None, Slotting::Slotted) => {
                let ch = rng.random_range(0..self.total_channels());
                (
                    self.carrier_of_channel(ch),
                    (ch / self.channels_per_band) as u32,
                    Some(ch),
                )
            }
            (Some(band), Slotting::Unslotted) => {
                let lo = -self.span / 2.0 + band as f64 * self.band_bw;
                let f = rng.random_range(lo..lo + self.band_bw);
                (f, band, None)
            }
            (Some(band), Slotting::Slotted) => {
                let local = rng.random_range(0..self.channels_per_band);
                let ch = band as i64 * self.channels_per_band + local;
                (self.carrier_of_channel(ch), band, Some(ch))
            }
        }
    }
}

/// Build the `N` transmission marks of one packet starting at `start`.
pub(crate) fn packet_marks(
    cfg: &NetworkConfig,
    plan: &FreqPlan,
    access: Access,
    mode: CarrierMode,
    start: f64,
    start_slot: Option<i64>,
    rng: &mut impl Rng,
) -> PacketMarks {
    let n = cfg.repetitions;
    let band = match mode {
        CarrierMode::BandPerPacket => Some(rng.random_range(0..cfg.bands)),
        _ => None,
    };
    let pattern = match mode {
        CarrierMode::PatternPerPacket => Some(rng.random_range(0..plan.total_channels()) as u32),
        _ => None,
    };
    let mut txs = Vec::with_capacity(n as usize);
    for k in 0..n {
        let (carrier, tx_band, channel) = match mode {
            CarrierMode::FullSpan => plan.draw_carrier(None, access.freq, rng),
            CarrierMode::BandPerPacket => plan.draw_carrier(band, access.freq, rng),
            CarrierMode::PatternPerPacket => {
                // Flat orthogonal pattern: the pattern index is the channel.
                let ch = pattern.unwrap() as i64;
                (
                    plan.carrier_of_channel(ch),
                    (ch / plan.channels_per_band) as u32,
                    Some(ch),
                )
            }
        };
        txs.push(TxMark {
            time: start + k as f64 * cfg.tx_duration,
            carrier,
            band: tx_band,
            slot: start_slot.map(|s| s + k as i64),
            channel,
        });
    }
    PacketMarks {
        start,
        band,
        pattern,
        txs,
    }
}

/// Generate the `K` packets of one device over a reporting period. Starts are
/// uniform over the period (on the slot grid when time is slotted); the `N`
/// repetitions of each packet are consecutive in time.
pub fn generate_traffic(
    cfg: &NetworkConfig,
    mode: CarrierMode,
    access: Access,
    rng: &mut impl Rng,
) -> Vec<PacketMarks> {
    let plan = FreqPlan::new(cfg);
    let slots = (cfg.report_period / cfg.tx_duration).floor() as i64;
    (0..cfg.packets_per_period)
        .map(|_| match access.time {
            Slotting::Unslotted => {
                let start = rng.random_range(0.0..cfg.report_period);
                packet_marks(cfg, &plan, access, mode, start, None, rng)
            }
            Slotting::Slotted => {
                let slot = rng.random_range(0..slots);
                packet_marks(
                    cfg,
                    &plan,
                    access,
                    mode,
                    slot as f64 * cfg.tx_duration,
                    Some(slot),
                    rng,
                )
            }
        })
        .collect()
}

/// Whether two transmissions interfere: overlap in time and in frequency.
/// Boundaries are exclusive (a gap of exactly one transmission duration or
/// one signal bandwidth does not collide); slotted axes compare indices.
pub fn overlap(a: &TxMark, b: &TxMark, tx_duration: f64, signal_bw: f64) -> bool {
    let time_hit = match (a.slot, b.slot) {
        (Some(x), Some(y)) => x == y,
        _ => (a.time - b.time).abs() < tx_duration,
    };
    if !time_hit {
        return false;
    }
    match (a.channel, b.channel) {
        (Some(x), Some(y)) => x == y,
        _ => (a.carrier - b.carrier).abs() < signal_bw,
    }
}

/// A candidate interfering packet: one close enough in time to possibly
/// overlap the typical packet. Times are relative to the typical packet start.
#[derive(Debug, Clone)]
pub(crate) struct CandidatePacket {
    pub marks: PacketMarks,
}

/// Windowed sampler for interfering devices.
///
/// Restricting each device's `K` uniform packet starts to the window around
/// the typical packet that can produce any overlap is an exact operation on
/// the marked point process: devices with at least one candidate packet form
/// a thinned Poisson process, and the per-device packet count in the window
/// is the binomial conditioned on being nonzero.
pub(crate) struct CandidateSampler {
    window_prob: f64,
    device_prob: f64,
    packets: u32,
    slots: i64,
    rel_slot_lo: i64,
    rel_slot_hi: i64,
    window_half: f64,
}

impl CandidateSampler {
    pub fn new(cfg: &NetworkConfig, access: Access) -> Self {
        let n = cfg.repetitions as f64;
        let (window_prob, slots, rel_lo, rel_hi, window_half) = match access.time {
            Slotting::Unslotted => {
                let half = n * cfg.tx_duration;
                let w = (2.0 * half / cfg.report_period).min(1.0);
                (w, 0, 0, 0, half)
            }
            Slotting::Slotted => {
                let slots = (cfg.report_period / cfg.tx_duration).floor() as i64;
                let lo = -(cfg.repetitions as i64 - 1);
                let hi = cfg.repetitions as i64 - 1;
                let w = ((hi - lo + 1) as f64 / slots as f64).min(1.0);
                (w, slots, lo, hi, 0.0)
            }
        };
        let k = cfg.packets_per_period;
        let device_prob = 1.0 - (1.0 - window_prob).powi(k as i32);
        CandidateSampler {
            window_prob,
            device_prob,
            packets: k,
            slots,
            rel_slot_lo: rel_lo,
            rel_slot_hi: rel_hi,
            window_half,
        }
    }

    /// Expected number of candidate devices for a parent density over an area.
    pub fn mean_candidates(&self, density: f64, area: f64) -> f64 {
        density * area * self.device_prob
    }

    /// Number of candidate devices to draw.
    pub fn draw_count(&self, density: f64, area: f64, rng: &mut impl Rng) -> u64 {
        let mean = self.mean_candidates(density, area);
        if mean <= 0.0 {
            return 0;
        }
        Poisson::new(mean).expect("positive mean").sample(rng) as u64
    }

    /// Packet count of one candidate device: Binomial(K, w) given >= 1.
    pub fn draw_packet_count(&self, rng: &mut impl Rng) -> u32 {
        let k = self.packets;
        let w = self.window_prob;
        if w >= 1.0 {
            return k;
        }
        let mut u: f64 = rng.random_range(0.0..1.0) * self.device_prob;
        // Walk the binomial pmf from j = 1.
        let mut pmf = k as f64 * w * (1.0 - w).powi(k as i32 - 1);
        for j in 1..=k {
            if u < pmf || j == k {
                return j;
            }
            u -= pmf;
            // ratio B(k, j+1)/B(k, j)
            pmf *= (k - j) as f64 / (j + 1) as f64 * w / (1.0 - w);
        }
        1
    }

    /// Start offset (relative to the typical packet start) of one candidate
    /// packet, with its slot index when time is slotted.
    pub fn draw_offset(&self, rng: &mut impl Rng) -> (f64, Option<i64>) {
        if self.slots > 0 {
            let slot = rng.random_range(self.rel_slot_lo..=self.rel_slot_hi);
            (0.0, Some(slot)) // time filled in by caller from the slot index
        } else {
            (rng.random_range(-self.window_half..self.window_half), None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::dbm_to_watts;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> NetworkConfig {
        NetworkConfig {
            signal_bw: 600.0,
            band_bw: 200e3,
            bands: 1,
            repetitions: 3,
            packets_per_period: 6,
            report_period: 3600.0,
            tx_duration: 26.0 * 8.0 / 600.0,
            tx_power: dbm_to_watts(14.0),
            noise_power: 0.0,
            bs_density: 0.04,
            device_density: 1200.0,
            path_loss_exp: 3.5,
            sinr_threshold: 1.0,
            beta_time: 2.0,
            beta_freq: 2.0,
            center_freq: 0.0,
        }
    }

    #[test]
    fn repetitions_are_back_to_back() {
        let cfg = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let packets = generate_traffic(&cfg, CarrierMode::FullSpan, Access::unslotted(), &mut rng);
        assert_eq!(packets.len(), 6);
        for p in &packets {
            assert_eq!(p.txs.len(), 3);
            for pair in p.txs.windows(2) {
                assert!((pair[1].time - pair[0].time - cfg.tx_duration).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn slotted_frequency_lands_on_the_channel_grid() {
        let cfg = cfg();
        let plan = FreqPlan::new(&cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let packets = generate_traffic(&cfg, CarrierMode::FullSpan, Access::slotted(), &mut rng);
        for p in &packets {
            for tx in &p.txs {
                let ch = tx.channel.expect("slotted frequency sets channels");
                assert!((tx.carrier - plan.carrier_of_channel(ch)).abs() < 1e-9);
                assert!(ch >= 0 && ch < plan.total_channels());
            }
        }
    }

    #[test]
    fn pn_patterns_collide_exactly_when_shared() {
        let cfg = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = generate_traffic(&cfg, CarrierMode::PatternPerPacket, Access::unslotted(), &mut rng);
        let b = generate_traffic(&cfg, CarrierMode::PatternPerPacket, Access::unslotted(), &mut rng);
        for (pa, pb) in a.iter().zip(&b) {
            let same_channel = pa
                .txs
                .iter()
                .zip(&pb.txs)
                .filter(|(x, y)| x.channel == y.channel)
                .count();
            if pa.pattern == pb.pattern {
                assert_eq!(same_channel, 3);
            } else {
                assert_eq!(same_channel, 0);
            }
        }
    }

    #[test]
    fn overlap_boundary_is_exclusive() {
        let cfg = cfg();
        let a = TxMark {
            time: 0.0,
            carrier: 0.0,
            band: 0,
            slot: None,
            channel: None,
        };
        let mut b = a;
        b.time = cfg.tx_duration; // exactly one duration apart: no overlap
        assert!(!overlap(&a, &b, cfg.tx_duration, cfg.signal_bw));
        b.time = cfg.tx_duration * 0.999;
        assert!(overlap(&a, &b, cfg.tx_duration, cfg.signal_bw));
        b.time = 0.0;
        b.carrier = cfg.signal_bw; // exactly one bandwidth apart: no overlap
        assert!(!overlap(&a, &b, cfg.tx_duration, cfg.signal_bw));
    }

    #[test]
    fn pairwise_collision_probability_matches_closed_form() {
        // Parameters scaled up so the empirical rate is measurable. For two
        // independent uniforms on [0, W) the overlap probability is exactly
        // 2q - q^2 with q the overlap fraction; the 2q form of the model is
        // its small-q limit.
        let mut cfg = cfg();
        cfg.report_period = 10.0 * cfg.tx_duration;
        cfg.packets_per_period = 1;
        cfg.repetitions = 1;
        cfg.band_bw = 5.0 * cfg.signal_bw;
        let pairs = 1_000_000usize;
        let exact = |q: f64| 2.0 * q - q * q;

        for (access, expect) in [
            (Access::unslotted(), exact(1.0 / 10.0) * exact(1.0 / 5.0)),
            (Access::slotted(), 1.0 / 10.0 * 1.0 / 5.0),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let mut hits = 0usize;
            for _ in 0..pairs {
                let a = generate_traffic(&cfg, CarrierMode::FullSpan, access, &mut rng);
                let b = generate_traffic(&cfg, CarrierMode::FullSpan, access, &mut rng);
                if overlap(&a[0].txs[0], &b[0].txs[0], cfg.tx_duration, cfg.signal_bw) {
                    hits += 1;
                }
            }
            let rate = hits as f64 / pairs as f64;
            assert!(
                (rate - expect).abs() < 0.03 * expect,
                "access {access:?}: {rate} vs {expect}"
            );
        }
    }

    #[test]
    fn candidate_packet_count_distribution() {
        let cfg = cfg();
        let sampler = CandidateSampler::new(&cfg, Access::unslotted());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut total = 0u64;
        let draws = 200_000;
        for _ in 0..draws {
            let c = sampler.draw_packet_count(&mut rng);
            assert!((1..=6).contains(&c));
            total += c as u64;
        }
        // E[count | >= 1] = K w / (1 - (1-w)^K)
        let w = 2.0 * 3.0 * cfg.tx_duration / cfg.report_period;
        let expect = 6.0 * w / (1.0 - (1.0 - w).powi(6));
        let mean = total as f64 / draws as f64;
        assert!((mean - expect).abs() < 0.01 * expect, "{mean} vs {expect}");
    }
}
