//! Impact of time/frequency synchronization and of the hopping pattern on
//! single-band access: median best-SINR under the four access cases plus PN
//! hopping, from recorded Monte Carlo samples and from the closed forms.
//!
//! Run with: cargo run --release --example access_modes

use unb::analytic::{self, median_sinr_db};
use unb::model::{dbm_to_watts, derive_params};
use unb::sim::{self, Access, SimConfig, Slotting};
use unb::{IncumbentConfig, NetworkConfig, Protocol, ProtocolSpec};

fn main() {
    let bs_density = 0.04;
    let base = NetworkConfig {
        signal_bw: 600.0,
        band_bw: 200e3,
        bands: 1,
        repetitions: 3,
        packets_per_period: 6,
        report_period: 3600.0,
        tx_duration: 26.0 * 8.0 / 600.0,
        tx_power: dbm_to_watts(14.0),
        noise_power: dbm_to_watts(-146.0),
        bs_density,
        device_density: 30e3 * bs_density,
        path_loss_exp: 3.5,
        sinr_threshold: 1.0,
        beta_time: 2.0,
        beta_freq: 2.0,
        center_freq: 902.2e6,
    };
    let activity = base.packets_per_period as f64 * base.tx_duration / base.report_period;
    let inc = IncumbentConfig::TypeI {
        power: dbm_to_watts(14.0),
        bandwidth: 125e3,
        density: 1e3 * activity * bs_density,
    };

    let cases: Vec<(&str, Access, ProtocolSpec)> = vec![
        (
            "synchronous (slotted t+f)",
            Access::slotted(),
            ProtocolSpec::new(Protocol::NoAssociation),
        ),
        (
            "time-slotted only",
            Access::time_slotted(),
            ProtocolSpec::new(Protocol::NoAssociation),
        ),
        (
            "asynchronous",
            Access::unslotted(),
            ProtocolSpec::new(Protocol::NoAssociation),
        ),
        (
            "frequency-slotted, random",
            Access {
                time: Slotting::Unslotted,
                freq: Slotting::Slotted,
            },
            ProtocolSpec::new(Protocol::NoAssociation),
        ),
        (
            "frequency-slotted, PN",
            Access {
                time: Slotting::Unslotted,
                freq: Slotting::Slotted,
            },
            ProtocolSpec::pn(Protocol::NoAssociation),
        ),
    ];

    println!("median best-SINR for Sigfox-like access (M = 1, N = 3)");
    println!("{:<28} {:>12} {:>12}", "access case", "MC (dB)", "analytic (dB)");
    let mut medians = Vec::new();
    for (name, access, spec) in &cases {
        let mut cfg = base.clone();
        let (bt, bf) = access.betas();
        cfg.beta_time = bt;
        cfg.beta_freq = bf;
        let sim_cfg = SimConfig {
            realizations: 10_000,
            seed: 42,
            access: *access,
            sinr_record: true,
            ..SimConfig::default()
        };
        let est = sim::run(&cfg, &inc, spec, &sim_cfg).expect("simulation");
        let mc_median = est.sinr_quantile_db(0.5).expect("recorded samples");
        let d = derive_params(&cfg, &inc).expect("derive");
        let analytic_median = median_sinr_db(|tau| {
            let mut c = cfg.clone();
            c.sinr_threshold = tau;
            analytic::success_probability(spec, &d, &c).expect("closed form")
        })
        .expect("median exists");
        println!("{name:<28} {mc_median:>12.2} {analytic_median:>12.2}");
        medians.push(mc_median);
    }
    println!();
    println!("synchronous over asynchronous: {:+.1} dB", medians[0] - medians[2]);
    println!("time-slotted over asynchronous: {:+.1} dB", medians[1] - medians[2]);
    println!("random over PN hopping:         {:+.1} dB", medians[3] - medians[4]);
}
