//! Closed-form success probability of every protocol versus the decoding
//! threshold, single-band and five-band access side by side.
//!
//! Run with: cargo run --release --example success_probability

use unb::analytic::success_probability;
use unb::model::{dbm_to_watts, derive_params};
use unb::{IncumbentConfig, NetworkConfig, Protocol, ProtocolSpec};

fn main() {
    let bs_density = 0.04;
    let multi = NetworkConfig {
        signal_bw: 600.0,
        band_bw: 200e3,
        bands: 5,
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
    let single = NetworkConfig {
        bands: 1,
        ..multi.clone()
    };
    let activity = multi.packets_per_period as f64 * multi.tx_duration / multi.report_period;
    let incumbent = IncumbentConfig::TypeI {
        power: dbm_to_watts(14.0),
        bandwidth: 125e3,
        density: 1e3 * activity * bs_density,
    };

    let columns: Vec<(&str, &NetworkConfig, ProtocolSpec)> = vec![
        ("nearest", &single, ProtocolSpec::new(Protocol::NearestBs)),
        ("sigfox", &single, ProtocolSpec::new(Protocol::NoAssociation)),
        ("pn-sigfox", &single, ProtocolSpec::pn(Protocol::NoAssociation)),
        ("band-constr", &multi, ProtocolSpec::new(Protocol::BandConstrained)),
        ("band-hopped", &multi, ProtocolSpec::new(Protocol::BandHopped)),
        ("benchmark", &multi, ProtocolSpec::new(Protocol::BenchmarkMultiband)),
    ];

    print!("{:>7}", "tau_dB");
    for (name, _, _) in &columns {
        print!("{name:>13}");
    }
    println!();
    for tau_db in (-10..=20).step_by(2) {
        print!("{tau_db:>7}");
        for (_, cfg, spec) in &columns {
            let c = (*cfg).clone().with_tau_db(tau_db as f64);
            let d = derive_params(&c, &incumbent).expect("valid configuration");
            let p = success_probability(spec, &d, &c).expect("closed form");
            print!("{p:>13.4}");
        }
        println!();
    }

    println!();
    println!("Single-band columns use M = 1, multiband columns M = 5; all share the");
    println!("same device population (30000 per BS) and incumbent network.");
}
