//! Transmission capacity (supportable devices per BS) versus the success
//! constraint, comparing single-band access with the multiband protocols on
//! a 25 km x 25 km deployment with 25 BSs, tau = 5 dB, N = 3, M = 5.
//!
//! Run with: cargo run --release --example capacity

use unb::analytic::transmission_capacity;
use unb::model::{db_to_linear, dbm_to_watts};
use unb::{IncumbentConfig, NetworkConfig, Protocol, ProtocolSpec};

fn main() {
    let bs_density = 25.0 / (25.0 * 25.0);
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
        sinr_threshold: db_to_linear(5.0),
        beta_time: 2.0,
        beta_freq: 2.0,
        center_freq: 902.2e6,
    };
    let single = NetworkConfig { bands: 1, ..multi.clone() };
    let activity = multi.packets_per_period as f64 * multi.tx_duration / multi.report_period;
    let incumbent = IncumbentConfig::TypeI {
        power: dbm_to_watts(14.0),
        bandwidth: 125e3,
        density: 1e3 * activity * bs_density,
    };

    let protocols: Vec<(&str, &NetworkConfig, ProtocolSpec)> = vec![
        ("nearest (single band)", &single, ProtocolSpec::new(Protocol::NearestBs)),
        ("sigfox (single band)", &single, ProtocolSpec::new(Protocol::NoAssociation)),
        ("band-constrained", &multi, ProtocolSpec::new(Protocol::BandConstrained)),
        ("band-hopped", &multi, ProtocolSpec::new(Protocol::BandHopped)),
        ("benchmark", &multi, ProtocolSpec::new(Protocol::BenchmarkMultiband)),
    ];

    println!("devices per BS supportable at success constraint gamma");
    print!("{:<22}", "gamma");
    for g in [0.5, 0.9, 0.95, 0.98] {
        print!("{g:>10}");
    }
    println!();
    for (name, cfg, spec) in protocols {
        print!("{name:<22}");
        for gamma in [0.5, 0.9, 0.95, 0.98] {
            let cap = transmission_capacity(&spec, gamma, cfg, &incumbent).expect("capacity");
            let per_bs = cap.density / cfg.bs_density;
            let mark = if cap.clamped { "*" } else { "" };
            print!("{:>10}", format!("{:.0}{mark}", per_bs));
        }
        println!();
    }
    println!("(* = clamped at zero: incumbents leave no headroom)");
}
