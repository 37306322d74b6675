//! Geographical diversity: the band/BS-density product needed to hit a
//! success target with and without BS association, and the BS savings from
//! broadcast reception.
//!
//! Run with: cargo run --release --example diversity

use unb::model::{dbm_to_watts, derive_params};
use unb::optimize::{bs_density_reduction, min_resource_product, Association};
use unb::{IncumbentConfig, NetworkConfig};

fn main() {
    let bs_density = 0.04;
    let cfg = NetworkConfig {
        signal_bw: 600.0,
        band_bw: 200e3,
        bands: 1,
        repetitions: 1, // the bound is stated for one transmission per packet
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
    let activity = cfg.packets_per_period as f64 * cfg.tx_duration / cfg.report_period;
    let inc = IncumbentConfig::TypeI {
        power: dbm_to_watts(14.0),
        bandwidth: 125e3,
        density: 1e3 * activity * bs_density,
    };
    let d = derive_params(&cfg, &inc).expect("valid configuration");

    println!("minimum M * lambda_B (bands x BSs/km^2) for a success target epsilon");
    println!(
        "{:>8} {:>16} {:>16} {:>18}",
        "epsilon", "nearest BS", "broadcast", "density reduction"
    );
    for eps in [0.5, 0.8, 0.9, 0.95, 0.99, 0.999] {
        let near = min_resource_product(eps, &d, &cfg, Association::Nearest).unwrap();
        let bcast = min_resource_product(eps, &d, &cfg, Association::NoAssociation).unwrap();
        let ratio = bs_density_reduction(eps).unwrap();
        println!("{eps:>8} {near:>16.4} {bcast:>16.4} {ratio:>18.4}");
    }
    println!();
    println!("Broadcast reception needs the same band/BS budget scaled by the last");
    println!("column: one to two orders of magnitude fewer BSs at tight targets.");
}
