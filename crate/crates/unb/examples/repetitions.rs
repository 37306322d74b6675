//! How many times should a packet be repeated? The stopping rule against the
//! exhaustive scan, under growing incumbent pressure.
//!
//! Run with: cargo run --release --example repetitions

use unb::analytic::ps_no_assoc;
use unb::model::{dbm_to_watts, derive_params};
use unb::optimize::optimal_repetitions;
use unb::{IncumbentConfig, NetworkConfig};

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

    println!("incumbents/BS   N* (rule)   N* (scan over 1..20)   P_s at N*");
    for per_bs in [0.0, 500.0, 1000.0, 5000.0, 20000.0, 100000.0] {
        let inc = IncumbentConfig::TypeI {
            power: dbm_to_watts(14.0),
            bandwidth: 125e3,
            density: per_bs * activity * bs_density,
        };
        let d = derive_params(&base, &inc).expect("valid configuration");
        let rule = optimal_repetitions(&d, &base, 20).expect("rule");

        let mut best = (1u32, -1.0f64);
        for n in 1..=20 {
            let mut cfg = base.clone();
            cfg.repetitions = n;
            let dn = derive_params(&cfg, &inc).expect("valid configuration");
            let p = ps_no_assoc(&dn, &cfg);
            if p > best.1 {
                best = (n, p);
            }
        }
        println!(
            "{per_bs:>13} {:>11} {:>22} {:>11.4}{}",
            rule.n_star,
            best.0,
            best.1,
            if rule.saturated { "  (saturated)" } else { "" }
        );
    }
    println!();
    println!("With no incumbents a single transmission is optimal: extra repetitions");
    println!("only congest the network. Repetition pays once incumbent interference");
    println!("dominates the intra-network kind.");
}
