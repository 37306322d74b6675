//! Optimal BS band-selection probabilities when incumbents differ across
//! bands: the closed-form water-filling solution for the band-constrained
//! protocol and the projected-gradient solution for the band-hopped one,
//! swept over the decoding threshold.
//!
//! Run with: cargo run --release --example band_selection

use unb::analytic::ps_band_constrained;
use unb::model::{db_to_linear, dbm_to_watts, derive_params};
use unb::optimize::{
    band_constrained_kkt_residual, optimize_band_constrained, optimize_band_hopped,
    BandCostVector,
};
use unb::{IncumbentConfig, NetworkConfig};

fn main() {
    let bs_density = 0.04;
    let cfg0 = NetworkConfig {
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
    let activity = cfg0.packets_per_period as f64 * cfg0.tx_duration / cfg0.report_period;
    let per_bs = |count: f64| count * activity * bs_density;
    // Bands loaded with 1000 / 30000 / 30000 / 0 / 0 incumbents per BS.
    let inc = IncumbentConfig::TypeII {
        power: dbm_to_watts(14.0),
        bands: vec![
            (125e3, per_bs(1000.0)),
            (125e3, per_bs(30000.0)),
            (125e3, per_bs(30000.0)),
            (125e3, 0.0),
            (125e3, 0.0),
        ],
    };

    println!("band-constrained p* per band (KKT water-filling)");
    println!("{:>7} {:>8} {:>8} {:>8} {:>8} {:>8}  {:>10} {:>10}", "tau_dB", "p1", "p2", "p3", "p4", "p5", "P_s(p*)", "P_s(unif)");
    for tau_db in [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0] {
        let cfg = cfg0.clone().with_tau_db(tau_db);
        let d = derive_params(&cfg, &inc).expect("valid configuration");
        let costs = BandCostVector::from_params(&d, &cfg).expect("costs");
        let p = optimize_band_constrained(&costs).expect("KKT solve");
        assert!(band_constrained_kkt_residual(&costs, p.as_slice()) < 1e-8);
        let opt = ps_band_constrained(&d, &cfg, p.as_slice()).unwrap();
        let uni = ps_band_constrained(&d, &cfg, &[0.2; 5]).unwrap();
        print!("{tau_db:>7}");
        for pm in p.as_slice() {
            print!(" {pm:>8.4}");
        }
        println!("  {opt:>10.4} {uni:>10.4}");
    }

    println!();
    println!("band-hopped p* per band (projected gradient)");
    println!("{:>7} {:>8} {:>8} {:>8} {:>8} {:>8}", "tau_dB", "p1", "p2", "p3", "p4", "p5");
    for tau_db in [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0] {
        let mut cfg = cfg0.clone();
        cfg.sinr_threshold = db_to_linear(tau_db);
        let d = derive_params(&cfg, &inc).expect("valid configuration");
        let sol = optimize_band_hopped(&d, &cfg).expect("projected gradient");
        print!("{tau_db:>7}");
        for pm in sol.point.as_slice() {
            print!(" {pm:>8.4}");
        }
        println!();
    }
    println!();
    println!("At low thresholds the BSs reinforce the busy bands to compensate the");
    println!("interference; at high thresholds they abandon them for the clean ones.");
}
