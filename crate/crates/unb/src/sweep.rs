//! Parameter sweeps and CSV emission: the machinery behind the `analytic`,
//! `simulate`, `optimize`, and `sweep` subcommands.
//!
//! CSV schema (RFC-4180, UTF-8, '.' decimal, header always present):
//! `var,value,protocol,method,estimate,wilson_lo,wilson_hi`. The estimate is
//! a success probability, or a supportable device density when sweeping the
//! success constraint `gamma`. Wilson columns are empty on analytic rows.

use std::io::Write;

use crate::analytic;
use crate::config::{protocol_label, Scenario};
use crate::error::{Error, Result};
use crate::model::{db_to_linear, derive_params, IncumbentConfig, NetworkConfig, ProtocolSpec};
use crate::optimize::{self, Association, BandCostVector};
use crate::sim::{self, SimConfig};

/// The quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    /// SINR threshold, dB.
    TauDb,
    /// Number of multiplexing bands.
    Bands,
    /// Repetitions per packet.
    Repetitions,
    /// Success-probability constraint for capacity curves.
    Gamma,
    /// Device density, per km².
    DeviceDensity,
    /// Incumbent effective density, per km².
    IncumbentDensity,
}

impl Variable {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "tau_db" => Variable::TauDb,
            "m" => Variable::Bands,
            "n" => Variable::Repetitions,
            "gamma" => Variable::Gamma,
            "lambda_iot" => Variable::DeviceDensity,
            "lambda_i" => Variable::IncumbentDensity,
            other => {
                return Err(Error::Config(format!(
                    "unknown sweep variable '{other}' (expected tau_db, m, n, gamma, lambda_iot, lambda_i)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variable::TauDb => "tau_db",
            Variable::Bands => "m",
            Variable::Repetitions => "n",
            Variable::Gamma => "gamma",
            Variable::DeviceDensity => "lambda_iot",
            Variable::IncumbentDensity => "lambda_i",
        }
    }
}

/// A sweep: a variable, its grid, and the protocols to evaluate.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: Variable,
    pub points: Vec<f64>,
    pub protocols: Vec<ProtocolSpec>,
}

impl SweepSpec {
    pub fn new(variable: Variable, points: Vec<f64>, protocols: Vec<ProtocolSpec>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config("sweep range is empty".into()));
        }
        if protocols.is_empty() {
            return Err(Error::Config("no protocols selected".into()));
        }
        if variable == Variable::Gamma && points.iter().any(|g| !(0.0 < *g && *g < 1.0)) {
            return Err(Error::Config("gamma sweep points must lie in (0, 1)".into()));
        }
        Ok(SweepSpec {
            variable,
            points,
            protocols,
        })
    }

    /// Default threshold sweep matching the reference figures: -10..20 dB in
    /// 1 dB steps.
    pub fn default_tau(protocols: Vec<ProtocolSpec>) -> Result<Self> {
        SweepSpec::new(Variable::TauDb, parse_range("-10:20:1")?, protocols)
    }
}

/// Parse `start:stop:step` (inclusive of both ends within a half step) or a
/// comma-separated list of values.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let bad = |m: &str| Error::Config(format!("range '{text}': {m}"));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("bad start"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("bad stop"))?;
        let step: f64 = parts[2].parse().map_err(|_| bad("bad step"))?;
        if step <= 0.0 || stop < start {
            return Err(bad("need stop >= start and step > 0"));
        }
        let count = ((stop - start) / step + 0.5).floor() as usize + 1;
        Ok((0..count).map(|i| start + i as f64 * step).collect())
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad("bad value")))
            .collect()
    }
}

/// Apply one sweep value to the configuration pair.
fn apply(
    variable: Variable,
    value: f64,
    cfg: &NetworkConfig,
    inc: &IncumbentConfig,
) -> Result<(NetworkConfig, IncumbentConfig)> {
    let mut cfg = cfg.clone();
    let mut inc = inc.clone();
    match variable {
        Variable::TauDb => cfg.sinr_threshold = db_to_linear(value),
        Variable::Bands => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(Error::Config(format!(
                    "band count must be a positive integer, got {value}"
                )));
            }
            cfg.bands = value as u32;
            // Type-II incumbents are defined per band: extend by replicating
            // the first band's network.
            if let IncumbentConfig::TypeII { bands, .. } = &mut inc {
                let template = bands[0];
                bands.resize(cfg.bands as usize, template);
            }
        }
        Variable::Repetitions => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(Error::Config(format!(
                    "repetition count must be a positive integer, got {value}"
                )));
            }
            cfg.repetitions = value as u32;
        }
        Variable::Gamma => {}
        Variable::DeviceDensity => cfg.device_density = value,
        Variable::IncumbentDensity => match &mut inc {
            IncumbentConfig::TypeI { density, .. } => *density = value,
            IncumbentConfig::TypeII { bands, .. } => {
                for (_, d) in bands.iter_mut() {
                    *d = value;
                }
            }
        },
    }
    Ok((cfg, inc))
}

fn write_header(w: &mut csv::Writer<impl Write>) -> Result<()> {
    w.write_record(["var", "value", "protocol", "method", "estimate", "wilson_lo", "wilson_hi"])?;
    Ok(())
}

/// Evaluate the closed forms over a sweep, one CSV row per point and protocol.
pub fn cmd_analytic(scenario: &Scenario, sweep: &SweepSpec, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    write_header(&mut w)?;
    for &value in &sweep.points {
        for spec in &sweep.protocols {
            let (cfg, inc) = apply(sweep.variable, value, &scenario.network, &scenario.incumbent)?;
            let estimate = match sweep.variable {
                Variable::Gamma => {
                    analytic::transmission_capacity(spec, value, &cfg, &inc)?.density
                }
                _ => {
                    let d = derive_params(&cfg, &inc)?;
                    analytic::success_probability(spec, &d, &cfg)?
                }
            };
            w.write_record([
                sweep.variable.name().to_string(),
                value.to_string(),
                protocol_label(spec),
                "analytic".to_string(),
                estimate.to_string(),
                String::new(),
                String::new(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Estimate a sweep by Monte Carlo, one CSV row per point and protocol, with
/// Wilson bounds. A threshold sweep reuses one recorded sample set per
/// protocol instead of resimulating every point.
pub fn cmd_simulate(scenario: &Scenario, sweep: &SweepSpec, out: impl Write) -> Result<()> {
    if sweep.variable == Variable::Gamma {
        return Err(Error::Config(
            "gamma sweeps are capacity curves; use the analytic command".into(),
        ));
    }
    let mut w = csv::Writer::from_writer(out);
    write_header(&mut w)?;
    match sweep.variable {
        Variable::TauDb => {
            for spec in &sweep.protocols {
                let sim = SimConfig {
                    sinr_record: true,
                    ..scenario.sim.clone()
                };
                let est = sim::run(&scenario.network, &scenario.incumbent, spec, &sim)?;
                for &value in &sweep.points {
                    let at = est
                        .at_threshold(db_to_linear(value))
                        .expect("samples recorded");
                    w.write_record([
                        "tau_db".to_string(),
                        value.to_string(),
                        protocol_label(spec),
                        "mc".to_string(),
                        at.p_hat.to_string(),
                        at.wilson_lo.to_string(),
                        at.wilson_hi.to_string(),
                    ])?;
                }
            }
        }
        _ => {
            for &value in &sweep.points {
                for spec in &sweep.protocols {
                    let (cfg, inc) =
                        apply(sweep.variable, value, &scenario.network, &scenario.incumbent)?;
                    let est = sim::run(&cfg, &inc, spec, &scenario.sim)?;
                    w.write_record([
                        sweep.variable.name().to_string(),
                        value.to_string(),
                        protocol_label(spec),
                        "mc".to_string(),
                        est.p_hat.to_string(),
                        est.wilson_lo.to_string(),
                        est.wilson_hi.to_string(),
                    ])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Run analytic and Monte Carlo rows of the same sweep into one CSV.
pub fn cmd_sweep(scenario: &Scenario, sweep: &SweepSpec, mut out: impl Write) -> Result<()> {
    let mut buf = Vec::new();
    cmd_analytic(scenario, sweep, &mut buf)?;
    out.write_all(&buf)?;
    if sweep.variable != Variable::Gamma {
        buf.clear();
        cmd_simulate(scenario, sweep, &mut buf)?;
        // Drop the duplicate header line.
        if let Some(pos) = buf.iter().position(|b| *b == b'\n') {
            out.write_all(&buf[pos + 1..])?;
        }
    }
    Ok(())
}

/// Text report of the design optimizers for one scenario.
pub fn cmd_optimize(
    scenario: &Scenario,
    epsilon: f64,
    n_max: u32,
    out: &mut impl Write,
) -> Result<()> {
    let cfg = &scenario.network;
    let inc = &scenario.incumbent;
    let d = derive_params(cfg, inc)?;

    writeln!(out, "derived parameters")?;
    writeln!(out, "  activity lambda_T        = {:.6e}", d.activity)?;
    writeln!(out, "  thinned device density   = {:.6e} /km^2", d.thinned_devices)?;
    writeln!(out, "  thinned incumbent density= {:.6e} /km^2", d.thinned_incumbents)?;

    match optimize::optimal_repetitions(&d, cfg, n_max) {
        Ok(r) if r.saturated => writeln!(
            out,
            "optimal repetitions: N* >= {} (search saturated at the cap)",
            r.n_star
        )?,
        Ok(r) => writeln!(out, "optimal repetitions: N* = {}", r.n_star)?,
        Err(e) => writeln!(out, "optimal repetitions: {e}")?,
    }

    if cfg.repetitions == 1 {
        let near = optimize::min_resource_product(epsilon, &d, cfg, Association::Nearest)?;
        let bcast = optimize::min_resource_product(epsilon, &d, cfg, Association::NoAssociation)?;
        writeln!(
            out,
            "resource bound at epsilon = {epsilon}: M*lambda_B >= {near:.6e} (nearest), {bcast:.6e} (broadcast)"
        )?;
    } else {
        writeln!(
            out,
            "resource bound at epsilon = {epsilon}: stated for N = 1 only (config has N = {})",
            cfg.repetitions
        )?;
    }
    writeln!(
        out,
        "BS density reduction from geographic diversity at epsilon = {epsilon}: {:.6}",
        optimize::bs_density_reduction(epsilon)?
    )?;

    match BandCostVector::from_params(&d, cfg) {
        Ok(costs) => {
            let p = optimize::optimize_band_constrained(&costs)?;
            let residual = optimize::band_constrained_kkt_residual(&costs, p.as_slice());
            writeln!(
                out,
                "band-constrained p* = {:?} (KKT residual {residual:.2e})",
                p.as_slice()
            )?;
        }
        Err(e) => writeln!(out, "band-constrained p*: {e}")?,
    }
    match optimize::optimize_band_hopped(&d, cfg) {
        Ok(sol) => writeln!(
            out,
            "band-hopped p* = {:?} ({} iterations, gradient mapping {:.2e}{})",
            sol.point.as_slice(),
            sol.iterations,
            sol.grad_mapping_norm,
            if sol.converged { "" } else { "; NOT converged" }
        )?,
        Err(e) => writeln!(out, "band-hopped p*: {e}")?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_scenario;

    const SCENARIO: &str = r#"
b = 600.0
b_mux = 200e3
m = 1
n = 3
k = 6
t = 0.3466666666666667
t_tot = 3600.0
p_iot_dbm = 14.0
p_n_dbm = -146.0
lambda_b = 0.04
lambda_iot = 1200.0
alpha = 3.5
tau_db = 0.0
beta_t = 2.0
beta_f = 2.0
incumbent_kind = "type_i"
p_i_dbm = 14.0
b_i0 = 125e3
lambda_i0 = 0.0231111
realizations = 300
seed = 5
"#;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("-10:20:1").unwrap().len(), 31);
        assert_eq!(parse_range("1,2,5").unwrap(), vec![1.0, 2.0, 5.0]);
        assert!(parse_range("5:1:1").is_err());
        assert!(parse_range("1:2:0").is_err());
        assert!(parse_range("a:b:c").is_err());
    }

    #[test]
    fn analytic_row_count_and_schema() {
        let scenario = parse_scenario(SCENARIO).unwrap();
        let sweep = SweepSpec::default_tau(vec![
            crate::config::parse_protocol("sigfox").unwrap(),
            crate::config::parse_protocol("nearest").unwrap(),
        ])
        .unwrap();
        let mut buf = Vec::new();
        cmd_analytic(&scenario, &sweep, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "var,value,protocol,method,estimate,wilson_lo,wilson_hi");
        assert_eq!(lines.len(), 1 + 31 * 2);
        assert!(lines[1].starts_with("tau_db,-10,"));
    }

    #[test]
    fn simulate_is_deterministic_and_joins_with_analytic() {
        let scenario = parse_scenario(SCENARIO).unwrap();
        let sweep = SweepSpec::new(
            Variable::TauDb,
            parse_range("-5:5:5").unwrap(),
            vec![crate::config::parse_protocol("sigfox").unwrap()],
        )
        .unwrap();
        let mut a = Vec::new();
        cmd_simulate(&scenario, &sweep, &mut a).unwrap();
        let mut b = Vec::new();
        cmd_simulate(&scenario, &sweep, &mut b).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().lines().count() == 1 + 3);
    }

    #[test]
    fn gamma_sweep_is_analytic_only() {
        let scenario = parse_scenario(SCENARIO).unwrap();
        let sweep = SweepSpec::new(
            Variable::Gamma,
            vec![0.9],
            vec![crate::config::parse_protocol("sigfox").unwrap()],
        )
        .unwrap();
        let mut buf = Vec::new();
        assert!(cmd_simulate(&scenario, &sweep, &mut buf).is_err());
        cmd_analytic(&scenario, &sweep, &mut buf).unwrap();
        assert!(!buf.is_empty());
    }

    #[test]
    fn optimize_report_is_complete() {
        let scenario = parse_scenario(SCENARIO).unwrap();
        let mut buf = Vec::new();
        cmd_optimize(&scenario, 0.9, 20, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("optimal repetitions"));
        assert!(text.contains("BS density reduction"));
        assert!(text.contains("band-constrained p*"));
        assert!(text.contains("band-hopped p*"));
    }

    #[test]
    fn bands_sweep_extends_type_ii() {
        let text = SCENARIO
            .replace("incumbent_kind = \"type_i\"", "incumbent_kind = \"type_ii\"")
            .replace("b_i0 = 125e3", "b_im = [125e3]")
            .replace("lambda_i0 = 0.0231111", "lambda_im = [0.0231111]");
        let scenario = parse_scenario(&text).unwrap();
        let (cfg, inc) = apply(
            Variable::Bands,
            4.0,
            &scenario.network,
            &scenario.incumbent,
        )
        .unwrap();
        assert_eq!(cfg.bands, 4);
        match inc {
            IncumbentConfig::TypeII { bands, .. } => assert_eq!(bands.len(), 4),
            _ => panic!(),
        }
    }
}
