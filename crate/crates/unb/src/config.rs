//! Scenario files: a flat key-value (TOML) format holding the network,
//! incumbent, protocol, and simulation settings. Keys use the field names of
//! the model in lower snake case; dB-valued alternatives carry a `_db`/`_dbm`
//! suffix and are converted on load.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{
    db_to_linear, dbm_to_watts, Hopping, IncumbentConfig, NetworkConfig, Protocol, ProtocolSpec,
};
use crate::sim::{Access, InterferenceDraw, SimConfig, Slotting};

/// A fully loaded scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub network: NetworkConfig,
    pub incumbent: IncumbentConfig,
    /// Protocol named in the file, when any.
    pub protocol: Option<ProtocolSpec>,
    pub sim: SimConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    // network
    b: f64,
    b_mux: f64,
    m: u32,
    n: u32,
    k: u32,
    t: f64,
    t_tot: f64,
    p_iot: Option<f64>,
    p_iot_dbm: Option<f64>,
    p_n: Option<f64>,
    p_n_dbm: Option<f64>,
    lambda_b: f64,
    lambda_iot: f64,
    alpha: f64,
    tau: Option<f64>,
    tau_db: Option<f64>,
    beta_t: f64,
    beta_f: f64,
    f_c: Option<f64>,
    // incumbent
    incumbent_kind: Option<String>,
    p_i: Option<f64>,
    p_i_dbm: Option<f64>,
    b_i0: Option<f64>,
    lambda_i0: Option<f64>,
    b_im: Option<Vec<f64>>,
    lambda_im: Option<Vec<f64>>,
    // protocol
    protocol: Option<String>,
    hopping: Option<String>,
    p: Option<Vec<f64>>,
    // simulation
    region_radius: Option<f64>,
    realizations: Option<usize>,
    seed: Option<u64>,
    noise_enabled: Option<bool>,
    access_time: Option<String>,
    access_freq: Option<String>,
    sinr_record: Option<bool>,
    far_field_factor: Option<f64>,
    interference: Option<String>,
}

fn pick(
    linear: Option<f64>,
    db: Option<f64>,
    convert: impl Fn(f64) -> f64,
    name: &str,
) -> Result<f64> {
    match (linear, db) {
        (Some(_), Some(_)) => Err(Error::Config(format!(
            "{name}: give either the linear key or its _db/_dbm variant, not both"
        ))),
        (Some(x), None) => Ok(x),
        (None, Some(x)) => Ok(convert(x)),
        (None, None) => Err(Error::Config(format!(
            "{name}: missing (either the linear key or its _db/_dbm variant)"
        ))),
    }
}

fn parse_slotting(s: &str, key: &str) -> Result<Slotting> {
    match s {
        "slotted" => Ok(Slotting::Slotted),
        "unslotted" => Ok(Slotting::Unslotted),
        other => Err(Error::Config(format!(
            "{key}: expected 'slotted' or 'unslotted', got '{other}'"
        ))),
    }
}

/// Parse a protocol name as used on the command line and in scenario files.
pub fn parse_protocol(name: &str) -> Result<ProtocolSpec> {
    let spec = match name {
        "nearest" => ProtocolSpec::new(Protocol::NearestBs),
        "sigfox" | "no-assoc" => ProtocolSpec::new(Protocol::NoAssociation),
        "benchmark" => ProtocolSpec::new(Protocol::BenchmarkMultiband),
        "band-constrained" => ProtocolSpec::new(Protocol::BandConstrained),
        "band-hopped" => ProtocolSpec::new(Protocol::BandHopped),
        "pn-nearest" => ProtocolSpec::pn(Protocol::NearestBs),
        "pn-sigfox" | "pn-no-assoc" => ProtocolSpec::pn(Protocol::NoAssociation),
        other => {
            return Err(Error::Config(format!(
                "unknown protocol '{other}' (expected nearest, sigfox, benchmark, \
                 band-constrained, band-hopped, pn-nearest, or pn-sigfox)"
            )))
        }
    };
    Ok(spec)
}

/// CSV/report name of a protocol spec.
pub fn protocol_label(spec: &ProtocolSpec) -> String {
    match spec.hopping {
        Hopping::Random => spec.protocol.name().to_string(),
        Hopping::Pn => format!("pn-{}", spec.protocol.name()),
    }
}

/// Load a scenario from a TOML file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

/// Parse a scenario from TOML text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw: RawScenario =
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;

    let network = NetworkConfig {
        signal_bw: raw.b,
        band_bw: raw.b_mux,
        bands: raw.m,
        repetitions: raw.n,
        packets_per_period: raw.k,
        report_period: raw.t_tot,
        tx_duration: raw.t,
        tx_power: pick(raw.p_iot, raw.p_iot_dbm, dbm_to_watts, "p_iot")?,
        noise_power: pick(raw.p_n, raw.p_n_dbm, dbm_to_watts, "p_n")?,
        bs_density: raw.lambda_b,
        device_density: raw.lambda_iot,
        path_loss_exp: raw.alpha,
        sinr_threshold: pick(raw.tau, raw.tau_db, db_to_linear, "tau")?,
        beta_time: raw.beta_t,
        beta_freq: raw.beta_f,
        center_freq: raw.f_c.unwrap_or(0.0),
    };

    let incumbent = match raw.incumbent_kind.as_deref() {
        None | Some("none") => IncumbentConfig::none(network.band_bw),
        Some("type_i") => IncumbentConfig::TypeI {
            power: pick(raw.p_i, raw.p_i_dbm, dbm_to_watts, "p_i")?,
            bandwidth: raw
                .b_i0
                .ok_or_else(|| Error::Config("b_i0 required for type_i incumbents".into()))?,
            density: raw
                .lambda_i0
                .ok_or_else(|| Error::Config("lambda_i0 required for type_i incumbents".into()))?,
        },
        Some("type_ii") => {
            let bws = raw
                .b_im
                .ok_or_else(|| Error::Config("b_im required for type_ii incumbents".into()))?;
            let dens = raw.lambda_im.ok_or_else(|| {
                Error::Config("lambda_im required for type_ii incumbents".into())
            })?;
            if bws.len() != dens.len() {
                return Err(Error::Config(
                    "b_im and lambda_im must have the same length".into(),
                ));
            }
            IncumbentConfig::TypeII {
                power: pick(raw.p_i, raw.p_i_dbm, dbm_to_watts, "p_i")?,
                bands: bws.into_iter().zip(dens).collect(),
            }
        }
        Some(other) => {
            return Err(Error::Config(format!(
                "incumbent_kind: expected 'type_i', 'type_ii', or 'none', got '{other}'"
            )))
        }
    };

    let protocol = match raw.protocol.as_deref() {
        None => None,
        Some(name) => {
            let mut spec = parse_protocol(name)?;
            if let Some(h) = raw.hopping.as_deref() {
                spec.hopping = match h {
                    "random" => Hopping::Random,
                    "pn" => Hopping::Pn,
                    other => {
                        return Err(Error::Config(format!(
                            "hopping: expected 'random' or 'pn', got '{other}'"
                        )))
                    }
                };
            }
            spec.band_probs = raw.p.clone();
            Some(spec)
        }
    };

    let default_access = Access::from_betas(network.beta_time, network.beta_freq)
        .unwrap_or(Access::unslotted());
    let sim = SimConfig {
        region_radius: raw.region_radius,
        realizations: raw.realizations.unwrap_or(10_000),
        seed: raw.seed.unwrap_or(7),
        noise_enabled: raw.noise_enabled.unwrap_or(true),
        access: Access {
            time: raw
                .access_time
                .as_deref()
                .map(|s| parse_slotting(s, "access_time"))
                .transpose()?
                .unwrap_or(default_access.time),
            freq: raw
                .access_freq
                .as_deref()
                .map(|s| parse_slotting(s, "access_freq"))
                .transpose()?
                .unwrap_or(default_access.freq),
        },
        sinr_record: raw.sinr_record.unwrap_or(false),
        far_field_factor: raw.far_field_factor.unwrap_or(6.0),
        interference: match raw.interference.as_deref() {
            None | Some("physical") => InterferenceDraw::Physical,
            Some("per_bs") => InterferenceDraw::PerBsIndependent,
            Some(other) => {
                return Err(Error::Config(format!(
                    "interference: expected 'physical' or 'per_bs', got '{other}'"
                )))
            }
        },
    };

    Ok(Scenario {
        network,
        incumbent,
        protocol,
        sim,
    })
}
