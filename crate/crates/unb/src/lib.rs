//! # unb
//!
//! Stochastic-geometry toolkit for ultra-narrowband (UNB) IoT networks that
//! share spectrum with incumbent networks.
//!
//! The crate provides:
//! - Configuration and derived-parameter types ([`model`])
//! - Closed-form success probabilities and transmission capacities for five
//!   access protocols, plus an exact-with-noise quadrature path ([`analytic`])
//! - Design optimizers: repetition count, band/BS-density resource bounds,
//!   and BS band-selection probabilities ([`optimize`])
//! - A parallel, reproducible Monte Carlo engine over Poisson point processes
//!   with asynchronous time-frequency traffic and Rayleigh fading ([`sim`])
//! - Scenario files, parameter sweeps, and CSV emission ([`config`], [`sweep`])
//!
//! Every runnable capability has an example under `examples/`; the `unb`
//! binary exposes the same machinery as `analytic`, `simulate`, `optimize`,
//! and `sweep` subcommands.

pub mod analytic;
pub mod config;
pub mod error;
pub mod model;
pub mod optimize;
pub mod quad;
pub mod sim;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{
    db_to_linear, dbm_to_watts, derive_params, linear_to_db, validate, DerivedParams, Hopping,
    IncumbentConfig, NetworkConfig, Protocol, ProtocolSpec,
};
pub use sim::{run, Access, InterferenceDraw, SimConfig, SuccessEstimate};
