//! Thin command-line front end over the `unb` library.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use unb::config::{load_scenario, parse_protocol, Scenario};
use unb::sweep::{self, parse_range, SweepSpec, Variable};
use unb::ProtocolSpec;

#[derive(Parser)]
#[command(
    name = "unb",
    about = "Success probability, capacity, and design optimization of UNB IoT networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sweep variable: tau_db, m, n, gamma, lambda_iot, lambda_i
    #[arg(long, default_value = "tau_db")]
    var: String,
    /// Sweep grid as start:stop:step or a comma list
    #[arg(long, default_value = "-10:20:1", allow_hyphen_values = true)]
    range: String,
    /// Protocols to evaluate (repeatable); defaults to the scenario's protocol
    #[arg(long)]
    protocol: Vec<String>,
    /// Override the scenario's master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the scenario's realization count
    #[arg(long)]
    realizations: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form expressions over a sweep
    Analytic(SweepArgs),
    /// Monte Carlo estimates over a sweep
    Simulate {
        #[command(flatten)]
        args: SweepArgs,
        /// Write the first realization's points to this file (debug aid)
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Report the design optimizers for one scenario
    Optimize {
        #[arg(long)]
        config: PathBuf,
        /// Success-probability target for the resource bound
        #[arg(long, default_value_t = 0.9)]
        epsilon: f64,
        /// Cap for the repetition search
        #[arg(long, default_value_t = 20)]
        n_max: u32,
    },
    /// Analytic and Monte Carlo rows of the same sweep in one CSV
    Sweep(SweepArgs),
}

fn protocols_for(args: &SweepArgs, scenario: &Scenario) -> unb::Result<Vec<ProtocolSpec>> {
    if !args.protocol.is_empty() {
        return args.protocol.iter().map(|p| parse_protocol(p)).collect();
    }
    match &scenario.protocol {
        Some(p) => Ok(vec![p.clone()]),
        None => Err(unb::Error::Config(
            "no protocol: give --protocol or set one in the scenario file".into(),
        )),
    }
}

fn prepare(args: &SweepArgs) -> unb::Result<(Scenario, SweepSpec)> {
    let mut scenario = load_scenario(&args.config)?;
    if let Some(seed) = args.seed {
        scenario.sim.seed = seed;
    }
    if let Some(realizations) = args.realizations {
        scenario.sim.realizations = realizations;
    }
    let protocols = protocols_for(args, &scenario)?;
    let sweep = SweepSpec::new(Variable::parse(&args.var)?, parse_range(&args.range)?, protocols)?;
    Ok((scenario, sweep))
}

fn with_output<F>(out: &Option<PathBuf>, f: F) -> unb::Result<()>
where
    F: FnOnce(&mut dyn Write) -> unb::Result<()>,
{
    match out {
        Some(path) => {
            let mut file = File::create(path)?;
            f(&mut file)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn run() -> unb::Result<()> {
    match Cli::parse().command {
        Command::Analytic(args) => {
            let (scenario, spec) = prepare(&args)?;
            with_output(&args.out, |w| sweep::cmd_analytic(&scenario, &spec, w))
        }
        Command::Simulate { args, dump } => {
            let (scenario, spec) = prepare(&args)?;
            if let Some(path) = dump {
                let proto = spec.protocols[0].clone();
                let mut file = File::create(path)?;
                unb::sim::dump_realization(
                    &scenario.network,
                    &scenario.incumbent,
                    &proto,
                    &scenario.sim,
                    &mut file,
                )?;
            }
            with_output(&args.out, |w| sweep::cmd_simulate(&scenario, &spec, w))
        }
        Command::Optimize {
            config,
            epsilon,
            n_max,
        } => {
            let scenario = load_scenario(&config)?;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            sweep::cmd_optimize(&scenario, epsilon, n_max, &mut lock)
        }
        Command::Sweep(args) => {
            let (scenario, spec) = prepare(&args)?;
            with_output(&args.out, |w| sweep::cmd_sweep(&scenario, &spec, w))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
