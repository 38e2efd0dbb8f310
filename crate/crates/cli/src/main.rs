//! `loopgamma`: batch runner for the path-integral, representation and
//! Gamma-function checks.
//!
//! Exit status: 0 when every report passes, 1 on a failed check or a
//! numerical failure, 2 on a usage or configuration error.

mod commands;
mod config;
mod output;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, COMMANDS};
use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "loopgamma",
    version,
    about = "Run loop-group path-integral checks and write JSON/CSV reports"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, global = true, value_name = "N")]
    samples: Option<u64>,
    /// Grid intervals on [0, 2π].
    #[arg(long, global = true, value_name = "M")]
    grid: Option<usize>,
    /// Diffusion time.
    #[arg(long, global = true, value_name = "T")]
    t: Option<f64>,
    /// Write <command>.json, .csv and .dat here instead of printing JSON.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Print the commands and the checks they run.
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Sub>,
}

/// Command parameters as `key=value`; values are JSON, else strings.
#[derive(Args, Clone, Default)]
struct Params {
    #[arg(value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args, Clone, Default)]
struct GammaRegArgs {
    /// Check the recurrence instead of printing the value.
    #[arg(long)]
    recurrence: bool,
    #[command(flatten)]
    params: Params,
}

#[derive(Subcommand, Clone)]
enum Sub {
    Sample(Params),
    CheckTranslation(Params),
    CheckDirectIntegral(Params),
    CheckUnitarity(Params),
    CheckGroupLaw(Params),
    CheckCommutators(Params),
    CheckIntertwiner(Params),
    GammaLoop(Params),
    CheckFunctionalEq(Params),
    Kernel(Params),
    GammaReg(GammaRegArgs),
    CheckLimit(Params),
    CheckProp22(Params),
    CheckTheorem52(Params),
    FourierWiener(Params),
}

impl Sub {
    fn name(&self) -> &'static str {
        match self {
            Sub::Sample(_) => "sample",
            Sub::CheckTranslation(_) => "check-translation",
            Sub::CheckDirectIntegral(_) => "check-direct-integral",
            Sub::CheckUnitarity(_) => "check-unitarity",
            Sub::CheckGroupLaw(_) => "check-group-law",
            Sub::CheckCommutators(_) => "check-commutators",
            Sub::CheckIntertwiner(_) => "check-intertwiner",
            Sub::GammaLoop(_) => "gamma-loop",
            Sub::CheckFunctionalEq(_) => "check-functional-eq",
            Sub::Kernel(_) => "kernel",
            Sub::GammaReg(_) => "gamma-reg",
            Sub::CheckLimit(_) => "check-limit",
            Sub::CheckProp22(_) => "check-prop22",
            Sub::CheckTheorem52(_) => "check-theorem52",
            Sub::FourierWiener(_) => "fourier-wiener",
        }
    }

    fn params(&self) -> &[String] {
        match self {
            Sub::GammaReg(a) => &a.params.params,
            Sub::Sample(p)
            | Sub::CheckTranslation(p)
            | Sub::CheckDirectIntegral(p)
            | Sub::CheckUnitarity(p)
            | Sub::CheckGroupLaw(p)
            | Sub::CheckCommutators(p)
            | Sub::CheckIntertwiner(p)
            | Sub::GammaLoop(p)
            | Sub::CheckFunctionalEq(p)
            | Sub::Kernel(p)
            | Sub::CheckLimit(p)
            | Sub::CheckProp22(p)
            | Sub::CheckTheorem52(p)
            | Sub::FourierWiener(p) => &p.params,
        }
    }
}

fn list() {
    for c in COMMANDS {
        println!("{:<22} {:<32} {}", c.name, c.check, c.about);
    }
}

/// Config file, then flags, then `key=value` pairs.
fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(n) = cli.samples {
        config.n = n;
    }
    if let Some(m) = cli.grid {
        config.m = m;
    }
    if let Some(t) = cli.t {
        config.t = t;
    }
    if let Some(sub) = &cli.command {
        if let Some(c) = &config.command {
            if c != sub.name() {
                return Err(CliError::Config(format!(
                    "config names command `{c}` but `{}` was requested",
                    sub.name()
                )));
            }
        }
        config.command = Some(sub.name().to_string());
        config.apply_pairs(sub.params())?;
        if let Sub::GammaReg(GammaRegArgs { recurrence: true, .. }) = sub {
            config.params.insert("recurrence".into(), true.into());
        }
    }
    Ok(config)
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let config = resolve(cli)?;
    let Some(name) = config.command.clone() else {
        return Err(CliError::Config(
            "no command given; pass a subcommand or set `command` in the config".into(),
        ));
    };
    let Some(command) = commands::find(&name) else {
        return Err(CliError::Config(format!("unknown command `{name}`; see --list")));
    };
    let out = commands::run(command, &config)?;
    match &cli.out {
        Some(dir) => {
            output::write_all(dir, &name, &config, &out)?;
            for r in &out.reports {
                println!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.check);
            }
        }
        None => print!("{}", output::to_json(&name, &config, &out)?),
    }
    Ok(out.pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        list();
        return ExitCode::SUCCESS;
    }
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("loopgamma: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
