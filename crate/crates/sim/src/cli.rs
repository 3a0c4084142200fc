use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_scenario_name, Settings};

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "simulate", version, about = "1D crowd motion with congestion")]
pub struct CliInvocation {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Run one scenario and write snapshots, diagnostics and a manifest.
    Run(RunArgs),
    /// Run one scenario once per epsilon.
    Sweep(SweepArgs),
    /// Print the built-in scenarios.
    ListScenarios,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct RunArgs {
    /// case1, case2, case3, case4 or custom.
    #[arg(value_parser = parse_scenario_name)]
    pub scenario: String,
    /// JSON file with any subset of the flag values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated epsilon values.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1e-2, 1e-4, 1e-6])]
    pub epsilons: Vec<f64>,
}

pub fn parse_invocation<I, T>(args: I) -> Result<CliInvocation, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    CliInvocation::try_parse_from(args)
}
