//! Executes a parsed invocation: resolves the configuration, runs the solver
//! and writes the output directory.

use std::io::Write;
use std::path::{Path, PathBuf};

use congestion_core::{run, run_epsilon_sweep, RunConfig, RunResult, RunStatus, Scenario};
use serde::Serialize;

use crate::cli::{CliInvocation, Command, RunArgs, SweepArgs};
use crate::config::{load_settings, resolve, Provenance, Resolved, Settings};
use crate::error::{SimError, SimResult};
use crate::output::{epsilon_label, fmt_f64, write_diagnostics, write_json, write_snapshots};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NEWTON: u8 = 3;
pub const EXIT_CFL: u8 = 4;

/// Same spelling as in the JSON manifests.
pub fn status_label(status: RunStatus) -> &'static str {
    match status {
        RunStatus::Completed => "completed",
        RunStatus::CflViolation => "cfl_violation",
        RunStatus::NewtonFailure => "newton_failure",
        RunStatus::Failed => "failed",
    }
}

pub fn exit_code(status: RunStatus) -> u8 {
    match status {
        RunStatus::Completed => EXIT_OK,
        RunStatus::NewtonFailure => EXIT_NEWTON,
        RunStatus::CflViolation => EXIT_CFL,
        RunStatus::Failed => EXIT_FAILED,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub time: f64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub steps: usize,
    pub final_time: f64,
    pub initial_mass: f64,
    pub max_relative_mass_drift: f64,
    pub max_z: f64,
    pub newton_median: Option<f64>,
    pub newton_max: Option<usize>,
}

impl Summary {
    pub fn of(result: &RunResult) -> Self {
        let m0 = result.diagnostics[0].total_mass;
        Self {
            steps: result.diagnostics.len() - 1,
            final_time: result.diagnostics.last().map_or(0.0, |d| d.time),
            initial_mass: m0,
            max_relative_mass_drift: result
                .diagnostics
                .iter()
                .fold(0.0, |m, d| f64::max(m, ((d.total_mass - m0) / m0).abs())),
            max_z: result.max_z(),
            newton_median: result.median_newton_iterations(),
            newton_max: result.newton_iterations().into_iter().max(),
        }
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    code_version: &'static str,
    core_version: &'static str,
    command: &'static str,
    scenario: &'a str,
    status: RunStatus,
    failure: Option<Failure>,
    summary: Summary,
    provenance: &'a Provenance,
    settings: &'a Settings,
    config: &'a RunConfig,
    files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct SweepMember {
    epsilon: f64,
    directory: PathBuf,
    diagnostics: PathBuf,
    status: RunStatus,
    failure: Option<Failure>,
}

#[derive(Serialize)]
struct SweepManifest<'a> {
    code_version: &'static str,
    core_version: &'static str,
    command: &'static str,
    scenario: &'a str,
    epsilons: &'a [f64],
    members: Vec<SweepMember>,
    provenance: &'a Provenance,
    settings: &'a Settings,
    config: &'a RunConfig,
}

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const CONFIG_FILE: &str = "config.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SWEEP_SUMMARY_FILE: &str = "sweep_summary.csv";

pub fn diagnostics_file_for(epsilon: f64) -> String {
    format!("diagnostics_eps_{}.csv", epsilon_label(epsilon))
}

pub fn member_dir_for(epsilon: f64) -> String {
    format!("eps_{}", epsilon_label(epsilon))
}

fn failure_of(result: &RunResult) -> Option<Failure> {
    result.failure.as_ref().map(|(time, e)| Failure {
        time: *time,
        error: e.to_string(),
    })
}

fn resolve_args(args: &RunArgs) -> SimResult<Resolved> {
    let file = match &args.config {
        Some(path) => load_settings(path)?,
        None => Settings::default(),
    };
    resolve(&args.scenario, &file, &args.settings)
}

/// Writes snapshots, diagnostics, the reproducing config and the manifest of
/// one finished run into `dir`.
fn write_run(resolved: &Resolved, result: &RunResult, dir: &Path) -> SimResult<()> {
    let mut files = write_snapshots(result, &resolved.config, dir)?;
    write_diagnostics(&result.diagnostics, &dir.join(DIAGNOSTICS_FILE))?;
    write_json(&resolved.settings, &dir.join(CONFIG_FILE))?;
    files.push(DIAGNOSTICS_FILE.into());
    files.push(CONFIG_FILE.into());
    let manifest = RunManifest {
        code_version: crate::VERSION,
        core_version: congestion_core::VERSION,
        command: "run",
        scenario: &resolved.scenario_name,
        status: result.status,
        failure: failure_of(result),
        summary: Summary::of(result),
        provenance: &resolved.provenance,
        settings: &resolved.settings,
        config: &resolved.config,
        files,
    };
    write_json(&manifest, &dir.join(MANIFEST_FILE))
}

fn describe(label: &str, result: &RunResult) -> String {
    let s = Summary::of(result);
    let mut line = format!(
        "{label}: {}, {} steps to t = {}, max Z {:.6}, Newton median {}",
        status_label(result.status),
        s.steps,
        s.final_time,
        s.max_z,
        s.newton_median.map_or("-".into(), |m| m.to_string()),
    );
    if let Some((t, e)) = &result.failure {
        line.push_str(&format!(", stopped at t = {t}: {e}"));
    }
    line
}

fn execute_run(args: &RunArgs, out: &mut dyn Write) -> SimResult<u8> {
    let resolved = resolve_args(args)?;
    let result = run(&resolved.config)?;
    write_run(&resolved, &result, &resolved.output_dir)?;
    report(out, &describe(&resolved.scenario_name, &result));
    report(
        out,
        &format!("output written to {}", resolved.output_dir.display()),
    );
    Ok(exit_code(result.status))
}

fn execute_sweep(args: &SweepArgs, out: &mut dyn Write) -> SimResult<u8> {
    if args.run.settings.epsilon.is_some() {
        return Err(SimError::Usage(
            "--epsilon cannot be combined with sweep; use --epsilons".into(),
        ));
    }
    let base = resolve_args(&args.run)?;
    let root = base.output_dir.clone();
    let entries = run_epsilon_sweep(&base.config, &args.epsilons)?;

    let mut members = Vec::new();
    let mut summary = csv_summary_header();
    let mut code = EXIT_OK;
    for entry in &entries {
        let eps = entry.epsilon;
        let dir_name = PathBuf::from(member_dir_for(eps));
        let mut member = base.with_epsilon(eps);
        member.output_dir = root.join(&dir_name);
        member.settings.output_dir = Some(member.output_dir.clone());
        let result = entry
            .outcome
            .as_ref()
            .map_err(|e| SimError::Core(e.clone()))?;
        write_run(&member, result, &member.output_dir)?;
        let diag_name = PathBuf::from(diagnostics_file_for(eps));
        write_diagnostics(&result.diagnostics, &root.join(&diag_name))?;

        let s = Summary::of(result);
        summary.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_f64(eps),
            status_label(result.status),
            s.steps,
            fmt_f64(s.final_time),
            fmt_f64(s.max_z),
            s.newton_median.map_or(String::new(), fmt_f64),
            s.newton_max.map_or(String::new(), |m| m.to_string()),
        ));
        report(
            out,
            &describe(&format!("epsilon = {}", epsilon_label(eps)), result),
        );
        if code == EXIT_OK {
            code = exit_code(result.status);
        }
        members.push(SweepMember {
            epsilon: eps,
            directory: dir_name,
            diagnostics: diag_name,
            status: result.status,
            failure: failure_of(result),
        });
    }
    let path = root.join(SWEEP_SUMMARY_FILE);
    std::fs::write(&path, summary).map_err(|source| SimError::Write { path, source })?;

    let manifest = SweepManifest {
        code_version: crate::VERSION,
        core_version: congestion_core::VERSION,
        command: "sweep",
        scenario: &base.scenario_name,
        epsilons: &args.epsilons,
        members,
        provenance: &base.provenance,
        settings: &base.settings,
        config: &base.config,
    };
    write_json(&manifest, &root.join(MANIFEST_FILE))?;
    report(out, &format!("output written to {}", root.display()));
    Ok(code)
}

fn csv_summary_header() -> String {
    "epsilon,status,steps,final_time,max_Z,newton_median,newton_max\n".into()
}

fn report(out: &mut dyn Write, line: &str) {
    // Progress lines are informational; a closed stdout must not fail the run.
    let _ = writeln!(out, "{line}");
}

/// Runs `inv`, printing progress lines to `out`. Returns the process exit
/// code for runs that started; setup and IO failures are errors.
pub fn execute(inv: &CliInvocation, out: &mut dyn Write) -> SimResult<u8> {
    match &inv.command {
        Command::Run(args) => execute_run(args, out),
        Command::Sweep(args) => execute_sweep(args, out),
        Command::ListScenarios => {
            for sc in [
                Scenario::Case1,
                Scenario::Case2,
                Scenario::Case3,
                Scenario::Case4,
            ] {
                report(out, &format!("{:<8}{}", sc.name(), sc.description()));
            }
            report(
                out,
                &format!(
                    "{:<8}{}",
                    "custom", "profiles from the \"custom\" block of --config"
                ),
            );
            Ok(EXIT_OK)
        }
    }
}
