//! Flat run settings shared by the JSON config file and the command-line
//! flags, and their resolution into a [`RunConfig`].

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use congestion_core::{Boundary, CflPolicy, Grid1D, Profile, RunConfig, Scenario};
use serde::{Deserialize, Serialize};

use crate::error::{SimError, SimResult};

pub const DEFAULT_LENGTH: f64 = 1.0;
pub const DEFAULT_OUTPUT_DIR: &str = "output";

/// Every tunable of a run. In a config file each field is optional; on the
/// command line each field is a `--kebab-case` flag.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Singular pressure scale.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Singular pressure exponent at low density.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Singular pressure exponent at the congestion limit.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Background pressure exponent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Viscosity.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Courant number bound.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// Time step.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Final time.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    /// Number of cells.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_cells: Option<usize>,
    /// Domain length.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    /// `periodic` or `dirichlet_zero_velocity`.
    #[arg(long, value_parser = parse_boundary)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
    /// Comma-separated output times.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_times: Option<Vec<f64>>,
    /// Momentum-to-velocity floor on the density.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub velocity_floor: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_tolerance: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_max_iterations: Option<usize>,
    /// Relative finite-difference step of the Jacobian.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_fd_step: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_damping: Option<f64>,
    /// `abort` or `warn`.
    #[arg(long, value_parser = parse_cfl_policy)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfl_policy: Option<CflPolicy>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Initial profiles of the `custom` scenario (config file only).
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomProfiles>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomProfiles {
    pub rho: Profile,
    pub velocity: Profile,
    pub rho_star: Profile,
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    match s {
        "periodic" => Ok(Boundary::Periodic),
        "dirichlet_zero_velocity" | "dirichlet-zero-velocity" => {
            Ok(Boundary::DirichletZeroVelocity)
        }
        _ => Err(format!(
            "unknown boundary '{s}' (expected periodic or dirichlet_zero_velocity)"
        )),
    }
}

fn parse_cfl_policy(s: &str) -> Result<CflPolicy, String> {
    match s {
        "abort" => Ok(CflPolicy::Abort),
        "warn" => Ok(CflPolicy::Warn),
        _ => Err(format!("unknown CFL policy '{s}' (expected abort or warn)")),
    }
}

/// Scenario identifiers accepted on the command line.
pub const SCENARIO_NAMES: [&str; 5] = ["case1", "case2", "case3", "case4", "custom"];

pub fn parse_scenario_name(s: &str) -> Result<String, String> {
    if SCENARIO_NAMES.contains(&s) {
        Ok(s.to_owned())
    } else {
        Err(format!(
            "unknown scenario '{s}' (expected one of: {})",
            SCENARIO_NAMES.join(", ")
        ))
    }
}

/// Where a resolved value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Default,
    File,
    Flag,
    /// Set per member by an epsilon sweep.
    Sweep,
}

pub type Provenance = BTreeMap<&'static str, Source>;

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub scenario_name: String,
    pub config: RunConfig,
    pub output_dir: PathBuf,
    pub provenance: Provenance,
    /// Every field filled in; feeding this back as a config file reproduces
    /// the run.
    pub settings: Settings,
}

pub fn load_settings(path: &Path) -> SimResult<Settings> {
    let text = fs::read_to_string(path).map_err(|source| SimError::ReadConfig {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| SimError::ParseConfig {
        path: path.to_owned(),
        source,
    })
}

fn pick<T: Clone>(
    prov: &mut Provenance,
    name: &'static str,
    default: T,
    file: &Option<T>,
    flag: &Option<T>,
) -> T {
    let (value, source) = match (flag, file) {
        (Some(v), _) => (v.clone(), Source::Flag),
        (None, Some(v)) => (v.clone(), Source::File),
        (None, None) => (default, Source::Default),
    };
    prov.insert(name, source);
    value
}

/// The scenario's output times up to `t_end`, always ending at `t_end`.
fn default_snapshot_times(times: &[f64], t_end: f64) -> Vec<f64> {
    let mut out: Vec<f64> = times.iter().copied().filter(|t| *t < t_end).collect();
    out.push(t_end);
    out
}

/// Merges defaults, then `file`, then `flags` into a run description.
pub fn resolve(scenario_name: &str, file: &Settings, flags: &Settings) -> SimResult<Resolved> {
    let name = parse_scenario_name(scenario_name).map_err(SimError::Usage)?;
    let custom = flags.custom.as_ref().or(file.custom.as_ref());
    let scenario = match name.as_str() {
        "custom" => {
            let c = custom.ok_or_else(|| {
                SimError::Usage(
                    "scenario 'custom' needs a \"custom\" block in the config file".into(),
                )
            })?;
            Scenario::Custom {
                rho: c.rho.clone(),
                velocity: c.velocity.clone(),
                rho_star: c.rho_star.clone(),
            }
        }
        n => Scenario::from_name(n).expect("validated scenario name"),
    };
    if custom.is_some() && name != "custom" {
        return Err(SimError::Usage(format!(
            "a \"custom\" block is only valid with scenario 'custom', not '{name}'"
        )));
    }

    let base = RunConfig::reference(scenario.clone());
    let mut p = Provenance::new();
    let epsilon = pick(
        &mut p,
        "epsilon",
        base.params.epsilon,
        &file.epsilon,
        &flags.epsilon,
    );
    let alpha = pick(
        &mut p,
        "alpha",
        base.params.alpha,
        &file.alpha,
        &flags.alpha,
    );
    let beta = pick(&mut p, "beta", base.params.beta, &file.beta, &flags.beta);
    let gamma = pick(
        &mut p,
        "gamma",
        base.params.gamma,
        &file.gamma,
        &flags.gamma,
    );
    let mu = pick(&mut p, "mu", base.mu, &file.mu, &flags.mu);
    let sigma = pick(&mut p, "sigma", base.sigma, &file.sigma, &flags.sigma);
    let dt = pick(&mut p, "dt", base.dt, &file.dt, &flags.dt);
    let t_end = pick(&mut p, "t_end", base.t_end, &file.t_end, &flags.t_end);
    let n_cells = pick(
        &mut p,
        "n_cells",
        base.grid.n_cells,
        &file.n_cells,
        &flags.n_cells,
    );
    let length = pick(
        &mut p,
        "length",
        DEFAULT_LENGTH,
        &file.length,
        &flags.length,
    );
    let boundary = pick(
        &mut p,
        "boundary",
        base.grid.boundary,
        &file.boundary,
        &flags.boundary,
    );
    let snapshot_times = pick(
        &mut p,
        "snapshot_times",
        default_snapshot_times(&base.snapshot_times, t_end),
        &file.snapshot_times,
        &flags.snapshot_times,
    );
    let velocity_floor = pick(
        &mut p,
        "velocity_floor",
        base.velocity_floor,
        &file.velocity_floor,
        &flags.velocity_floor,
    );
    let newton_tolerance = pick(
        &mut p,
        "newton_tolerance",
        base.newton.tolerance,
        &file.newton_tolerance,
        &flags.newton_tolerance,
    );
    let newton_max_iterations = pick(
        &mut p,
        "newton_max_iterations",
        base.newton.max_iterations,
        &file.newton_max_iterations,
        &flags.newton_max_iterations,
    );
    let newton_fd_step = pick(
        &mut p,
        "newton_fd_step",
        base.newton.fd_step,
        &file.newton_fd_step,
        &flags.newton_fd_step,
    );
    let newton_damping = pick(
        &mut p,
        "newton_damping",
        base.newton.damping,
        &file.newton_damping,
        &flags.newton_damping,
    );
    let cfl_policy = pick(
        &mut p,
        "cfl_policy",
        base.cfl_policy,
        &file.cfl_policy,
        &flags.cfl_policy,
    );
    let output_dir = pick(
        &mut p,
        "output_dir",
        PathBuf::from(DEFAULT_OUTPUT_DIR),
        &file.output_dir,
        &flags.output_dir,
    );

    let grid = Grid1D::uniform(length, n_cells, boundary)?;
    let mut config = RunConfig {
        scenario,
        grid,
        dt,
        t_end,
        params: base.params,
        mu,
        sigma,
        newton: base.newton,
        snapshot_times: snapshot_times.clone(),
        velocity_floor,
        cfl_policy,
    };
    config.params.epsilon = epsilon;
    config.params.alpha = alpha;
    config.params.beta = beta;
    config.params.gamma = gamma;
    config.newton.tolerance = newton_tolerance;
    config.newton.max_iterations = newton_max_iterations;
    config.newton.fd_step = newton_fd_step;
    config.newton.damping = newton_damping;
    config.validate()?;

    let settings = Settings {
        epsilon: Some(epsilon),
        alpha: Some(alpha),
        beta: Some(beta),
        gamma: Some(gamma),
        mu: Some(mu),
        sigma: Some(sigma),
        dt: Some(dt),
        t_end: Some(t_end),
        n_cells: Some(n_cells),
        length: Some(length),
        boundary: Some(boundary),
        snapshot_times: Some(snapshot_times),
        velocity_floor: Some(velocity_floor),
        newton_tolerance: Some(newton_tolerance),
        newton_max_iterations: Some(newton_max_iterations),
        newton_fd_step: Some(newton_fd_step),
        newton_damping: Some(newton_damping),
        cfl_policy: Some(cfl_policy),
        output_dir: Some(output_dir.clone()),
        custom: custom.cloned(),
    };
    Ok(Resolved {
        scenario_name: name,
        config,
        output_dir,
        provenance: p,
        settings,
    })
}

impl Resolved {
    /// Same run with a different `epsilon`, marked as set by a sweep.
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        let mut r = self.clone();
        r.config.params.epsilon = epsilon;
        r.settings.epsilon = Some(epsilon);
        r.provenance.insert("epsilon", Source::Sweep);
        r
    }
}
