//! Time stepping: hyperbolic, diffusion and congestion-transport sub-steps
//! executed in that order with a fixed time step.

use alloc::vec::Vec;

use crate::diagnostics::DiagnosticsRecord;
use crate::diffusion::solve_diffusion;
use crate::error::{Error, Result};
use crate::grid::{velocity_from, Boundary, FlowState, Grid1D, DEFAULT_VELOCITY_FLOOR};
use crate::hyperbolic::{check_cfl, hyperbolic_step, max_wave_speed, NewtonConfig};
use crate::math;
use crate::pressure::PressureParams;
use crate::scenario::Scenario;
use crate::transport::transport_rho_star;

/// What to do when the explicit CFL bound is exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CflPolicy {
    #[default]
    Abort,
    Warn,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunConfig {
    pub scenario: Scenario,
    pub grid: Grid1D,
    pub dt: f64,
    pub t_end: f64,
    pub params: PressureParams,
    pub mu: f64,
    pub sigma: f64,
    pub newton: NewtonConfig,
    pub snapshot_times: Vec<f64>,
    pub velocity_floor: f64,
    pub cfl_policy: CflPolicy,
}

pub const DEFAULT_N_CELLS: usize = 1000;
pub const DEFAULT_DT: f64 = 1e-4;
pub const DEFAULT_MU: f64 = 1e-3;
pub const DEFAULT_SIGMA: f64 = 0.5;

impl RunConfig {
    /// Reference setup: unit periodic interval, 1000 cells, `dt = 1e-4`,
    /// default pressure parameters, `mu = 1e-3`, `sigma = 0.5`.
    pub fn reference(scenario: Scenario) -> Self {
        let grid = Grid1D::uniform(1.0, DEFAULT_N_CELLS, Boundary::Periodic)
            .expect("reference grid is valid");
        Self {
            t_end: scenario.default_t_end(),
            snapshot_times: scenario.default_snapshot_times(),
            scenario,
            grid,
            dt: DEFAULT_DT,
            params: PressureParams::default(),
            mu: DEFAULT_MU,
            sigma: DEFAULT_SIGMA,
            newton: NewtonConfig::default(),
            velocity_floor: DEFAULT_VELOCITY_FLOOR,
            cfl_policy: CflPolicy::Abort,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason| Err(Error::InvalidParameter { name, reason });
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt", "must be positive");
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad("t_end", "must be non-negative");
        }
        if !(self.sigma > 0.0 && self.sigma <= 1.0) {
            return bad("sigma", "Courant number must lie in (0, 1]");
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return bad("mu", "viscosity must be non-negative");
        }
        if !(self.velocity_floor > 0.0) {
            return bad("velocity_floor", "must be positive");
        }
        let slack = 0.5 * self.dt;
        if self
            .snapshot_times
            .iter()
            .any(|t| !(*t >= 0.0 && *t <= self.t_end + slack))
        {
            return bad("snapshot_times", "must lie in [0, t_end]");
        }
        self.params.validate()?;
        self.newton.validate()
    }

    /// Number of whole steps to reach `t`.
    pub fn steps_to(&self, t: f64) -> usize {
        math::round(t / self.dt) as usize
    }
}

/// New state, its diagnostics and the singular pressure of the step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: FlowState,
    pub diagnostics: DiagnosticsRecord,
    pub pi: Vec<f64>,
}

/// Advances `state` by one time step. `pi_guess` seeds the Newton solve.
pub fn step(
    state: &FlowState,
    config: &RunConfig,
    pi_guess: Option<&[f64]>,
) -> Result<StepOutcome> {
    let grid = &config.grid;
    let (dt, floor) = (config.dt, config.velocity_floor);
    let lambda = max_wave_speed(state, &config.params, floor)?;
    let cfl_ok = check_cfl(lambda, dt, grid.dx, config.sigma);
    if !cfl_ok && config.cfl_policy == CflPolicy::Abort {
        return Err(Error::CflViolation {
            speed: lambda,
            bound: config.sigma * grid.dx / dt,
        });
    }

    let hyp = hyperbolic_step(
        state,
        &config.params,
        dt,
        grid,
        &config.newton,
        floor,
        pi_guess,
    )?;
    let u_star = velocity_from(&hyp.rho_new, &hyp.momentum_star, floor);
    let u_new = solve_diffusion(&hyp.rho_new, &u_star, config.mu, dt, grid)?;
    let rho_star = transport_rho_star(&state.rho_star, &u_new, dt, grid)?;
    let momentum = hyp.rho_new.iter().zip(&u_new).map(|(r, u)| r * u).collect();

    let next = FlowState {
        rho: hyp.rho_new,
        momentum,
        rho_star,
        time: state.time + dt,
    };
    next.validate(grid)?;
    let diagnostics = DiagnosticsRecord::collect(
        &next,
        &config.params,
        grid,
        floor,
        hyp.newton_iterations,
        lambda,
        cfl_ok,
    );
    Ok(StepOutcome {
        state: next,
        diagnostics,
        pi: hyp.pi,
    })
}

/// Fields stored at an output time.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Snapshot {
    pub time: f64,
    pub rho: Vec<f64>,
    pub velocity: Vec<f64>,
    pub rho_star: Vec<f64>,
    pub pi: Vec<f64>,
}

impl Snapshot {
    fn capture(state: &FlowState, pi: &[f64], floor: f64) -> Self {
        Self {
            time: state.time,
            rho: state.rho.clone(),
            velocity: state.velocity(floor),
            rho_star: state.rho_star.clone(),
            pi: pi.to_vec(),
        }
    }

    pub fn density_fraction(&self) -> Vec<f64> {
        self.rho
            .iter()
            .zip(&self.rho_star)
            .map(|(r, s)| r / s)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RunStatus {
    Completed,
    CflViolation,
    NewtonFailure,
    /// Any other step error (corrupt state, solver breakdown).
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub snapshots: Vec<Snapshot>,
    /// One record for the initial state followed by one per step.
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub status: RunStatus,
    /// Time at which the failing step started, with its error.
    pub failure: Option<(f64, Error)>,
}

impl RunResult {
    /// Newton iterations of every completed step.
    pub fn newton_iterations(&self) -> Vec<usize> {
        self.diagnostics
            .iter()
            .skip(1)
            .map(|d| d.newton_iterations)
            .collect()
    }

    pub fn median_newton_iterations(&self) -> Option<f64> {
        median(&mut self.newton_iterations())
    }

    pub fn max_z(&self) -> f64 {
        self.diagnostics.iter().fold(0.0, |m, d| m.max(d.max_z))
    }

    /// Snapshot whose time is closest to `t`.
    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots
            .iter()
            .min_by(|a, b| (a.time - t).abs().partial_cmp(&(b.time - t).abs()).unwrap())
    }
}

fn classify(err: &Error) -> RunStatus {
    match err {
        Error::NonConvergence { .. } => RunStatus::NewtonFailure,
        Error::CflViolation { .. } => RunStatus::CflViolation,
        _ => RunStatus::Failed,
    }
}

/// Runs the configured scenario from `t = 0` to `t_end`.
///
/// Invalid configurations or initial data are returned as errors; failures
/// during time stepping end the run early and are reported in the result.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    let grid = &config.grid;
    let floor = config.velocity_floor;
    let mut state = config.scenario.initialize(grid)?;
    let mut pi: Vec<f64> = state
        .rho
        .iter()
        .zip(&state.rho_star)
        .map(|(r, s)| config.params.singular_pressure(r / s))
        .collect::<Result<_>>()?;

    let mut snapshot_steps: Vec<usize> = config
        .snapshot_times
        .iter()
        .map(|t| config.steps_to(*t))
        .collect();
    snapshot_steps.sort_unstable();
    snapshot_steps.dedup();
    let n_steps = config.steps_to(config.t_end);

    let lambda = max_wave_speed(&state, &config.params, floor)?;
    let mut diagnostics = alloc::vec![DiagnosticsRecord::collect(
        &state,
        &config.params,
        grid,
        floor,
        0,
        lambda,
        check_cfl(lambda, config.dt, grid.dx, config.sigma),
    )];
    let mut snapshots = Vec::with_capacity(snapshot_steps.len());
    let mut pending = snapshot_steps.iter().peekable();
    if pending.peek() == Some(&&0) {
        snapshots.push(Snapshot::capture(&state, &pi, floor));
        pending.next();
    }

    let mut status = RunStatus::Completed;
    let mut failure = None;
    for k in 1..=n_steps {
        match step(&state, config, Some(&pi)) {
            Ok(out) => {
                state = out.state;
                state.time = k as f64 * config.dt;
                pi = out.pi;
                let mut rec = out.diagnostics;
                rec.time = state.time;
                diagnostics.push(rec);
            }
            Err(err) => {
                status = classify(&err);
                failure = Some((state.time, err));
                break;
            }
        }
        if pending.peek() == Some(&&k) {
            snapshots.push(Snapshot::capture(&state, &pi, floor));
            pending.next();
        }
    }

    Ok(RunResult {
        snapshots,
        diagnostics,
        status,
        failure,
    })
}

/// Result of one member of an epsilon sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub epsilon: f64,
    pub outcome: Result<RunResult>,
}

impl SweepEntry {
    /// `(time, max_Z)` per recorded step.
    pub fn max_z_series(&self) -> Vec<(f64, f64)> {
        match &self.outcome {
            Ok(r) => r.diagnostics.iter().map(|d| (d.time, d.max_z)).collect(),
            Err(_) => Vec::new(),
        }
    }

    pub fn median_newton_iterations(&self) -> Option<f64> {
        self.outcome.as_ref().ok()?.median_newton_iterations()
    }

    pub fn max_newton_iterations(&self) -> Option<usize> {
        self.outcome
            .as_ref()
            .ok()?
            .newton_iterations()
            .into_iter()
            .max()
    }
}

pub(crate) fn median(values: &mut [usize]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2]) as f64
    })
}

/// Runs `config` once per `epsilon`, otherwise unchanged. Each member's
/// errors are kept with that member.
pub fn run_epsilon_sweep(config: &RunConfig, epsilons: &[f64]) -> Result<Vec<SweepEntry>> {
    if epsilons.is_empty() {
        return Err(Error::InvalidParameter {
            name: "epsilons",
            reason: "sweep needs at least one value",
        });
    }
    if epsilons.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "epsilons",
            reason: "all values must be positive",
        });
    }
    Ok(epsilons
        .iter()
        .map(|&epsilon| {
            let cfg = RunConfig {
                params: config.params.with_epsilon(epsilon),
                ..config.clone()
            };
            SweepEntry {
                epsilon,
                outcome: run(&cfg),
            }
        })
        .collect())
}
