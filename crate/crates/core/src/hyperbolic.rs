//! Hyperbolic sub-step: implicit mass flux and singular pressure, explicit
//! convection and background pressure.
//!
//! Substituting the implicit momentum into the mass balance yields, per cell,
//!
//! ```text
//! rho_star_i Z(pi_i) - dt^2 (L pi)_i = phi_i
//! phi = rho - dt div(rho u) + dt^2 div( div(rho u u) + grad p(Z) )
//! ```
//!
//! which is solved for the singular pressure `pi` by Newton's method. The new
//! density follows from inverting the pressure law, and the momentum is
//! updated directly with the new pressure gradient.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{density_fraction, velocity_from, FlowState, Grid1D};
use crate::linalg::{assemble_newton_jacobian, solve_cyclic_tridiagonal, LocalPlusLaplacian};
use crate::math;
use crate::pressure::PressureParams;
use crate::stencil::{self, Parity};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NewtonConfig {
    /// Bound on the sup-norm of the residual.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Relative probe step of the finite-difference Jacobian.
    pub fd_step: f64,
    /// First trial step length of the backtracking line search.
    pub damping: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 50,
            fd_step: 1e-7,
            damping: 1.0,
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter {
                name: "newton.tolerance",
                reason: "must be positive",
            });
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter {
                name: "newton.max_iterations",
                reason: "must be at least 1",
            });
        }
        if !(self.fd_step > 0.0) {
            return Err(Error::InvalidParameter {
                name: "newton.fd_step",
                reason: "must be positive",
            });
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "newton.damping",
                reason: "must lie in (0, 1]",
            });
        }
        Ok(())
    }
}

/// Output of one hyperbolic sub-step.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicResult {
    pub pi: Vec<f64>,
    pub rho_new: Vec<f64>,
    pub momentum_star: Vec<f64>,
    pub newton_iterations: usize,
    pub final_residual: f64,
}

/// Converged Newton solve of the pressure equation.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonSolution {
    pub pi: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub history: Vec<f64>,
}

/// Explicit terms shared by `phi` and the momentum update.
struct ExplicitTerms {
    mass_divergence: Vec<f64>,
    momentum_flux_divergence: Vec<f64>,
    background_gradient: Vec<f64>,
}

impl ExplicitTerms {
    fn new(state: &FlowState, params: &PressureParams, grid: &Grid1D, floor: f64) -> Result<Self> {
        state.validate(grid)?;
        let u = velocity_from(&state.rho, &state.momentum, floor);
        let z = density_fraction(&state.rho, &state.rho_star)?;
        let mut p = Vec::with_capacity(z.len());
        let mut speed = Vec::with_capacity(z.len());
        for (zi, ui) in z.iter().zip(&u) {
            p.push(params.background_pressure(*zi)?);
            speed.push(ui.abs() + math::sqrt(params.background_pressure_derivative(*zi)?));
        }
        let momentum_flux: Vec<f64> = state.momentum.iter().zip(&u).map(|(m, u)| m * u).collect();

        let mass_divergence =
            stencil::rusanov_divergence(&state.momentum, &state.rho, &speed, grid, Parity::Even)?;
        let momentum_flux_divergence = stencil::rusanov_divergence(
            &momentum_flux,
            &state.momentum,
            &speed,
            grid,
            Parity::Odd,
        )?;
        let background_gradient = stencil::gradient_centered(&p, grid)?;
        Ok(Self {
            mass_divergence,
            momentum_flux_divergence,
            background_gradient,
        })
    }

    fn phi(&self, rho: &[f64], dt: f64, grid: &Grid1D) -> Result<Vec<f64>> {
        let bracket: Vec<f64> = self
            .momentum_flux_divergence
            .iter()
            .zip(&self.background_gradient)
            .map(|(a, b)| a + b)
            .collect();
        let outer = stencil::divergence_centered(&bracket, grid)?;
        let dt2 = dt * dt;
        let phi: Vec<f64> = rho
            .iter()
            .zip(&self.mass_divergence)
            .zip(&outer)
            .map(|((r, dm), o)| r - dt * dm + dt2 * o)
            .collect();
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "phi" });
        }
        Ok(phi)
    }

    fn momentum_star(
        &self,
        momentum: &[f64],
        pi: &[f64],
        dt: f64,
        grid: &Grid1D,
    ) -> Result<Vec<f64>> {
        let grad_pi = stencil::gradient_centered(pi, grid)?;
        let m: Vec<f64> = (0..momentum.len())
            .map(|i| {
                momentum[i]
                    - dt * (self.momentum_flux_divergence[i]
                        + self.background_gradient[i]
                        + grad_pi[i])
            })
            .collect();
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "momentum update",
            });
        }
        Ok(m)
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "dt",
            reason: "time step must be positive",
        })
    }
}

/// Right-hand side `phi` of the pressure equation.
pub fn compute_phi(
    state: &FlowState,
    params: &PressureParams,
    dt: f64,
    grid: &Grid1D,
    velocity_floor: f64,
) -> Result<Vec<f64>> {
    check_dt(dt)?;
    ExplicitTerms::new(state, params, grid, velocity_floor)?.phi(&state.rho, dt, grid)
}

/// `F(pi) = rho_star Z(pi) - dt^2 L pi - phi`.
pub struct PressureEquation<'a> {
    pub phi: &'a [f64],
    pub rho_star: &'a [f64],
    pub params: &'a PressureParams,
    pub dt: f64,
}

impl LocalPlusLaplacian for PressureEquation<'_> {
    fn local(&self, cell: usize, pi: f64) -> Result<f64> {
        Ok(self.rho_star[cell] * self.params.invert_singular_pressure(pi)?)
    }

    fn coupling(&self) -> f64 {
        self.dt * self.dt
    }

    fn probe_floor(&self) -> f64 {
        1e-12 * self.params.epsilon
    }
}

impl PressureEquation<'_> {
    pub fn residual(&self, pi: &[f64], grid: &Grid1D) -> Result<Vec<f64>> {
        let lap = stencil::laplacian(pi, grid, Parity::Even)?;
        let c = self.coupling();
        (0..pi.len())
            .map(|i| Ok(self.local(i, pi[i])? - c * lap[i] - self.phi[i]))
            .collect()
    }
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Solves the pressure equation for `pi >= 0`.
///
/// Newton with the finite-difference Jacobian from
/// [`assemble_newton_jacobian`], globalised by halving the step until the
/// sup-norm residual decreases. Components that would turn negative are
/// pulled back to a tenth of their previous value. Once the tolerance is met
/// one extra step is taken (if iterations remain) to push the residual to
/// round-off, which keeps the discrete mass balance tight over long runs.
pub fn newton_solve_pi(
    phi: &[f64],
    rho_star: &[f64],
    params: &PressureParams,
    dt: f64,
    grid: &Grid1D,
    cfg: &NewtonConfig,
    initial: Option<&[f64]>,
) -> Result<NewtonSolution> {
    cfg.validate()?;
    grid.check_len(phi)?;
    grid.check_len(rho_star)?;
    if !(dt >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: "time step must be non-negative",
        });
    }
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "phi" });
    }
    if let Some(i) = rho_star.iter().position(|r| !(*r > 0.0)) {
        return Err(Error::CorruptState {
            cell: i,
            reason: "non-positive congestion density",
        });
    }
    let eq = PressureEquation {
        phi,
        rho_star,
        params,
        dt,
    };

    let mut pi: Vec<f64> = match initial {
        Some(guess) => {
            grid.check_len(guess)?;
            guess
                .iter()
                .map(|p| if p.is_finite() { p.max(0.0) } else { 0.0 })
                .collect()
        }
        None => phi
            .iter()
            .zip(rho_star)
            .map(|(f, r)| params.singular_pressure((f / r).clamp(0.0, 0.999)))
            .collect::<Result<_>>()?,
    };

    let mut f = eq.residual(&pi, grid)?;
    let mut r = sup_norm(&f);
    let mut history = alloc::vec![r];
    let mut iterations = 0;
    let mut polished = false;

    while iterations < cfg.max_iterations {
        if r <= cfg.tolerance {
            if polished || r == 0.0 {
                break;
            }
            polished = true;
        }
        iterations += 1;
        let jac = assemble_newton_jacobian(&pi, &eq, cfg.fd_step, grid)?;
        let neg_f: Vec<f64> = f.iter().map(|v| -v).collect();
        let delta = solve_cyclic_tridiagonal(&jac, &neg_f)?;

        let mut lambda = cfg.damping;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<f64> = pi
                .iter()
                .zip(&delta)
                .map(|(p, d)| {
                    let next = p + lambda * d;
                    if next >= 0.0 {
                        next
                    } else {
                        0.1 * p
                    }
                })
                .collect();
            let f_trial = eq.residual(&trial, grid)?;
            let r_trial = sup_norm(&f_trial);
            if r_trial < r || (polished && r_trial <= r) {
                accepted = Some((trial, f_trial, r_trial));
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((p, ft, rt)) => {
                pi = p;
                f = ft;
                r = rt;
                history.push(r);
            }
            // no decrease possible: either at round-off or stuck
            None => break,
        }
    }

    if r <= cfg.tolerance {
        Ok(NewtonSolution {
            pi,
            iterations,
            residual: r,
            history,
        })
    } else {
        Err(Error::NonConvergence {
            iterations,
            residual: r,
            history,
        })
    }
}

/// `rho = rho_star * Z(pi)`; strictly below `rho_star`.
pub fn recover_density(pi: &[f64], rho_star: &[f64], params: &PressureParams) -> Result<Vec<f64>> {
    pi.iter()
        .zip(rho_star)
        .map(|(p, r)| Ok(r * params.invert_singular_pressure(*p)?))
        .collect()
}

/// Direct momentum update
/// `m* = m - dt [ div(rho u u) + grad p(Z^n) + grad pi^{n+1} ]`.
pub fn update_momentum_direct(
    state: &FlowState,
    pi_new: &[f64],
    params: &PressureParams,
    dt: f64,
    grid: &Grid1D,
    velocity_floor: f64,
) -> Result<Vec<f64>> {
    check_dt(dt)?;
    grid.check_len(pi_new)?;
    ExplicitTerms::new(state, params, grid, velocity_floor)?.momentum_star(
        &state.momentum,
        pi_new,
        dt,
        grid,
    )
}

/// Full hyperbolic sub-step. `pi_guess` seeds Newton (typically the pressure
/// of the previous step); without it the cell-wise `pi(Z^n)` is used.
pub fn hyperbolic_step(
    state: &FlowState,
    params: &PressureParams,
    dt: f64,
    grid: &Grid1D,
    cfg: &NewtonConfig,
    velocity_floor: f64,
    pi_guess: Option<&[f64]>,
) -> Result<HyperbolicResult> {
    check_dt(dt)?;
    let terms = ExplicitTerms::new(state, params, grid, velocity_floor)?;
    let phi = terms.phi(&state.rho, dt, grid)?;
    let cold;
    let guess = match pi_guess {
        Some(g) => g,
        None => {
            cold = state
                .rho
                .iter()
                .zip(&state.rho_star)
                .map(|(r, s)| params.singular_pressure(r / s))
                .collect::<Result<Vec<f64>>>()?;
            &cold
        }
    };
    let sol = newton_solve_pi(&phi, &state.rho_star, params, dt, grid, cfg, Some(guess))?;
    let rho_new = recover_density(&sol.pi, &state.rho_star, params)?;
    let momentum_star = terms.momentum_star(&state.momentum, &sol.pi, dt, grid)?;
    Ok(HyperbolicResult {
        pi: sol.pi,
        rho_new,
        momentum_star,
        newton_iterations: sol.iterations,
        final_residual: sol.residual,
    })
}

/// `max_i |u_i| + sqrt(p'(Z_i))`.
pub fn max_wave_speed(
    state: &FlowState,
    params: &PressureParams,
    velocity_floor: f64,
) -> Result<f64> {
    let u = velocity_from(&state.rho, &state.momentum, velocity_floor);
    let z = density_fraction(&state.rho, &state.rho_star)?;
    let mut lambda = 0.0_f64;
    for (ui, zi) in u.iter().zip(&z) {
        let zc = zi.clamp(0.0, 1.0);
        lambda = lambda.max(ui.abs() + math::sqrt(params.background_pressure_derivative(zc)?));
    }
    Ok(lambda)
}

/// `lambda_max <= sigma dx / dt`.
pub fn check_cfl(lambda_max: f64, dt: f64, dx: f64, sigma: f64) -> bool {
    lambda_max <= sigma * dx / dt
}
