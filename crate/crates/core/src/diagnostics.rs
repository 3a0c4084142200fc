//! Per-step monitored quantities.

use crate::error::{Error, Result};
use crate::grid::{velocity_from, FlowState, Grid1D};
use crate::math;
use crate::pressure::PressureParams;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub total_mass: f64,
    /// `NaN` when the energy density is undefined for the pressure exponents.
    pub total_energy: f64,
    pub max_z: f64,
    pub rho_star_min: f64,
    pub rho_star_max: f64,
    pub newton_iterations: usize,
    pub max_wave_speed: f64,
    pub cfl_ok: bool,
}

impl DiagnosticsRecord {
    pub fn collect(
        state: &FlowState,
        params: &PressureParams,
        grid: &Grid1D,
        velocity_floor: f64,
        newton_iterations: usize,
        max_wave_speed: f64,
        cfl_ok: bool,
    ) -> Self {
        let (max_z, _) = constraint_report(state);
        let (rho_star_min, rho_star_max) = state
            .rho_star
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(*r), hi.max(*r))
            });
        Self {
            time: state.time,
            total_mass: total_mass(state, grid),
            total_energy: discrete_energy(state, params, grid, velocity_floor).unwrap_or(f64::NAN),
            max_z,
            rho_star_min,
            rho_star_max,
            newton_iterations,
            max_wave_speed,
            cfl_ok,
        }
    }
}

/// `sum rho_i dx`.
pub fn total_mass(state: &FlowState, grid: &Grid1D) -> f64 {
    state.rho.iter().sum::<f64>() * grid.dx
}

/// `sum (rho u^2 / 2 + Z Gamma(Z)) dx`.
pub fn discrete_energy(
    state: &FlowState,
    params: &PressureParams,
    grid: &Grid1D,
    velocity_floor: f64,
) -> Result<f64> {
    let u = velocity_from(&state.rho, &state.momentum, velocity_floor);
    let mut sum = 0.0;
    for ((rho, rs), u) in state.rho.iter().zip(&state.rho_star).zip(&u) {
        let z = rho / rs;
        sum += 0.5 * rho * u * u + z * params.energy_density(z)?;
    }
    Ok(sum * grid.dx)
}

/// Largest density fraction and the first cell attaining it
/// (`None` for an all-zero density).
pub fn constraint_report(state: &FlowState) -> (f64, Option<usize>) {
    let mut best = (0.0, None);
    for (i, (r, s)) in state.rho.iter().zip(&state.rho_star).enumerate() {
        let z = r / s;
        if z > best.0 {
            best = (z, Some(i));
        }
    }
    best
}

/// Mirror-symmetry defect about `x = center` on a periodic grid:
/// `max_i |rho(x) - rho(x')| + |m(x) + m(x')| + |rho_star(x) - rho_star(x')|`
/// with `x' = 2 center - x`. The mirror must map cell centres onto cell
/// centres.
pub fn reflection_error(state: &FlowState, grid: &Grid1D, center: f64) -> Result<f64> {
    if !grid.is_periodic() {
        return Err(Error::InvalidParameter {
            name: "boundary",
            reason: "reflection check needs a periodic grid",
        });
    }
    let shift = 2.0 * center / grid.dx;
    let k = math::round(shift);
    if (shift - k).abs() > 1e-9 {
        return Err(Error::OutOfDomain {
            what: "reflection centre (not on the mesh)",
            value: center,
        });
    }
    let n = grid.n_cells as i64;
    let k = k as i64;
    let mut err = 0.0_f64;
    for i in 0..grid.n_cells {
        // 2c - (i + 1/2) dx = (k - i - 1 + 1/2) dx
        let j = (k - i as i64 - 1).rem_euclid(n) as usize;
        let e = (state.rho[i] - state.rho[j]).abs()
            + (state.momentum[i] + state.momentum[j]).abs()
            + (state.rho_star[i] - state.rho_star[j]).abs();
        err = err.max(e);
    }
    Ok(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Boundary, DEFAULT_VELOCITY_FLOOR};
    use alloc::vec;

    fn grid(n: usize) -> Grid1D {
        Grid1D::uniform(1.0, n, Boundary::Periodic).unwrap()
    }

    #[test]
    fn mass_values() {
        let g = grid(100);
        let s = FlowState::from_primitive(vec![0.7; 100], &[0.0; 100], vec![1.0; 100]);
        assert!((total_mass(&s, &g) - 0.7).abs() < 1e-14);
        let s = FlowState::from_primitive(vec![0.0; 100], &[0.0; 100], vec![1.0; 100]);
        assert_eq!(total_mass(&s, &g), 0.0);
        let rho: alloc::vec::Vec<f64> = (0..100).map(|i| if i < 50 { 2.0 } else { 0.0 }).collect();
        let s = FlowState::from_primitive(rho, &[0.0; 100], vec![3.0; 100]);
        assert!((total_mass(&s, &g) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn energy_values() {
        let g = grid(50);
        let p = PressureParams::default();
        let s = FlowState::from_primitive(vec![0.0; 50], &[0.0; 50], vec![1.0; 50]);
        assert_eq!(
            discrete_energy(&s, &p, &g, DEFAULT_VELOCITY_FLOOR).unwrap(),
            0.0
        );
        let s = FlowState::from_primitive(vec![0.7; 50], &[0.0; 50], vec![1.0; 50]);
        let e0 = discrete_energy(&s, &p, &g, DEFAULT_VELOCITY_FLOOR).unwrap();
        let expected = 0.7 * (0.7 + 1e-4 * 0.7 / 0.3);
        assert!((e0 - expected).abs() < 1e-13);
        assert!((e0 - 0.4901633).abs() < 1e-7);
        let s = FlowState::from_primitive(vec![0.7; 50], &[0.8; 50], vec![1.0; 50]);
        let e1 = discrete_energy(&s, &p, &g, DEFAULT_VELOCITY_FLOOR).unwrap();
        assert!((e1 - e0 - 0.224).abs() < 1e-13);
    }

    #[test]
    fn constraint_report_cases() {
        let s = FlowState::from_primitive(vec![0.7; 8], &[0.0; 8], vec![1.0; 8]);
        assert_eq!(constraint_report(&s).0, 0.7);
        let s = FlowState::from_primitive(vec![0.0; 8], &[0.0; 8], vec![1.0; 8]);
        assert_eq!(constraint_report(&s), (0.0, None));
        let mut rho = vec![0.5; 8];
        rho[5] = 0.9 * (1.0 - 1e-6);
        let s = FlowState::from_primitive(rho, &[0.0; 8], vec![0.9; 8]);
        let (z, cell) = constraint_report(&s);
        assert!((z - (1.0 - 1e-6)).abs() < 1e-15);
        assert_eq!(cell, Some(5));
    }

    #[test]
    fn reflection_cases() {
        let g = grid(10);
        let s = FlowState::from_primitive(vec![0.4; 10], &[0.3; 10], vec![1.0; 10]);
        // uniform nonzero momentum is even, not odd
        assert!((reflection_error(&s, &g, 0.3).unwrap() - 2.0 * 0.12).abs() < 1e-15);
        let s = FlowState::from_primitive(vec![0.4; 10], &[0.0; 10], vec![1.0; 10]);
        assert_eq!(reflection_error(&s, &g, 0.3).unwrap(), 0.0);
        let mut rho = vec![0.4; 10];
        rho[2] += 1e-3;
        let s = FlowState::from_primitive(rho, &[0.0; 10], vec![1.0; 10]);
        assert!(reflection_error(&s, &g, 0.3).unwrap() >= 1e-3 - 1e-15);
        assert!(reflection_error(&s, &g, 0.33).is_err());
    }
}
