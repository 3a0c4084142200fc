//! Upwind transport of the congestion density with the post-diffusion
//! velocity, in advective form `rho_star_t + u rho_star_x = 0`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::stencil::upwind_advect;

/// One explicit upwind step. Requires `max |u| dt / dx <= 1`, which makes
/// the update a convex combination of neighbouring values.
pub fn transport_rho_star(
    rho_star: &[f64],
    u_new: &[f64],
    dt: f64,
    grid: &Grid1D,
) -> Result<Vec<f64>> {
    let speed = u_new.iter().fold(0.0_f64, |m, u| m.max(u.abs()));
    let bound = grid.dx / dt;
    if !(speed <= bound) {
        return Err(Error::CflViolation { speed, bound });
    }
    let adv = upwind_advect(rho_star, u_new, grid)?;
    Ok(rho_star.iter().zip(&adv).map(|(r, a)| r - dt * a).collect())
}
