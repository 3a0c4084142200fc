//! Implicit viscous sub-step with the simplified stress `2 mu Laplacian(u)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::linalg::{laplacian_matrix, solve_cyclic_tridiagonal};
use crate::stencil::Parity;

/// Solves `(rho I - 2 mu dt L) u_new = rho u_star`.
///
/// The dissipative sign is used, so the system is a strictly diagonally
/// dominant M-matrix whenever `rho > 0`. With `mu == 0` the input velocity is
/// returned unchanged.
pub fn solve_diffusion(
    rho_new: &[f64],
    u_star: &[f64],
    mu: f64,
    dt: f64,
    grid: &Grid1D,
) -> Result<Vec<f64>> {
    grid.check_len(rho_new)?;
    grid.check_len(u_star)?;
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter {
            name: "mu",
            reason: "viscosity must be non-negative",
        });
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: "time step must be positive",
        });
    }
    if let Some(i) = rho_new.iter().position(|r| !(*r > 0.0)) {
        return Err(Error::CorruptState {
            cell: i,
            reason: "diffusion needs a positive density",
        });
    }
    if mu == 0.0 {
        return Ok(u_star.to_vec());
    }

    let mut sys = laplacian_matrix(grid, Parity::Odd);
    let c = -2.0 * mu * dt;
    for v in [&mut sys.lower, &mut sys.diag, &mut sys.upper] {
        v.iter_mut().for_each(|x| *x *= c);
    }
    for (d, r) in sys.diag.iter_mut().zip(rho_new) {
        *d += r;
    }
    debug_assert!(sys.is_diagonally_dominant(true));
    let rhs: Vec<f64> = rho_new.iter().zip(u_star).map(|(r, u)| r * u).collect();
    solve_cyclic_tridiagonal(&sys, &rhs)
}
