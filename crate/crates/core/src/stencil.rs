//! Discrete differential operators on the cell-centred grid.
//!
//! Neighbour lookups wrap around on periodic grids. With
//! [`Boundary::DirichletZeroVelocity`](crate::grid::Boundary) a single ghost
//! cell per side copies the boundary value for even (scalar) fields and
//! negates it for odd (velocity-like) fields.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{Boundary, Grid1D};

/// Reflection parity of a field at a wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Scalars: density, pressure, congestion density, wave speed.
    Even,
    /// Velocity and momentum.
    Odd,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    #[inline]
    fn mirror(self, v: f64) -> f64 {
        match self {
            Parity::Even => v,
            Parity::Odd => -v,
        }
    }
}

#[inline]
pub(crate) fn left(f: &[f64], i: usize, boundary: Boundary, parity: Parity) -> f64 {
    if i > 0 {
        f[i - 1]
    } else {
        match boundary {
            Boundary::Periodic => f[f.len() - 1],
            Boundary::DirichletZeroVelocity => parity.mirror(f[0]),
        }
    }
}

#[inline]
pub(crate) fn right(f: &[f64], i: usize, boundary: Boundary, parity: Parity) -> f64 {
    let n = f.len();
    if i + 1 < n {
        f[i + 1]
    } else {
        match boundary {
            Boundary::Periodic => f[0],
            Boundary::DirichletZeroVelocity => parity.mirror(f[n - 1]),
        }
    }
}

/// `(f[i+1] - f[i-1]) / (2 dx)` for an even (scalar) field.
pub fn gradient_centered(f: &[f64], grid: &Grid1D) -> Result<Vec<f64>> {
    centered_difference(f, grid, Parity::Even)
}

/// Centred divergence of an odd (flux-like) field.
pub fn divergence_centered(f: &[f64], grid: &Grid1D) -> Result<Vec<f64>> {
    centered_difference(f, grid, Parity::Odd)
}

fn centered_difference(f: &[f64], grid: &Grid1D, parity: Parity) -> Result<Vec<f64>> {
    grid.check_len(f)?;
    let inv = 0.5 / grid.dx;
    Ok((0..f.len())
        .map(|i| (right(f, i, grid.boundary, parity) - left(f, i, grid.boundary, parity)) * inv)
        .collect())
}

/// Compact three-point Laplacian `(f[i+1] - 2 f[i] + f[i-1]) / dx^2`.
pub fn laplacian(f: &[f64], grid: &Grid1D, parity: Parity) -> Result<Vec<f64>> {
    grid.check_len(f)?;
    let inv = 1.0 / (grid.dx * grid.dx);
    Ok((0..f.len())
        .map(|i| {
            (right(f, i, grid.boundary, parity) - 2.0 * f[i] + left(f, i, grid.boundary, parity))
                * inv
        })
        .collect())
}

/// Rusanov numerical fluxes at the `n + 1` faces (face `k` sits between
/// cells `k - 1` and `k`):
/// `F = (q_L + q_R) / 2 - max(a_L, a_R) (U_R - U_L) / 2`.
///
/// `flux` has the opposite parity of `advected`.
pub fn rusanov_face_fluxes(
    flux: &[f64],
    advected: &[f64],
    speed: &[f64],
    grid: &Grid1D,
    advected_parity: Parity,
) -> Result<Vec<f64>> {
    grid.check_len(flux)?;
    grid.check_len(advected)?;
    grid.check_len(speed)?;
    if let Some(i) = speed.iter().position(|a| !(*a >= 0.0)) {
        return Err(Error::OutOfDomain {
            what: "Rusanov local speed",
            value: speed[i],
        });
    }
    let n = grid.n_cells;
    let bc = grid.boundary;
    let flux_parity = advected_parity.flip();
    let face = |k: usize| {
        // face k: left cell k-1, right cell k
        let (q_l, u_l, a_l, q_r, u_r, a_r);
        if k == 0 {
            q_l = left(flux, 0, bc, flux_parity);
            u_l = left(advected, 0, bc, advected_parity);
            a_l = left(speed, 0, bc, Parity::Even);
            (q_r, u_r, a_r) = (flux[0], advected[0], speed[0]);
        } else if k == n {
            (q_l, u_l, a_l) = (flux[n - 1], advected[n - 1], speed[n - 1]);
            q_r = right(flux, n - 1, bc, flux_parity);
            u_r = right(advected, n - 1, bc, advected_parity);
            a_r = right(speed, n - 1, bc, Parity::Even);
        } else {
            (q_l, u_l, a_l) = (flux[k - 1], advected[k - 1], speed[k - 1]);
            (q_r, u_r, a_r) = (flux[k], advected[k], speed[k]);
        }
        0.5 * (q_l + q_r) - 0.5 * a_l.max(a_r) * (u_r - u_l)
    };
    let mut faces: Vec<f64> = (0..=n).map(face).collect();
    if bc == Boundary::Periodic {
        // both ends are the same face; make it bitwise identical
        faces[n] = faces[0];
    }
    Ok(faces)
}

/// Finite-volume divergence `(F[i+1/2] - F[i-1/2]) / dx` with Rusanov fluxes.
pub fn rusanov_divergence(
    flux: &[f64],
    advected: &[f64],
    speed: &[f64],
    grid: &Grid1D,
    advected_parity: Parity,
) -> Result<Vec<f64>> {
    let faces = rusanov_face_fluxes(flux, advected, speed, grid, advected_parity)?;
    let inv = 1.0 / grid.dx;
    Ok(faces.windows(2).map(|w| (w[1] - w[0]) * inv).collect())
}

/// First-order upwind approximation of `u df/dx` using the cell velocity to
/// pick the upstream side.
pub fn upwind_advect(f: &[f64], u: &[f64], grid: &Grid1D) -> Result<Vec<f64>> {
    grid.check_len(f)?;
    grid.check_len(u)?;
    let inv = 1.0 / grid.dx;
    let bc = grid.boundary;
    Ok((0..f.len())
        .map(|i| {
            let ui = u[i];
            if ui > 0.0 {
                ui * (f[i] - left(f, i, bc, Parity::Even)) * inv
            } else if ui < 0.0 {
                ui * (right(f, i, bc, Parity::Even) - f[i]) * inv
            } else {
                0.0
            }
        })
        .collect())
}
