//! Uniform cell-centred mesh and the evolving flow state.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Floor applied to the density when recovering the velocity `m / rho`.
pub const DEFAULT_VELOCITY_FLOOR: f64 = 1e-10;

/// Boundary treatment of the mesh ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Boundary {
    #[default]
    Periodic,
    /// Zero velocity at the walls: one ghost cell per side with the velocity
    /// (and momentum) reflected and scalars copied.
    DirichletZeroVelocity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid1D {
    pub n_cells: usize,
    pub dx: f64,
    pub length: f64,
    pub boundary: Boundary,
}

impl Grid1D {
    pub const MIN_CELLS: usize = 4;

    /// Uniform mesh of `n_cells` cells on `[0, length]`.
    pub fn uniform(length: f64, n_cells: usize, boundary: Boundary) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter {
                name: "length",
                reason: "domain length must be positive and finite",
            });
        }
        if n_cells < Self::MIN_CELLS {
            return Err(Error::InvalidParameter {
                name: "n_cells",
                reason: "at least 4 cells are required",
            });
        }
        Ok(Self {
            n_cells,
            dx: length / n_cells as f64,
            length,
            boundary,
        })
    }

    /// Centre of cell `i`, `(i + 1/2) dx`.
    #[inline]
    pub fn cell_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    pub fn cell_centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.cell_center(i)).collect()
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == Boundary::Periodic
    }

    pub(crate) fn check_len(&self, field: &[f64]) -> Result<()> {
        if field.len() != self.n_cells {
            return Err(Error::LengthMismatch {
                expected: self.n_cells,
                got: field.len(),
            });
        }
        Ok(())
    }
}

/// Conserved variables per cell plus the congestion density.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub rho: Vec<f64>,
    pub momentum: Vec<f64>,
    pub rho_star: Vec<f64>,
    pub time: f64,
}

impl FlowState {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Builds a state from density, velocity and congestion density samples.
    pub fn from_primitive(rho: Vec<f64>, velocity: &[f64], rho_star: Vec<f64>) -> Self {
        let momentum = rho.iter().zip(velocity).map(|(r, u)| r * u).collect();
        Self {
            rho,
            momentum,
            rho_star,
            time: 0.0,
        }
    }

    /// Checks lengths, finiteness, positivity and the strict constraint
    /// `rho < rho_star` in every cell.
    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        grid.check_len(&self.rho)?;
        grid.check_len(&self.momentum)?;
        grid.check_len(&self.rho_star)?;
        if !self.time.is_finite() {
            return Err(Error::NonFinite { what: "time" });
        }
        for i in 0..self.len() {
            let (r, m, rs) = (self.rho[i], self.momentum[i], self.rho_star[i]);
            if !(r.is_finite() && m.is_finite() && rs.is_finite()) {
                return Err(Error::CorruptState {
                    cell: i,
                    reason: "non-finite entry",
                });
            }
            if r < 0.0 {
                return Err(Error::CorruptState {
                    cell: i,
                    reason: "negative density",
                });
            }
            if rs <= 0.0 {
                return Err(Error::CorruptState {
                    cell: i,
                    reason: "non-positive congestion density",
                });
            }
            if r >= rs {
                return Err(Error::CorruptState {
                    cell: i,
                    reason: "density reaches the congestion density",
                });
            }
        }
        Ok(())
    }

    /// Velocity `m / max(rho, floor)`, exactly zero where `m == 0`.
    pub fn velocity(&self, floor: f64) -> Vec<f64> {
        velocity_from(&self.rho, &self.momentum, floor)
    }

    /// Density fraction `Z = rho / rho_star`.
    pub fn density_fraction(&self) -> Result<Vec<f64>> {
        density_fraction(&self.rho, &self.rho_star)
    }
}

pub(crate) fn velocity_from(rho: &[f64], momentum: &[f64], floor: f64) -> Vec<f64> {
    debug_assert!(floor > 0.0);
    rho.iter()
        .zip(momentum)
        .map(|(&r, &m)| if m == 0.0 { 0.0 } else { m / r.max(floor) })
        .collect()
}

pub(crate) fn density_fraction(rho: &[f64], rho_star: &[f64]) -> Result<Vec<f64>> {
    rho.iter()
        .zip(rho_star)
        .enumerate()
        .map(|(i, (&r, &rs))| {
            if rs > 0.0 {
                Ok(r / rs)
            } else {
                Err(Error::CorruptState {
                    cell: i,
                    reason: "non-positive congestion density",
                })
            }
        })
        .collect()
}
