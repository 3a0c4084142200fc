//! Tridiagonal (optionally cyclic) systems and the finite-difference Newton
//! Jacobian of the pressure equation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{Boundary, Grid1D};
use crate::stencil::Parity;

/// Row `i` reads `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]`.
///
/// When `periodic` is set, `lower[0]` is the top-right corner (row 0,
/// column n-1) and `upper[n-1]` the bottom-left corner (row n-1, column 0).
/// Otherwise those two entries are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub periodic: bool,
}

impl TridiagonalSystem {
    pub fn identity(n: usize, periodic: bool) -> Self {
        Self {
            lower: vec![0.0; n],
            diag: vec![1.0; n],
            upper: vec![0.0; n],
            periodic,
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn off_diagonal(&self, i: usize) -> (f64, f64) {
        let n = self.len();
        let l = if i == 0 && !self.periodic {
            0.0
        } else {
            self.lower[i]
        };
        let u = if i + 1 == n && !self.periodic {
            0.0
        } else {
            self.upper[i]
        };
        (l, u)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.len();
        for v in [&self.lower, &self.upper] {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "system",
                reason: "empty system",
            });
        }
        if self.periodic && n < 3 {
            return Err(Error::InvalidParameter {
                name: "system",
                reason: "cyclic systems need at least 3 rows",
            });
        }
        if [&self.lower, &self.diag, &self.upper]
            .iter()
            .any(|v| v.iter().any(|x| !x.is_finite()))
        {
            return Err(Error::NonFinite {
                what: "tridiagonal system",
            });
        }
        Ok(())
    }

    /// Row-wise diagonal dominance. `strict` requires a strict inequality in
    /// every row; otherwise weak dominance with at least one strict row.
    pub fn is_diagonally_dominant(&self, strict: bool) -> bool {
        let mut any_strict = false;
        for i in 0..self.len() {
            let (l, u) = self.off_diagonal(i);
            let d = self.diag[i].abs();
            let off = l.abs() + u.abs();
            if d > off {
                any_strict = true;
            } else if strict || d < off {
                return false;
            }
        }
        any_strict
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        let inner = (0..n - 1).all(|i| self.upper[i] == self.lower[i + 1]);
        inner && (!self.periodic || self.lower[0] == self.upper[n - 1])
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let (l, u) = self.off_diagonal(i);
                l.abs() + self.diag[i].abs() + u.abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let (l, u) = self.off_diagonal(i);
                let xl = if i == 0 { x[n - 1] } else { x[i - 1] };
                let xr = if i + 1 == n { x[0] } else { x[i + 1] };
                l * xl + self.diag[i] * x[i] + u * xr
            })
            .collect()
    }

    /// Dense row-major copy, mostly for testing.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut a = vec![vec![0.0; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            let (l, u) = self.off_diagonal(i);
            row[i] += self.diag[i];
            row[(i + n - 1) % n] += l;
            row[(i + 1) % n] += u;
        }
        a
    }
}

const PIVOT_TOL: f64 = 1e-14;

/// Thomas algorithm on rows with the corner entries ignored.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let scale = diag.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot.abs() <= PIVOT_TOL * scale || pivot == 0.0 {
        return Err(Error::SingularSystem { row: 0 });
    }
    c[0] = if n > 1 { upper[0] / pivot } else { 0.0 };
    x[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot.abs() <= PIVOT_TOL * scale || pivot == 0.0 {
            return Err(Error::SingularSystem { row: i });
        }
        if i + 1 < n {
            c[i] = upper[i] / pivot;
        }
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Solves `A x = rhs` directly in O(n).
///
/// Cyclic systems are reduced to two plain tridiagonal solves with a
/// Sherman-Morrison rank-one correction. The matrix must be (at least
/// weakly) diagonally dominant; singular systems are reported.
pub fn solve_cyclic_tridiagonal(sys: &TridiagonalSystem, rhs: &[f64]) -> Result<Vec<f64>> {
    sys.check_shape()?;
    let n = sys.len();
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    if let Some(row) = (0..n).find(|&i| {
        let (l, u) = sys.off_diagonal(i);
        sys.diag[i].abs() < l.abs() + u.abs()
    }) {
        return Err(Error::SingularSystem { row });
    }
    if !sys.periodic {
        return thomas(&sys.lower, &sys.diag, &sys.upper, rhs);
    }

    let top_right = sys.lower[0];
    let bottom_left = sys.upper[n - 1];
    if top_right == 0.0 && bottom_left == 0.0 {
        return thomas(&sys.lower, &sys.diag, &sys.upper, rhs);
    }
    // A = T + v w^T with v = (g, 0, .., 0, bottom_left), w = (1, 0, .., 0, top_right / g)
    let g = -sys.diag[0];
    let mut diag = sys.diag.clone();
    diag[0] -= g;
    diag[n - 1] -= bottom_left * top_right / g;
    let y = thomas(&sys.lower, &diag, &sys.upper, rhs)?;
    let mut v = vec![0.0; n];
    v[0] = g;
    v[n - 1] = bottom_left;
    let z = thomas(&sys.lower, &diag, &sys.upper, &v)?;
    let denom = 1.0 + z[0] + top_right * z[n - 1] / g;
    if denom.abs() <= 64.0 * f64::EPSILON * (1.0 + z[0].abs() + (top_right * z[n - 1] / g).abs()) {
        return Err(Error::SingularSystem { row: n - 1 });
    }
    let factor = (y[0] + top_right * y[n - 1] / g) / denom;
    Ok(y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect())
}

/// Matrix of the compact three-point Laplacian on `grid` for a field of the
/// given parity (ghost cells folded into the boundary rows).
pub fn laplacian_matrix(grid: &Grid1D, parity: Parity) -> TridiagonalSystem {
    let n = grid.n_cells;
    let inv = 1.0 / (grid.dx * grid.dx);
    let mut sys = TridiagonalSystem {
        lower: vec![inv; n],
        diag: vec![-2.0 * inv; n],
        upper: vec![inv; n],
        periodic: grid.boundary == Boundary::Periodic,
    };
    if grid.boundary == Boundary::DirichletZeroVelocity {
        let ghost = match parity {
            Parity::Even => inv,
            Parity::Odd => -inv,
        };
        sys.diag[0] += ghost;
        sys.diag[n - 1] += ghost;
        sys.lower[0] = 0.0;
        sys.upper[n - 1] = 0.0;
    }
    sys
}

/// A residual of the form `F_i(pi) = local(i, pi_i) - coupling * (L pi)_i - rhs_i`
/// with `L` the even-parity compact Laplacian.
pub trait LocalPlusLaplacian {
    /// Cell-local part, e.g. `rho_star_i * Z(pi_i)`.
    fn local(&self, cell: usize, pi: f64) -> Result<f64>;
    /// Multiplier of the Laplacian (`dt^2` for the pressure equation).
    fn coupling(&self) -> f64;
    /// Smallest magnitude used to scale the finite-difference probe.
    fn probe_floor(&self) -> f64;
}

/// Newton Jacobian of a [`LocalPlusLaplacian`] residual.
///
/// Only the diagonal is probed, with the one-sided step
/// `fd_step * max(|pi_j|, probe_floor)`; the off-diagonals are the exact
/// coefficients of `-coupling * L`. The result is checked to be weakly
/// diagonally dominant with a strict row, hence nonsingular.
pub fn assemble_newton_jacobian<R: LocalPlusLaplacian>(
    pi: &[f64],
    residual: &R,
    fd_step: f64,
    grid: &Grid1D,
) -> Result<TridiagonalSystem> {
    grid.check_len(pi)?;
    if !(fd_step > 0.0) {
        return Err(Error::InvalidParameter {
            name: "fd_step",
            reason: "must be positive",
        });
    }
    let mut jac = laplacian_matrix(grid, Parity::Even);
    let c = residual.coupling();
    for v in [&mut jac.lower, &mut jac.diag, &mut jac.upper] {
        v.iter_mut().for_each(|x| *x *= -c);
    }
    for (i, &p) in pi.iter().enumerate() {
        if !(p >= 0.0) {
            return Err(Error::OutOfDomain {
                what: "Jacobian probe point",
                value: p,
            });
        }
        let h = fd_step * p.abs().max(residual.probe_floor());
        let base = residual.local(i, p)?;
        let probe = residual.local(i, p + h)?;
        let d = (probe - base) / h;
        if !d.is_finite() {
            return Err(Error::NonFinite {
                what: "finite-difference Jacobian",
            });
        }
        jac.diag[i] += d;
    }
    if !jac.is_diagonally_dominant(false) {
        return Err(Error::SingularSystem { row: 0 });
    }
    Ok(jac)
}
