//! Background pressure `p(Z) = Z^gamma`, singular pressure
//! `pi(Z) = eps Z^alpha / (1 - Z)^beta`, the inverse of `pi` used to recover
//! the density, and the energy density `Gamma(Z) = int_0^Z (pi + p)(s) / s^2 ds`.
//!
//! All functions take the density fraction `Z = rho / rho_star`.

use crate::error::{Error, Result};
use crate::math;

/// Largest representable fraction strictly below one.
pub const Z_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PressureParams {
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for PressureParams {
    /// `eps = 1e-4`, `alpha = beta = gamma = 2`.
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            alpha: 2.0,
            beta: 2.0,
            gamma: 2.0,
        }
    }
}

impl PressureParams {
    pub fn new(epsilon: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            epsilon,
            alpha,
            beta,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        Self { epsilon, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason| Err(Error::InvalidParameter { name, reason });
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon", "must be positive and finite");
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad("alpha", "must be non-negative and finite");
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad("beta", "must be positive and finite");
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return bad("gamma", "must be greater than one");
        }
        Ok(())
    }

    fn is_quadratic(&self) -> bool {
        self.alpha == 2.0 && self.beta == 2.0
    }

    /// `p(Z) = Z^gamma` on `[0, 1]`.
    pub fn background_pressure(&self, z: f64) -> Result<f64> {
        check_closed_unit(z, "background pressure")?;
        Ok(math::pow_real(z, self.gamma))
    }

    /// `p'(Z) = gamma Z^(gamma - 1)`.
    pub fn background_pressure_derivative(&self, z: f64) -> Result<f64> {
        check_closed_unit(z, "background pressure derivative")?;
        Ok(self.gamma * math::pow_real(z, self.gamma - 1.0))
    }

    /// `pi(Z) = eps Z^alpha / (1 - Z)^beta` on `[0, 1)`.
    pub fn singular_pressure(&self, z: f64) -> Result<f64> {
        check_half_open_unit(z, "singular pressure")?;
        Ok(self.epsilon * self.singular_shape(z))
    }

    /// `Z^alpha / (1 - Z)^beta`, i.e. the singular pressure at `eps = 1`.
    #[inline]
    fn singular_shape(&self, z: f64) -> f64 {
        math::pow_real(z, self.alpha) / math::pow_real(1.0 - z, self.beta)
    }

    /// `pi'(Z) = eps [alpha Z^(alpha-1) (1-Z) + beta Z^alpha] / (1-Z)^(beta+1)`.
    pub fn singular_pressure_derivative(&self, z: f64) -> Result<f64> {
        check_half_open_unit(z, "singular pressure derivative")?;
        if z == 0.0 && self.alpha > 0.0 && self.alpha < 1.0 {
            return Err(Error::OutOfDomain {
                what: "singular pressure derivative (unbounded at Z = 0 for alpha < 1)",
                value: z,
            });
        }
        let lead = if self.alpha == 0.0 {
            0.0
        } else {
            self.alpha * math::pow_real(z, self.alpha - 1.0) * (1.0 - z)
        };
        let num = lead + self.beta * math::pow_real(z, self.alpha);
        Ok(self.epsilon * num / math::pow_real(1.0 - z, self.beta + 1.0))
    }

    /// The unique `Z` in `[0, 1)` with `pi(Z) = pi_value`.
    ///
    /// For `alpha = beta = 2` this is `s / (1 + s)` with `s = sqrt(pi / eps)`.
    /// Otherwise a bracketed Newton iteration on `ln pi(Z)` is used, falling
    /// back to bisection whenever the step leaves the bracket. Values below
    /// `pi(0)` (only possible for `alpha = 0`) map to `Z = 0`. The result is
    /// always strictly below one.
    pub fn invert_singular_pressure(&self, pi_value: f64) -> Result<f64> {
        if !(pi_value >= 0.0) || !pi_value.is_finite() {
            return Err(Error::OutOfDomain {
                what: "singular pressure inverse",
                value: pi_value,
            });
        }
        if pi_value == 0.0 && self.alpha > 0.0 {
            return Ok(0.0);
        }
        if self.is_quadratic() {
            let s = math::sqrt(pi_value / self.epsilon);
            return Ok((s / (1.0 + s)).min(Z_MAX));
        }
        Ok(self.invert_general(pi_value))
    }

    fn invert_general(&self, pi_value: f64) -> f64 {
        let (alpha, beta) = (self.alpha, self.beta);
        let ratio = pi_value / self.epsilon;
        if alpha == 0.0 && ratio <= 1.0 {
            return 0.0;
        }
        let target = math::ln(ratio);
        // g is strictly increasing on (0, 1)
        let g = |z: f64| alpha * math::ln(z) - beta * math::ln(1.0 - z) - target;
        let dg = |z: f64| alpha / z + beta / (1.0 - z);

        if g(Z_MAX) <= 0.0 {
            return Z_MAX;
        }
        let (mut lo, mut hi) = (0.0_f64, Z_MAX);
        let mut z = if ratio > 1.0 {
            1.0 - math::powf(1.0 / ratio, 1.0 / beta)
        } else {
            math::powf(ratio, 1.0 / alpha)
        };
        if !(z > lo && z < hi) {
            z = 0.5;
        }
        for _ in 0..200 {
            let gz = g(z);
            if gz == 0.0 {
                return z;
            }
            if gz < 0.0 {
                lo = z;
            } else {
                hi = z;
            }
            let mut next = z - gz / dg(z);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - z).abs() <= 1e-16 || hi - lo <= f64::EPSILON * hi {
                return next;
            }
            z = next;
        }
        z
    }

    /// Energy density `Gamma(Z) = int_0^Z (pi(s) + p(s)) / s^2 ds`.
    ///
    /// Requires `alpha >= 2` so that `pi(s)/s^2` stays bounded at the origin.
    /// The background part is integrated in closed form; the singular part is
    /// closed form for `alpha = beta = 2` and adaptive Simpson otherwise.
    pub fn energy_density(&self, z: f64) -> Result<f64> {
        self.check_energy_domain(z)?;
        let singular = if self.is_quadratic() {
            self.epsilon * z / (1.0 - z)
        } else {
            self.singular_energy_quadrature(z)
        };
        Ok(singular + self.background_energy(z))
    }

    /// `Gamma(Z)` with the singular part always evaluated by quadrature.
    pub fn energy_density_quadrature(&self, z: f64) -> Result<f64> {
        self.check_energy_domain(z)?;
        Ok(self.singular_energy_quadrature(z) + self.background_energy(z))
    }

    fn check_energy_domain(&self, z: f64) -> Result<()> {
        check_half_open_unit(z, "energy density")?;
        if self.alpha < 2.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "energy density requires alpha >= 2",
            });
        }
        Ok(())
    }

    fn background_energy(&self, z: f64) -> f64 {
        math::pow_real(z, self.gamma - 1.0) / (self.gamma - 1.0)
    }

    fn singular_energy_quadrature(&self, z: f64) -> f64 {
        if z == 0.0 {
            return 0.0;
        }
        let (alpha, beta) = (self.alpha, self.beta);
        let f = |s: f64| math::pow_real(s, alpha - 2.0) / math::pow_real(1.0 - s, beta);
        self.epsilon * adaptive_simpson(&f, 0.0, z, 1e-14)
    }
}

fn check_closed_unit(z: f64, what: &'static str) -> Result<()> {
    if (0.0..=1.0).contains(&z) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { what, value: z })
    }
}

fn check_half_open_unit(z: f64, what: &'static str) -> Result<()> {
    if (0.0..1.0).contains(&z) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { what, value: z })
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    simpson_step(f, a, b, fa, fm, fb, whole, tol * scale, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
