//! Initial data: the four reference test cases and user-defined profiles.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{FlowState, Grid1D};
use crate::math;

/// A scalar profile `f(x)` sampled at cell centres.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum Profile {
    Constant {
        value: f64,
    },
    /// `value` on each open interval `(lo, hi)`, `otherwise` elsewhere. The
    /// first matching interval wins.
    Piecewise {
        intervals: Vec<Interval>,
        otherwise: f64,
    },
    /// `base + amplitude (tanh(k (x - left)) - tanh(k (x - right)))`.
    TanhHat {
        base: f64,
        amplitude: f64,
        steepness: f64,
        left: f64,
        right: f64,
    },
    /// `base + amplitude * sum_j weight_j cos(wavenumber_j pi x)`.
    CosineSum {
        base: f64,
        amplitude: f64,
        terms: Vec<CosineTerm>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CosineTerm {
    pub weight: f64,
    pub wavenumber: f64,
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Constant { value } => *value,
            Profile::Piecewise {
                intervals,
                otherwise,
            } => intervals
                .iter()
                .find(|iv| iv.lo < x && x < iv.hi)
                .map_or(*otherwise, |iv| iv.value),
            Profile::TanhHat {
                base,
                amplitude,
                steepness,
                left,
                right,
            } => {
                base + amplitude
                    * (math::tanh(steepness * (x - left)) - math::tanh(steepness * (x - right)))
            }
            Profile::CosineSum {
                base,
                amplitude,
                terms,
            } => {
                base + amplitude
                    * terms
                        .iter()
                        .map(|t| t.weight * math::cos(t.wavenumber * PI * x))
                        .sum::<f64>()
            }
        }
    }
}

fn constant(value: f64) -> Profile {
    Profile::Constant { value }
}

fn piecewise(intervals: &[(f64, f64, f64)], otherwise: f64) -> Profile {
    Profile::Piecewise {
        intervals: intervals
            .iter()
            .map(|&(lo, hi, value)| Interval { lo, hi, value })
            .collect(),
        otherwise,
    }
}

/// Initial density, velocity and congestion density.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Scenario {
    /// Constant congestion density; two opposing streams.
    Case1,
    /// Smooth hat of congestion density; two groups walking into each other.
    Case2,
    /// A fast dense group running into a slow sparse one.
    Case3,
    /// Congestion density built from a sum of cosines.
    Case4,
    Custom {
        rho: Profile,
        velocity: Profile,
        rho_star: Profile,
    },
}

impl Scenario {
    pub const NAMES: [&'static str; 4] = ["case1", "case2", "case3", "case4"];

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "case1" => Some(Scenario::Case1),
            "case2" => Some(Scenario::Case2),
            "case3" => Some(Scenario::Case3),
            "case4" => Some(Scenario::Case4),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Case1 => "case1",
            Scenario::Case2 => "case2",
            Scenario::Case3 => "case3",
            Scenario::Case4 => "case4",
            Scenario::Custom { .. } => "custom",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Scenario::Case1 => {
                "constant congestion density, opposing velocities (shock and rarefaction)"
            }
            Scenario::Case2 => "tanh hat congestion density, two groups moving towards each other",
            Scenario::Case3 => "dense group approaching a slow sparse group with wider spacing",
            Scenario::Case4 => "sum-of-cosines congestion density, opposing velocities",
            Scenario::Custom { .. } => "user supplied profiles",
        }
    }

    /// Final time of the reference run.
    pub fn default_t_end(&self) -> f64 {
        match self {
            Scenario::Case4 => 0.5,
            _ => 0.1,
        }
    }

    pub fn default_snapshot_times(&self) -> Vec<f64> {
        match self {
            Scenario::Case4 => vec![0.0, 0.1, 0.25, 0.5],
            _ => vec![0.0, 0.05, 0.1],
        }
    }

    /// `(rho_0, u_0, rho_star_0)`.
    pub fn profiles(&self) -> (Profile, Profile, Profile) {
        match self {
            Scenario::Case1 => (
                constant(0.7),
                piecewise(&[(0.2, 0.6, 0.8)], -0.8),
                constant(1.0),
            ),
            Scenario::Case2 => (
                constant(0.7),
                piecewise(&[(0.25, 0.5, 0.8), (0.5, 0.75, -0.8)], 0.0),
                Profile::TanhHat {
                    base: 0.8,
                    amplitude: 0.15,
                    steepness: 50.0,
                    left: 0.4,
                    right: 0.6,
                },
            ),
            Scenario::Case3 => (
                piecewise(&[(0.3, 0.7, 0.8)], 0.1),
                piecewise(&[(0.1, 0.7, 0.8)], 0.0),
                Profile::TanhHat {
                    base: 0.34,
                    amplitude: 0.3,
                    steepness: 50.0,
                    left: 0.275,
                    right: 0.725,
                },
            ),
            Scenario::Case4 => (
                constant(0.6),
                piecewise(&[(0.3, 0.7, 0.8)], -0.8),
                Profile::CosineSum {
                    base: 0.9,
                    amplitude: 0.05,
                    terms: [(1.0, 10.0), (-1.0, 6.0), (1.0, 134.0), (1.0, 24.0)]
                        .iter()
                        .map(|&(weight, wavenumber)| CosineTerm { weight, wavenumber })
                        .collect(),
                },
            ),
            Scenario::Custom {
                rho,
                velocity,
                rho_star,
            } => (rho.clone(), velocity.clone(), rho_star.clone()),
        }
    }

    /// Samples the profiles at cell centres; `m_0 = rho_0 u_0`, `t = 0`.
    pub fn initialize(&self, grid: &Grid1D) -> Result<FlowState> {
        let (rho_p, u_p, rs_p) = self.profiles();
        let xs = grid.cell_centers();
        let rho: Vec<f64> = xs.iter().map(|&x| rho_p.eval(x)).collect();
        let u: Vec<f64> = xs.iter().map(|&x| u_p.eval(x)).collect();
        let rho_star: Vec<f64> = xs.iter().map(|&x| rs_p.eval(x)).collect();
        let state = FlowState::from_primitive(rho, &u, rho_star);
        if let Some(i) = u.iter().position(|v| !v.is_finite()) {
            return Err(Error::CorruptState {
                cell: i,
                reason: "non-finite initial velocity",
            });
        }
        state.validate(grid)?;
        Ok(state)
    }
}
