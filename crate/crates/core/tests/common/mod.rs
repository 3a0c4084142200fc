//! Independent oracles shared by the integration suites. Nothing here calls
//! the solver routes it is used to check.

#![allow(dead_code)]

use congestion_core::linalg::TridiagonalSystem;
use congestion_core::{Grid1D, PressureParams};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense Gaussian elimination with partial pivoting. Zero multipliers are
/// skipped so structured inputs stay cheap.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
            .unwrap();
        a.swap(k, p);
        b.swap(k, p);
        let pivot = a[k][k];
        assert!(pivot != 0.0, "dense oracle hit a zero pivot");
        for i in k + 1..n {
            let f = a[i][k] / pivot;
            if f == 0.0 {
                continue;
            }
            let (top, bottom) = a.split_at_mut(i);
            let row_k = &top[k];
            for (x, y) in bottom[0][k..].iter_mut().zip(&row_k[k..]) {
                *x -= f * y;
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Random strictly diagonally dominant cyclic tridiagonal system.
pub fn random_dominant_cyclic(rng: &mut impl Rng, n: usize, symmetric: bool) -> TridiagonalSystem {
    let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let upper: Vec<f64> = if symmetric {
        (0..n).map(|i| lower[(i + 1) % n]).collect()
    } else {
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    };
    let diag = (0..n)
        .map(|i| {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            sign * (lower[i].abs() + upper[i].abs() + rng.gen_range(0.05..2.0))
        })
        .collect();
    TridiagonalSystem {
        lower,
        diag,
        upper,
        periodic: true,
    }
}

/// Solves `rho = phi + dt^2 L pi(rho / rho_star)` by relaxed fixed-point
/// iteration (relaxation 0.1) run to stagnation; returns `pi(rho / rho_star)`.
pub fn picard_pressure(
    phi: &[f64],
    rho_star: &[f64],
    params: &PressureParams,
    dt: f64,
    grid: &Grid1D,
) -> Vec<f64> {
    let n = phi.len();
    let eps = params.epsilon;
    let (a, b) = (params.alpha, params.beta);
    let pressure = |z: f64| eps * z.powf(a) / (1.0 - z).powf(b);
    let inv_dx2 = 1.0 / (grid.dx * grid.dx);
    let mut rho = phi.to_vec();
    for _ in 0..200_000 {
        let pi: Vec<f64> = (0..n).map(|i| pressure(rho[i] / rho_star[i])).collect();
        let mut change = 0.0_f64;
        for i in 0..n {
            let lap = (pi[(i + 1) % n] - 2.0 * pi[i] + pi[(i + n - 1) % n]) * inv_dx2;
            let target = phi[i] + dt * dt * lap;
            let next = 0.9 * rho[i] + 0.1 * target;
            change = change.max((next - rho[i]).abs());
            rho[i] = next;
        }
        assert!(
            rho.iter().zip(rho_star).all(|(r, s)| *r < *s),
            "Picard left the admissible set"
        );
        if change < 1e-16 {
            break;
        }
    }
    (0..n).map(|i| pressure(rho[i] / rho_star[i])).collect()
}

/// `int_0^z (pi(s) + p(s)) / s^2 ds` by composite 8-point Gauss-Legendre on
/// 4096 panels.
pub fn gamma_gauss_legendre(z: f64, params: &PressureParams) -> f64 {
    const NODES: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const WEIGHTS: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let f = |s: f64| {
        let pi = params.epsilon * s.powf(params.alpha) / (1.0 - s).powf(params.beta);
        let p = s.powf(params.gamma);
        (pi + p) / (s * s)
    };
    let panels = 4096;
    let h = z / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            total += w * (f(mid - 0.5 * h * x) + f(mid + 0.5 * h * x));
        }
    }
    total * 0.5 * h
}

/// Cell-averages a field onto a grid twice as coarse.
pub fn restrict(fine: &[f64]) -> Vec<f64> {
    fine.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect()
}
