mod common;

use congestion_core::diffusion::solve_diffusion;
use congestion_core::hyperbolic::{newton_solve_pi, PressureEquation};
use congestion_core::linalg::{
    assemble_newton_jacobian, solve_cyclic_tridiagonal, TridiagonalSystem,
};
use congestion_core::pressure::PressureParams;
use congestion_core::transport::transport_rho_star;
use congestion_core::{Boundary, Grid1D, NewtonConfig};
use rand::Rng;
use std::f64::consts::PI;

fn periodic(n: usize) -> Grid1D {
    Grid1D::uniform(1.0, n, Boundary::Periodic).unwrap()
}

#[test]
fn pressure_examples_against_exact_arithmetic() {
    let p = PressureParams::default();
    // 1e-4 * 0.81 / 0.01 evaluated in exact rationals is 8.1e-3
    assert!((p.singular_pressure(0.9).unwrap() - 8.1e-3).abs() < 1e-17);
    // central difference at h = 1e-7
    let h = 1e-7;
    let fd =
        (p.singular_pressure(0.5 + h).unwrap() - p.singular_pressure(0.5 - h).unwrap()) / (2.0 * h);
    assert!((fd - 8e-4).abs() / 8e-4 < 1e-6);
    assert!((p.singular_pressure_derivative(0.5).unwrap() - 8e-4).abs() / 8e-4 < 1e-12);
}

#[test]
fn inverse_against_bisection() {
    let p = PressureParams::default();
    let target = 8.1e-3;
    let (mut lo, mut hi) = (0.0_f64, 1.0 - 1e-15);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = 1e-4 * mid * mid / ((1.0 - mid) * (1.0 - mid));
        if v < target {
            lo = mid
        } else {
            hi = mid
        }
    }
    let z = p.invert_singular_pressure(target).unwrap();
    assert!((z - 0.5 * (lo + hi)).abs() < 1e-14);
    assert!((z - 0.9).abs() < 1e-13);
}

#[test]
fn energy_density_against_gauss_legendre() {
    let p = PressureParams::default();
    for &z in &[0.1, 0.3, 0.5, 0.7, 0.9, 0.95] {
        let exact = p.energy_density(z).unwrap();
        let oracle = common::gamma_gauss_legendre(z, &p);
        assert!((exact - oracle).abs() < 1e-10, "{z}: {exact} vs {oracle}");
    }
    assert!((common::gamma_gauss_legendre(0.5, &p) - 0.5001).abs() < 1e-10);
    assert!((common::gamma_gauss_legendre(0.9, &p) - 0.9009).abs() < 1e-10);

    // quadrature route for a non-quadratic law
    let q = PressureParams::new(1e-3, 3.0, 1.5, 2.5).unwrap();
    for &z in &[0.2, 0.6, 0.9] {
        let lib = q.energy_density(z).unwrap();
        let oracle = common::gamma_gauss_legendre(z, &q);
        assert!(
            (lib - oracle).abs() < 1e-9 * oracle.abs().max(1.0),
            "{z}: {lib} vs {oracle}"
        );
    }
}

#[test]
fn cyclic_solver_small_example_against_dense() {
    let sys = TridiagonalSystem {
        lower: vec![-1.0; 4],
        diag: vec![3.0; 4],
        upper: vec![-1.0; 4],
        periodic: true,
    };
    let rhs = vec![1.0, 2.0, 3.0, 4.0];
    let x = solve_cyclic_tridiagonal(&sys, &rhs).unwrap();
    let oracle = common::dense_solve(sys.to_dense(), rhs);
    for (a, b) in x.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn cyclic_solver_symmetric_systems_match_dense() {
    let mut rng = common::rng(11);
    for _ in 0..100 {
        let n = rng.gen_range(4..200);
        let sys = common::random_dominant_cyclic(&mut rng, n, true);
        assert!(sys.is_symmetric());
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = solve_cyclic_tridiagonal(&sys, &rhs).unwrap();
        let oracle = common::dense_solve(sys.to_dense(), rhs);
        let scale = oracle.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let err = x
            .iter()
            .zip(&oracle)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-12 * scale);
    }
}

/// Residual bound `||Ax - b|| <= 1e-12 (||A|| ||x|| + ||b||)`.
#[test]
fn cyclic_solver_residual_bound() {
    let mut rng = common::rng(5);
    for _ in 0..200 {
        let n = rng.gen_range(4..512);
        let sys = common::random_dominant_cyclic(&mut rng, n, false);
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let x = solve_cyclic_tridiagonal(&sys, &rhs).unwrap();
        let ax = sys.matvec(&x);
        let res = ax
            .iter()
            .zip(&rhs)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        let xn = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let bn = rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(res <= 1e-12 * (sys.norm_inf() * xn + bn));
    }
}

#[test]
fn jacobian_diagonal_matches_chain_rule() {
    let params = PressureParams::default();
    let g = periodic(16);
    let rho_star: Vec<f64> = (0..16).map(|i| 0.6 + 0.03 * i as f64).collect();
    let phi = vec![0.5; 16];
    let dt = 1e-3;
    let z: Vec<f64> = (0..16).map(|i| 0.05 + 0.055 * i as f64).collect();
    let pi: Vec<f64> = z
        .iter()
        .map(|z| params.singular_pressure(*z).unwrap())
        .collect();
    let eq = PressureEquation {
        phi: &phi,
        rho_star: &rho_star,
        params: &params,
        dt,
    };
    let jac = assemble_newton_jacobian(&pi, &eq, 1e-7, &g).unwrap();
    let coupling = dt * dt / (g.dx * g.dx);
    for i in 0..16 {
        // d(rho_star Z(pi))/dpi = rho_star / pi'(Z)
        let analytic = rho_star[i] / params.singular_pressure_derivative(z[i]).unwrap();
        let fd = jac.diag[i] - 2.0 * coupling;
        assert!(
            (fd - analytic).abs() / analytic < 1e-6,
            "cell {i}: {fd} vs {analytic}"
        );
        assert!((jac.lower[i] + coupling).abs() < 1e-18);
        assert!((jac.upper[i] + coupling).abs() < 1e-18);
    }
}

#[test]
fn jacobian_structure_cases() {
    let params = PressureParams::default();
    let g = periodic(8);
    let rho_star = vec![1.0; 8];
    let phi = vec![0.7; 8];
    let pi = vec![params.singular_pressure(0.7).unwrap(); 8];

    let decoupled = PressureEquation {
        phi: &phi,
        rho_star: &rho_star,
        params: &params,
        dt: 0.0,
    };
    let jac = assemble_newton_jacobian(&pi, &decoupled, 1e-7, &g).unwrap();
    assert!(jac.lower.iter().chain(&jac.upper).all(|v| *v == 0.0));
    assert!(jac.diag.iter().all(|d| *d > 0.0));

    let coupled = PressureEquation {
        phi: &phi,
        rho_star: &rho_star,
        params: &params,
        dt: 1e-4,
    };
    let jac = assemble_newton_jacobian(&pi, &coupled, 1e-7, &g).unwrap();
    assert!(jac.diag.iter().all(|d| *d == jac.diag[0]));
    assert!(jac.is_symmetric());
}

/// Newton matches the damped Picard oracle on small periodic grids.
#[test]
fn newton_matches_picard_on_small_grids() {
    let params = PressureParams::default();
    let g = periodic(8);
    let mut rng = common::rng(2024);
    for _ in 0..20 {
        let rho_star: Vec<f64> = (0..8).map(|_| rng.gen_range(0.5..1.5)).collect();
        let phi: Vec<f64> = rho_star
            .iter()
            .map(|r| r * rng.gen_range(0.2..0.9))
            .collect();
        let dt = 0.05;
        let oracle = common::picard_pressure(&phi, &rho_star, &params, dt, &g);
        let sol = newton_solve_pi(
            &phi,
            &rho_star,
            &params,
            dt,
            &g,
            &NewtonConfig::default(),
            None,
        )
        .unwrap();
        let err = sol
            .pi
            .iter()
            .zip(&oracle)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-9, "{err}");
    }
}

#[test]
fn diffusion_sine_mode_matches_fourier_symbol() {
    let g = periodic(64);
    let (mu, dt) = (0.01, 1e-3);
    let xs = g.cell_centers();
    let u_star: Vec<f64> = xs.iter().map(|x| (2.0 * PI * x).sin()).collect();
    let u = solve_diffusion(&vec![1.0; 64], &u_star, mu, dt, &g).unwrap();
    let damping = 1.0 + 2.0 * mu * dt * (2.0 / (g.dx * g.dx)) * (1.0 - (2.0 * PI * g.dx).cos());
    for i in 0..64 {
        assert!((u[i] - u_star[i] / damping).abs() < 1e-12);
    }
}

#[test]
fn transport_one_cell_shift_at_unit_courant_number() {
    let g = periodic(50);
    let rs: Vec<f64> = (0..50)
        .map(|i| if (10..20).contains(&i) { 1.0 } else { 0.6 })
        .collect();
    let c = -0.9;
    let out = transport_rho_star(&rs, &vec![c; 50], g.dx / c.abs(), &g).unwrap();
    for i in 0..50 {
        assert!((out[i] - rs[(i + 1) % 50]).abs() < 1e-15);
    }
}
