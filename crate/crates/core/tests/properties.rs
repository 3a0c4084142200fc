use congestion_core::diffusion::solve_diffusion;
use congestion_core::hyperbolic::{compute_phi, update_momentum_direct};
use congestion_core::stencil::{laplacian, rusanov_divergence, upwind_advect, Parity};
use congestion_core::transport::transport_rho_star;
use congestion_core::{Boundary, FlowState, Grid1D, PressureParams, DEFAULT_VELOCITY_FLOOR};
use proptest::prelude::*;

fn periodic(n: usize) -> Grid1D {
    Grid1D::uniform(1.0, n, Boundary::Periodic).unwrap()
}

fn field(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, n)
}

/// Admissible state: rho_star in [0.3, 1.5], Z in [0, 0.95], |u| <= 1.
fn admissible_state(n: usize) -> impl Strategy<Value = FlowState> {
    (field(n, 0.3, 1.5), field(n, 0.0, 0.95), field(n, -1.0, 1.0)).prop_map(|(rs, z, u)| {
        let rho: Vec<f64> = rs.iter().zip(&z).map(|(r, z)| r * z).collect();
        FlowState::from_primitive(rho, &u, rs)
    })
}

proptest! {
    #[test]
    fn rusanov_divergence_is_conservative(
        (q, u, a) in (4usize..64).prop_flat_map(|n| (field(n, -2.0, 2.0), field(n, -2.0, 2.0), field(n, 0.0, 3.0)))
    ) {
        let g = periodic(q.len());
        for parity in [Parity::Even, Parity::Odd] {
            let d = rusanov_divergence(&q, &u, &a, &g, parity).unwrap();
            let total: f64 = d.iter().sum::<f64>() * g.dx;
            prop_assert!(total.abs() <= 1e-13);
        }
    }

    #[test]
    fn laplacian_is_symmetric_and_nonpositive(
        (f, h) in (4usize..64).prop_flat_map(|n| (field(n, -1.0, 1.0), field(n, -1.0, 1.0)))
    ) {
        let g = periodic(f.len());
        let lf = laplacian(&f, &g, Parity::Even).unwrap();
        let lh = laplacian(&h, &g, Parity::Even).unwrap();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * g.dx * g.dx;
        prop_assert!((dot(&f, &lh) - dot(&lf, &h)).abs() <= 1e-13);
        prop_assert!(dot(&f, &lf) <= 1e-13);
    }

    #[test]
    fn upwind_step_respects_bounds(
        (f, u, courant) in (4usize..64).prop_flat_map(|n| (field(n, 0.1, 2.0), field(n, -1.0, 1.0), 0.01f64..1.0))
    ) {
        let g = periodic(f.len());
        let dt = courant * g.dx;
        let adv = upwind_advect(&f, &u, &g).unwrap();
        let lo = f.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (fi, ai) in f.iter().zip(&adv) {
            let next = fi - dt * ai;
            prop_assert!(next >= lo - 1e-14 && next <= hi + 1e-14);
        }
    }

    #[test]
    fn transport_keeps_rho_star_positive_and_bounded(
        (rs, u) in (4usize..64).prop_flat_map(|n| (field(n, 0.2, 1.2), field(n, -1.0, 1.0)))
    ) {
        let g = periodic(rs.len());
        let out = transport_rho_star(&rs, &u, g.dx, &g).unwrap();
        let lo = rs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = rs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(out.iter().all(|v| *v > 0.0 && *v >= lo - 1e-14 && *v <= hi + 1e-14));
    }

    #[test]
    fn transport_leaves_locally_flat_resting_cells_alone(
        rs in field(16, 0.5, 1.0), cell in 1usize..15
    ) {
        let g = periodic(16);
        let mut rs = rs;
        rs[cell - 1] = rs[cell];
        rs[cell + 1] = rs[cell];
        let mut u = vec![0.7; 16];
        u[cell] = 0.0;
        let out = transport_rho_star(&rs, &u, 0.5 * g.dx, &g).unwrap();
        prop_assert_eq!(out[cell], rs[cell]);
    }

    #[test]
    fn pressure_laws_are_monotone(z1 in 0.0f64..0.999, dz in 1e-6f64..0.5, beta in 0.5f64..3.0, alpha in 0.0f64..3.0) {
        let p = PressureParams::new(1e-4, alpha, beta, 2.0).unwrap();
        let z2 = (z1 + dz).min(0.9999);
        prop_assume!(z2 > z1);
        prop_assert!(p.background_pressure(z1).unwrap() <= p.background_pressure(z2).unwrap());
        if z1 > 0.0 {
            prop_assert!(p.singular_pressure(z1).unwrap() < p.singular_pressure(z2).unwrap());
        }
    }

    #[test]
    fn inverse_roundtrip_random_laws(z in 0.0f64..0.99999, alpha in 0.0f64..3.0, beta in 0.5f64..3.0, log_eps in -6.0f64..-1.0) {
        let p = PressureParams::new(10f64.powf(log_eps), alpha, beta, 2.0).unwrap();
        let pi = p.singular_pressure(z).unwrap();
        let back = p.invert_singular_pressure(pi).unwrap();
        prop_assert!(back < 1.0);
        prop_assert!((back - z).abs() <= 1e-11, "z={} back={}", z, back);
    }

    #[test]
    fn phi_and_momentum_update_conserve_totals(state in admissible_state(24), dt in 1e-5f64..1e-3) {
        let g = periodic(24);
        let params = PressureParams::default();
        let phi = compute_phi(&state, &params, dt, &g, DEFAULT_VELOCITY_FLOOR).unwrap();
        let mass: f64 = state.rho.iter().sum::<f64>() * g.dx;
        prop_assert!((phi.iter().sum::<f64>() * g.dx - mass).abs() <= 1e-13);

        let z: Vec<f64> = state.rho.iter().zip(&state.rho_star).map(|(r, s)| r / s).collect();
        let pi: Vec<f64> = z.iter().map(|z| params.singular_pressure(*z).unwrap()).collect();
        let m = update_momentum_direct(&state, &pi, &params, dt, &g, DEFAULT_VELOCITY_FLOOR).unwrap();
        let before: f64 = state.momentum.iter().sum::<f64>() * g.dx;
        prop_assert!((m.iter().sum::<f64>() * g.dx - before).abs() <= 1e-13);
    }

    #[test]
    fn diffusion_dissipates_and_obeys_maximum_principle(
        (rho, u) in (4usize..64).prop_flat_map(|n| (field(n, 0.05, 1.5), field(n, -1.0, 1.0))),
        mu in 1e-5f64..1e-1, dt in 1e-5f64..1e-2
    ) {
        let g = periodic(rho.len());
        let out = solve_diffusion(&rho, &u, mu, dt, &g).unwrap();
        let lo = u.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(out.iter().all(|v| *v >= lo - 1e-13 && *v <= hi + 1e-13));
        let ke = |v: &[f64]| rho.iter().zip(v).map(|(r, v)| r * v * v).sum::<f64>();
        prop_assert!(ke(&out) <= ke(&u) * (1.0 + 1e-14) + 1e-300);
    }

    #[test]
    fn inviscid_diffusion_is_bitwise_identity(u in field(12, -3.0, 3.0)) {
        let g = periodic(12);
        prop_assert_eq!(solve_diffusion(&[0.4; 12], &u, 0.0, 1e-3, &g).unwrap(), u);
    }
}
