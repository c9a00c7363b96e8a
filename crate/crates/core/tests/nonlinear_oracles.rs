mod common;

use std::f64::consts::PI;

use common::oracle::{crank_nicolson_interval, split_step_line};
use nlsbvp::halfline::{ExtensionKind, TruncatedLine};
use nlsbvp::interval::BoundaryPairSpec;
use nlsbvp::invariants::mass_energy;
use nlsbvp::nonlinear::{continue_globally, fixed_point_residual, gate, picard_solve, BoundaryData, Domain, IbvpSpec, SolverConfig};
use nlsbvp::spectral::{BoundaryTrace, ComplexSamples, Grid1D, SobolevIndex};
use nlsbvp::Complex64;
use proptest::prelude::*;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn small_interval(lambda: f64, nx: usize, nt: usize) -> IbvpSpec {
    let g = Grid1D::unit(nx).unwrap();
    let phi = ComplexSamples::from_fn(g, |x| re(0.1 * (PI * x).sin()));
    let bc = BoundaryPairSpec::homogeneous(nt, 0.1).unwrap();
    IbvpSpec::new(SobolevIndex::new(1.0).unwrap(), 4.0, lambda, phi, BoundaryData::Interval(bc)).unwrap()
}

#[test]
fn interval_picard_matches_crank_nicolson() {
    for lambda in [1.0, -1.0] {
        let spec = small_interval(lambda, 129, 201);
        let rec = picard_solve(&spec, &SolverConfig::default()).unwrap();
        assert!(rec.iterations_per_window[0] <= 20);
        let phi: Vec<Complex64> = (0..1025).map(|j| re(0.1 * (PI * j as f64 / 1024.0).sin())).collect();
        let cn = crank_nicolson_interval(&phi, |_| re(0.0), |_| re(0.0), 4.0, lambda, 0.1, 2000);
        let last = rec.field.snapshot(rec.field.nt() - 1);
        let err = last.iter().enumerate().map(|(j, z)| (z - cn[8 * j]).norm()).fold(0.0, f64::max);
        assert!(err < 1e-5, "lambda {lambda}: {err:.3e}");
    }
}

#[test]
fn interval_with_boundary_data_matches_crank_nicolson() {
    let (nx, nt, t_final) = (129, 401, 0.2);
    let g = Grid1D::unit(nx).unwrap();
    let phi = ComplexSamples::from_fn(g, |x| re(0.2 * (PI * x).sin()));
    let h1 = |t: f64| Complex64::new(0.0, 0.3) * (1.0 - (-t).exp()).powi(2);
    let h2 = |t: f64| re(0.2) * t * t;
    let bc = BoundaryPairSpec::new(BoundaryTrace::from_fn(nt, t_final, h1).unwrap(), BoundaryTrace::from_fn(nt, t_final, h2).unwrap())
        .unwrap();
    let spec = IbvpSpec::new(SobolevIndex::new(2.0).unwrap(), 4.0, -1.0, phi, BoundaryData::Interval(bc)).unwrap();
    let rec = picard_solve(&spec, &SolverConfig::default()).unwrap();
    let fine: Vec<Complex64> = (0..1025).map(|j| re(0.2 * (PI * j as f64 / 1024.0).sin())).collect();
    let cn = crank_nicolson_interval(&fine, h1, h2, 4.0, -1.0, t_final, 4000);
    let last = rec.field.snapshot(nt - 1);
    let err = last.iter().enumerate().map(|(j, z)| (z - cn[8 * j]).norm()).fold(0.0, f64::max);
    assert!(err < 1e-4, "{err:.3e}");
}

#[test]
fn accepted_solution_is_a_fixed_point() {
    let spec = small_interval(1.0, 65, 101);
    let cfg = SolverConfig::default();
    let rec = picard_solve(&spec, &cfg).unwrap();
    let r = fixed_point_residual(&spec, &rec.field, &cfg).unwrap();
    assert!(r <= 2.0 * cfg.picard_tol, "{r:.3e}");
}

#[test]
fn solutions_depend_lipschitz_on_lambda() {
    let base = picard_solve(&small_interval(1.0, 65, 101), &SolverConfig::default()).unwrap().field;
    let mut lip = Vec::new();
    for delta in [1e-2, 5e-3, 2.5e-3] {
        let u = picard_solve(&small_interval(1.0 + delta, 65, 101), &SolverConfig::default()).unwrap().field;
        lip.push(u.max_abs_diff(&base).unwrap() / delta);
    }
    // Difference quotients converge to the derivative in lambda.
    assert!(lip.iter().all(|l| l.is_finite() && *l > 0.0));
    assert!((lip[2] - lip[1]).abs() < 0.6 * (lip[1] - lip[0]).abs() + 1e-12, "{lip:?}");
    assert!((lip[0] / lip[2] - 1.0).abs() < 0.05, "{lip:?}");
}

#[test]
fn odd_data_on_half_line_match_whole_line_flow() {
    let (n_half, x_max, nt, t_final) = (1024usize, 40.0, 801usize, 0.5);
    let line = TruncatedLine::new(x_max, 2 * n_half).unwrap();
    let half = line.half_grid();
    let bump = |x: f64| re(0.4 * x * (-x * x).exp());
    let phi = ComplexSamples::from_fn(half, bump);
    let h = BoundaryTrace::zeros(nt, t_final).unwrap();
    let spec = IbvpSpec::new(SobolevIndex::new(1.0).unwrap(), 4.0, 1.0, phi, BoundaryData::HalfLine(h)).unwrap();
    let mut cfg = SolverConfig::default();
    cfg.halfline.extension = ExtensionKind::Odd;
    let rec = picard_solve(&spec, &cfg).unwrap();
    let psi: Vec<Complex64> = line.grid().nodes().into_iter().map(bump).collect();
    let whole = split_step_line(&psi, x_max, 4.0, 1.0, t_final, 8000);
    let restricted = line.restrict(&whole);
    let last = rec.field.snapshot(nt - 1);
    let err = last[..n_half / 2].iter().zip(&restricted).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-6, "{err:.3e}");
}

proptest! {
    #[test]
    fn half_line_gate_is_an_interval_in_s(s in 0.51f64..2.49, p in 3.0f64..9.0, lambda in prop::sample::select(vec![-1.0, 1.0])) {
        if gate(Domain::HalfLine, s, p, lambda).local_ok() {
            for k in 1..=10 {
                let s2 = 0.5 + (s - 0.5) * k as f64 / 10.0;
                if (s2 - 1.5).abs() > 1e-9 {
                    prop_assert!(gate(Domain::HalfLine, s2, p, lambda).local_ok(), "s = {s} passes but s' = {s2} fails");
                }
            }
        }
    }
}

fn interval_spec(lambda: f64, amp: f64, nx: usize, nt: usize, t_final: f64) -> IbvpSpec {
    let g = Grid1D::unit(nx).unwrap();
    let phi = ComplexSamples::from_fn(g, |x| Complex64::new(amp * (PI * x).sin(), amp * (2.0 * PI * x).sin()));
    let bc = BoundaryPairSpec::homogeneous(nt, t_final).unwrap();
    IbvpSpec::new(SobolevIndex::new(1.0).unwrap(), 4.0, lambda, phi, BoundaryData::Interval(bc)).unwrap()
}

#[test]
fn defocusing_mass_is_conserved_across_windows() {
    let spec = interval_spec(-1.0, 0.3, 65, 1001, 5.0);
    let cfg = SolverConfig { window_t: 0.5, ..SolverConfig::default() };
    let rec = continue_globally(&spec, &cfg).unwrap();
    assert_eq!(rec.window_starts.len(), 10);
    let (mass, _) = mass_energy(&rec.field, 4.0, -1.0);
    let drift = mass.iter().map(|m| (m - mass[0]).abs()).fold(0.0, f64::max) / mass[0];
    assert!(drift < 1e-4, "{drift:.3e}");
    let h1 = rec.window_h1.iter().map(|w| w.1).fold(0.0, f64::max);
    assert!(h1 < 2.0 * rec.window_h1[0].1, "{:?}", rec.window_h1);
}

#[test]
fn window_count_does_not_change_the_solution() {
    let (nx, nt, t_final) = (65, 401, 0.4);
    let spec = interval_spec(-1.0, 0.3, nx, nt, t_final);
    let solve = |w: f64| continue_globally(&spec, &SolverConfig { window_t: w, ..SolverConfig::default() }).unwrap();
    let (one, five, ten) = (solve(t_final), solve(t_final / 5.0), solve(t_final / 10.0));
    assert_eq!((five.window_starts.len(), ten.window_starts.len()), (5, 10));
    let fine: Vec<Complex64> = (0..513)
        .map(|j| {
            let x = j as f64 / 512.0;
            Complex64::new(0.3 * (PI * x).sin(), 0.3 * (2.0 * PI * x).sin())
        })
        .collect();
    let cn = crank_nicolson_interval(&fine, |_| re(0.0), |_| re(0.0), 4.0, -1.0, t_final, 4000);
    let last = one.field.snapshot(nt - 1);
    let single_err = last.iter().enumerate().map(|(j, z)| (z - cn[8 * j]).norm()).fold(0.0, f64::max);
    let split = five.field.max_abs_diff(&ten.field).unwrap();
    assert!(split <= 2.0 * single_err, "{split:.3e} vs {single_err:.3e}");
}
