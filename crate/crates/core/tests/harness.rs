mod common;

use common::*;
use lowreg_nlse::harness::*;
use lowreg_nlse::{Complex64, SpectralField};

fn small(equation: Equation, scheme: Scheme, eps: f64, tau: f64) -> SimParams {
    SimParams {
        n_modes: 32,
        seed: 3,
        ..SimParams::new(equation, scheme, eps, tau)
    }
}

#[test]
fn sweeps_are_deterministic() {
    let base = SimParams {
        t_final: 1.0,
        ..small(Equation::QuadraticSquare, Scheme::Li1, 0.5, 0.1)
    };
    let taus = [0.1, 0.05, 0.025, 0.0125];
    let opts = SweepOptions { ref_tau: Some(1e-3) };
    let a = sweep_tau_multi(&base, &[Scheme::Li1, Scheme::Sli2], &taus, &opts).unwrap();
    let b = sweep_tau_multi(&base, &[Scheme::Li1, Scheme::Sli2], &taus, &opts).unwrap();
    for (x, y) in a.iter().zip(&b) {
        let strip = |s: &Sweep| s.records.iter().map(SweepRecord::without_timing).collect::<Vec<_>>();
        assert_eq!(strip(x), strip(y));
    }
    assert!(a.iter().all(|s| is_monotone_refinement(&s.records)));
    assert!(a.iter().flat_map(|s| &s.records).all(SweepRecord::is_reliable));
}

#[test]
fn horizon_law() {
    for (eq, t_const) in [(Equation::QuadraticSquare, 1.0), (Equation::Cubic, 0.5)] {
        for eps in [1.0, 0.7, 0.35, 0.18, 0.1] {
            for tau in [0.1, 0.07, 0.03] {
                let p = SimParams::new(eq, eq.schemes()[0], eps, tau).with_long_time(t_const);
                let target = if eq.is_cubic() { t_const / (eps * eps) } else { t_const / eps };
                assert!((p.horizon() - target).abs() <= tau / 2.0 + 1e-12);
            }
        }
    }
}

#[test]
fn reference_dominance_flags_small_errors() {
    let base = SimParams {
        t_final: 0.5,
        ..small(Equation::Cubic, Scheme::Nrsli2, 0.5, 0.05)
    };
    let recs = error_vs_time(&base, &[0.5], &SweepOptions { ref_tau: Some(5e-3) }).unwrap();
    let mut r = recs[0].clone();
    assert!(r.reference_gap > 0.0);
    r.error = 9.0 * r.reference_gap;
    assert!(!r.is_reliable());
    r.error = 11.0 * r.reference_gap;
    assert!(r.is_reliable());
    r.error = f64::NAN;
    assert!(!r.is_reliable());
}

#[test]
fn reference_of_constant_data_solves_the_scalar_ode() {
    let (eps, t) = (0.8, 1.5);
    let p = SimParams {
        t_final: t,
        ..small(Equation::QuadraticSquare, Scheme::Li1, eps, 0.1)
    };
    let v0 = Complex64::new(0.4, -0.3);
    let w0 = SpectralField::constant(&p.grid().unwrap(), v0);
    let got = reference_solution(&p, &w0, 1e-3).unwrap();
    // iv' = εv² has v(t) = v₀ / (1 + iεv₀t)
    let exact = v0 / (1.0 + Complex64::new(0.0, eps) * v0 * t);
    assert!((got.zero_mode() - exact).norm() <= 1e-8);
    assert!(h1(&got.clone().add_constant(-got.zero_mode())) <= 1e-14);

    let p = SimParams { equation: Equation::Cubic, scheme: Scheme::Nrli1, ..p };
    let got = reference_solution(&p, &w0, 1e-3).unwrap();
    let exact = v0 * Complex64::new(0.0, -eps * eps * v0.norm_sqr() * t).exp();
    assert!((got.zero_mode() - exact).norm() <= 1e-8);
}

#[test]
fn strang_trajectory_conserves_mass() {
    let p = SimParams {
        t_final: 10.0,
        n_modes: 64,
        theta: 1.0,
        ..SimParams::new(Equation::Cubic, Scheme::Strang, 1.0, 0.01)
    };
    let w0 = p.initial_data().unwrap();
    let tr = run_trajectory(&p, &w0, &[2.5, 5.0]).unwrap();
    assert_eq!(tr.stats.steps, 1000);
    assert_eq!(tr.snapshots.len(), 2);
    let m = w0.sobolev_norm(0.0);
    assert!((tr.final_state.sobolev_norm(0.0) - m).abs() <= 1e-9 * m);
}

#[test]
fn nrli1_beats_os18_on_the_long_horizon() {
    let base = SimParams {
        n_modes: 64,
        ..SimParams::new(Equation::Cubic, Scheme::Nrli1, 0.35, 0.05)
    }
    .with_long_time(0.5);
    let recs = error_vs_time_multi(&base, &[Scheme::Nrli1, Scheme::Os18], &[base.horizon()], &SweepOptions::default())
        .unwrap();
    let (nr, os) = (&recs[0][0], &recs[1][0]);
    assert!(nr.is_reliable() && os.is_reliable());
    assert!(nr.error < os.error, "{} vs {}", nr.error, os.error);
}

#[test]
fn rough_data_stays_bounded() {
    let base = SimParams {
        t_final: 2.0,
        theta: 1.0,
        ..small(Equation::QuadraticSquare, Scheme::Li1, 0.1, 0.1)
    }
    .with_long_time(0.2);
    let sweeps = sweep_tau_multi(&base, &[Scheme::Li1, Scheme::Sli2], &[0.1, 0.05, 0.025, 0.0125], &SweepOptions::default())
        .unwrap();
    for r in sweeps.iter().flat_map(|s| &s.records) {
        assert!(r.error.is_finite());
        assert!(r.max_h1 <= 1.0 + r.reference_max_h1);
    }
}

#[test]
fn reference_agrees_with_an_independent_solver() {
    for (eq, scheme) in [(Equation::QuadraticSquare, Scheme::Li1), (Equation::Cubic, Scheme::Nrli1)] {
        let p = SimParams {
            t_final: 1.0,
            n_modes: 64,
            ..small(eq, scheme, 0.5, 0.1)
        };
        let w0 = p.initial_data().unwrap();
        // both solvers are second order, so a common limit shows as a 4x drop per halving
        let coarse = cross_validate_reference(&p, &w0, 1e-3).unwrap();
        let fine = cross_validate_reference(&p, &w0, 5e-4).unwrap();
        assert!(fine <= coarse / 3.0, "{eq}: {coarse:e} -> {fine:e}");
    }
}

#[test]
fn csv_round_trip() {
    let base = SimParams {
        t_final: 0.4,
        ..small(Equation::QuadraticModulusSquare, Scheme::Li1, 0.5, 0.05)
    };
    let recs = error_vs_time(&base, &[0.1, 0.2, 0.4], &SweepOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    write_records(&path, &recs).unwrap();
    let back = read_records(&path).unwrap();
    let strip = |r: &SweepRecord| SweepRecord {
        reference_gap: 0.0,
        max_h1: 0.0,
        reference_max_h1: 0.0,
        ..r.clone()
    };
    assert_eq!(back, recs.iter().map(strip).collect::<Vec<_>>());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn order_fits_reject_degenerate_input() {
    assert!(fit_order("tau", &[(0.1, 1.0), (0.05, 0.5)]).is_err());
    assert!(fit_order("tau", &[(0.1, 1.0), (0.1, 0.5), (0.1, 0.2)]).is_err());
    assert!(fit_order("tau", &[(0.1, 1.0), (0.05, 0.0), (0.02, 0.2)]).is_err());
}
