use proptest::prelude::*;

use heatgrad::corpus;
use heatgrad::estimates::{self, EstimateId, ReportOptions, RhsContext};
use heatgrad::geometry::{ModelManifold, ParabolicCube, RadialJet};
use heatgrad::kernelbounds;
use heatgrad::lattice;
use heatgrad::liouville::{self, Field, TimeDepth};
use heatgrad::proofcheck;
use heatgrad::solutions::{ClosedForm, Domain, HeatSolution};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn euclidean_doubling_is_exact(n in 1usize..=4, r in 0.05f64..5.0) {
        let m = ModelManifold::euclidean(n).unwrap();
        let q = m.ball_volume(2.0 * r).unwrap() / m.ball_volume(r).unwrap();
        prop_assert!((q - 2f64.powi(n as i32)).abs() <= 1e-12 * q);
    }

    #[test]
    fn sphere_doubling_is_bounded(r in 0.05f64..1.5) {
        let m = ModelManifold::sphere(2, 1.0).unwrap();
        let q = m.ball_volume(2.0 * r).unwrap() / m.ball_volume(r).unwrap();
        prop_assert!(q <= 4.0 * (1.0 + 1e-12));
    }

    #[test]
    fn hyperbolic_ricci_bound_ignores_radius(n in 2usize..=5, r1 in 0.1f64..10.0, r2 in 0.1f64..10.0) {
        let m = ModelManifold::hyperbolic(n, -1.0).unwrap();
        prop_assert_eq!(m.ricci_lower_bound(r1).unwrap(), m.ricci_lower_bound(r2).unwrap());
    }

    #[test]
    fn sz14_rhs_monotone(r1 in 0.5f64..5.0, dr in 0.0f64..5.0, t1 in 0.5f64..5.0, dt in 0.0f64..5.0, k in 0.0f64..2.0) {
        let line = ModelManifold::euclidean(1).unwrap();
        let u = HeatSolution::closed_form(ClosedForm::TravelingWave { a: 1.0 }, line, Domain::new(1.0, 3.0, 1.0, 2.0).unwrap()).unwrap();
        let rhs = |r: f64, t: f64| {
            let ctx = RhsContext { cube: ParabolicCube::new(2.0, r, 2.0, t).unwrap(), k, constant: 1.0, constant2: 1.0, ln_m: 6.0 };
            estimates::evaluate_rhs(EstimateId::Sz14, &u, &ctx, 2.0, 2.0).unwrap()
        };
        prop_assert!(rhs(r1 + dr, t1) <= rhs(r1, t1));
        prop_assert!(rhs(r1, t1 + dt) <= rhs(r1, t1));
    }

    #[test]
    fn sharpness_ratio_increases_below_half(a in 0.1f64..50.0, da in 0.01f64..10.0) {
        let rows = estimates::sharpness_scan(&[a, a + da]).unwrap();
        prop_assert!(rows[0].ratio < rows[1].ratio && rows[1].ratio < 0.5);
    }

    #[test]
    fn sandwich_holds(amp in 0.01f64..3.0, freq in 0.01f64..0.5, x0 in -5.0f64..5.0, r in 1.0f64..20.0) {
        let u = Field::Closed(ClosedForm::SineMode { offset: 0.0, amp, freq });
        for depth in [TimeDepth::Literal, TimeDepth::Parabolic] {
            let s = match liouville::gradient_decay_sweep_b(u, x0, 0.0, &[r, 2.0 * r], 1.0, depth) {
                Ok(s) => s,
                // e^{freq² T} can overflow on parabolic depths
                Err(heatgrad::Error::Data(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            for row in &s.rows {
                prop_assert!(row.sandwich_ok && row.log_ratio_max <= 3f64.ln() + 1e-9);
            }
        }
    }

    #[test]
    fn constant_bound_is_two_over_r(c in 0.1f64..100.0, k in 0.1f64..10.0, r in 1.0f64..50.0) {
        let u = Field::Closed(ClosedForm::Constant { c });
        let s = liouville::gradient_decay_sweep_a(u, 0.0, 0.0, &[r, 2.0 * r, 4.0 * r], k).unwrap();
        for row in &s.rows {
            prop_assert!((row.bound - 2.0 * k / row.radius).abs() <= 1e-12 * row.bound);
        }
        prop_assert!(s.decreasing);
    }
}

proptest! {
    #![proptest_config(cases(16))]

    #[test]
    fn reports_scale_invariant(a in 0.2f64..3.0, lambda in 0.01f64..100.0) {
        let f = corpus::traveling_wave(a).unwrap();
        let scaled = f.u.scaled(lambda).unwrap();
        for id in [EstimateId::Ly12, EstimateId::Ham13, EstimateId::Sz14] {
            let p = estimates::report(id, &f.u, &f.cube, 0.0, 1.0, &ReportOptions::default()).unwrap();
            let q = estimates::report(id, &scaled, &f.cube, 0.0, 1.0, &ReportOptions::default()).unwrap();
            prop_assert!((p.ratio - q.ratio).abs() <= 1e-12 * p.ratio.abs().max(1e-300));
            prop_assert!((p.lhs_sup - q.lhs_sup).abs() <= 1e-12 * p.lhs_sup.abs());
        }
    }

    #[test]
    fn proof_checks_scale_invariant(n in 1usize..=3, lambda in 0.01f64..100.0) {
        let f = corpus::gaussian(n).unwrap();
        let ln_m = f.u.log_sup_with(&f.cube, 51, 1.0).unwrap().ln_m;
        let scaled = f.u.scaled(lambda).unwrap();
        let pts = lattice::grid2(f.cube.space_range(f.u.manifold()), 5, f.cube.time_range(), 5);
        for (r, t) in pts {
            let p = proofcheck::log_quantities(&f.u, ln_m, r, t).unwrap();
            let q = proofcheck::log_quantities(&scaled, ln_m + lambda.ln(), r, t).unwrap();
            prop_assert!((p.w - q.w).abs() <= 1e-10 * p.w.max(1e-12));
            prop_assert!((p.f - q.f).abs() <= 1e-12 * (1.0 + p.f.abs()));
        }
    }

    #[test]
    fn kernel_constants_monotone_in_delta(n in 1usize..=3, d1 in 0.2f64..3.8, d2 in 0.2f64..3.8) {
        let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        let m = ModelManifold::euclidean(n).unwrap();
        let xi = lattice::linspace(0.0, kernelbounds::XI_MAX, 2001);
        let a = kernelbounds::li_yau_constants(&m, lo, &xi, &[1.0]).unwrap();
        let b = kernelbounds::li_yau_constants(&m, hi, &xi, &[1.0]).unwrap();
        prop_assert!(a.c1 >= b.c1 * (1.0 - 1e-12) && a.c2 <= b.c2 * (1.0 + 1e-12));
        prop_assert!(a.c1 >= a.c2 && a.c2 > 0.0);
    }

    #[test]
    fn derivation_chain_is_ordered(n in 1usize..=3, d in 0.0f64..3.0, t in 0.3f64..3.0) {
        let m = ModelManifold::euclidean(n).unwrap();
        let tr = kernelbounds::thm13_pipeline(&m, d, t, 2.0, None).unwrap();
        prop_assert!(tr.final_bound >= tr.direct * (1.0 - 1e-12));
        prop_assert!(tr.lhs <= tr.direct * (1.0 + 1e-9));
    }
}

#[test]
fn kernel_gradient_sup_is_self_similar() {
    let xi = kernelbounds::default_xi_grid();
    for n in 1..=3 {
        let m = ModelManifold::euclidean(n).unwrap();
        let a = kernelbounds::kernel_gradient_check(&m, &xi, &[0.5]).unwrap();
        let b = kernelbounds::kernel_gradient_check(&m, &xi, &[2.0]).unwrap();
        assert!((a.sup - b.sup).abs() <= 1e-9, "{} {}", a.sup, b.sup);
    }
}

#[test]
fn flux_form_converges_to_the_laplacian() {
    // u = r² e^{-r}
    let u = |r: f64| r * r * (-r).exp();
    let jet = |r: f64| RadialJet {
        u: u(r),
        ur: (2.0 * r - r * r) * (-r).exp(),
        urr: (2.0 - 4.0 * r + r * r) * (-r).exp(),
    };
    let models = [
        ModelManifold::euclidean(3).unwrap(),
        ModelManifold::hyperbolic(3, -1.0).unwrap(),
        ModelManifold::sphere(2, 1.0).unwrap(),
    ];
    for m in models {
        let r = 1.1;
        let exact = m.radial_laplacian(jet(r), r).unwrap();
        let err = |h: f64| (m.flux_form_laplacian(u, r, h).unwrap() - exact).abs();
        let q = err(0.02) / err(0.01);
        assert!((3.2..=4.8).contains(&q), "{:?}: {q}", m.kind());
    }
}

#[test]
fn corpus_residuals_and_floors() {
    for f in corpus::analytic_corpus().unwrap() {
        let (r, t) = (f.cube.space_range(f.u.manifold()), f.cube.time_range());
        for (x, s) in lattice::random_points(r, t, 50, 7) {
            let res = f.u.relative_heat_residual(x, s).unwrap();
            assert!(res.abs() <= 1e-9, "{}: {res} at ({x}, {s})", f.name);
        }
        assert!(f.u.positivity_floor() > 0.0, "{}", f.name);
    }
}

#[test]
fn conclusion_holds_with_empirical_constant() {
    let corpus = corpus::full_corpus().unwrap();
    let mut c_hat = 0.0f64;
    for f in &corpus {
        let r = estimates::report(EstimateId::Sz14, &f.u, &f.cube, f.k, 1.0, &ReportOptions::default()).unwrap();
        c_hat = c_hat.max(r.ratio);
    }
    for f in corpus.iter().filter(|f| f.u.is_analytic()) {
        let ln_m = f.u.log_sup(&f.cube).unwrap().ln_m;
        let c = proofcheck::conclusion_check(&f.u, &f.cube, ln_m, f.k, c_hat * 1.001, 101).unwrap();
        assert!(c.holds_quarter, "{}: {c:?}", f.name);
    }
}

#[test]
fn kernel_sup_factor_is_finite() {
    let m = ModelManifold::euclidean(1).unwrap();
    let u = HeatSolution::closed_form(ClosedForm::GaussianKernel { n: 1 }, m, Domain::new(-6.0, 6.0, 0.1, 8.0).unwrap()).unwrap();
    let mut worst = 0.0f64;
    for x in [0.0, 0.5, 1.0, 2.0] {
        for t in [0.25, 0.5, 1.0, 2.0] {
            let c = u.harnack_sup_factor(x, t).unwrap();
            assert!(c.is_finite() && c >= 1.0);
            worst = worst.max(c);
        }
    }
    assert!(worst < 10.0, "{worst}");
}
