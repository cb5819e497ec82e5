use std::f64::consts::PI;

use heatgrad::geometry::ModelManifold;
use heatgrad::solutions::{ClosedForm, GridSpec, HeatSolution};

fn wave(x: f64, t: f64) -> f64 {
    (x + t).exp()
}

fn h3_kernel(r: f64, t: f64) -> f64 {
    (4.0 * PI * t).powf(-1.5) * (r / r.sinh()) * (-t - r * r / (4.0 * t)).exp()
}

fn max_error(u: &HeatSolution, exact: impl Fn(f64, f64) -> f64) -> f64 {
    let g = u.grid().unwrap();
    let (nr, nt) = g.shape();
    let mut e = 0.0f64;
    for j in 0..nt {
        for i in 0..nr {
            e = e.max((g.at(i, j) - exact(g.r(i), g.t(j))).abs());
        }
    }
    e
}

fn ratio(m: ModelManifold, form: ClosedForm, spec: GridSpec, exact: impl Fn(f64, f64) -> f64 + Copy) -> f64 {
    let coarse = HeatSolution::solve_with_closed_form_data(m.clone(), form, spec).unwrap();
    let fine = HeatSolution::solve_with_closed_form_data(m, form, spec.refined()).unwrap();
    max_error(&coarse, exact) / max_error(&fine, exact)
}

#[test]
fn traveling_wave_second_order() {
    let spec = GridSpec { r_lo: 1.0, r_hi: 3.0, cells: 20, t_lo: 1.0, t_hi: 2.0, steps: 20 };
    let m = ModelManifold::euclidean(1).unwrap();
    for s in [spec, spec.refined()] {
        let q = ratio(m.clone(), ClosedForm::TravelingWave { a: 1.0 }, s, wave);
        assert!((3.2..=4.8).contains(&q), "ratio {q}");
    }
}

#[test]
fn hyperbolic_kernel_second_order() {
    let spec = GridSpec { r_lo: 0.5, r_hi: 4.0, cells: 35, t_lo: 0.5, t_hi: 1.5, steps: 20 };
    let m = ModelManifold::hyperbolic(3, -1.0).unwrap();
    let q = ratio(m, ClosedForm::Hyperbolic3Kernel, spec, h3_kernel);
    assert!((3.2..=4.8).contains(&q), "ratio {q}");
}

#[test]
fn grid_residual_shrinks_under_refinement() {
    let spec = GridSpec { r_lo: 0.5, r_hi: 4.0, cells: 35, t_lo: 0.5, t_hi: 1.5, steps: 20 };
    let m = ModelManifold::hyperbolic(3, -1.0).unwrap();
    let worst = |s: GridSpec| {
        let u = HeatSolution::solve_with_closed_form_data(m.clone(), ClosedForm::Hyperbolic3Kernel, s).unwrap();
        [(1.0, 0.9), (2.0, 1.1), (3.0, 1.3)]
            .iter()
            .map(|&(r, t)| u.relative_heat_residual(r, t).unwrap().abs())
            .fold(0.0, f64::max)
    };
    let (a, b) = (worst(spec), worst(spec.refined()));
    assert!(b < a / 2.5, "{a} -> {b}");
}

#[test]
fn discrete_minimum_principle() {
    let m = ModelManifold::hyperbolic(3, -1.0).unwrap();
    let spec = GridSpec { r_lo: 0.5, r_hi: 4.0, cells: 70, t_lo: 0.5, t_hi: 1.5, steps: 40 };
    let u = HeatSolution::solve_with_closed_form_data(m, ClosedForm::Hyperbolic3Kernel, spec).unwrap();
    let g = u.grid().unwrap();
    let floor = g.parabolic_boundary_min();
    assert!(g.min() >= floor * (1.0 - 1e-8));
    assert!(u.positivity_floor() > 0.0);
}

#[test]
fn solver_field_gives_decaying_bound() {
    use heatgrad::liouville::{gradient_decay_sweep_a, Field};
    use heatgrad::solutions::solve_radial_heat;

    // bounded data whose oscillation dies out
    let exact = |x: f64, t: f64| 2.0 + 0.5 * x.sin() * (-t).exp() + 0.3 * (3.0 * x).cos() * (-9.0 * t).exp();
    let m = ModelManifold::euclidean(1).unwrap();
    let spec = GridSpec { r_lo: -20.0, r_hi: 20.0, cells: 400, t_lo: 0.0, t_hi: 70.0, steps: 700 };
    let g = solve_radial_heat(&m, |x| exact(x, 0.0), |t| exact(-20.0, t), |t| exact(20.0, t), spec).unwrap();
    let u = HeatSolution::from_grid(m, g).unwrap();
    let s = gradient_decay_sweep_a(Field::Solution(&u), 0.0, 70.0, &[2.0, 4.0, 8.0], 1.0).unwrap();
    assert!(s.decreasing, "{s:?}");
    assert!(s.rows.iter().all(|r| r.verdict == "consistent"));
    assert!((s.rows[2].bound - 0.25).abs() < 1e-3);
}
