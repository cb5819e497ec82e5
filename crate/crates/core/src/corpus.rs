//! Fixed set of solutions and cubes shared by the acceptance runner, the CLI
//! and the integration tests.

use crate::error::Result;
use crate::geometry::{ModelManifold, ParabolicCube, R_MIN};
use crate::solutions::{ClosedForm, Domain, GridSpec, HeatSolution};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub u: HeatSolution,
    pub cube: ParabolicCube,
    /// Ricci lower bound used for the estimates.
    pub k: f64,
}

impl Fixture {
    fn new(name: impl Into<String>, u: HeatSolution, cube: ParabolicCube) -> Self {
        let k = u.manifold().k();
        Fixture { name: name.into(), u, cube, k }
    }
}

fn on_unit_strip(name: &str, form: ClosedForm) -> Result<Fixture> {
    let line = ModelManifold::euclidean(1)?;
    let u = HeatSolution::closed_form(form, line, Domain::new(1.0, 3.0, 1.0, 2.0)?)?;
    Ok(Fixture::new(name, u, ParabolicCube::from_intervals(1.0, 3.0, 1.0, 2.0)?))
}

pub fn constant() -> Result<Fixture> {
    on_unit_strip("constant", ClosedForm::Constant { c: 3.0 })
}

pub fn traveling_wave(a: f64) -> Result<Fixture> {
    on_unit_strip(&format!("traveling_wave_a{a}"), ClosedForm::TravelingWave { a })
}

/// Euclidean kernel on `B(0, 1) × [0.5, 1]`.
pub fn gaussian(n: usize) -> Result<Fixture> {
    let m = ModelManifold::euclidean(n)?;
    let lo = if n == 1 { -1.0 } else { R_MIN };
    let u = HeatSolution::closed_form(ClosedForm::GaussianKernel { n }, m, Domain::new(lo, 1.0, 0.5, 1.0)?)?;
    Ok(Fixture::new(format!("gaussian_kernel_n{n}"), u, ParabolicCube::new(0.0, 1.0, 1.0, 0.5)?))
}

/// `u = x` on `B(2, 1) × [0.5, 1]`.
pub fn linear() -> Result<Fixture> {
    let line = ModelManifold::euclidean(1)?;
    let u = HeatSolution::closed_form(ClosedForm::Linear, line, Domain::new(1.0, 3.0, 0.5, 1.0)?)?;
    Ok(Fixture::new("linear", u, ParabolicCube::new(2.0, 1.0, 1.0, 0.5)?))
}

/// Hyperbolic 3-space kernel on the annulus `1 <= r <= 3`, `t ∈ [0.5, 1]`.
pub fn hyperbolic_kernel() -> Result<Fixture> {
    let m = ModelManifold::hyperbolic(3, -1.0)?;
    let u = HeatSolution::closed_form(ClosedForm::Hyperbolic3Kernel, m, Domain::new(1.0, 3.0, 0.5, 1.0)?)?;
    Ok(Fixture::new("hyperbolic3_kernel", u, ParabolicCube::new(2.0, 1.0, 1.0, 0.5)?))
}

/// Crank–Nicolson solve of the `a = 1` wave on `[1, 3] × [1, 2]`.
pub fn grid_wave() -> Result<Fixture> {
    let line = ModelManifold::euclidean(1)?;
    let spec = GridSpec { r_lo: 1.0, r_hi: 3.0, cells: 80, t_lo: 1.0, t_hi: 2.0, steps: 80 };
    let u = HeatSolution::solve_with_closed_form_data(line, ClosedForm::TravelingWave { a: 1.0 }, spec)?;
    Ok(Fixture::new("grid_traveling_wave_a1", u, ParabolicCube::from_intervals(1.0, 3.0, 1.0, 2.0)?))
}

/// Fixtures on which the identity chain is checked.
pub fn proof_corpus() -> Result<Vec<Fixture>> {
    Ok(vec![constant()?, traveling_wave(1.0)?, traveling_wave(2.0)?, gaussian(1)?, gaussian(2)?, gaussian(3)?])
}

/// Every closed-form fixture.
pub fn analytic_corpus() -> Result<Vec<Fixture>> {
    let mut v = proof_corpus()?;
    v.push(linear()?);
    v.push(hyperbolic_kernel()?);
    Ok(v)
}

/// Closed forms plus the grid solve.
pub fn full_corpus() -> Result<Vec<Fixture>> {
    let mut v = analytic_corpus()?;
    v.push(grid_wave()?);
    Ok(v)
}
