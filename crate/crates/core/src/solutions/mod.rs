//! Positive solutions of the heat equation on model manifolds.
//!
//! A [`HeatSolution`] is either analytic (closed form, exact derivatives) or a
//! lattice produced by the Crank–Nicolson solver. All derivative information
//! is exposed through the logarithm `ln u`, which keeps huge solutions such as
//! `e^{a x + a² t}` with large `a` in floating-point range.

mod closed_form;
mod grid;
mod solver;

use std::sync::Arc;

pub use closed_form::ClosedForm;
pub use grid::{GridSolution, UJet};
pub use solver::{solve_radial_heat, solve_tridiagonal, GridSpec};

use crate::error::{Error, Result};
use crate::geometry::{ModelManifold, ParabolicCube, RadialJet};
use crate::lattice;
use crate::taylor::Jet;

/// Derivatives of `ln u` at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LogJet {
    pub ln_u: f64,
    pub fr: f64,
    pub frr: f64,
    pub frrr: f64,
    pub ft: f64,
    pub frt: f64,
}

impl LogJet {
    pub const ZERO: LogJet = LogJet { ln_u: 0.0, fr: 0.0, frr: 0.0, frrr: 0.0, ft: 0.0, frt: 0.0 };

    pub fn from_u(j: UJet) -> Result<Self> {
        if !(j.u > 0.0) {
            return Err(Error::Data(format!("non-positive value u = {}", j.u)));
        }
        Ok(closed_form::u_to_log(j.u, j.ur, j.urr, j.urrr, j.ut, j.urt))
    }
}

/// Where an analytic solution is used; the lattice region of a grid one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    pub r: (f64, f64),
    pub t: (f64, f64),
}

impl Domain {
    pub fn new(r_lo: f64, r_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        if !(r_hi >= r_lo) || !(t_hi >= t_lo) {
            return Err(Error::param(format!("empty domain [{r_lo}, {r_hi}] x [{t_lo}, {t_hi}]")));
        }
        Ok(Domain { r: (r_lo, r_hi), t: (t_lo, t_hi) })
    }

    fn contains(&self, r: f64, t: f64) -> bool {
        let er = 1e-12 * (1.0 + r.abs());
        let et = 1e-12 * (1.0 + t.abs());
        r >= self.r.0 - er && r <= self.r.1 + er && t >= self.t.0 - et && t <= self.t.1 + et
    }

    pub fn contains_cube(&self, m: &ModelManifold, q: &ParabolicCube) -> bool {
        let (rl, rh) = q.space_range(m);
        let (tl, th) = q.time_range();
        self.contains(rl, tl) && self.contains(rh, th)
    }
}

#[derive(Clone, Debug)]
pub enum Form {
    Analytic(ClosedForm),
    Grid(Arc<GridSolution>),
}

/// `ln M` for `M = sup u` over a cube, with the lattice point attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogSup {
    pub ln_m: f64,
    pub at: (f64, f64),
}

impl LogSup {
    pub fn m(&self) -> f64 {
        self.ln_m.exp()
    }
}

/// Safety factor applied to lattice maxima of analytic solutions.
pub const SUP_SAFETY: f64 = 1.001;

/// Default lattice density per axis for suprema and reports.
pub const DEFAULT_LATTICE: usize = 101;

#[derive(Clone, Debug)]
pub struct HeatSolution {
    manifold: ModelManifold,
    form: Form,
    domain: Domain,
    log_scale: f64,
    flags: Vec<String>,
}

impl HeatSolution {
    /// Wrap a closed form after checking it against the model and domain.
    pub fn closed_form(form: ClosedForm, manifold: ModelManifold, domain: Domain) -> Result<Self> {
        if let Some(msg) = form.model_mismatch(&manifold) {
            return Err(Error::Precondition(msg));
        }
        let mut flags = Vec::new();
        match form {
            ClosedForm::Constant { c } if !(c > 0.0) => {
                return Err(Error::param(format!("constant solution must be positive, got {c}")));
            }
            ClosedForm::GaussianKernel { .. } | ClosedForm::Hyperbolic3Kernel if !(domain.t.0 > 0.0) => {
                return Err(Error::domain(format!("heat kernels need t > 0, domain starts at {}", domain.t.0)));
            }
            ClosedForm::Linear if !(domain.r.0 > 0.0) => {
                return Err(Error::domain("u = x is positive only for x > 0"));
            }
            ClosedForm::TravelingWave { a } if a <= 0.0 => {
                flags.push(format!("traveling wave with a = {a} <= 0; sharpness sweeps assume a > 0"));
            }
            _ => {}
        }
        if manifold.n() >= 2 && domain.r.0 < crate::geometry::R_MIN {
            return Err(Error::domain("radial domains in n >= 2 must stay off the pole"));
        }
        let sol = HeatSolution { manifold, form: Form::Analytic(form), domain, log_scale: 0.0, flags };
        for (r, t) in lattice::grid2(domain.r, 41, domain.t, 41) {
            let v = sol.ln_u(r, t)?;
            if !v.is_finite() {
                return Err(Error::Positivity { r, t, value: form.value(r, t) });
            }
        }
        Ok(sol)
    }

    pub fn from_grid(manifold: ModelManifold, grid: GridSolution) -> Result<Self> {
        let (rl, rh) = grid.r_range();
        let (tl, th) = grid.t_range();
        if let Some(&v) = grid.values().iter().find(|v| !(**v > 0.0)) {
            return Err(Error::Data(format!("grid contains non-positive value {v}")));
        }
        Ok(HeatSolution {
            manifold,
            form: Form::Grid(Arc::new(grid)),
            domain: Domain::new(rl, rh, tl, th)?,
            log_scale: 0.0,
            flags: Vec::new(),
        })
    }

    /// Solve on a grid with data taken from a closed form.
    pub fn solve_with_closed_form_data(
        manifold: ModelManifold,
        data: ClosedForm,
        spec: GridSpec,
    ) -> Result<Self> {
        let t0 = spec.t_lo;
        let (rl, rh) = (spec.r_lo, spec.r_hi);
        let g = solve_radial_heat(
            &manifold,
            |r| data.value(r, t0),
            |t| data.value(rl, t),
            |t| data.value(rh, t),
            spec,
        )?;
        HeatSolution::from_grid(manifold, g)
    }

    pub fn manifold(&self) -> &ModelManifold {
        &self.manifold
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Warnings raised at construction.
    pub fn flags(&self) -> &[String] {
        &self.flags
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.form, Form::Analytic(_))
    }

    pub fn closed(&self) -> Option<ClosedForm> {
        match self.form {
            Form::Analytic(c) => Some(c),
            Form::Grid(_) => None,
        }
    }

    pub fn grid(&self) -> Option<&GridSolution> {
        match &self.form {
            Form::Grid(g) => Some(g),
            Form::Analytic(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.form {
            Form::Analytic(c) => format!("{c:?}"),
            Form::Grid(g) => format!("grid {:?} h={} tau={}", g.shape(), g.h(), g.tau()),
        }
    }

    /// `λ u`; the scale only shifts `ln u`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::param(format!("scale must be positive, got {lambda}")));
        }
        let mut s = self.clone();
        s.log_scale += lambda.ln();
        Ok(s)
    }

    fn check_point(&self, r: f64, t: f64) -> Result<()> {
        if !self.domain.contains(r, t) {
            return Err(Error::domain(format!(
                "({r}, {t}) outside the solution domain {:?} x {:?}",
                self.domain.r, self.domain.t
            )));
        }
        Ok(())
    }

    pub fn log_jet(&self, r: f64, t: f64) -> Result<LogJet> {
        self.check_point(r, t)?;
        let mut j = match &self.form {
            Form::Analytic(c) => c.log_jet(r, t),
            Form::Grid(g) => LogJet::from_u(g.jet(r, t)?)?,
        };
        j.ln_u += self.log_scale;
        Ok(j)
    }

    /// `ln u` through the Taylor-jet route (analytic forms only).
    pub fn taylor_log_jet(&self, r: f64, t: f64) -> Result<Option<Jet>> {
        self.check_point(r, t)?;
        Ok(match &self.form {
            Form::Analytic(c) => {
                let (rj, tj) = Jet::seed(r, t);
                Some(c.log_u(rj, tj) + self.log_scale)
            }
            Form::Grid(_) => None,
        })
    }

    pub fn ln_u(&self, r: f64, t: f64) -> Result<f64> {
        self.check_point(r, t)?;
        Ok(match &self.form {
            Form::Analytic(c) => c.log_u(r, t),
            Form::Grid(g) => g.jet(r, t)?.u.ln(),
        } + self.log_scale)
    }

    pub fn value(&self, r: f64, t: f64) -> Result<f64> {
        Ok(self.ln_u(r, t)?.exp())
    }

    /// `(Δu - ∂_t u) / u`.
    pub fn relative_heat_residual(&self, r: f64, t: f64) -> Result<f64> {
        if let Form::Grid(g) = &self.form {
            if !g.is_interior(r, t) {
                return Err(Error::domain(format!("({r}, {t}) within one stencil of the grid boundary")));
            }
        }
        let j = self.log_jet(r, t)?;
        let lap_f = self.manifold.radial_laplacian(RadialJet { u: 0.0, ur: j.fr, urr: j.frr }, r)?;
        Ok(lap_f + j.fr * j.fr - j.ft)
    }

    /// `Δu - ∂_t u`.
    pub fn heat_residual(&self, r: f64, t: f64) -> Result<f64> {
        let rel = self.relative_heat_residual(r, t)?;
        Ok(rel * self.value(r, t)?)
    }

    /// Smallest value of `u` on the domain (lattice for analytic forms).
    pub fn positivity_floor(&self) -> f64 {
        match &self.form {
            Form::Grid(g) => g.min() * self.log_scale.exp(),
            Form::Analytic(_) => lattice::grid2(self.domain.r, 201, self.domain.t, 201)
                .into_iter()
                .filter_map(|(r, t)| self.ln_u(r, t).ok())
                .fold(f64::INFINITY, f64::min)
                .exp(),
        }
    }

    /// Lattice maximum of `ln u` over the cube, inflated by `ln(safety)`.
    pub fn log_sup_with(&self, cube: &ParabolicCube, density: usize, safety: f64) -> Result<LogSup> {
        if !(safety >= 1.0) {
            return Err(Error::param(format!("sup safety factor must be >= 1, got {safety}")));
        }
        if !self.domain.contains_cube(&self.manifold, cube) {
            return Err(Error::domain(format!("cube {cube:?} not inside the solution domain")));
        }
        let (rl, rh) = cube.space_range(&self.manifold);
        let (tl, th) = cube.time_range();
        let mut best = LogSup { ln_m: f64::NEG_INFINITY, at: (rl, th) };
        let consider = |best: &mut LogSup, r: f64, t: f64| -> Result<()> {
            let v = self.ln_u(r, t)?;
            if v > best.ln_m {
                *best = LogSup { ln_m: v, at: (r, t) };
            }
            Ok(())
        };
        match &self.form {
            Form::Grid(g) => {
                let (nr, nt) = g.shape();
                for j in 0..nt {
                    for i in 0..nr {
                        let (r, t) = (g.r(i), g.t(j));
                        if cube.contains(&self.manifold, r, t) {
                            consider(&mut best, r, t)?;
                        }
                    }
                }
                if best.ln_m == f64::NEG_INFINITY {
                    for (r, t) in lattice::grid2((rl, rh), density, (tl, th), density) {
                        consider(&mut best, r, t)?;
                    }
                }
            }
            Form::Analytic(_) => {
                for (r, t) in lattice::grid2((rl, rh), density, (tl, th), density) {
                    consider(&mut best, r, t)?;
                }
            }
        }
        best.ln_m += safety.ln();
        Ok(best)
    }

    /// `ln M` with the default lattice; analytic forms get the 1.001 safety factor.
    pub fn log_sup(&self, cube: &ParabolicCube) -> Result<LogSup> {
        let safety = if self.is_analytic() { SUP_SAFETY } else { 1.0 };
        self.log_sup_with(cube, DEFAULT_LATTICE, safety)
    }

    /// `sup_{B(x,√t) × [t/2, t]} u / u(x, 2t)`.
    pub fn harnack_sup_factor(&self, x: f64, t: f64) -> Result<f64> {
        let cube = ParabolicCube::new(x, t.sqrt(), t, 0.5 * t)?;
        let sup = self.log_sup_with(&cube, DEFAULT_LATTICE, 1.0)?;
        Ok((sup.ln_m - self.ln_u(x, 2.0 * t)?).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> ModelManifold {
        ModelManifold::euclidean(1).unwrap()
    }

    #[test]
    fn constructor_preconditions() {
        let d = Domain::new(1.0, 3.0, 1.0, 2.0).unwrap();
        let h3 = ModelManifold::hyperbolic(3, -1.0).unwrap();
        assert!(HeatSolution::closed_form(ClosedForm::TravelingWave { a: 1.0 }, h3.clone(), d).is_err());
        let bad_t = Domain::new(1.0, 3.0, 0.0, 2.0).unwrap();
        assert!(HeatSolution::closed_form(ClosedForm::Hyperbolic3Kernel, h3, bad_t).is_err());
        let neg = Domain::new(-1.0, 3.0, 0.0, 2.0).unwrap();
        assert!(HeatSolution::closed_form(ClosedForm::Linear, line(), neg).is_err());
        let s = HeatSolution::closed_form(ClosedForm::TravelingWave { a: -1.0 }, line(), d).unwrap();
        assert_eq!(s.flags().len(), 1);
        let sm = ClosedForm::SineMode { offset: 0.5, amp: 1.0, freq: 1.0 };
        assert!(matches!(
            HeatSolution::closed_form(sm, line(), Domain::new(0.0, 6.0, 0.0, 1.0).unwrap()),
            Err(Error::Positivity { .. })
        ));
    }

    #[test]
    fn constant_solution() {
        let d = Domain::new(-5.0, 5.0, -1.0, 1.0).unwrap();
        let s = HeatSolution::closed_form(ClosedForm::Constant { c: 5.0 }, line(), d).unwrap();
        let j = s.log_jet(0.3, 0.2).unwrap();
        assert!((j.ln_u.exp() - 5.0).abs() < 1e-14);
        assert_eq!((j.fr, j.frr, j.ft), (0.0, 0.0, 0.0));
        assert_eq!(s.heat_residual(0.3, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn exact_residuals() {
        let e2 = ModelManifold::euclidean(2).unwrap();
        let d = Domain::new(0.1, 2.0, 0.5, 1.0).unwrap();
        let g = HeatSolution::closed_form(ClosedForm::GaussianKernel { n: 2 }, e2, d).unwrap();
        assert!(g.relative_heat_residual(1.0, 0.7).unwrap().abs() < 1e-10);
        let tw = HeatSolution::closed_form(
            ClosedForm::TravelingWave { a: 2.0 },
            line(),
            Domain::new(-3.0, 3.0, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(tw.relative_heat_residual(1.3, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn sup_hits_corner_and_scales() {
        let d = Domain::new(0.0, 4.0, 0.0, 3.0).unwrap();
        let s = HeatSolution::closed_form(ClosedForm::TravelingWave { a: 8.0 }, line(), d).unwrap();
        let q = ParabolicCube::from_intervals(1.0, 3.0, 1.0, 2.0).unwrap();
        let sup = s.log_sup_with(&q, 101, 1.0).unwrap();
        assert_eq!(sup.ln_m, 3.0 * 8.0 + 2.0 * 64.0);
        assert_eq!(sup.at, (3.0, 2.0));
        let s7 = s.scaled(7.0).unwrap();
        let sup7 = s7.log_sup_with(&q, 101, 1.0).unwrap();
        assert!((sup7.ln_m - sup.ln_m - 7f64.ln()).abs() < 1e-12);
        assert!(s.log_sup(&q).unwrap().ln_m > sup.ln_m);
    }

    #[test]
    fn gaussian_harnack_factor_is_finite() {
        let d = Domain::new(-10.0, 10.0, 0.05, 10.0).unwrap();
        let s = HeatSolution::closed_form(ClosedForm::GaussianKernel { n: 1 }, line(), d).unwrap();
        for x in [0.0, 0.5, 1.0, 2.0] {
            for t in [0.1, 0.5, 1.0, 2.0] {
                let f = s.harnack_sup_factor(x, t).unwrap();
                assert!(f.is_finite() && f > 0.0, "x={x} t={t} factor={f}");
            }
        }
    }
}
