//! Pointwise checks of the differential identities behind the elliptic-type
//! gradient estimate.
//!
//! With `f = ln(u/M) <= 0` and `w = |∇f|²/(1-f)²`, the estimate is proved by
//! computing `Δw - w_t`, bounding the curvature term by Bochner's formula and
//! applying a maximum principle to `ψ w` for a cutoff `ψ`. Every step is
//! evaluated here for radial solutions on model manifolds. Analytic solutions
//! are checked against an independent Taylor-jet route; grid solutions get the
//! same checks through finite differences, reported but not asserted.

pub mod cutoff;

pub use cutoff::{build_cutoff, verify_cutoff_terms, CutoffConstants, CutoffJet, CutoffProfile, CutoffTerm, CutoffTermTable};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ModelKind, ModelManifold, ParabolicCube};
use crate::lattice;
use crate::solutions::{Form, HeatSolution, LogJet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Exact,
    FiniteDifference,
}

/// `f = ln(u/M)`, `w = f_r²/(1-f)²` and their derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogQuantities {
    pub r: f64,
    pub t: f64,
    pub f: f64,
    pub fr: f64,
    pub frr: f64,
    pub frrr: f64,
    pub ft: f64,
    pub frt: f64,
    pub w: f64,
    pub wr: f64,
    pub wrr: f64,
    pub wt: f64,
    /// `(n-1) φ'/φ` and its radial derivative.
    pub drift: f64,
    pub drift_r: f64,
    /// `(n-1)(φ'/φ)²`, the tangential part of `|∇²f|²/f_r²`.
    pub tangential: f64,
    pub ricci_rr: f64,
    pub source: DerivativeSource,
}

impl LogQuantities {
    fn from_jet(m: &ModelManifold, j: LogJet, ln_m: f64, r: f64, t: f64, source: DerivativeSource) -> Result<Self> {
        let (drift, drift_r) = m.drift(r)?;
        let shape = m.shape_ratio(r)?;
        let tangential = (m.n() - 1) as f64 * shape * shape;
        let f = j.ln_u - ln_m;
        let (fr, frr, frrr, ft, frt) = (j.fr, j.frr, j.frrr, j.ft, j.frt);
        let d = 1.0 - f;
        let (d2, d3, d4) = (d * d, d * d * d, d * d * d * d);
        Ok(LogQuantities {
            r,
            t,
            f,
            fr,
            frr,
            frrr,
            ft,
            frt,
            w: fr * fr / d2,
            wr: 2.0 * fr * frr / d2 + 2.0 * fr.powi(3) / d3,
            wrr: 2.0 * frr * frr / d2 + 2.0 * fr * frrr / d2 + 10.0 * fr * fr * frr / d3 + 6.0 * fr.powi(4) / d4,
            wt: 2.0 * fr * frt / d2 + 2.0 * fr * fr * ft / d3,
            drift,
            drift_r,
            tangential,
            ricci_rr: m.ricci_rr(r)?,
            source,
        })
    }

    /// `1 - f`.
    pub fn denom(&self) -> f64 {
        1.0 - self.f
    }

    pub fn lap_f(&self) -> f64 {
        self.frr + self.drift * self.fr
    }

    pub fn lap_w(&self) -> f64 {
        self.wrr + self.drift * self.wr
    }

    /// `|∇²f|²`.
    pub fn hessian_sq(&self) -> f64 {
        self.frr * self.frr + self.tangential * self.fr * self.fr
    }

    /// Radial component of the drift `b = -2f∇f/(1-f)`.
    pub fn b(&self) -> f64 {
        -2.0 * self.f * self.fr / self.denom()
    }

    /// `∇f·∇w` computed from the gradient formula.
    pub fn grad_f_dot_grad_w(&self) -> f64 {
        self.fr * self.wr
    }
}

fn source_of(u: &HeatSolution) -> DerivativeSource {
    if u.is_analytic() {
        DerivativeSource::Exact
    } else {
        DerivativeSource::FiniteDifference
    }
}

fn raw_quantities(u: &HeatSolution, ln_m: f64, r: f64, t: f64) -> Result<LogQuantities> {
    let j = u.log_jet(r, t)?;
    LogQuantities::from_jet(u.manifold(), j, ln_m, r, t, source_of(u))
}

fn above_sup(f: f64, ln_m: f64) -> bool {
    f > 1e-12 * (1.0 + ln_m.abs())
}

/// All derivative quantities at a point; `u > M` there is a data error.
pub fn log_quantities(u: &HeatSolution, ln_m: f64, r: f64, t: f64) -> Result<LogQuantities> {
    let q = raw_quantities(u, ln_m, r, t)?;
    if above_sup(q.f, ln_m) {
        return Err(Error::Data(format!("u({r}, {t}) exceeds M: ln(u/M) = {}", q.f)));
    }
    Ok(LogQuantities { f: q.f.min(0.0), ..q })
}

/// Summary of one check over a point set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub check: &'static str,
    pub points: usize,
    /// Largest residual for identities, smallest value for inequalities.
    pub worst: f64,
    pub worst_r: f64,
    pub worst_t: f64,
    pub tolerance: f64,
    pub source: DerivativeSource,
    /// `None` when the derivatives come from finite differences.
    pub passed: Option<bool>,
}

enum Sense {
    /// Values must stay at or below the tolerance.
    AtMost,
    /// Values must stay at or above minus the tolerance.
    AtLeast,
}

fn summarize(
    check: &'static str,
    u: &HeatSolution,
    points: &[(f64, f64)],
    sense: Sense,
    tolerance: f64,
    mut value: impl FnMut(f64, f64) -> Result<f64>,
) -> Result<CheckSummary> {
    if points.is_empty() {
        return Err(Error::param(format!("{check}: no sample points")));
    }
    let mut worst = match sense {
        Sense::AtMost => f64::NEG_INFINITY,
        Sense::AtLeast => f64::INFINITY,
    };
    let mut at = points[0];
    for &(r, t) in points {
        let v = value(r, t)?;
        let worse = match sense {
            Sense::AtMost => v > worst || v.is_nan(),
            Sense::AtLeast => v < worst || v.is_nan(),
        };
        if worse {
            worst = v;
            at = (r, t);
        }
    }
    let source = source_of(u);
    let ok = match sense {
        Sense::AtMost => worst <= tolerance,
        Sense::AtLeast => worst >= -tolerance,
    };
    Ok(CheckSummary {
        check,
        points: points.len(),
        worst,
        worst_r: at.0,
        worst_t: at.1,
        tolerance,
        source,
        passed: (source == DerivativeSource::Exact).then_some(ok),
    })
}

fn relative(residual: f64, scale: f64) -> f64 {
    residual.abs() / scale.abs().max(1.0)
}

/// Grid solutions need a full stencil around each point.
fn require_interior(u: &HeatSolution, r: f64, t: f64) -> Result<()> {
    if let Form::Grid(g) = u.form() {
        if !g.is_interior(r, t) {
            return Err(Error::domain(format!("({r}, {t}) within one stencil of the grid boundary")));
        }
    }
    Ok(())
}

pub const F_EQUATION_TOL: f64 = 1e-10;
pub const IDENTITY_TOL: f64 = 1e-8;
pub const GRADIENT_TOL: f64 = 1e-9;
pub const INEQUALITY_TOL: f64 = 1e-8;
pub const SQUARE_TOL: f64 = 1e-10;

/// `max |Δf + |∇f|² - f_t|`.
pub fn check_f_equation(u: &HeatSolution, ln_m: f64, points: &[(f64, f64)]) -> Result<CheckSummary> {
    summarize("f_equation", u, points, Sense::AtMost, F_EQUATION_TOL, |r, t| {
        require_interior(u, r, t)?;
        let q = raw_quantities(u, ln_m, r, t)?;
        Ok((q.lap_f() + q.fr * q.fr - q.ft).abs())
    })
}

/// `w` and its derivatives evaluated independently of the hand formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectW {
    pub w: f64,
    pub wr: f64,
    pub wrr: f64,
    pub wt: f64,
}

/// Analytic forms: Taylor jets of `ln u`. Grid forms: centred differences of
/// `w` over neighbouring nodes.
pub fn direct_w(u: &HeatSolution, ln_m: f64, r: f64, t: f64) -> Result<DirectW> {
    if let Some(jet) = u.taylor_log_jet(r, t)? {
        let f = jet - ln_m;
        let fr = f.d_r();
        let one_minus = -f + 1.0;
        let w = fr * fr / (one_minus * one_minus);
        return Ok(DirectW { w: w.value(), wr: w.d1(), wrr: w.d2(), wt: w.dt() });
    }
    let g = u.grid().expect("non-analytic forms are grids");
    let (h, tau) = (g.h(), g.tau());
    let w_at = |rr: f64, tt: f64| -> Result<f64> { Ok(raw_quantities(u, ln_m, rr, tt)?.w) };
    let (wm, w0, wp) = (w_at(r - h, t)?, w_at(r, t)?, w_at(r + h, t)?);
    let (wb, wf) = (w_at(r, t - tau)?, w_at(r, t + tau)?);
    Ok(DirectW {
        w: w0,
        wr: (wp - wm) / (2.0 * h),
        wrr: (wp - 2.0 * w0 + wm) / (h * h),
        wt: (wf - wb) / (2.0 * tau),
    })
}

/// `∇w` against `2 f_i f_ij/(1-f)² + 2 f_i² f_j/(1-f)³`, relative residual.
pub fn check_grad_w(u: &HeatSolution, ln_m: f64, points: &[(f64, f64)]) -> Result<CheckSummary> {
    summarize("grad_w", u, points, Sense::AtMost, GRADIENT_TOL, |r, t| {
        require_interior(u, r, t)?;
        let q = raw_quantities(u, ln_m, r, t)?;
        let d = direct_w(u, ln_m, r, t)?;
        Ok(relative(d.wr - q.wr, d.wr))
    })
}

/// Expanded right side of the `Δw - w_t` identity, with the Bochner term
/// written through the model's radial Ricci curvature.
pub fn expanded_heat_operator_on_w(q: &LogQuantities) -> f64 {
    let d = q.denom();
    let (d2, d3, d4) = (d * d, d * d * d, d * d * d * d);
    let g2 = q.fr * q.fr;
    let g4 = g2 * g2;
    let fifj_fij = g2 * q.frr;
    let lap = q.lap_f();
    2.0 * q.hessian_sq() / d2 + 2.0 * q.ricci_rr * g2 / d2 + 6.0 * g4 / d4 + 8.0 * fifj_fij / d3 + 2.0 * g2 * lap / d3
        - 4.0 * fifj_fij / d2
        - 2.0 * g2 * lap / d3
        - 2.0 * g4 / d3
}

/// `Δw - w_t` computed directly against its expansion, relative residual.
pub fn check_w_identity(u: &HeatSolution, ln_m: f64, points: &[(f64, f64)]) -> Result<CheckSummary> {
    summarize("w_identity", u, points, Sense::AtMost, IDENTITY_TOL, |r, t| {
        require_interior(u, r, t)?;
        let q = raw_quantities(u, ln_m, r, t)?;
        let d = direct_w(u, ln_m, r, t)?;
        let direct = d.wrr + q.drift * d.wr - d.wt;
        Ok(relative(direct - expanded_heat_operator_on_w(&q), direct))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BochnerTerm {
    /// `f_i f_ijj - f_j f_iij`.
    pub lhs: f64,
    /// `Ric(∇f, ∇f)`.
    pub rhs: f64,
    /// `rhs + k |∇f|²`, nonnegative when `Ric >= -k`.
    pub gap: f64,
}

/// Bochner term for a radial function with radial derivatives `fr, frr, frrr`.
pub fn bochner_from_jet(m: &ModelManifold, fr: f64, frr: f64, frrr: f64, r: f64) -> Result<BochnerTerm> {
    if matches!(m.kind(), ModelKind::Warped(_)) {
        return Err(Error::Unsupported(
            "Bochner term is only checked on constant-curvature models".into(),
        ));
    }
    let (q, dq) = m.drift(r)?;
    let shape = m.shape_ratio(r)?;
    let tangential = (m.n() - 1) as f64 * shape * shape;
    // f_i f_ijj = ½Δ|∇f|² - |∇²f|², f_j f_iij = ∇f·∇Δf
    let fi_fijj = fr * frrr + q * fr * frr - tangential * fr * fr;
    let fj_fiij = fr * (frrr + dq * fr + q * frr);
    let rhs = m.ricci_rr(r)? * fr * fr;
    Ok(BochnerTerm { lhs: fi_fijj - fj_fiij, rhs, gap: rhs + m.k() * fr * fr })
}

pub fn bochner_term(u: &HeatSolution, ln_m: f64, r: f64, t: f64) -> Result<BochnerTerm> {
    let q = log_quantities(u, ln_m, r, t)?;
    bochner_from_jet(u.manifold(), q.fr, q.frr, q.frrr, r)
}

/// Right side of the key inequality for `Δw - w_t`.
pub fn key_inequality_rhs(q: &LogQuantities, k: f64) -> f64 {
    2.0 * q.f / q.denom() * q.grad_f_dot_grad_w() + 2.0 * q.denom() * q.w * q.w - 2.0 * k * q.w
}

/// `min [(Δw - w_t) - rhs]`, scaled by `max(1, |Δw - w_t|)`.
pub fn check_key_inequality(u: &HeatSolution, ln_m: f64, k: f64, points: &[(f64, f64)]) -> Result<CheckSummary> {
    if k < u.manifold().k() - 1e-12 {
        return Err(Error::Precondition(format!("k = {k} is below the model's Ricci bound {}", u.manifold().k())));
    }
    for &(r, t) in points {
        let f = u.ln_u(r, t)? - ln_m;
        if above_sup(f, ln_m) {
            return Err(Error::Precondition(format!("f = ln(u/M) = {f} > 0 at ({r}, {t}); M is too small")));
        }
    }
    summarize("key_inequality", u, points, Sense::AtLeast, INEQUALITY_TOL, |r, t| {
        require_interior(u, r, t)?;
        let q = log_quantities(u, ln_m, r, t)?;
        let lhs = q.lap_w() - q.wt;
        Ok((lhs - key_inequality_rhs(&q, k)) / lhs.abs().max(1.0))
    })
}

/// `2|∇²f|²/(1-f)² + 2|∇f|⁴/(1-f)⁴ + 4 f_i f_ij f_j/(1-f)³`.
pub fn completed_square(q: &LogQuantities) -> f64 {
    let d = q.denom();
    let g2 = q.fr * q.fr;
    2.0 * q.hessian_sq() / (d * d) + 2.0 * g2 * g2 / d.powi(4) + 4.0 * g2 * q.frr / d.powi(3)
}

pub fn check_completing_square(u: &HeatSolution, ln_m: f64, points: &[(f64, f64)]) -> Result<CheckSummary> {
    summarize("completing_square", u, points, Sense::AtLeast, SQUARE_TOL, |r, t| {
        Ok(completed_square(&log_quantities(u, ln_m, r, t)?))
    })
}

/// Inner regions used for the final gradient bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConclusionCheck {
    pub constant: f64,
    /// `sup √w / (1/R + 1/√T + √k)` over `Q_{R/2,T/4}`, where the cutoff is 1.
    pub ratio_quarter: f64,
    /// Same over `Q_{R/2,T/2}`, the region where the estimate is stated.
    pub ratio_half: f64,
    pub holds_quarter: bool,
    pub holds_half: bool,
}

/// `|∇f|/(1-f) <= c (1/R + 1/√T + √k)` on both inner regions.
pub fn conclusion_check(
    u: &HeatSolution,
    cube: &ParabolicCube,
    ln_m: f64,
    k: f64,
    constant: f64,
    density: usize,
) -> Result<ConclusionCheck> {
    let scale = 1.0 / cube.radius + 1.0 / cube.depth.sqrt() + k.sqrt();
    let sup_ratio = |inner: ParabolicCube| -> Result<f64> {
        let pts = lattice::grid2(inner.space_range(u.manifold()), density, inner.time_range(), density);
        let mut best = 0.0f64;
        for (r, t) in pts {
            best = best.max(log_quantities(u, ln_m, r, t)?.w.sqrt() / scale);
        }
        Ok(best)
    };
    let ratio_quarter = sup_ratio(cube.shrink(0.5, 0.25))?;
    let ratio_half = sup_ratio(cube.half())?;
    let slack = |x: f64| x <= constant * (1.0 + 1e-9);
    Ok(ConclusionCheck {
        constant,
        ratio_quarter,
        ratio_half,
        holds_quarter: slack(ratio_quarter),
        holds_half: slack(ratio_half),
    })
}

/// `w` from centred differences of `ln u` with step `h` (the second route of
/// the two-way comparison).
pub fn w_by_differences(u: &HeatSolution, ln_m: f64, r: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::param("step must be positive"));
    }
    let f0 = u.ln_u(r, t)? - ln_m;
    let fr = (u.ln_u(r + h, t)? - u.ln_u(r - h, t)?) / (2.0 * h);
    Ok(fr * fr / ((1.0 - f0) * (1.0 - f0)))
}

/// Every identity and inequality on one point set.
pub fn identity_chain(u: &HeatSolution, ln_m: f64, k: f64, points: &[(f64, f64)]) -> Result<Vec<CheckSummary>> {
    Ok(vec![
        check_f_equation(u, ln_m, points)?,
        check_grad_w(u, ln_m, points)?,
        check_w_identity(u, ln_m, points)?,
        check_key_inequality(u, ln_m, k, points)?,
        check_completing_square(u, ln_m, points)?,
    ])
}
