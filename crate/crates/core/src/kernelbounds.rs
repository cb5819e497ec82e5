//! Two-sided Gaussian bounds and the gradient bound for heat kernels with a
//! closed form, plus a numeric replay of how the gradient bound follows from
//! the elliptic-type estimate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimates::{self, EstimateId, ReportOptions};
use crate::geometry::{ModelKind, ModelManifold, ParabolicCube, R_MIN};
use crate::lattice;
use crate::solutions::{ClosedForm, Domain, HeatSolution};

/// Default upper end of the `ξ = d²/t` grid; Gaussian factors underflow past it.
pub const XI_MAX: f64 = 100.0;
/// Default number of `ξ` samples (step 0.01 on `[0, 100]`).
pub const XI_POINTS: usize = 10_001;

/// Closed-form kernel of the model, centred at the pole.
pub fn kernel_of(m: &ModelManifold) -> Result<ClosedForm> {
    match m.kind() {
        ModelKind::Euclidean => Ok(ClosedForm::GaussianKernel { n: m.n() }),
        ModelKind::Hyperbolic { kappa } if m.n() == 3 && *kappa == -1.0 => Ok(ClosedForm::Hyperbolic3Kernel),
        _ => Err(Error::Precondition(format!("no closed-form heat kernel for {:?} in dimension {}", m.kind(), m.n()))),
    }
}

fn is_self_similar(m: &ModelManifold) -> bool {
    matches!(m.kind(), ModelKind::Euclidean)
}

/// `ξ` grid `[0, ξ_max]` with the default spacing.
pub fn default_xi_grid() -> Vec<f64> {
    lattice::linspace(0.0, XI_MAX, XI_POINTS)
}

/// Times swept for a model: one time for self-similar kernels, a
/// geometric ladder on `[0.1, 10]` otherwise.
pub fn default_times(m: &ModelManifold) -> Vec<f64> {
    if is_self_similar(m) {
        vec![1.0]
    } else {
        lattice::linspace(0.1f64.ln(), 10f64.ln(), 21).into_iter().map(f64::exp).collect()
    }
}

fn check_grid(xi: &[f64], times: &[f64]) -> Result<()> {
    if xi.is_empty() || times.is_empty() {
        return Err(Error::param("empty ξ or t grid"));
    }
    if xi.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::param("ξ values must be finite and nonnegative"));
    }
    if times.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(Error::param("times must be positive"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelBoundReport {
    pub model: String,
    pub delta: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    /// `sup G |B(√t)| e^{ξ/(4+δ)}`.
    pub c1: f64,
    pub c1_xi: f64,
    pub c1_t: f64,
    /// `inf G |B(√t)| e^{ξ/(4-δ)}`.
    pub c2: f64,
    pub c2_xi: f64,
    pub c2_t: f64,
    /// `sup |∇G|/G · √t / (1 + ξ)`.
    pub gradient_sup: f64,
}

pub fn li_yau_constants(m: &ModelManifold, delta: f64, xi: &[f64], times: &[f64]) -> Result<KernelBoundReport> {
    if !(delta > 0.0 && delta < 4.0) {
        return Err(Error::Precondition(format!("δ must lie in (0, 4), got {delta}")));
    }
    check_grid(xi, times)?;
    let g = kernel_of(m)?;
    let (mut c1, mut c1_at) = (f64::NEG_INFINITY, (0.0, 0.0));
    let (mut c2, mut c2_at) = (f64::INFINITY, (0.0, 0.0));
    for &t in times {
        let vol_ln = m.ball_volume(t.sqrt())?.ln();
        for &x in xi {
            let base = g.log_jet((x * t).sqrt(), t).ln_u + vol_ln;
            let up = (base + x / (4.0 + delta)).exp();
            let lo = (base + x / (4.0 - delta)).exp();
            if !(up > 0.0) || !(lo > 0.0) {
                return Err(Error::Data(format!("kernel underflow at ξ = {x}, t = {t}")));
            }
            if up > c1 {
                c1 = up;
                c1_at = (x, t);
            }
            if lo < c2 {
                c2 = lo;
                c2_at = (x, t);
            }
        }
    }
    let gradient_sup = kernel_gradient_check(m, xi, times)?.sup;
    Ok(KernelBoundReport {
        model: format!("{:?} n={}", m.kind(), m.n()),
        delta,
        xi_min: xi.iter().copied().fold(f64::INFINITY, f64::min),
        xi_max: xi.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        xi_points: xi.len(),
        t_min: times.iter().copied().fold(f64::INFINITY, f64::min),
        t_max: times.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        t_points: times.len(),
        c1,
        c1_xi: c1_at.0,
        c1_t: c1_at.1,
        c2,
        c2_xi: c2_at.0,
        c2_t: c2_at.1,
        gradient_sup,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GradientRow {
    pub xi: f64,
    pub t: f64,
    /// `|∇_x G| / G`.
    pub lhs: f64,
    /// `(1 + ξ)/√t`.
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradientSweep {
    pub sup: f64,
    pub at_xi: f64,
    pub at_t: f64,
    pub rows: Vec<GradientRow>,
}

pub fn kernel_gradient_check(m: &ModelManifold, xi: &[f64], times: &[f64]) -> Result<GradientSweep> {
    check_grid(xi, times)?;
    let g = kernel_of(m)?;
    let mut rows = Vec::with_capacity(xi.len() * times.len());
    let mut best = GradientRow { xi: 0.0, t: times[0], lhs: 0.0, rhs: 1.0, ratio: f64::NEG_INFINITY };
    for &t in times {
        for &x in xi {
            let d = (x * t).sqrt();
            let lhs = g.log_jet(d.max(if m.n() >= 2 { R_MIN } else { 0.0 }), t).fr.abs();
            let lhs = if d == 0.0 { 0.0 } else { lhs };
            let rhs = (1.0 + x) / t.sqrt();
            let row = GradientRow { xi: x, t, lhs, rhs, ratio: lhs / rhs };
            if row.ratio > best.ratio {
                best = row;
            }
            rows.push(row);
        }
    }
    Ok(GradientSweep { sup: best.ratio, at_xi: best.xi, at_t: best.t, rows })
}

/// `|∇_x G|/G = d/(2t)` for the Euclidean kernel, cross-checked against the
/// derivative of the closed form.
pub fn euclidean_exact_ratio(n: usize, d: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param(format!("t must be positive, got {t}")));
    }
    if !(d >= 0.0) {
        return Err(Error::param(format!("distance must be nonnegative, got {d}")));
    }
    if n == 0 {
        return Err(Error::param("dimension must be at least 1"));
    }
    let exact = d / (2.0 * t);
    let from_kernel = ClosedForm::GaussianKernel { n }.log_jet(d, t).fr.abs();
    if (from_kernel - exact).abs() > 1e-12 * exact.max(1.0) {
        return Err(Error::Data(format!("kernel ratio {from_kernel} disagrees with d/(2t) = {exact}")));
    }
    Ok(exact)
}

/// Each intermediate quantity of the derivation of the kernel gradient bound
/// from the elliptic-type estimate on `B(x, √t) × [t/2, t]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm13Trace {
    pub n: usize,
    pub distance: f64,
    pub t: f64,
    pub delta: f64,
    pub xi: f64,
    pub c1: f64,
    pub c2: f64,
    /// `|B(2ρ)| / |B(ρ)|` at `ρ = √(t/2)`.
    pub doubling_constant: f64,
    /// `|B(2√t)| / |B(√(t/2))|`, covering `B(x,√t) ⊂ B(z, 2√t)` and `τ >= t/2`.
    pub volume_ratio: f64,
    /// `c₁ × volume_ratio`.
    pub c3: f64,
    pub ball_volume: f64,
    /// Lattice sup of the kernel over the cube.
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "M_bound")]
    pub m_bound: f64,
    pub u: f64,
    pub u_lower: f64,
    /// Constant used in the elliptic-type estimate.
    pub constant: f64,
    /// `|∇_x G|/G` at `(x, t)`.
    pub lhs: f64,
    /// Estimate right side with the actual `M` and `u(x,t)`.
    pub direct: f64,
    /// Same with `M` and `u` replaced by their kernel bounds.
    pub final_bound: f64,
    /// `c₄ (1 + ξ)/√t` with `c₄ = c(1+√2) max(1 + ln(c₃/c₂), 1/(4-δ))`.
    pub gradient_form: f64,
    pub c4: f64,
    pub holds: bool,
}

/// Replays the derivation for the Euclidean kernel with pole `y` at distance
/// `d` from `x`. `constant = None` uses the measured estimate ratio on the cube.
pub fn thm13_pipeline(m: &ModelManifold, d: f64, t: f64, delta: f64, constant: Option<f64>) -> Result<Thm13Trace> {
    if !matches!(m.kind(), ModelKind::Euclidean) {
        return Err(Error::Precondition("the pipeline needs a k = 0 model with a closed-form kernel".into()));
    }
    if !(t > 0.0) || !(d >= 0.0) {
        return Err(Error::param(format!("need t > 0 and d >= 0, got t = {t}, d = {d}")));
    }
    let n = m.n();
    let g = kernel_of(m)?;
    let xi = d * d / t;
    let times = default_times(m);
    let consts = li_yau_constants(m, delta, &default_xi_grid(), &times)?;

    let sqrt_t = t.sqrt();
    let rho = (0.5 * t).sqrt();
    let doubling_constant = m.doubling_constant(rho)?;
    let volume_ratio = m.ball_volume(2.0 * sqrt_t)? / m.ball_volume(rho)?;
    let c3 = consts.c1 * volume_ratio;
    let ball = m.ball_volume(sqrt_t)?;

    let cube = ParabolicCube::new(d, sqrt_t, t, 0.5 * t)?;
    let (lo, hi) = cube.space_range(m);
    let u = HeatSolution::closed_form(g, m.clone(), Domain::new(lo, hi, 0.5 * t, t)?)?;
    let sup = u.log_sup(&cube)?;
    let x = d.max(lo);
    let ln_u = u.ln_u(x, t)?;
    let lhs = estimates::evaluate_lhs(EstimateId::Sz14, &u, x, t)?;

    let constant = match constant {
        Some(c) if c > 0.0 => c,
        Some(c) => return Err(Error::param(format!("constant must be positive, got {c}"))),
        None => {
            let rep = estimates::report(EstimateId::Sz14, &u, &cube, 0.0, 1.0, &ReportOptions::default())?;
            if rep.ratio > 0.0 {
                rep.ratio
            } else {
                1.0
            }
        }
    };
    let scale = constant * (1.0 / sqrt_t + 1.0 / rho);
    let log_bound = (c3 / consts.c2).ln() + xi / (4.0 - delta);
    let direct = scale * (1.0 + (sup.ln_m - ln_u).max(0.0));
    let final_bound = scale * (1.0 + log_bound);
    let c4 = constant * (1.0 + 2f64.sqrt()) * (1.0 + (c3 / consts.c2).ln()).max(1.0 / (4.0 - delta));
    let gradient_form = c4 * (1.0 + xi) / sqrt_t;
    let tol = 1e-12;
    let holds = lhs <= direct * (1.0 + tol) && direct <= final_bound * (1.0 + tol) && final_bound <= gradient_form * (1.0 + tol);
    Ok(Thm13Trace {
        n,
        distance: d,
        t,
        delta,
        xi,
        c1: consts.c1,
        c2: consts.c2,
        doubling_constant,
        volume_ratio,
        c3,
        ball_volume: ball,
        m: sup.m(),
        m_bound: c3 / ball,
        u: ln_u.exp(),
        u_lower: consts.c2 / ball * (-xi / (4.0 - delta)).exp(),
        constant,
        lhs,
        direct,
        final_bound,
        gradient_form,
        c4,
        holds,
    })
}
