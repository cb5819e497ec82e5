//! Both sides of the gradient estimates, lattice reports and the sweeps built
//! on them.
//!
//! Estimates are identified by [`EstimateId`]:
//!
//! | id       | left side                 | right side                                          |
//! |----------|---------------------------|-----------------------------------------------------|
//! | `CY_1_1` | `|∇u|/u`                  | `c (1/R + √k)`                                      |
//! | `LY_1_2` | `|∇u|²/u² − u_t/u`        | `c (1/R² + 1/T + k)`                                |
//! | `HAM_1_3`| `|∇u|²/u²`                | `c (1/t + 2k) ln(M/u)`                              |
//! | `SZ_1_4` | `|∇u|/u`                  | `c (1/R + 1/√T + √k)(1 + ln(M/u))`                  |
//! | `SZ_1_5` | `|∇u|/u`                  | `c₁ t^{-1/2} (c₂ + ln(u(x,2t)/u(x,t)))`             |
//!
//! `M` is the supremum of `u` over the full cube; reports take the supremum of
//! the pointwise ratio over the half cube `Q_{R/2,T/2}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ModelManifold, ParabolicCube};
use crate::lattice;
use crate::solutions::{ClosedForm, Domain, HeatSolution, DEFAULT_LATTICE, SUP_SAFETY};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimateId {
    #[serde(rename = "CY_1_1")]
    Cy11,
    #[serde(rename = "LY_1_2")]
    Ly12,
    #[serde(rename = "HAM_1_3")]
    Ham13,
    #[serde(rename = "SZ_1_4")]
    Sz14,
    #[serde(rename = "SZ_1_5")]
    Sz15,
}

impl EstimateId {
    pub const ALL: [EstimateId; 5] =
        [EstimateId::Cy11, EstimateId::Ly12, EstimateId::Ham13, EstimateId::Sz14, EstimateId::Sz15];

    pub fn as_str(&self) -> &'static str {
        match self {
            EstimateId::Cy11 => "CY_1_1",
            EstimateId::Ly12 => "LY_1_2",
            EstimateId::Ham13 => "HAM_1_3",
            EstimateId::Sz14 => "SZ_1_4",
            EstimateId::Sz15 => "SZ_1_5",
        }
    }

    /// Whether the right side involves `M`.
    pub fn uses_sup(&self) -> bool {
        matches!(self, EstimateId::Ham13 | EstimateId::Sz14)
    }
}

impl fmt::Display for EstimateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimateId {
    type Err = Error;

    /// Accepts `SZ_1_4`, `sz14`, `sz-1-4` and similar spellings.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_lowercase();
        match key.as_str() {
            "cy11" => Ok(EstimateId::Cy11),
            "ly12" => Ok(EstimateId::Ly12),
            "ham13" => Ok(EstimateId::Ham13),
            "sz14" => Ok(EstimateId::Sz14),
            "sz15" => Ok(EstimateId::Sz15),
            _ => Err(Error::param(format!("unknown estimate id {s:?}"))),
        }
    }
}

/// Everything the right-hand sides need besides the solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhsContext {
    pub cube: ParabolicCube,
    pub k: f64,
    /// `c`, or `c₁` for `SZ_1_5`.
    pub constant: f64,
    /// `c₂` for `SZ_1_5`; ignored otherwise.
    pub constant2: f64,
    pub ln_m: f64,
}

/// Time derivative tolerance for the static-solution check.
const STATIC_TOL: f64 = 1e-8;

/// Slack allowed for `u` above `M` before it counts as inconsistent data.
fn sup_slack(ln_m: f64) -> f64 {
    1e-12 * (1.0 + ln_m.abs())
}

pub fn evaluate_lhs(id: EstimateId, u: &HeatSolution, r: f64, t: f64) -> Result<f64> {
    let j = u.log_jet(r, t)?;
    Ok(match id {
        EstimateId::Cy11 => {
            if j.ft.abs() > STATIC_TOL {
                return Err(Error::Misuse(format!(
                    "CY_1_1 needs a time-independent solution; u_t/u = {} at ({r}, {t})",
                    j.ft
                )));
            }
            j.fr.abs()
        }
        EstimateId::Ly12 => j.fr * j.fr - j.ft,
        EstimateId::Ham13 => j.fr * j.fr,
        EstimateId::Sz14 | EstimateId::Sz15 => j.fr.abs(),
    })
}

/// `ln(M/u(r,t)) >= 0`, or a data error when `u > M`.
pub fn log_ratio_to_sup(u: &HeatSolution, ln_m: f64, r: f64, t: f64) -> Result<f64> {
    let gap = ln_m - u.ln_u(r, t)?;
    if gap < -sup_slack(ln_m) {
        return Err(Error::Data(format!("u({r}, {t}) exceeds M by a factor e^{}", -gap)));
    }
    Ok(gap.max(0.0))
}

pub fn evaluate_rhs(id: EstimateId, u: &HeatSolution, ctx: &RhsContext, r: f64, t: f64) -> Result<f64> {
    let big_r = ctx.cube.radius;
    let big_t = ctx.cube.depth;
    let c = ctx.constant;
    let k = ctx.k;
    if !(k >= 0.0) {
        return Err(Error::param(format!("Ricci bound k must be nonnegative, got {k}")));
    }
    Ok(match id {
        EstimateId::Cy11 => c * (1.0 / big_r + k.sqrt()),
        EstimateId::Ly12 => c * (1.0 / (big_r * big_r) + 1.0 / big_t + k),
        EstimateId::Ham13 => {
            if !(t > 0.0) {
                return Err(Error::Precondition(format!("HAM_1_3 needs t > 0, got {t}")));
            }
            c * (1.0 / t + 2.0 * k) * log_ratio_to_sup(u, ctx.ln_m, r, t)?
        }
        EstimateId::Sz14 => {
            c * (1.0 / big_r + 1.0 / big_t.sqrt() + k.sqrt()) * (1.0 + log_ratio_to_sup(u, ctx.ln_m, r, t)?)
        }
        EstimateId::Sz15 => {
            if k > 0.0 || u.manifold().k() > 0.0 {
                return Err(Error::Misuse("SZ_1_5 needs nonnegative Ricci curvature (k = 0)".into()));
            }
            if !(t > 0.0) {
                return Err(Error::Precondition(format!("SZ_1_5 needs t > 0, got {t}")));
            }
            let growth = u.ln_u(r, 2.0 * t)? - u.ln_u(r, t)?;
            c * (ctx.constant2 + growth) / t.sqrt()
        }
    })
}

/// `lhs / rhs`, with `0/0 = 0` and `x/0 = ∞`.
fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportOptions {
    /// Lattice points per axis, for both the sup of `u` and the ratio sweep.
    pub density: usize,
    /// Factor applied to the lattice sup; `None` uses the per-form default.
    pub m_safety: Option<f64>,
    /// `c₂` for `SZ_1_5`.
    pub constant2: f64,
    /// Extra point at which both sides are also reported.
    pub at: Option<(f64, f64)>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { density: DEFAULT_LATTICE, m_safety: None, constant2: 1.0, at: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub estimate_id: EstimateId,
    pub solution: String,
    pub x0: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub t0: f64,
    #[serde(rename = "T")]
    pub depth: f64,
    pub k: f64,
    pub constant: f64,
    pub constant2: f64,
    /// Left side at the ratio argmax.
    pub lhs_sup: f64,
    /// Largest left side on the lattice.
    pub lhs_max: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub argmax_r: f64,
    pub argmax_t: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "ln_M")]
    pub ln_m: f64,
    pub m_safety: f64,
    pub region: &'static str,
    pub lattice: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_ratio: Option<f64>,
}

/// Lattice of the half cube `Q_{R/2,T/2}`.
pub fn half_cube_lattice(m: &ModelManifold, cube: &ParabolicCube, density: usize) -> Vec<(f64, f64)> {
    let half = cube.half();
    lattice::grid2(half.space_range(m), density, half.time_range(), density)
}

pub fn report(
    id: EstimateId,
    u: &HeatSolution,
    cube: &ParabolicCube,
    k: f64,
    constant: f64,
    opts: &ReportOptions,
) -> Result<EstimateReport> {
    if !(constant > 0.0) || !constant.is_finite() {
        return Err(Error::param(format!("constant must be positive, got {constant}")));
    }
    if opts.density < 2 {
        return Err(Error::param("lattice density must be at least 2"));
    }
    let safety = opts.m_safety.unwrap_or(if u.is_analytic() { SUP_SAFETY } else { 1.0 });
    let sup = u.log_sup_with(cube, opts.density, safety)?;
    let ctx = RhsContext { cube: *cube, k, constant, constant2: opts.constant2, ln_m: sup.ln_m };

    let mut best: Option<(f64, f64, f64, (f64, f64))> = None;
    let mut lhs_max = 0.0f64;
    for (r, t) in half_cube_lattice(u.manifold(), cube, opts.density) {
        let lhs = evaluate_lhs(id, u, r, t)?;
        let rhs = evaluate_rhs(id, u, &ctx, r, t)?;
        if id == EstimateId::Sz15 && !(rhs > 0.0) && lhs > 0.0 {
            return Err(Error::Data(format!(
                "SZ_1_5 right side {rhs} <= 0 at ({r}, {t}); c2 = {} is too small",
                opts.constant2
            )));
        }
        lhs_max = lhs_max.max(lhs);
        let ratio = ratio_of(lhs, rhs);
        if best.map_or(true, |b| ratio > b.2) {
            best = Some((lhs, rhs, ratio, (r, t)));
        }
    }
    let (lhs_sup, rhs, ratio, (ar, at)) = best.expect("lattice is non-empty");

    let (point_lhs, point_rhs, point_ratio) = match opts.at {
        Some((r, t)) => {
            let l = evaluate_lhs(id, u, r, t)?;
            let rr = evaluate_rhs(id, u, &ctx, r, t)?;
            (Some(l), Some(rr), Some(ratio_of(l, rr)))
        }
        None => (None, None, None),
    };

    Ok(EstimateReport {
        estimate_id: id,
        solution: u.describe(),
        x0: cube.center,
        radius: cube.radius,
        t0: cube.t0,
        depth: cube.depth,
        k,
        constant,
        constant2: opts.constant2,
        lhs_sup,
        lhs_max,
        rhs,
        ratio,
        argmax_r: ar,
        argmax_t: at,
        m: sup.ln_m.exp(),
        ln_m: sup.ln_m,
        m_safety: safety,
        region: "Q_{R/2,T/2}",
        lattice: opts.density,
        point_lhs,
        point_rhs,
        point_ratio,
    })
}

/// Smallest `c₁` making `SZ_1_5` hold at the given points for this `c₂`.
pub fn sz15_required_c1(u: &HeatSolution, c2: f64, points: &[(f64, f64)]) -> Result<f64> {
    if u.manifold().k() > 0.0 {
        return Err(Error::Misuse("SZ_1_5 needs nonnegative Ricci curvature (k = 0)".into()));
    }
    let mut need = 0.0f64;
    for &(r, t) in points {
        if !(t > 0.0) {
            return Err(Error::Precondition(format!("SZ_1_5 needs t > 0, got {t}")));
        }
        let lhs = evaluate_lhs(EstimateId::Sz15, u, r, t)?;
        let denom = c2 + u.ln_u(r, 2.0 * t)? - u.ln_u(r, t)?;
        if lhs == 0.0 {
            continue;
        }
        if !(denom > 0.0) {
            return Err(Error::Data(format!("c2 = {c2} leaves c2 + ln(u(x,2t)/u(x,t)) = {denom} at ({r}, {t})")));
        }
        need = need.max(lhs * t.sqrt() / denom);
    }
    Ok(need)
}

/// Standard fixture for the sharpness and Hamilton sweeps: `e^{ax + a²t}`
/// on `[1,3] × [1,2]`.
fn wave_fixture(a: f64) -> Result<(HeatSolution, ParabolicCube)> {
    let line = ModelManifold::euclidean(1)?;
    let u = HeatSolution::closed_form(ClosedForm::TravelingWave { a }, line, Domain::new(1.0, 3.0, 1.0, 2.0)?)?;
    Ok((u, ParabolicCube::from_intervals(1.0, 3.0, 1.0, 2.0)?))
}

const SWEEP_POINT: (f64, f64) = (2.0, 2.0);

fn check_increasing_positive(a_values: &[f64]) -> Result<()> {
    if a_values.is_empty() {
        return Err(Error::param("empty list of a values"));
    }
    if a_values.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
        return Err(Error::param("a values must be positive"));
    }
    if a_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("a values must be strictly increasing"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub a: f64,
    pub lhs: f64,
    pub rhs_at_c1: f64,
    pub ratio: f64,
    #[serde(rename = "ln_M")]
    pub ln_m: f64,
}

/// `SZ_1_4` at `(2,2)` for `e^{ax + a²t}`, with `M` the exact lattice sup
/// (the corner `(3,2)` is a lattice node, so no safety factor is applied).
pub fn sharpness_scan(a_values: &[f64]) -> Result<Vec<SharpnessRow>> {
    check_increasing_positive(a_values)?;
    a_values
        .iter()
        .map(|&a| {
            let (u, cube) = wave_fixture(a)?;
            let ln_m = u.log_sup_with(&cube, DEFAULT_LATTICE, 1.0)?.ln_m;
            let ctx = RhsContext { cube, k: 0.0, constant: 1.0, constant2: 1.0, ln_m };
            let (r, t) = SWEEP_POINT;
            let lhs = evaluate_lhs(EstimateId::Sz14, &u, r, t)?;
            let rhs = evaluate_rhs(EstimateId::Sz14, &u, &ctx, r, t)?;
            Ok(SharpnessRow { a, lhs, rhs_at_c1: rhs, ratio: lhs / rhs, ln_m })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HamiltonRow {
    pub a: f64,
    pub lhs_sq: f64,
    pub ham_rhs: f64,
    pub ratio: f64,
}

/// `|∇u|²/u²` against Hamilton's right side at `(2,2)`, `k = 0`, `c = 1`.
pub fn hamilton_failure_scan(a_values: &[f64]) -> Result<Vec<HamiltonRow>> {
    check_increasing_positive(a_values)?;
    a_values
        .iter()
        .map(|&a| {
            let (u, cube) = wave_fixture(a)?;
            let ln_m = u.log_sup_with(&cube, DEFAULT_LATTICE, 1.0)?.ln_m;
            let ctx = RhsContext { cube, k: 0.0, constant: 1.0, constant2: 1.0, ln_m };
            let (r, t) = SWEEP_POINT;
            let lhs_sq = evaluate_lhs(EstimateId::Ham13, &u, r, t)?;
            let ham_rhs = evaluate_rhs(EstimateId::Ham13, &u, &ctx, r, t)?;
            Ok(HamiltonRow { a, lhs_sq, ham_rhs, ratio: ratio_of(lhs_sq, ham_rhs) })
        })
        .collect()
}

/// Two-point comparison obtained by integrating `SZ_1_4` along a segment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnackCheck {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub distance: f64,
    pub constant: f64,
    pub theta: f64,
    /// Multiplicative constant `e^{θ-1}`.
    pub c: f64,
    #[serde(rename = "ln_M")]
    pub ln_m: f64,
    /// `ln(M/u(y,t))`.
    pub log_lhs: f64,
    /// `ln(c (M/u(x,t))^θ)`.
    pub log_rhs: f64,
    pub holds: bool,
    pub note: &'static str,
}

/// `M/u(y,t) >= c (M/u(x,t))^θ` with `θ = exp(-c₀ (1/R + 1/√T) d(x,y))`.
///
/// With `g = 1 + ln(M/u)` the estimate reads `|∇ ln g| <= c₀(1/R + 1/√T)`, so
/// `g(y) >= θ g(x)`, which rearranges to the inequality with `c = e^{θ-1}`.
pub fn harnack_theta(
    u: &HeatSolution,
    cube: &ParabolicCube,
    x: f64,
    y: f64,
    t: f64,
    constant: f64,
) -> Result<HarnackCheck> {
    if u.manifold().k() != 0.0 {
        return Err(Error::Precondition("the two-point comparison is stated for k = 0".into()));
    }
    if !(constant > 0.0) {
        return Err(Error::param(format!("constant must be positive, got {constant}")));
    }
    let d = (x - y).abs();
    if d > cube.depth.sqrt() * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!("d(x, y) = {d} exceeds √T = {}", cube.depth.sqrt())));
    }
    let ln_m = u.log_sup(cube)?.ln_m;
    let theta = (-constant * (1.0 / cube.radius + 1.0 / cube.depth.sqrt()) * d).exp();
    let log_c = theta - 1.0;
    let log_lhs = log_ratio_to_sup(u, ln_m, y, t)?;
    let log_rhs = log_c + theta * log_ratio_to_sup(u, ln_m, x, t)?;
    Ok(HarnackCheck {
        x,
        y,
        t,
        distance: d,
        constant,
        theta,
        c: log_c.exp(),
        ln_m,
        log_lhs,
        log_rhs,
        holds: log_lhs >= log_rhs - 1e-12 * (1.0 + log_rhs.abs()),
        note: "theta and c from integrating ln(1 + ln(M/u)) along the segment; one natural reading",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn line() -> ModelManifold {
        ModelManifold::euclidean(1).unwrap()
    }

    #[test]
    fn ids_parse_and_print() {
        for id in EstimateId::ALL {
            assert_eq!(id.as_str().parse::<EstimateId>().unwrap(), id);
        }
        assert_eq!("sz14".parse::<EstimateId>().unwrap(), EstimateId::Sz14);
        assert!("sz16".parse::<EstimateId>().is_err());
        assert_eq!(serde_json::to_string(&EstimateId::Ham13).unwrap(), "\"HAM_1_3\"");
    }

    #[test]
    fn wave_point_values() {
        for a in [1.0, 3.0] {
            let (u, cube) = wave_fixture(a).unwrap();
            let ln_m = u.log_sup_with(&cube, 101, 1.0).unwrap().ln_m;
            assert_relative_eq!(ln_m, 3.0 * a + 2.0 * a * a, max_relative = 1e-15);
            let ctx = RhsContext { cube, k: 0.0, constant: 1.0, constant2: 1.0, ln_m };
            assert_relative_eq!(evaluate_lhs(EstimateId::Sz14, &u, 2.0, 2.0).unwrap(), a);
            assert_relative_eq!(evaluate_rhs(EstimateId::Sz14, &u, &ctx, 2.0, 2.0).unwrap(), 2.0 * (1.0 + a));
            assert_relative_eq!(evaluate_rhs(EstimateId::Ham13, &u, &ctx, 2.0, 2.0).unwrap(), 0.5 * a);
        }
    }

    #[test]
    fn constant_solution_has_zero_lhs() {
        let u = HeatSolution::closed_form(ClosedForm::Constant { c: 2.0 }, line(), Domain::new(0.0, 4.0, 0.0, 4.0).unwrap())
            .unwrap();
        let cube = ParabolicCube::from_intervals(1.0, 3.0, 1.0, 2.0).unwrap();
        for id in EstimateId::ALL {
            assert_eq!(evaluate_lhs(id, &u, 2.0, 1.5).unwrap(), 0.0);
            let rep = report(id, &u, &cube, 0.0, 1.0, &ReportOptions::default()).unwrap();
            assert_eq!(rep.ratio, 0.0, "{id}");
            if id != EstimateId::Ham13 {
                assert!(rep.rhs > 0.0);
            }
        }
    }

    #[test]
    fn cy_rejects_time_dependence() {
        let (u, _) = wave_fixture(1.0).unwrap();
        assert!(matches!(evaluate_lhs(EstimateId::Cy11, &u, 2.0, 2.0), Err(Error::Misuse(_))));
    }

    #[test]
    fn cy_linear_example() {
        let u = HeatSolution::closed_form(ClosedForm::Linear, line(), Domain::new(1.0, 3.0, 0.0, 1.0).unwrap()).unwrap();
        let cube = ParabolicCube::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let rep = report(EstimateId::Cy11, &u, &cube, 0.0, 1.0, &ReportOptions::default()).unwrap();
        assert_relative_eq!(rep.ratio, 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(rep.argmax_r, 1.5);
    }

    #[test]
    fn sz15_rejects_curvature_and_small_c2() {
        let h3 = ModelManifold::hyperbolic(3, -1.0).unwrap();
        let u = HeatSolution::closed_form(ClosedForm::Hyperbolic3Kernel, h3, Domain::new(0.5, 3.0, 0.5, 4.0).unwrap())
            .unwrap();
        let cube = ParabolicCube::new(1.5, 1.0, 2.0, 1.0).unwrap();
        let ctx = RhsContext { cube, k: 0.0, constant: 1.0, constant2: 1.0, ln_m: 0.0 };
        assert!(matches!(evaluate_rhs(EstimateId::Sz15, &u, &ctx, 1.5, 1.5), Err(Error::Misuse(_))));

        let e1 = line();
        let g = HeatSolution::closed_form(ClosedForm::GaussianKernel { n: 1 }, e1, Domain::new(-2.0, 2.0, 0.25, 2.0).unwrap())
            .unwrap();
        let cube = ParabolicCube::new(0.0, 1.0, 1.0, 0.5).unwrap();
        let ok = ReportOptions::default();
        assert!(report(EstimateId::Sz15, &g, &cube, 0.0, 1.0, &ok).is_ok());
        let bad = ReportOptions { constant2: 0.0, ..ok };
        assert!(matches!(report(EstimateId::Sz15, &g, &cube, 0.0, 1.0, &bad), Err(Error::Data(_))));
        // u(x,2t)/u(x,t) = e^{x²/8t}/√2 for the 1-d kernel
        let need = sz15_required_c1(&g, 1.0, &[(1.0, 1.0)]).unwrap();
        let expect = 0.5 / (1.0 + 1.0 / 8.0 - 0.5 * 2f64.ln());
        assert_relative_eq!(need, expect, max_relative = 1e-12);
    }

    #[test]
    fn inconsistent_sup_is_a_data_error() {
        let (u, cube) = wave_fixture(1.0).unwrap();
        let ctx = RhsContext { cube, k: 0.0, constant: 1.0, constant2: 1.0, ln_m: 1.0 };
        assert!(matches!(evaluate_rhs(EstimateId::Sz14, &u, &ctx, 2.0, 2.0), Err(Error::Data(_))));
    }

    #[test]
    fn sweeps_match_substitution() {
        let a = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
        let s = sharpness_scan(&a).unwrap();
        for row in &s {
            assert_relative_eq!(row.ratio, row.a / (2.0 * (1.0 + row.a)), max_relative = 1e-12);
        }
        let h = hamilton_failure_scan(&a).unwrap();
        for row in &h {
            assert_relative_eq!(row.ratio, 2.0 * row.a, max_relative = 1e-12);
        }
        assert!(sharpness_scan(&[2.0, 1.0]).is_err());
        assert!(hamilton_failure_scan(&[-1.0]).is_err());
    }

    #[test]
    fn harnack_degenerate_and_wave() {
        let (u, cube) = wave_fixture(1.0).unwrap();
        let same = harnack_theta(&u, &cube, 2.0, 2.0, 2.0, 1.0).unwrap();
        assert_eq!(same.theta, 1.0);
        assert!(same.holds);
        let rep = report(EstimateId::Sz14, &u, &cube, 0.0, 1.0, &ReportOptions::default()).unwrap();
        let chk = harnack_theta(&u, &cube, 2.0, 2.5, 2.0, rep.ratio).unwrap();
        assert!(chk.theta > 0.0 && chk.theta < 1.0);
        assert!(chk.holds, "{chk:?}");
        assert!(matches!(harnack_theta(&u, &cube, 1.0, 2.5, 2.0, 1.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn report_json_keys() {
        let (u, cube) = wave_fixture(1.0).unwrap();
        let opts = ReportOptions { at: Some((2.0, 2.0)), ..Default::default() };
        let rep = report(EstimateId::Sz14, &u, &cube, 0.0, 1.0, &opts).unwrap();
        let v: serde_json::Value = serde_json::from_str(&crate::output::to_json(&rep).unwrap()).unwrap();
        for key in ["estimate_id", "R", "T", "k", "constant", "lhs_sup", "rhs", "ratio", "argmax_r", "argmax_t", "M", "schema"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["estimate_id"], "SZ_1_4");
        assert!(v["point_ratio"].as_f64().unwrap() > 0.24);
    }
}
