//! Liouville-type consequences of the gradient estimate, run as sweeps over
//! a ladder of radii.
//!
//! Part (a): for positive `u`, the estimate applied to `u + 1` on
//! `B(x0, R) × [t0 - R², t0]` bounds `|∇u|/(u + 1)` at `(x0, t0)`; if `u`
//! grows like `e^{o(d + √|t|)}` the bound tends to zero. Part (b): for a
//! possibly sign-changing `u`, the shift `U = u + 2A` with `A = sup |u|` over
//! `Q_{2R,T}` satisfies `A <= U <= 3A`, so the estimate for `U` bounds `|∇u|`
//! by a multiple of `(u + 2A)/R`.
//!
//! Nothing here verifies an asymptotic statement; the sweeps only exhibit the
//! behaviour of the bounds on a finite ladder of scales.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice;
use crate::solutions::{ClosedForm, HeatSolution, DEFAULT_LATTICE};

/// A solution on a line, evaluated with its sign.
#[derive(Clone, Copy, Debug)]
pub enum Field<'a> {
    /// Closed forms are evaluated everywhere, ignoring positivity domains.
    Closed(ClosedForm),
    Solution(&'a HeatSolution),
}

impl Field<'_> {
    pub fn value(&self, x: f64, t: f64) -> Result<f64> {
        match self {
            Field::Closed(c) => Ok(c.value(x, t)),
            Field::Solution(u) => u.value(x, t),
        }
    }

    pub fn gradient(&self, x: f64, t: f64) -> Result<f64> {
        match self {
            Field::Closed(c) => Ok(c.gradient(x, t)),
            Field::Solution(u) => {
                let j = u.log_jet(x, t)?;
                Ok(j.fr * j.ln_u.exp())
            }
        }
    }

    fn check_line(&self) -> Result<()> {
        let n = match self {
            Field::Closed(ClosedForm::GaussianKernel { n }) => *n,
            Field::Closed(ClosedForm::Hyperbolic3Kernel | ClosedForm::SphereHarmonic { .. }) => 0,
            Field::Closed(_) => 1,
            Field::Solution(u) => u.manifold().n(),
        };
        if n != 1 {
            return Err(Error::Unsupported("Liouville sweeps run on a line".into()));
        }
        Ok(())
    }

    /// Maximum of `g(u)` over `[x0 - r, x0 + r] × [t0 - depth, t0]`.
    fn lattice_max(&self, x0: f64, r: f64, t0: f64, depth: f64, g: impl Fn(f64) -> f64) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for (x, t) in lattice::grid2((x0 - r, x0 + r), DEFAULT_LATTICE, (t0 - depth, t0), DEFAULT_LATTICE) {
            best = best.max(g(self.value(x, t)?));
        }
        Ok(best)
    }
}

/// `ε(ρ) = 10 ρ^{-1/2}`, the default little-o modulus.
pub fn default_modulus(rho: f64) -> f64 {
    10.0 / rho.sqrt()
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.len() < 2 {
        return Err(Error::param("a radius ladder needs at least two radii"));
    }
    if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("radii must be positive and strictly increasing"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    /// `u = e^{o(d + √|t|)}`: measures `sup ln(u + 1) / R`.
    ExpSublinear,
    /// `u = o(d + √|t|)`: measures `sup |u| / R`.
    Sublinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    #[serde(rename = "R")]
    pub radius: f64,
    pub envelope: f64,
    pub modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthProfile {
    pub envelope: Envelope,
    pub x0: f64,
    pub t0: f64,
    pub rows: Vec<GrowthRow>,
    pub admissible: bool,
    pub reason: String,
}

/// Envelope on `B(x0, 2R) × [t0 - (2R)², t0]` for each radius. Admissible
/// when the envelope decreases along the ladder and stays under `ε(R)`.
pub fn classify_growth(
    u: Field<'_>,
    envelope: Envelope,
    x0: f64,
    t0: f64,
    radii: &[f64],
    modulus: impl Fn(f64) -> f64,
) -> Result<GrowthProfile> {
    u.check_line()?;
    check_radii(radii)?;
    let eps: Vec<f64> = radii.iter().map(|&r| modulus(r)).collect();
    if eps.iter().any(|e| !(*e > 0.0)) || eps.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::param("modulus must be positive and nonincreasing on the radii"));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for (&big_r, &e) in radii.iter().zip(&eps) {
        let r2 = 2.0 * big_r;
        let sup = match envelope {
            Envelope::ExpSublinear => {
                let m = u.lattice_max(x0, r2, t0, r2 * r2, |v| v)?;
                if !(m > -1.0) {
                    return Err(Error::Precondition("u + 1 must be positive".into()));
                }
                m.ln_1p()
            }
            Envelope::Sublinear => u.lattice_max(x0, r2, t0, r2 * r2, f64::abs)?,
        };
        rows.push(GrowthRow { radius: big_r, envelope: sup / big_r, modulus: e });
    }
    let decreasing = rows.windows(2).all(|w| w[1].envelope < w[0].envelope);
    let under = rows.iter().all(|r| r.envelope <= r.modulus);
    let reason = match (decreasing, under) {
        (true, true) => "envelope decreases and stays below the modulus".to_string(),
        (false, _) => "envelope does not decrease along the radii".to_string(),
        (true, false) => {
            let bad = rows.iter().find(|r| r.envelope > r.modulus).expect("some row exceeds");
            format!("envelope {} exceeds the modulus {} at R = {}", bad.envelope, bad.modulus, bad.radius)
        }
    };
    Ok(GrowthProfile { envelope, x0, t0, rows, admissible: decreasing && under, reason })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "R")]
    pub radius: f64,
    pub bound: f64,
    pub true_value: f64,
    pub verdict: &'static str,
}

fn verdict(true_value: f64, bound: f64) -> &'static str {
    if true_value <= bound * (1.0 + 1e-12) {
        "consistent"
    } else {
        "violated"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepA {
    pub x0: f64,
    pub t0: f64,
    pub constant: f64,
    pub rows: Vec<SweepRow>,
    /// `ln M` of `u + 1` on each cube.
    pub log_sups: Vec<f64>,
    pub decreasing: bool,
    pub conclusion: &'static str,
}

fn conclusion(decreasing: bool) -> &'static str {
    if decreasing {
        "bound decreases across radii"
    } else {
        "no Liouville conclusion"
    }
}

/// `c (1/R + 1/R)(1 + ln(M/(u(x0,t0) + 1)))` with `M = sup (u + 1)` over
/// `B(x0, R) × [t0 - R², t0]`.
pub fn gradient_decay_sweep_a(u: Field<'_>, x0: f64, t0: f64, radii: &[f64], constant: f64) -> Result<SweepA> {
    u.check_line()?;
    check_radii(radii)?;
    if !(constant > 0.0) {
        return Err(Error::param(format!("constant must be positive, got {constant}")));
    }
    let u0 = u.value(x0, t0)?;
    if !(u0 > -1.0) {
        return Err(Error::Precondition("u + 1 must be positive".into()));
    }
    let ln_u0 = u0.ln_1p();
    let true_value = u.gradient(x0, t0)?.abs() / (u0 + 1.0);
    let mut rows = Vec::with_capacity(radii.len());
    let mut log_sups = Vec::with_capacity(radii.len());
    for &big_r in radii {
        let m = u.lattice_max(x0, big_r, t0, big_r * big_r, |v| v)?;
        if !(m > -1.0) {
            return Err(Error::Precondition("u + 1 must be positive on the cube".into()));
        }
        let ln_m = m.ln_1p();
        let bound = constant * (2.0 / big_r) * (1.0 + (ln_m - ln_u0).max(0.0));
        rows.push(SweepRow { radius: big_r, bound, true_value, verdict: verdict(true_value, bound) });
        log_sups.push(ln_m);
    }
    let decreasing = rows.windows(2).all(|w| w[1].bound < w[0].bound);
    Ok(SweepA { x0, t0, constant, rows, log_sups, decreasing, conclusion: conclusion(decreasing) })
}

/// Time depth of the part-(b) cube `Q_{2R, T}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDepth {
    /// `T = √(2R)`, as written.
    Literal,
    /// `T = (2R)²`, the parabolic scaling of part (a).
    Parabolic,
}

impl TimeDepth {
    pub fn depth(&self, two_r: f64) -> f64 {
        match self {
            TimeDepth::Literal => two_r.sqrt(),
            TimeDepth::Parabolic => two_r * two_r,
        }
    }
}

impl std::str::FromStr for TimeDepth {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(TimeDepth::Literal),
            "parabolic" => Ok(TimeDepth::Parabolic),
            _ => Err(Error::param(format!("time depth must be literal or parabolic, got {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepBRow {
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "T")]
    pub depth: f64,
    /// `A_{2R} = sup |u|` over the cube.
    pub a_2r: f64,
    /// `max ln(M_U/U)` over the cube lattice.
    pub log_ratio_max: f64,
    pub sandwich_ok: bool,
    /// Bound on `|∇U|/U` at `(x0, t0)`.
    pub relative_bound: f64,
    /// `relative_bound × (u(x0,t0) + 2A)`, a bound on `|∇u(x0,t0)|`.
    pub bound: f64,
    pub true_value: f64,
    pub verdict: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepB {
    pub x0: f64,
    pub t0: f64,
    pub constant: f64,
    pub time_depth: TimeDepth,
    pub rows: Vec<SweepBRow>,
    pub decreasing: bool,
    pub conclusion: &'static str,
}

impl SweepB {
    pub fn table(&self) -> Vec<SweepRow> {
        self.rows
            .iter()
            .map(|r| SweepRow { radius: r.radius, bound: r.bound, true_value: r.true_value, verdict: r.verdict })
            .collect()
    }
}

/// Slack on the sandwich `A <= U <= 3A`.
const SANDWICH_TOL: f64 = 1e-9;

/// Shifted-solution sweep on `Q_{2R,T}` with `T` from `depth`.
pub fn gradient_decay_sweep_b(
    u: Field<'_>,
    x0: f64,
    t0: f64,
    radii: &[f64],
    constant: f64,
    depth: TimeDepth,
) -> Result<SweepB> {
    u.check_line()?;
    check_radii(radii)?;
    if !(constant > 0.0) {
        return Err(Error::param(format!("constant must be positive, got {constant}")));
    }
    let u0 = u.value(x0, t0)?;
    let true_value = u.gradient(x0, t0)?.abs();
    let mut rows = Vec::with_capacity(radii.len());
    for &big_r in radii {
        let two_r = 2.0 * big_r;
        let big_t = depth.depth(two_r);
        let pts = lattice::grid2((x0 - two_r, x0 + two_r), DEFAULT_LATTICE, (t0 - big_t, t0), DEFAULT_LATTICE);
        let vals = pts.iter().map(|&(x, t)| u.value(x, t)).collect::<Result<Vec<f64>>>()?;
        let a = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !a.is_finite() {
            return Err(Error::Data(format!("u overflows on the cube of radius {two_r} and depth {big_t}")));
        }
        if a == 0.0 {
            rows.push(SweepBRow {
                radius: big_r,
                depth: big_t,
                a_2r: 0.0,
                log_ratio_max: 0.0,
                sandwich_ok: true,
                relative_bound: 0.0,
                bound: 0.0,
                true_value,
                verdict: verdict(true_value, 0.0),
            });
            continue;
        }
        let shifted: Vec<f64> = vals.iter().map(|v| v + 2.0 * a).collect();
        let m_u = shifted.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min_u = shifted.iter().copied().fold(f64::INFINITY, f64::min);
        let sandwich_ok = min_u >= a * (1.0 - SANDWICH_TOL) && m_u <= 3.0 * a * (1.0 + SANDWICH_TOL);
        let log_ratio_max = (m_u / min_u).ln();
        let big_u0 = u0 + 2.0 * a;
        let relative_bound = constant * (1.0 / two_r + 1.0 / big_t.sqrt()) * (1.0 + (m_u / big_u0).ln().max(0.0));
        let bound = relative_bound * big_u0;
        rows.push(SweepBRow {
            radius: big_r,
            depth: big_t,
            a_2r: a,
            log_ratio_max,
            sandwich_ok,
            relative_bound,
            bound,
            true_value,
            verdict: verdict(true_value, bound),
        });
    }
    let decreasing = rows.windows(2).all(|w| w[1].bound < w[0].bound);
    Ok(SweepB { x0, t0, constant, time_depth: depth, rows, decreasing, conclusion: conclusion(decreasing) })
}
