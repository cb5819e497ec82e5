//! Polynomial space–time cutoff and the term-by-term bounds of the maximum
//! principle argument.
//!
//! `ψ(r, t) = χ((2d/R - 1)_+) η((t0 - t - T/4)_+ / (3T/4))` with
//! `χ(s) = (1-s)^p_+`, `η(s) = (1-s)²_+` and `d` the distance from the cube
//! centre. `ψ = 1` on `Q_{R/2,T/4}`, vanishes on the parabolic boundary of
//! `Q_{R,T}` and is radially nonincreasing. Its first derivatives jump at
//! `d = R/2` and at `t = t0 - T/4` (where `ψ` leaves the value 1); derivatives
//! there are taken from the side where `ψ = 1`, and the measured constants
//! come from the other side.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ModelManifold, ParabolicCube};
use crate::lattice;
use crate::solutions::{HeatSolution, DEFAULT_LATTICE};

use super::log_quantities;

/// Radial samples used when measuring the cutoff constants.
pub const DEFAULT_RADIAL_SAMPLES: usize = 4001;
const DEFAULT_TIME_SAMPLES: usize = 401;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutoffConstants {
    /// `sup R |∂_r ψ| / ψ^a`.
    pub radial_first: f64,
    /// `sup R² |∂²_r ψ| / ψ^a`.
    pub radial_second: f64,
    /// `sup T |∂_t ψ| / ψ^{1/2}`.
    pub time: f64,
    /// `sup R² |∂_r ψ|² / ψ^{3/2}`.
    pub gradient_square: f64,
    pub radial_samples: usize,
    pub time_samples: usize,
}

/// `ψ` and its derivatives; `psi_r`, `psi_rr` are taken in the coordinate.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CutoffJet {
    pub psi: f64,
    pub psi_r: f64,
    pub psi_rr: f64,
    pub psi_t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffProfile {
    pub center: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub t0: f64,
    #[serde(rename = "T")]
    pub depth: f64,
    pub a: f64,
    pub p: u32,
    pub constants: CutoffConstants,
}

/// `(value, first, second)` derivative of `χ(s) = (1-s)^p` for `s > 0`.
fn chi(p: u32, s: f64) -> (f64, f64, f64) {
    if s <= 0.0 {
        return (1.0, 0.0, 0.0);
    }
    if s >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let pf = p as f64;
    let one = 1.0 - s;
    (one.powi(p as i32), -pf * one.powi(p as i32 - 1), pf * (pf - 1.0) * one.powi(p as i32 - 2))
}

pub fn build_cutoff(cube: &ParabolicCube, a: f64, p: u32) -> Result<CutoffProfile> {
    if p < 4 || p % 2 != 0 {
        return Err(Error::param(format!("cutoff power p must be an even integer >= 4, got {p}")));
    }
    let a_max = 1.0 - 2.0 / p as f64;
    if !(a > 0.0 && a <= a_max) {
        return Err(Error::param(format!("cutoff exponent a = {a} outside (0, {a_max}] for p = {p}")));
    }
    let mut prof = CutoffProfile {
        center: cube.center,
        radius: cube.radius,
        t0: cube.t0,
        depth: cube.depth,
        a,
        p,
        constants: CutoffConstants {
            radial_first: 0.0,
            radial_second: 0.0,
            time: 0.0,
            gradient_square: 0.0,
            radial_samples: 0,
            time_samples: 0,
        },
    };
    prof.constants = prof.measure(DEFAULT_RADIAL_SAMPLES, DEFAULT_TIME_SAMPLES)?;
    Ok(prof)
}

impl CutoffProfile {
    fn s_of(&self, d: f64) -> f64 {
        2.0 * d / self.radius - 1.0
    }

    fn sigma_of(&self, t: f64) -> f64 {
        (self.t0 - t - 0.25 * self.depth) / (0.75 * self.depth)
    }

    /// `(η, ∂_t η)`.
    fn eta(&self, t: f64) -> (f64, f64) {
        let sigma = self.sigma_of(t);
        if sigma <= 0.0 {
            (1.0, 0.0)
        } else if sigma >= 1.0 {
            (0.0, 0.0)
        } else {
            let one = 1.0 - sigma;
            (one * one, 2.0 * one / (0.75 * self.depth))
        }
    }

    /// `ψ` at coordinate `x` (signed on a line, radial otherwise) and time `t`.
    pub fn eval(&self, x: f64, t: f64) -> CutoffJet {
        let offset = x - self.center;
        let d = offset.abs();
        let (c, c1, c2) = chi(self.p, self.s_of(d));
        let (e, et) = self.eval_eta(t);
        let k = 2.0 / self.radius;
        let sign = if offset < 0.0 { -1.0 } else { 1.0 };
        CutoffJet { psi: c * e, psi_r: sign * c1 * k * e, psi_rr: c2 * k * k * e, psi_t: c * et }
    }

    fn eval_eta(&self, t: f64) -> (f64, f64) {
        if t < self.t0 - self.depth {
            (0.0, 0.0)
        } else {
            self.eta(t)
        }
    }

    /// `Δψ = ψ_rr + (n-1)(φ'/φ) ψ_r`, valid for cubes centred at the pole.
    pub fn laplacian(&self, m: &ModelManifold, x: f64, t: f64) -> Result<f64> {
        let j = self.eval(x, t);
        let (q, _) = m.drift(x)?;
        Ok(j.psi_rr + q * j.psi_r)
    }

    /// Lattice suprema of the four derivative ratios.
    pub fn measure(&self, radial_samples: usize, time_samples: usize) -> Result<CutoffConstants> {
        if radial_samples < 3 || time_samples < 3 {
            return Err(Error::param("cutoff measurement needs at least 3 samples per axis"));
        }
        let (big_r, big_t, a) = (self.radius, self.depth, self.a);
        let ds = lattice::linspace(0.0, big_r, radial_samples);
        let ts = lattice::linspace(self.t0 - big_t, self.t0, time_samples);
        let mut out = CutoffConstants {
            radial_first: 0.0,
            radial_second: 0.0,
            time: 0.0,
            gradient_square: 0.0,
            radial_samples,
            time_samples,
        };
        // ψ is a product, so sweep each factor against the other's samples
        for &t in &ts {
            let (e, et) = self.eval_eta(t);
            if e <= 0.0 {
                continue;
            }
            for &d in &ds {
                let s = self.s_of(d);
                let (c, c1, c2) = chi(self.p, s);
                let psi = c * e;
                if psi <= 0.0 {
                    continue;
                }
                if s > 0.0 {
                    let pr = (c1 * 2.0 / big_r * e).abs();
                    let prr = (c2 * 4.0 / (big_r * big_r) * e).abs();
                    out.radial_first = out.radial_first.max(big_r * pr / psi.powf(a));
                    out.radial_second = out.radial_second.max(big_r * big_r * prr / psi.powf(a));
                    out.gradient_square = out.gradient_square.max(big_r * big_r * pr * pr / psi.powf(1.5));
                }
                if self.sigma_of(t) > 0.0 {
                    out.time = out.time.max(big_t * (c * et).abs() / psi.sqrt());
                }
            }
        }
        Ok(out)
    }

    /// Largest `|ψ - 1|` and derivative on a lattice of `Q_{R/2,T/4}`.
    pub fn inner_deviation(&self, density: usize) -> f64 {
        let inner_r = (self.center - 0.5 * self.radius, self.center + 0.5 * self.radius);
        let inner_t = (self.t0 - 0.25 * self.depth, self.t0);
        lattice::grid2(inner_r, density, inner_t, density)
            .into_iter()
            .map(|(x, t)| {
                let j = self.eval(x, t);
                (j.psi - 1.0).abs().max(j.psi_r.abs()).max(j.psi_rr.abs()).max(j.psi_t.abs())
            })
            .fold(0.0, f64::max)
    }

    fn cube(&self) -> ParabolicCube {
        ParabolicCube { center: self.center, radius: self.radius, t0: self.t0, depth: self.depth }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutoffTerm {
    #[serde(rename = "term_name")]
    pub term: &'static str,
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    /// Smallest constant for which this bound holds at the maximum point.
    #[serde(skip)]
    pub required_c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffTermTable {
    pub x1: f64,
    pub t1: f64,
    pub psi: f64,
    pub w: f64,
    pub f: f64,
    pub k: f64,
    pub constant: f64,
    /// Largest per-term required constant.
    pub calibrated: f64,
    pub terms: Vec<CutoffTerm>,
    /// `-(all terms) - 2ψ(1-f)w²` at the lattice maximum; the maximum
    /// principle makes it nonnegative at a true maximum. Reported only.
    pub maximum_point_slack: f64,
}

impl CutoffTermTable {
    pub fn all_hold(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.slack >= -tol)
    }
}

/// Terms of the maximum-principle inequality at the lattice maximum of `ψ w`,
/// each compared with its bound `fixed + c·scale`.
///
/// With `constant = None` the calibrated constant (largest required one) is
/// used, so every slack is nonnegative by construction up to rounding.
pub fn verify_cutoff_terms(
    u: &HeatSolution,
    ln_m: f64,
    k: f64,
    cutoff: &CutoffProfile,
    constant: Option<f64>,
    density: Option<usize>,
) -> Result<CutoffTermTable> {
    let m = u.manifold();
    if m.n() >= 2 && cutoff.center != 0.0 {
        return Err(Error::Precondition("radial cutoffs in n >= 2 must be centred at the pole".into()));
    }
    let density = density.unwrap_or(DEFAULT_LATTICE);
    let cube = cutoff.cube();
    let mut best: Option<(f64, f64, f64)> = None;
    for (x, t) in lattice::grid2(cube.space_range(m), density, cube.time_range(), density) {
        let psi = cutoff.eval(x, t).psi;
        if psi <= 0.0 {
            continue;
        }
        let pw = psi * log_quantities(u, ln_m, x, t)?.w;
        if best.map_or(true, |b| pw > b.2) {
            best = Some((x, t, pw));
        }
    }
    let (x1, t1, _) = best.ok_or_else(|| Error::domain("cutoff vanishes on the whole lattice"))?;

    let q = log_quantities(u, ln_m, x1, t1)?;
    let j = cutoff.eval(x1, t1);
    let lap_psi = cutoff.laplacian(m, x1, t1)?;
    let (psi, w, f) = (j.psi, q.w, q.f);
    let d = 1.0 - f;
    let r4 = cutoff.radius.powi(4);
    let psi_w2 = psi * w * w;

    // (name, value, fixed part of the bound, coefficient of c)
    let raw = [
        ("drift", (q.b() * j.psi_r * w).abs(), d * psi_w2, f.powi(4) / (r4 * d.powi(3))),
        ("gradient_square", j.psi_r * j.psi_r / psi * w, psi_w2 / 8.0, 1.0 / r4),
        ("laplacian", -lap_psi * w, psi_w2 / 8.0, 1.0 / r4 + k / (cutoff.radius * cutoff.radius)),
        ("time", j.psi_t.abs() * w, psi_w2 / 8.0, 1.0 / (cutoff.depth * cutoff.depth)),
        ("curvature", 2.0 * k * w * psi, psi_w2 / 8.0, k * k),
    ];
    let required = |value: f64, fixed: f64, scale: f64| -> f64 {
        let excess = value - fixed;
        if excess <= 1e-14 * (1.0 + value.abs()) {
            0.0
        } else if scale > 0.0 {
            excess / scale
        } else {
            f64::INFINITY
        }
    };
    let calibrated = raw.iter().map(|&(_, v, fx, sc)| required(v, fx, sc)).fold(0.0, f64::max);
    let c = constant.unwrap_or(calibrated);
    let terms = raw
        .iter()
        .map(|&(name, value, fixed, scale)| {
            let bound = fixed + c * scale;
            CutoffTerm { term: name, value, bound, slack: bound - value, required_c: required(value, fixed, scale) }
        })
        .collect();

    let all = q.b() * j.psi_r * w - 2.0 * j.psi_r * j.psi_r / psi * w + lap_psi * w - j.psi_t * w - 2.0 * k * w * psi;
    Ok(CutoffTermTable {
        x1,
        t1,
        psi,
        w,
        f,
        k,
        constant: c,
        calibrated,
        terms,
        maximum_point_slack: -all - 2.0 * psi * d * w * w,
    })
}
