//! One-shot acceptance suite: eleven numbered criteria, each evaluated to a
//! pass/fail line with a short measurement summary. A criterion also fails
//! when it overruns its runtime budget.

use std::time::Instant;

use serde::Serialize;

use crate::corpus::{self, Fixture};
use crate::error::{Error, Result};
use crate::estimates::{self, EstimateId, ReportOptions};
use crate::geometry::{ModelManifold, R_MIN};
use crate::kernelbounds;
use crate::lattice;
use crate::liouville::{self, Field, TimeDepth};
use crate::proofcheck::{self, cutoff};
use crate::solutions::{ClosedForm, Domain, GridSpec, HeatSolution};

pub const CRITERIA: usize = 11;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<28} {} ({:.3} s, budget {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds,
            self.budget_seconds
        )
    }
}

type Outcome = Result<(bool, String)>;

fn spec(id: usize) -> Option<(&'static str, f64)> {
    Some(match id {
        1 => ("sharpness", 1.0),
        2 => ("hamilton_failure", 1.0),
        3 => ("identity_chain", 10.0),
        4 => ("cutoff_constants", 2.0),
        5 => ("li_yau_exactness", 1.0),
        6 => ("kernel_gradient_sup", 1.0),
        7 => ("kernel_constants", 2.0),
        8 => ("solver_convergence", 30.0),
        9 => ("liouville_separation", 5.0),
        10 => ("scaling_invariance", 5.0),
        11 => ("constant_closure", 10.0),
        _ => return None,
    })
}

/// Runs one criterion; `seed` drives the random point sets.
pub fn run_criterion(id: usize, seed: u64) -> Result<CriterionResult> {
    let (name, budget) = spec(id).ok_or_else(|| Error::param(format!("no criterion {id}")))?;
    let start = Instant::now();
    let outcome = match id {
        1 => sharpness(),
        2 => hamilton_failure(),
        3 => identity_chain(),
        4 => cutoff_constants(),
        5 => li_yau_exactness(seed),
        6 => kernel_gradient_sup(),
        7 => kernel_constants(),
        8 => solver_convergence(),
        9 => liouville_separation(),
        10 => scaling_invariance(),
        _ => constant_closure(),
    };
    let (passed, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let seconds = start.elapsed().as_secs_f64();
    let in_time = seconds <= budget;
    if !in_time {
        detail.push_str(" [over runtime budget]");
    }
    Ok(CriterionResult { id, name, passed: passed && in_time, detail, seconds, budget_seconds: budget })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|id| run_criterion(id, seed).expect("every id is known")).collect()
}

const SCAN_A: [f64; 6] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

fn sharpness() -> Outcome {
    let rows = estimates::sharpness_scan(&SCAN_A)?;
    let exact = rows.iter().all(|r| (r.ratio - r.a / (2.0 * (1.0 + r.a))).abs() <= 1e-9);
    let increasing = rows.windows(2).all(|w| w[1].ratio > w[0].ratio);
    let last = rows.last().expect("six rows").ratio;
    Ok((exact && increasing && last >= 0.48, format!("ratios exact={exact} increasing={increasing} final={last:.6}")))
}

fn hamilton_failure() -> Outcome {
    let rows = estimates::hamilton_failure_scan(&SCAN_A)?;
    let exact = rows.iter().all(|r| (r.ratio - 2.0 * r.a).abs() <= 1e-9 * (2.0 * r.a));
    let large = rows.iter().filter(|r| r.a >= 8.0).all(|r| r.ratio > 10.0);
    let last = rows.last().expect("six rows").ratio;
    Ok((exact && large, format!("ratio = 2a: {exact}, > 10 for a >= 8: {large}, final={last}")))
}

/// Per fixture: `density²` points over the whole cube.
const CHAIN_DENSITY: usize = 11;

fn chain_points(f: &Fixture) -> Vec<(f64, f64)> {
    lattice::grid2(f.cube.space_range(f.u.manifold()), CHAIN_DENSITY, f.cube.time_range(), CHAIN_DENSITY)
}

fn identity_chain() -> Outcome {
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut min_ineq = f64::INFINITY;
    let mut total = 0;
    for f in corpus::proof_corpus()? {
        let ln_m = f.u.log_sup_with(&f.cube, lattice_density(), 1.0)?.ln_m;
        let pts = chain_points(&f);
        total += pts.len();
        let f_eq = proofcheck::check_f_equation(&f.u, ln_m, &pts)?;
        let grad = proofcheck::check_grad_w(&f.u, ln_m, &pts)?;
        let w_id = proofcheck::check_w_identity(&f.u, ln_m, &pts)?;
        let key = proofcheck::check_key_inequality(&f.u, ln_m, f.k, &pts)?;
        for s in [&f_eq, &grad, &w_id] {
            ok &= s.points >= 100 && s.worst <= 1e-8 && s.passed == Some(true);
            worst = worst.max(s.worst);
        }
        ok &= key.points >= 100 && key.worst >= -1e-8 && key.passed == Some(true);
        min_ineq = min_ineq.min(key.worst);
    }
    Ok((ok, format!("{total} points, worst identity residual {worst:.2e}, min inequality slack {min_ineq:.2e}")))
}

fn lattice_density() -> usize {
    crate::solutions::DEFAULT_LATTICE
}

fn cutoff_constants() -> Outcome {
    let cube = crate::geometry::ParabolicCube::new(0.0, 2.0, 1.0, 1.0)?;
    let c = cutoff::build_cutoff(&cube, 0.5, 4)?;
    let k = c.constants;
    let fine = c.measure(2 * cutoff::DEFAULT_RADIAL_SAMPLES - 1, 801)?;
    let first_ok = (7.99..=8.01).contains(&k.radial_first);
    let inner = c.inner_deviation(41);
    let pairs = [
        (k.radial_first, fine.radial_first),
        (k.radial_second, fine.radial_second),
        (k.time, fine.time),
        (k.gradient_square, fine.gradient_square),
    ];
    let finite = pairs.iter().all(|(a, b)| a.is_finite() && b.is_finite() && *a > 0.0);
    let stable = pairs.iter().all(|(a, b)| (a - b).abs() <= 0.01 * a.abs().max(b.abs()));
    Ok((
        first_ok && inner == 0.0 && finite && stable,
        format!(
            "first={:.4} second={:.4} time={:.4} gradient_square={:.4} inner deviation={inner} stable={stable}",
            k.radial_first, k.radial_second, k.time, k.gradient_square
        ),
    ))
}

fn li_yau_exactness(seed: u64) -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let m = ModelManifold::euclidean(n)?;
        let lo = if n == 1 { -2.0 } else { R_MIN };
        let u = HeatSolution::closed_form(ClosedForm::GaussianKernel { n }, m, Domain::new(lo, 2.0, 0.25, 2.0)?)?;
        for (r, t) in lattice::random_points((0.05, 2.0), (0.25, 2.0), 50, seed.wrapping_add(n as u64)) {
            let lhs = estimates::evaluate_lhs(EstimateId::Ly12, &u, r, t)?;
            let exact = n as f64 / (2.0 * t);
            worst = worst.max((lhs - exact).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max |LHS - n/(2t)| = {worst:.2e} over 3 x 50 points")))
}

fn kernel_gradient_sup() -> Outcome {
    let m = ModelManifold::euclidean(1)?;
    let s = kernelbounds::kernel_gradient_check(&m, &kernelbounds::default_xi_grid(), &[1.0])?;
    let exact = kernelbounds::euclidean_exact_ratio(1, 1.0, 1.0)?;
    let ok = (s.sup - 0.25).abs() <= 1e-6 && (s.at_xi - 1.0).abs() <= 1e-9 && exact == 0.5;
    Ok((ok, format!("sup={:.9} at xi={} exact ratio(1,1)={exact}", s.sup, s.at_xi)))
}

fn kernel_constants() -> Outcome {
    let m = ModelManifold::euclidean(1)?;
    let xi = kernelbounds::default_xi_grid();
    let target = 1.0 / std::f64::consts::PI.sqrt();
    let reports = [1.0, 2.0, 3.0]
        .iter()
        .map(|&d| kernelbounds::li_yau_constants(&m, d, &xi, &[1.0]))
        .collect::<Result<Vec<_>>>()?;
    let r2 = &reports[1];
    let anchored = (r2.c1 - target).abs() <= 1e-3
        && (r2.c2 - target).abs() <= 1e-3
        && r2.c1_xi == 0.0
        && r2.c2_xi == 0.0
        && r2.c1 >= r2.c2;
    // larger δ loosens both sides: c₁ cannot grow, c₂ cannot shrink
    let monotone = reports
        .windows(2)
        .all(|w| w[1].c1 <= w[0].c1 * (1.0 + 1e-12) && w[1].c2 >= w[0].c2 * (1.0 - 1e-12));
    Ok((anchored && monotone, format!("delta=2: c1={:.6} c2={:.6} monotone in delta: {monotone}", r2.c1, r2.c2)))
}

/// Max nodal error against the closed form, at a grid and its refinement,
/// and their ratio.
pub fn convergence_ratio(m: &ModelManifold, data: ClosedForm, spec: GridSpec) -> Result<(f64, f64, f64)> {
    let err = |s: GridSpec| -> Result<f64> {
        let u = HeatSolution::solve_with_closed_form_data(m.clone(), data, s)?;
        let g = u.grid().expect("grid solution");
        let (nr, nt) = g.shape();
        let mut e = 0.0f64;
        for j in 0..nt {
            for i in 0..nr {
                e = e.max((g.at(i, j) - data.value(g.r(i), g.t(j))).abs());
            }
        }
        Ok(e)
    };
    let coarse = err(spec)?;
    let fine = err(spec.refined())?;
    Ok((coarse, fine, coarse / fine))
}

fn solver_convergence() -> Outcome {
    let line = ModelManifold::euclidean(1)?;
    let wave = convergence_ratio(
        &line,
        ClosedForm::TravelingWave { a: 1.0 },
        GridSpec { r_lo: 1.0, r_hi: 3.0, cells: 20, t_lo: 1.0, t_hi: 2.0, steps: 20 },
    )?;
    let h3 = ModelManifold::hyperbolic(3, -1.0)?;
    let kernel = convergence_ratio(
        &h3,
        ClosedForm::Hyperbolic3Kernel,
        GridSpec { r_lo: 0.5, r_hi: 4.0, cells: 35, t_lo: 0.5, t_hi: 1.5, steps: 20 },
    )?;
    let ok = [wave.2, kernel.2].iter().all(|r| (3.2..=4.8).contains(r));
    Ok((ok, format!("traveling wave ratio {:.4}, hyperbolic kernel ratio {:.4}", wave.2, kernel.2)))
}

const LIOUVILLE_RADII: [f64; 3] = [4.0, 16.0, 64.0];

fn liouville_separation() -> Outcome {
    let c = 1.0;
    let constant = liouville::gradient_decay_sweep_a(
        Field::Closed(ClosedForm::Constant { c: 3.0 }),
        0.0,
        0.0,
        &LIOUVILLE_RADII,
        c,
    )?;
    let decay = constant.rows.windows(2).all(|w| w[0].bound >= 4.0 * w[1].bound * (1.0 - 1e-12));
    let wave = Field::Closed(ClosedForm::TravelingWave { a: 1.0 });
    let grow = liouville::gradient_decay_sweep_a(wave, 0.0, -3.0, &LIOUVILLE_RADII, c)?;
    let nondecreasing = grow.rows.windows(2).all(|w| w[1].bound >= w[0].bound);
    let origin = liouville::gradient_decay_sweep_a(wave, 0.0, 0.0, &LIOUVILLE_RADII, c)?;
    let origin_floor = origin.rows.iter().all(|r| r.bound >= 2.0 * c);

    let mut sandwich = true;
    let fields = [
        (Field::Closed(ClosedForm::Linear), 1.0),
        (Field::Closed(ClosedForm::Constant { c: 3.0 }), 0.0),
        (Field::Closed(ClosedForm::SineMode { offset: 0.0, amp: 0.1, freq: 0.05 }), 0.0),
    ];
    for (u, x0) in fields {
        for depth in [TimeDepth::Literal, TimeDepth::Parabolic] {
            let s = liouville::gradient_decay_sweep_b(u, x0, 0.0, &LIOUVILLE_RADII, c, depth)?;
            sandwich &= s.rows.iter().all(|r| r.sandwich_ok && r.log_ratio_max <= 3f64.ln() + 1e-9);
        }
    }
    let linear = liouville::gradient_decay_sweep_b(Field::Closed(ClosedForm::Linear), 1.0, 0.0, &LIOUVILLE_RADII, c, TimeDepth::Literal)?;
    let non_vanishing = linear.rows.iter().all(|r| r.bound >= 2.0 * c);
    let fmt = |rows: &[liouville::SweepRow]| rows.iter().map(|r| format!("{:.4}", r.bound)).collect::<Vec<_>>().join(",");
    Ok((
        decay && nondecreasing && origin_floor && sandwich && non_vanishing,
        format!(
            "constant [{}] wave@(0,-3) [{}] wave@(0,0) [{}] sandwich={sandwich} linear [{}]",
            fmt(&constant.rows),
            fmt(&grow.rows),
            fmt(&origin.rows),
            fmt(&linear.table())
        ),
    ))
}

/// Reports for every applicable estimate on a fixture; estimates that do not
/// apply (misuse, precondition, out-of-domain evaluation) give `None`.
fn reports_for(f: &Fixture, u: &HeatSolution, constant: f64) -> Vec<Option<estimates::EstimateReport>> {
    EstimateId::ALL
        .iter()
        .map(|&id| estimates::report(id, u, &f.cube, f.k, constant, &ReportOptions::default()).ok())
        .collect()
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn scaling_invariance() -> Outcome {
    let mut compared = 0;
    let mut worst = 0.0f64;
    let mut ok = true;
    for f in corpus::full_corpus()? {
        let base = reports_for(&f, &f.u, 1.0);
        for lambda in [0.1, 7.0] {
            let scaled = reports_for(&f, &f.u.scaled(lambda)?, 1.0);
            for (a, b) in base.iter().zip(&scaled) {
                match (a, b) {
                    (Some(a), Some(b)) => {
                        for (x, y) in [(a.lhs_sup, b.lhs_sup), (a.lhs_max, b.lhs_max), (a.ratio, b.ratio)] {
                            ok &= close(x, y);
                            if x != y {
                                worst = worst.max((x - y).abs() / x.abs().max(y.abs()));
                            }
                            compared += 1;
                        }
                    }
                    (None, None) => {}
                    _ => ok = false,
                }
            }
        }
    }
    Ok((ok, format!("{compared} quantities compared, worst relative change {worst:.2e}")))
}

fn constant_closure() -> Outcome {
    let corpus = corpus::full_corpus()?;
    let mut c_hat = 0.0f64;
    for f in &corpus {
        let r = estimates::report(EstimateId::Sz14, &f.u, &f.cube, f.k, 1.0, &ReportOptions::default())?;
        c_hat = c_hat.max(r.ratio);
    }
    if !(c_hat > 0.0) {
        return Ok((false, format!("degenerate empirical constant {c_hat}")));
    }
    let mut worst = 0.0f64;
    let mut count = 0;
    for f in &corpus {
        for r in reports_for(f, &f.u, c_hat).into_iter().flatten() {
            if r.estimate_id == EstimateId::Sz14 {
                worst = worst.max(r.ratio);
                count += 1;
            }
        }
    }
    Ok((worst <= 1.0 + 1e-9, format!("c_hat={c_hat:.6}, {count} reports rerun, max ratio {worst:.12}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(0, 0).is_err());
        assert!(run_criterion(12, 0).is_err());
    }

    #[test]
    fn line_format() {
        let r = CriterionResult { id: 3, name: "x", passed: false, detail: "d".into(), seconds: 0.5, budget_seconds: 1.0 };
        assert!(r.line().starts_with("[FAIL]  3 x"));
    }
}
