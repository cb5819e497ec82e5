//! Command-line driver.
//!
//! Exit codes: 0 on success, 1 when a check or assertion fails (the output is
//! still written), 2 for invalid flags or parameters.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::acceptance;
use crate::error::{Error, Result};
use crate::estimates::{self, EstimateId, ReportOptions};
use crate::geometry::{ModelManifold, ParabolicCube};
use crate::kernelbounds;
use crate::lattice;
use crate::liouville::{self, Field, TimeDepth};
use crate::output;
use crate::proofcheck::{self, cutoff};
use crate::solutions::{ClosedForm, Domain, GridSpec, HeatSolution, DEFAULT_LATTICE};

#[derive(Parser, Debug)]
#[command(name = "heatgrad", version, about = "Checks gradient estimates for positive heat-equation solutions")]
pub struct Cli {
    /// Seed for any random point sets.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One estimate on one solution and cube.
    Estimate(EstimateArgs),
    /// Ratio sweep for the traveling wave at (2, 2).
    Sharpness(ScanArgs),
    /// Hamilton-type estimate against the traveling wave at (2, 2).
    HamiltonFailure(ScanArgs),
    /// Identity chain and inner-region conclusion.
    Proof(ProofArgs),
    /// Cutoff constants and, with a solution, the term table.
    Cutoff(CutoffArgs),
    /// Two-sided kernel constants and the kernel gradient sweep.
    Kernel(KernelArgs),
    /// Gradient-decay sweeps over a ladder of radii.
    Liouville(LiouvilleArgs),
    /// Full acceptance suite.
    Accept(AcceptArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CubeArgs {
    /// `x_lo,x_hi,t_lo,t_hi` on a line.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub cube: Option<Vec<f64>>,
    /// Ball centre (line coordinate, or distance from the pole).
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    #[arg(long = "R", allow_negative_numbers = true)]
    pub radius: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    #[arg(long = "T", allow_negative_numbers = true)]
    pub depth: Option<f64>,
}

impl CubeArgs {
    fn resolve(&self, default: Option<ParabolicCube>) -> Result<ParabolicCube> {
        let base = match &self.cube {
            Some(v) if v.len() != 4 => return Err(Error::param("--cube takes x_lo,x_hi,t_lo,t_hi")),
            Some(v) => Some(ParabolicCube::from_intervals(v[0], v[1], v[2], v[3])?),
            None => default,
        };
        let pick = |flag: Option<f64>, fallback: Option<f64>, name: &str| {
            flag.or(fallback).ok_or_else(|| Error::param(format!("missing --cube or --{name}")))
        };
        ParabolicCube::new(
            pick(self.x0, base.map(|c| c.center), "x0")?,
            pick(self.radius, base.map(|c| c.radius), "R")?,
            pick(self.t0, base.map(|c| c.t0), "t0")?,
            pick(self.depth, base.map(|c| c.depth), "T")?,
        )
    }
}

#[derive(Args, Debug, Clone)]
pub struct SolutionArgs {
    /// `kind[:key=value,...]`, e.g. `traveling-wave:a=1`, `gaussian:n=2`,
    /// `constant:c=3`, `linear`, `hyperbolic3-kernel`,
    /// `sine:offset=2,amp=1,freq=1`, `sphere-harmonic:offset=2`.
    #[arg(long)]
    pub solution: String,
    /// `kind[:key=value,...]`: `euclidean:n=1`, `hyperbolic:n=3,kappa=-1`,
    /// `sphere:n=2,kappa=1`. Defaults to the model the solution lives on.
    #[arg(long)]
    pub model: Option<String>,
    /// Replace the closed form by a Crank–Nicolson solve with its data:
    /// `cells,steps` over the cube's box.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// `cy11`, `ly12`, `ham13`, `sz14` or `sz15`.
    #[arg(long)]
    pub id: String,
    #[command(flatten)]
    pub solution: SolutionArgs,
    #[command(flatten)]
    pub cube: CubeArgs,
    #[arg(long = "c", default_value_t = 1.0, allow_negative_numbers = true)]
    pub constant: f64,
    /// Second constant of the time-ratio estimate.
    #[arg(long = "c2", default_value_t = 1.0, allow_negative_numbers = true)]
    pub constant2: f64,
    /// Ricci lower bound; defaults to the model's.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_LATTICE)]
    pub density: usize,
    /// Factor on the lattice sup of u.
    #[arg(long)]
    pub m_safety: Option<f64>,
    /// `x,t`: also report both sides at this point.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub at: Option<Vec<f64>>,
    /// `x,y,t`: add the two-point log comparison.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub harnack: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long = "a", value_delimiter = ',', default_value = "1,2,4,8,16,32", allow_negative_numbers = true)]
    pub a_values: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct ProofArgs {
    #[command(flatten)]
    pub solution: SolutionArgs,
    #[command(flatten)]
    pub cube: CubeArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Lattice points per axis over the cube.
    #[arg(long, default_value_t = 11)]
    pub density: usize,
    /// Use this many seeded random points instead of the lattice.
    #[arg(long)]
    pub random: Option<usize>,
    /// Constant for the inner-region conclusion.
    #[arg(long = "c", default_value_t = 1.0, allow_negative_numbers = true)]
    pub constant: f64,
}

#[derive(Args, Debug)]
pub struct CutoffArgs {
    #[command(flatten)]
    pub cube: CubeArgs,
    #[arg(long = "a", default_value_t = 0.5, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long = "p", default_value_t = 4)]
    pub p: u32,
    #[arg(long, default_value_t = cutoff::DEFAULT_RADIAL_SAMPLES)]
    pub radial_samples: usize,
    #[arg(long, default_value_t = 401)]
    pub time_samples: usize,
    /// Solution for the term table.
    #[arg(long)]
    pub solution: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Constant for the term bounds; calibrated when absent.
    #[arg(long = "c", allow_negative_numbers = true)]
    pub constant: Option<f64>,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[arg(long, default_value = "euclidean:n=1")]
    pub model: String,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = kernelbounds::XI_MAX)]
    pub xi_max: f64,
    #[arg(long, default_value_t = kernelbounds::XI_POINTS)]
    pub xi_points: usize,
    /// `d,t`: replay the gradient-bound derivation (Euclidean only).
    #[arg(long, value_delimiter = ',')]
    pub derive: Option<Vec<f64>>,
    /// Constant for the derivation; measured when absent.
    #[arg(long = "c", allow_negative_numbers = true)]
    pub constant: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Part {
    A,
    B,
}

#[derive(Args, Debug)]
pub struct LiouvilleArgs {
    #[arg(long, value_enum, default_value_t = Part::A)]
    pub part: Part,
    #[arg(long)]
    pub solution: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t0: f64,
    #[arg(long, value_delimiter = ',', default_value = "4,16,64", allow_negative_numbers = true)]
    pub radii: Vec<f64>,
    #[arg(long = "c", default_value_t = 1.0, allow_negative_numbers = true)]
    pub constant: f64,
    /// Time depth of the part-(b) cube: `literal` (√(2R)) or `parabolic` ((2R)²).
    #[arg(long, default_value = "literal")]
    pub depth: String,
}

#[derive(Args, Debug)]
pub struct AcceptArgs {
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<usize>>,
}

fn parse_kv(spec: &str) -> Result<(String, BTreeMap<String, f64>)> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = BTreeMap::new();
    for part in rest.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::param(format!("expected key=value, got {part:?}")))?;
        let v: f64 = v.trim().parse().map_err(|_| Error::param(format!("not a number: {v:?}")))?;
        params.insert(k.trim().to_string(), v);
    }
    Ok((kind.trim().to_string(), params))
}

fn take(params: &mut BTreeMap<String, f64>, key: &str, default: Option<f64>) -> Result<f64> {
    params.remove(key).or(default).ok_or_else(|| Error::param(format!("missing parameter {key}")))
}

fn dimension(params: &mut BTreeMap<String, f64>, default: Option<f64>) -> Result<usize> {
    let n = take(params, "n", default)?;
    if !(n >= 1.0) || n.fract() != 0.0 {
        return Err(Error::param(format!("dimension must be a positive integer, got {n}")));
    }
    Ok(n as usize)
}

fn no_leftovers(params: BTreeMap<String, f64>, kind: &str) -> Result<()> {
    match params.keys().next() {
        Some(k) => Err(Error::param(format!("unknown parameter {k} for {kind}"))),
        None => Ok(()),
    }
}

pub fn parse_solution(spec: &str) -> Result<ClosedForm> {
    let (kind, mut p) = parse_kv(spec)?;
    let form = match kind.as_str() {
        "constant" => ClosedForm::Constant { c: take(&mut p, "c", Some(1.0))? },
        "traveling-wave" | "traveling_wave" => ClosedForm::TravelingWave { a: take(&mut p, "a", Some(1.0))? },
        "linear" => ClosedForm::Linear,
        "gaussian" | "gaussian-kernel" | "gaussian_kernel" => ClosedForm::GaussianKernel { n: dimension(&mut p, Some(1.0))? },
        "hyperbolic3-kernel" | "hyperbolic3_kernel" => ClosedForm::Hyperbolic3Kernel,
        "sine" | "sine-mode" | "sine_mode" => ClosedForm::SineMode {
            offset: take(&mut p, "offset", Some(0.0))?,
            amp: take(&mut p, "amp", Some(1.0))?,
            freq: take(&mut p, "freq", Some(1.0))?,
        },
        "sphere-harmonic" | "sphere_harmonic" => ClosedForm::SphereHarmonic { offset: take(&mut p, "offset", Some(2.0))? },
        _ => return Err(Error::param(format!("unknown solution kind {kind:?}"))),
    };
    no_leftovers(p, &kind)?;
    Ok(form)
}

pub fn parse_model(spec: &str) -> Result<ModelManifold> {
    let (kind, mut p) = parse_kv(spec)?;
    let m = match kind.as_str() {
        "euclidean" => ModelManifold::euclidean(dimension(&mut p, Some(1.0))?)?,
        "hyperbolic" => ModelManifold::hyperbolic(dimension(&mut p, Some(3.0))?, take(&mut p, "kappa", Some(-1.0))?)?,
        "sphere" => ModelManifold::sphere(dimension(&mut p, Some(2.0))?, take(&mut p, "kappa", Some(1.0))?)?,
        _ => return Err(Error::param(format!("unknown model kind {kind:?}"))),
    };
    no_leftovers(p, &kind)?;
    Ok(m)
}

fn native_model(form: &ClosedForm) -> Result<ModelManifold> {
    match form {
        ClosedForm::GaussianKernel { n } => ModelManifold::euclidean(*n),
        ClosedForm::Hyperbolic3Kernel => ModelManifold::hyperbolic(3, -1.0),
        ClosedForm::SphereHarmonic { .. } => ModelManifold::sphere(2, 1.0),
        _ => ModelManifold::euclidean(1),
    }
}

/// Builds the solution on exactly the cube's box, or solves on it with `grid`.
fn build_solution(form: &str, model: Option<&str>, grid: Option<&[usize]>, cube: &ParabolicCube) -> Result<HeatSolution> {
    let form = parse_solution(form)?;
    let m = match model {
        Some(s) => parse_model(s)?,
        None => native_model(&form)?,
    };
    let (r_lo, r_hi) = cube.space_range(&m);
    let (t_lo, t_hi) = cube.time_range();
    match grid {
        Some(g) => {
            let spec = GridSpec { r_lo, r_hi, cells: g[0], t_lo, t_hi, steps: g[1] };
            HeatSolution::solve_with_closed_form_data(m, form, spec)
        }
        None => HeatSolution::closed_form(form, m, Domain::new(r_lo, r_hi, t_lo, t_hi)?),
    }
}

/// Serialized artifact plus whether every check in it held.
struct Artifact {
    body: String,
    ok: bool,
    failure: String,
}

fn emit<J: Serialize, C: Serialize>(format: Format, json: &J, rows: &[C], ok: bool, failure: String) -> Result<Artifact> {
    let body = match format {
        Format::Json => output::to_json(json)?,
        Format::Csv => output::to_csv(rows)?,
    };
    Ok(Artifact { body, ok, failure })
}

fn arity(name: &str, v: &Option<Vec<impl Copy>>, n: usize) -> Result<()> {
    match v {
        Some(v) if v.len() != n => Err(Error::param(format!("--{name} takes {n} comma-separated values"))),
        _ => Ok(()),
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::param(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct EstimateOut {
    #[serde(flatten)]
    report: estimates::EstimateReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    harnack: Option<estimates::HarnackCheck>,
}

fn run_estimate(a: &EstimateArgs, format: Format) -> Result<Artifact> {
    let id: EstimateId = a.id.parse()?;
    arity("at", &a.at, 2)?;
    arity("harnack", &a.harnack, 3)?;
    arity("grid", &a.solution.grid, 2)?;
    positive("constant", a.constant)?;
    if let Some(s) = a.m_safety {
        if !(s >= 1.0) {
            return Err(Error::param(format!("m-safety must be >= 1, got {s}")));
        }
    }
    let cube = a.cube.resolve(None)?;
    let u = build_solution(&a.solution.solution, a.solution.model.as_deref(), a.solution.grid.as_deref(), &cube)?;
    let k = a.k.unwrap_or(u.manifold().k());
    let opts = ReportOptions {
        density: a.density,
        m_safety: a.m_safety,
        constant2: a.constant2,
        at: a.at.as_ref().map(|v| (v[0], v[1])),
    };
    let report = estimates::report(id, &u, &cube, k, a.constant, &opts)?;
    let harnack = match &a.harnack {
        Some(v) => Some(estimates::harnack_theta(&u, &cube, v[0], v[1], v[2], a.constant)?),
        None => None,
    };
    let ok = harnack.as_ref().map_or(true, |h| h.holds);
    let failure = if ok { String::new() } else { "two-point comparison fails".into() };
    let row = [report.clone()];
    emit(format, &EstimateOut { report, harnack }, &row, ok, failure)
}

#[derive(Serialize)]
struct Rows<T> {
    rows: Vec<T>,
}

fn run_scan(a: &ScanArgs, format: Format, hamilton: bool) -> Result<Artifact> {
    if hamilton {
        let rows = estimates::hamilton_failure_scan(&a.a_values)?;
        emit(format, &Rows { rows: rows.clone() }, &rows, true, String::new())
    } else {
        let rows = estimates::sharpness_scan(&a.a_values)?;
        emit(format, &Rows { rows: rows.clone() }, &rows, true, String::new())
    }
}

#[derive(Serialize)]
struct ProofOut {
    solution: String,
    #[serde(rename = "ln_M")]
    ln_m: f64,
    k: f64,
    checks: Vec<proofcheck::CheckSummary>,
    conclusion: proofcheck::ConclusionCheck,
}

fn run_proof(a: &ProofArgs, seed: u64, format: Format) -> Result<Artifact> {
    positive("constant", a.constant)?;
    arity("grid", &a.solution.grid, 2)?;
    if a.density < 2 {
        return Err(Error::param("density must be at least 2"));
    }
    let cube = a.cube.resolve(None)?;
    let u = build_solution(&a.solution.solution, a.solution.model.as_deref(), a.solution.grid.as_deref(), &cube)?;
    let k = a.k.unwrap_or(u.manifold().k());
    let ln_m = u.log_sup_with(&cube, DEFAULT_LATTICE, 1.0)?.ln_m;
    let (rr, tr) = (cube.space_range(u.manifold()), cube.time_range());
    let points = match a.random {
        Some(n) => lattice::random_points(rr, tr, n, seed),
        None => lattice::grid2(rr, a.density, tr, a.density),
    };
    let checks = proofcheck::identity_chain(&u, ln_m, k, &points)?;
    let conclusion = proofcheck::conclusion_check(&u, &cube, ln_m, k, a.constant, a.density)?;
    let failed: Vec<&str> = checks.iter().filter(|c| c.passed == Some(false)).map(|c| c.check).collect();
    let ok = failed.is_empty();
    let failure = format!("failing checks: {}", failed.join(", "));
    let out = ProofOut { solution: u.describe(), ln_m, k, checks: checks.clone(), conclusion };
    emit(format, &out, &checks, ok, failure)
}

#[derive(Serialize)]
struct CutoffOut {
    profile: cutoff::CutoffProfile,
    inner_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<cutoff::CutoffTermTable>,
}

fn run_cutoff(a: &CutoffArgs, format: Format) -> Result<Artifact> {
    let cube = a.cube.resolve(None)?;
    let mut profile = cutoff::build_cutoff(&cube, a.a, a.p)?;
    profile.constants = profile.measure(a.radial_samples, a.time_samples)?;
    let inner_deviation = profile.inner_deviation(41);
    let terms = match &a.solution {
        Some(s) => {
            if let Some(c) = a.constant {
                positive("constant", c)?;
            }
            let u = build_solution(s, a.model.as_deref(), None, &cube)?;
            let k = a.k.unwrap_or(u.manifold().k());
            let ln_m = u.log_sup_with(&cube, DEFAULT_LATTICE, 1.0)?.ln_m;
            Some(cutoff::verify_cutoff_terms(&u, ln_m, k, &profile, a.constant, None)?)
        }
        None => None,
    };
    let ok = inner_deviation == 0.0 && terms.as_ref().map_or(true, |t| t.all_hold(1e-9));
    let failure = "cutoff term bound or inner region check fails".to_string();
    let out = CutoffOut { profile: profile.clone(), inner_deviation, terms: terms.clone() };
    match &terms {
        Some(t) => emit(format, &out, &t.terms, ok, failure),
        None => emit(format, &out, &[profile.constants], ok, failure),
    }
}

#[derive(Serialize)]
struct KernelOut {
    report: kernelbounds::KernelBoundReport,
    gradient_sup: f64,
    gradient_sup_xi: f64,
    gradient_sup_t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivation: Option<kernelbounds::Thm13Trace>,
}

fn run_kernel(a: &KernelArgs, format: Format) -> Result<Artifact> {
    positive("xi-max", a.xi_max)?;
    arity("derive", &a.derive, 2)?;
    if a.xi_points < 2 {
        return Err(Error::param("xi-points must be at least 2"));
    }
    let m = parse_model(&a.model)?;
    let xi = lattice::linspace(0.0, a.xi_max, a.xi_points);
    let times = kernelbounds::default_times(&m);
    let report = kernelbounds::li_yau_constants(&m, a.delta, &xi, &times)?;
    let sweep = kernelbounds::kernel_gradient_check(&m, &xi, &times)?;
    let derivation = match &a.derive {
        Some(v) => Some(kernelbounds::thm13_pipeline(&m, v[0], v[1], a.delta, a.constant)?),
        None => None,
    };
    let ok = derivation.as_ref().map_or(true, |d| d.holds);
    let out = KernelOut {
        report,
        gradient_sup: sweep.sup,
        gradient_sup_xi: sweep.at_xi,
        gradient_sup_t: sweep.at_t,
        derivation,
    };
    emit(format, &out, &sweep.rows, ok, "derived gradient bound chain fails".into())
}

fn run_liouville(a: &LiouvilleArgs, format: Format) -> Result<Artifact> {
    positive("constant", a.constant)?;
    let form = parse_solution(&a.solution)?;
    let field = Field::Closed(form);
    match a.part {
        Part::A => {
            let s = liouville::gradient_decay_sweep_a(field, a.x0, a.t0, &a.radii, a.constant)?;
            let ok = s.rows.iter().all(|r| r.verdict == "consistent");
            emit(format, &s, &s.rows, ok, "gradient exceeds the bound".into())
        }
        Part::B => {
            let depth: TimeDepth = a.depth.parse()?;
            let s = liouville::gradient_decay_sweep_b(field, a.x0, a.t0, &a.radii, a.constant, depth)?;
            let ok = s.rows.iter().all(|r| r.verdict == "consistent" && r.sandwich_ok);
            emit(format, &s, &s.table(), ok, "sandwich or gradient bound fails".into())
        }
    }
}

#[derive(Serialize)]
struct AcceptOut {
    criteria: Vec<acceptance::CriterionResult>,
    passed: bool,
}

fn run_accept(a: &AcceptArgs, seed: u64, format: Format) -> Result<Artifact> {
    let ids: Vec<usize> = a.only.clone().unwrap_or_else(|| (1..=acceptance::CRITERIA).collect());
    let mut results = Vec::with_capacity(ids.len());
    for id in ids {
        let r = acceptance::run_criterion(id, seed)?;
        eprintln!("{}", r.line());
        results.push(r);
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| format!("{} {}", r.id, r.name)).collect();
    let ok = failed.is_empty();
    let failure = format!("failing criteria: {}", failed.join(", "));
    let out = AcceptOut { criteria: results.clone(), passed: ok };
    emit(format, &out, &results, ok, failure)
}

fn dispatch(cli: &Cli) -> Result<Artifact> {
    match &cli.command {
        Command::Estimate(a) => run_estimate(a, cli.format),
        Command::Sharpness(a) => run_scan(a, cli.format, false),
        Command::HamiltonFailure(a) => run_scan(a, cli.format, true),
        Command::Proof(a) => run_proof(a, cli.seed, cli.format),
        Command::Cutoff(a) => run_cutoff(a, cli.format),
        Command::Kernel(a) => run_kernel(a, cli.format),
        Command::Liouville(a) => run_liouville(a, cli.format),
        Command::Accept(a) => run_accept(a, cli.seed, cli.format),
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> ExitCode {
    let artifact = match dispatch(&cli) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("heatgrad: {e}");
            return ExitCode::from(if matches!(e, Error::InvalidParameter(_) | Error::InvalidProfile(_)) { 2 } else { 1 });
        }
    };
    let written = match &cli.out {
        Some(path) => output::write_atomic(path, &artifact.body),
        None => {
            print!("{}", artifact.body);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("heatgrad: {e}");
        return ExitCode::from(1);
    }
    if !artifact.ok {
        eprintln!("heatgrad: {}", artifact.failure);
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!(parse_solution("traveling-wave:a=2").unwrap(), ClosedForm::TravelingWave { a: 2.0 });
        assert_eq!(parse_solution("gaussian:n=3").unwrap(), ClosedForm::GaussianKernel { n: 3 });
        assert!(parse_solution("gaussian:n=1.5").is_err());
        assert!(parse_solution("traveling-wave:b=2").is_err());
        assert!(parse_solution("wave").is_err());
        assert_eq!(parse_model("hyperbolic:n=3,kappa=-1").unwrap().k(), 2.0);
    }

    #[test]
    fn cube_flags() {
        let c = CubeArgs { cube: Some(vec![1.0, 3.0, 1.0, 2.0]), x0: None, radius: Some(0.5), t0: None, depth: None };
        let q = c.resolve(None).unwrap();
        assert_eq!((q.center, q.radius, q.t0, q.depth), (2.0, 0.5, 2.0, 1.0));
        let bad = CubeArgs { cube: None, x0: Some(0.0), radius: Some(-1.0), t0: Some(1.0), depth: Some(1.0) };
        assert!(matches!(bad.resolve(None), Err(Error::InvalidParameter(_))));
    }
}
