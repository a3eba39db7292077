//! Seeded multi-trial convergence experiments and property suites.
//!
//! A run draws one initial vector per trial (entries uniform on `[0, 1)`,
//! shared by all algorithms of that trial), iterates every configured
//! algorithm for `M` steps and averages the per-trial `log10` CE and NR
//! values at each step. Output is CSV with header `algo,n,ce,nr`; undefined
//! means (every trial broke down, or no reference) are written as empty
//! fields.

mod engine;
pub mod suites;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{
    hat_q, hat_q_sym, hyperlink_matrix, normalized_laplacian, poly_to_matrix, spline_filter, sqrt_degree_vector,
    PolyFilter,
};
use crate::graph::Graph;
use crate::limit::{LimitOracle, Scheme};
use crate::matrix::{DiagonalMatrix, GeoMatrix};
use crate::metrics::MetricPoint;
use crate::precond::{check_floor, make_qc, make_qc_sym, schur_norm};
use crate::rng;
use crate::sim::{self, NetworkSim};
use crate::solvers::{extremal_shift, shift_for_eigenvalue, Algorithm, Extremal, ShiftSign};
use crate::C64;

use engine::{is_real, Kernel, Scalar};

pub use suites::{run_suite, CheckReport, PropertyResult, Suite};

pub const DEFAULT_TRIALS: usize = 50;
pub const DEFAULT_C: f64 = 0.01;
/// Length of a reference run, in multiples of `M`.
pub const REFERENCE_FACTOR: usize = 4;
/// Largest order for which reference limits come from the dense oracle.
pub const ORACLE_MAX_N: usize = 128;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    /// JSON graph file.
    File(PathBuf),
    /// Random geometric graph.
    Generate { n: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterSpec {
    /// `(I - L/2)^m`; defaults to the largest eigenvalue 1.
    Spline { m: usize },
    /// `W(i, j) = 1/d_j`; defaults to `λ = 1`.
    Hyperlink,
    /// Normalized Laplacian; defaults to the smallest eigenvalue 0.
    Laplacian,
    /// Polynomial filter file.
    Polyfilter(PathBuf),
    /// Matrix file.
    Matrix(PathBuf),
}

/// `1.5` or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lambda {
    Real(f64),
    Complex([f64; 2]),
}

impl Lambda {
    pub fn value(self) -> C64 {
        match self {
            Lambda::Real(re) => C64::new(re, 0.0),
            Lambda::Complex([re, im]) => C64::new(re, im),
        }
    }
}

fn default_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}

fn default_c() -> f64 {
    DEFAULT_C
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    pub filter: FilterSpec,
    /// Target eigenvalue; the iterations converge to the kernel of `H - λI`
    /// (or of the extremal shift).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Lambda>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extremal: Option<Extremal>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(rename = "M")]
    pub iterations: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Communication range in hops; defaults to what the algorithms need.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::from_json(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut cfg.graph {
            GraphSource::File(p) => resolve(p),
            GraphSource::Generate { .. } => {}
        }
        match &mut cfg.filter {
            FilterSpec::Polyfilter(p) | FilterSpec::Matrix(p) => resolve(p),
            _ => {}
        }
        if let Some(p) = &mut cfg.output {
            resolve(p);
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        check_floor(self.c)?;
        if self.trials < 1 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParameter("no algorithms configured".into()));
        }
        for (k, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..k].contains(a) {
                return Err(Error::InvalidParameter(format!("algorithm `{a}` listed twice")));
            }
        }
        if let GraphSource::Generate { n: 0, .. } = self.graph {
            return Err(Error::InvalidParameter("graph order must be positive".into()));
        }
        if let FilterSpec::Spline { m: 0 } = self.filter {
            return Err(Error::InvalidParameter("spline order must be at least 1".into()));
        }
        if let Some(l) = self.lambda {
            let v = l.value();
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidParameter("lambda must be finite".into()));
            }
        }
        Ok(())
    }
}

/// The matrix `A` whose kernel the iterations approach, with what is known
/// about it.
#[derive(Debug, Clone)]
pub struct Problem {
    pub graph: Arc<Graph>,
    pub h: GeoMatrix,
    pub lambda: C64,
    pub sign: ShiftSign,
    pub a: GeoMatrix,
    /// `A` as a polynomial in width-1 shifts, when available.
    pub poly: Option<PolyFilter>,
    /// A spanning vector of the kernel of `A` when it is known in closed form.
    pub kernel: Option<Vec<C64>>,
    /// Whether the kernel of `A` is the dominant eigenspace of `H`.
    pub dominant: bool,
}

struct Defaults {
    extremal: Option<Extremal>,
    lambda: C64,
    kernel: Vec<C64>,
    dominant: bool,
}

impl Problem {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        let graph = Arc::new(match &cfg.graph {
            GraphSource::File(p) => Graph::load(p)?,
            GraphSource::Generate { n, seed } => Graph::random_geometric(*n, *seed)?,
        });
        Self::new(graph, &cfg.filter, cfg.lambda.map(Lambda::value), cfg.extremal)
    }

    pub fn new(graph: Arc<Graph>, filter: &FilterSpec, lambda: Option<C64>, extremal: Option<Extremal>) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let (h, h_poly, defaults) = match filter {
            FilterSpec::Spline { m } => (
                spline_filter(&graph, *m)?,
                Some(PolyFilter::spline(&graph, *m)?),
                Some(Defaults {
                    extremal: Some(Extremal::Max),
                    lambda: one,
                    kernel: sqrt_degree_vector(&graph),
                    dominant: true,
                }),
            ),
            FilterSpec::Laplacian => {
                let l = normalized_laplacian(&graph);
                (
                    l.clone(),
                    Some(PolyFilter::univariate(l, vec![zero, one])?),
                    Some(Defaults {
                        extremal: Some(Extremal::Min),
                        lambda: zero,
                        kernel: sqrt_degree_vector(&graph),
                        dominant: false,
                    }),
                )
            }
            FilterSpec::Hyperlink => {
                let w = hyperlink_matrix(&graph);
                let degrees = graph.degrees().into_iter().map(|d| C64::new(d as f64, 0.0)).collect();
                (
                    w.clone(),
                    Some(PolyFilter::univariate(w, vec![zero, one])?),
                    Some(Defaults { extremal: None, lambda: one, kernel: degrees, dominant: true }),
                )
            }
            FilterSpec::Polyfilter(p) => {
                let f = PolyFilter::load(graph.clone(), p)?;
                (poly_to_matrix(&f)?, Some(f), None)
            }
            FilterSpec::Matrix(p) => {
                let h = GeoMatrix::load(graph.clone(), p)?;
                let poly = (h.width() <= 1).then(|| PolyFilter::univariate(h.clone(), vec![zero, one])).transpose()?;
                (h, poly, None)
            }
        };

        let (extremal, lambda, known) = match (extremal, lambda, &defaults) {
            (None, None, Some(d)) => (d.extremal, d.lambda, true),
            (None, None, None) => {
                return Err(Error::InvalidParameter("this filter needs an explicit lambda or extremal".into()))
            }
            (Some(e), None, Some(d)) if d.extremal == Some(e) => (Some(e), d.lambda, true),
            (Some(_), None, _) => {
                return Err(Error::InvalidParameter("no default eigenvalue for this extremal choice".into()))
            }
            (e, Some(l), d) => {
                let known = d.as_ref().is_some_and(|d| d.extremal == e && d.lambda == l);
                (e, l, known)
            }
        };
        let (sign, a) = match extremal {
            Some(e) => {
                if lambda.im != 0.0 {
                    return Err(Error::InvalidParameter("an extremal eigenvalue of a Hermitian matrix is real".into()));
                }
                let sign = match e {
                    Extremal::Min => ShiftSign::HMinusLambda,
                    Extremal::Max => ShiftSign::LambdaMinusH,
                };
                (sign, extremal_shift(&h, e, lambda.re)?)
            }
            None => (ShiftSign::HMinusLambda, shift_for_eigenvalue(&h, lambda, ShiftSign::HMinusLambda)?),
        };
        let poly = h_poly.map(|f| shifted_poly(&f, lambda, sign)).transpose()?;
        let (kernel, dominant) = match defaults {
            Some(d) if known => (Some(d.kernel), d.dominant),
            _ => (None, false),
        };
        Ok(Self { graph, h, lambda, sign, a, poly, kernel, dominant })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

/// `f - λ` or `λ - f` as a polynomial in the same shifts.
pub fn shifted_poly(f: &PolyFilter, lambda: C64, sign: ShiftSign) -> Result<PolyFilter> {
    let mut coeffs: Vec<C64> = match sign {
        ShiftSign::HMinusLambda => f.coeffs().to_vec(),
        ShiftSign::LambdaMinusH => f.coeffs().iter().map(|h| -h).collect(),
    };
    match sign {
        ShiftSign::HMinusLambda => coeffs[0] -= lambda,
        ShiftSign::LambdaMinusH => coeffs[0] += lambda,
    }
    PolyFilter::new(f.shifts().to_vec(), f.degrees().to_vec(), coeffs)
}

/// Exchange rounds and messages of a vertex-level realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metering {
    pub rounds_per_iteration: usize,
    pub messages_per_iteration: usize,
    /// Rounds to build the preconditioner at the vertices; `None` when it
    /// needs a global quantity.
    pub setup_rounds: Option<usize>,
    pub setup_messages: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub wall_time_s: f64,
    /// `None` for the power iteration, whose normalization is global.
    pub metering: Option<Metering>,
    pub total_messages: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub n: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub width: usize,
    pub range: usize,
    pub trials: usize,
    #[serde(rename = "M")]
    pub iterations: usize,
    pub algorithms: Vec<AlgorithmSummary>,
}

impl Summary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &AlgorithmSummary> {
        self.algorithms.iter().filter(|a| a.error.is_some())
    }
}

/// Trial-averaged metrics at one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanPoint {
    pub n: usize,
    pub ce: Option<f64>,
    pub nr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub algorithm: Algorithm,
    pub points: Vec<MeanPoint>,
}

impl Curve {
    pub fn at(&self, n: usize) -> Option<&MeanPoint> {
        self.points.get(n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSet {
    pub iterations: usize,
    pub trials: usize,
    pub curves: Vec<Curve>,
}

impl CurveSet {
    pub fn curve(&self, algorithm: Algorithm) -> Option<&Curve> {
        self.curves.iter().find(|c| c.algorithm == algorithm)
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        out.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("algo,n,ce,nr\n");
        let field = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        for c in &self.curves {
            for p in &c.points {
                writeln!(s, "{},{},{},{}", c.algorithm, p.n, field(p.ce), field(p.nr)).expect("string write");
            }
        }
        s
    }
}

/// Mean over trials of the defined values at each step, summed in trial order.
pub fn average_series(series: &[Vec<MetricPoint>]) -> Vec<MeanPoint> {
    let len = series.iter().map(Vec::len).max().unwrap_or(0);
    let mean = |values: &mut dyn Iterator<Item = Option<f64>>| {
        let (sum, count) = values.flatten().fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
        (count > 0).then(|| sum / count as f64)
    };
    (0..len)
        .map(|n| MeanPoint {
            n,
            ce: mean(&mut series.iter().map(|s| s.get(n).and_then(|p| p.ce))),
            nr: mean(&mut series.iter().map(|s| s.get(n).and_then(|p| p.nr))),
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub curves: CurveSet,
    pub summary: Summary,
}

#[derive(Debug, Clone)]
enum AnyKernel {
    Real(Kernel<f64>),
    Complex(Kernel<C64>),
}

impl AnyKernel {
    fn series(&self, x0: &[C64], reference: Option<&[C64]>, steps: usize) -> Vec<MetricPoint> {
        match self {
            AnyKernel::Real(k) => k.series(x0, reference, steps),
            AnyKernel::Complex(k) => k.series(x0, reference, steps),
        }
    }

    fn endpoint(&self, x0: &[C64], steps: usize) -> Option<Vec<C64>> {
        match self {
            AnyKernel::Real(k) => k.endpoint(x0, steps),
            AnyKernel::Complex(k) => k.endpoint(x0, steps),
        }
    }
}

fn kernel_of<T: Scalar>(shape: Shape<'_>) -> Kernel<T> {
    match shape {
        Shape::General(a, q) => Kernel::general(a, q),
        Shape::Symmetric(a, q) => Kernel::symmetric(a, q),
        Shape::Power(a, h) => Kernel::power(a, h),
    }
}

#[derive(Clone, Copy)]
enum Shape<'a> {
    General(&'a GeoMatrix, &'a DiagonalMatrix),
    Symmetric(&'a GeoMatrix, &'a DiagonalMatrix),
    Power(&'a GeoMatrix, &'a GeoMatrix),
}

enum Reference {
    Fixed(Vec<C64>),
    Oracle(LimitOracle),
    LongRun,
}

struct Plan {
    kernel: AnyKernel,
    reference: Reference,
    metering: Option<Metering>,
}

/// Preconditioner of an algorithm, or `None` for the power iteration.
pub fn preconditioner(problem: &Problem, algorithm: Algorithm, c: f64) -> Result<Option<DiagonalMatrix>> {
    let a = &problem.a;
    let need_poly = || {
        problem.poly.as_ref().ok_or_else(|| {
            Error::InvalidInput(format!("`{algorithm}` needs the matrix as a polynomial in width-1 shifts"))
        })
    };
    Ok(Some(match algorithm {
        Algorithm::Pgda => make_qc(a, c)?,
        Algorithm::Spgda => make_qc_sym(a, c)?,
        Algorithm::Pgda1h => hat_q(need_poly()?, c)?,
        Algorithm::Spgda1h => hat_q_sym(need_poly()?, c)?,
        Algorithm::Gdaschur | Algorithm::Sgdaschur => {
            let s = schur_norm(a);
            if !(s > 0.0) {
                return Err(Error::InvalidInput("the Schur norm of the zero matrix is not a step size".into()));
            }
            DiagonalMatrix::constant(a.n(), s)?
        }
        Algorithm::Power => return Ok(None),
    }))
}

fn meter(sim: &mut NetworkSim) -> (usize, usize) {
    let r = (sim.round_count(), sim.total_messages());
    sim.reset_meters();
    r
}

/// Rounds and messages of one vertex-level iteration (and of the
/// preconditioner setup) on the given network.
fn metering(
    problem: &Problem,
    algorithm: Algorithm,
    q: &DiagonalMatrix,
    c: f64,
    range: usize,
) -> Result<Option<Metering>> {
    let mut sim = NetworkSim::new(problem.graph.clone(), range);
    let x0 = vec![C64::new(1.0, 0.0); problem.n()];
    let a = &problem.a;
    let zero = C64::new(0.0, 0.0);
    let (setup, iteration) = match algorithm {
        Algorithm::Pgda => {
            sim::distributed_p(&mut sim, a)?;
            let setup = meter(&mut sim);
            sim::run_pgda(&mut sim, a, zero, q, &x0, 1)?;
            (Some(setup), meter(&mut sim))
        }
        Algorithm::Gdaschur => {
            sim::run_pgda(&mut sim, a, zero, q, &x0, 1)?;
            (None, meter(&mut sim))
        }
        Algorithm::Spgda => {
            sim::run_spgda(&mut sim, a, q, &x0, 1)?;
            (Some((0, 0)), meter(&mut sim))
        }
        Algorithm::Sgdaschur => {
            sim::run_spgda(&mut sim, a, q, &x0, 1)?;
            (None, meter(&mut sim))
        }
        Algorithm::Pgda1h | Algorithm::Spgda1h => {
            let f = problem.poly.as_ref().expect("checked by preconditioner");
            sim::construct_hatq_distributed(&mut sim, f, c)?;
            let setup = meter(&mut sim);
            if algorithm == Algorithm::Pgda1h {
                sim::run_poly_pgda(&mut sim, f, q, &x0, 1)?;
            } else {
                sim::run_poly_spgda(&mut sim, f, q, &x0, 1)?;
            }
            (Some(setup), meter(&mut sim))
        }
        Algorithm::Power => return Ok(None),
    };
    Ok(Some(Metering {
        rounds_per_iteration: iteration.0,
        messages_per_iteration: iteration.1,
        setup_rounds: setup.map(|s| s.0),
        setup_messages: setup.map(|s| s.1),
    }))
}

fn plan(problem: &Problem, algorithm: Algorithm, c: f64, range: usize) -> Result<Plan> {
    let a = &problem.a;
    let needed = match algorithm {
        Algorithm::Pgda1h | Algorithm::Spgda1h => 1,
        Algorithm::Power => problem.h.width(),
        _ => a.width(),
    };
    if needed > range {
        return Err(Error::RangeViolation { width: needed, range });
    }
    let q = preconditioner(problem, algorithm, c)?;
    let shape = match (&q, algorithm.is_symmetric()) {
        (None, _) => Shape::Power(a, &problem.h),
        (Some(q), false) => Shape::General(a, q),
        (Some(q), true) => Shape::Symmetric(a, q),
    };
    let real = is_real(a) && is_real(&problem.h);
    let kernel = if real { AnyKernel::Real(kernel_of(shape)) } else { AnyKernel::Complex(kernel_of(shape)) };
    let reference = match (&problem.kernel, &q) {
        (Some(u), None) if problem.dominant => Reference::Fixed(u.clone()),
        (Some(u), Some(_)) => Reference::Fixed(u.clone()),
        (_, Some(q)) if problem.n() <= ORACLE_MAX_N => {
            let scheme = if algorithm.is_symmetric() { Scheme::Symmetric } else { Scheme::General };
            Reference::Oracle(LimitOracle::new(a, q, scheme)?)
        }
        _ => Reference::LongRun,
    };
    let metering = match &q {
        Some(q) => metering(problem, algorithm, q, c, range)?,
        None => None,
    };
    Ok(Plan { kernel, reference, metering })
}

/// Wall clock; reads zero where the platform has none (browser wasm).
struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn seconds(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.start.elapsed().as_secs_f64();
        #[cfg(target_arch = "wasm32")]
        return 0.0;
    }
}

/// Per-trial CE/NR series of one algorithm.
fn trial_series(plan: &Plan, seed: u64, trials: usize, n: usize, steps: usize) -> Result<Vec<Vec<MetricPoint>>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let x0 = rng::trial_initial_vector(seed, t as u64, n);
            let reference = match &plan.reference {
                Reference::Fixed(u) => Some(u.clone()),
                Reference::Oracle(o) => Some(o.limit(&x0)?),
                Reference::LongRun => plan.kernel.endpoint(&x0, REFERENCE_FACTOR * steps),
            };
            Ok(plan.kernel.series(&x0, reference.as_deref(), steps))
        })
        .collect()
}

/// Runs every configured algorithm. Algorithms that cannot run on this
/// problem (range violation, no polynomial form) are skipped and reported in
/// the summary; configuration errors abort the run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let problem = Problem::from_config(cfg)?;
    run_problem(&problem, cfg)
}

pub fn run_problem(problem: &Problem, cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let width = problem.a.width();
    let range = cfg.range.unwrap_or(width.max(problem.h.width()).max(1));
    let n = problem.n();
    let mut curves = Vec::new();
    let mut summaries = Vec::new();
    for &algorithm in &cfg.algorithms {
        let start = Stopwatch::start();
        let outcome = plan(problem, algorithm, cfg.c, range)
            .and_then(|p| Ok((trial_series(&p, cfg.seed, cfg.trials, n, cfg.iterations)?, p.metering)));
        let wall_time_s = start.seconds();
        match outcome {
            Ok((series, metering)) => {
                curves.push(Curve { algorithm, points: average_series(&series) });
                let total_messages = metering.as_ref().map(|m| {
                    m.setup_messages.unwrap_or(0) + m.messages_per_iteration * cfg.iterations
                });
                summaries.push(AlgorithmSummary { algorithm, wall_time_s, metering, total_messages, error: None });
            }
            Err(e) => {
                log::warn!("{algorithm}: {e}");
                summaries.push(AlgorithmSummary {
                    algorithm,
                    wall_time_s,
                    metering: None,
                    total_messages: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    Ok(RunReport {
        curves: CurveSet { iterations: cfg.iterations, trials: cfg.trials, curves },
        summary: Summary {
            n,
            edges: problem.graph.edge_count(),
            mean_degree: problem.graph.mean_degree(),
            width,
            range,
            trials: cfg.trials,
            iterations: cfg.iterations,
            algorithms: summaries,
        },
    })
}
