use std::sync::Arc;

use serde::Serialize;

use sdn_eigen::error::{Error, Result};
use sdn_eigen::experiment::{preconditioner, run_experiment, ExperimentConfig, FilterSpec, GraphSource, Problem};
use sdn_eigen::graph::Graph;
use sdn_eigen::metrics::MetricEvaluator;
use sdn_eigen::rng::trial_initial_vector;
use sdn_eigen::solvers::{drive, norm2, Algorithm, PgdaStep, PowerStep, SpgdaStep};
use sdn_eigen::C64;

pub const MAX_N: usize = 1024;
pub const MAX_ITERATIONS: usize = 20_000;
pub const MAX_TRIALS: usize = 50;
/// Points kept per NR trace.
pub const TRACE_POINTS: usize = 200;

fn bounded(name: &str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in {lo}..={hi}, got {value}")))
    }
}

#[derive(Serialize)]
struct GraphView {
    n: usize,
    edges: Vec<(usize, usize)>,
    coords: Vec<[f64; 2]>,
    mean_degree: f64,
    diameter: usize,
}

pub fn graph(n: usize, seed: u64) -> Result<String> {
    bounded("n", n, 1, MAX_N)?;
    let g = Graph::random_geometric(n, seed)?;
    let view = GraphView {
        n,
        edges: g.edges(),
        coords: g.coords().map(<[_]>::to_vec).unwrap_or_default(),
        mean_degree: g.mean_degree(),
        diameter: g.diameter(),
    };
    Ok(serde_json::to_string(&view)?)
}

pub fn curves(n: usize, seed: u64, m: usize, iterations: usize, trials: usize) -> Result<String> {
    bounded("n", n, 1, MAX_N)?;
    bounded("m", m, 1, 6)?;
    bounded("iterations", iterations, 0, MAX_ITERATIONS)?;
    bounded("trials", trials, 1, MAX_TRIALS)?;
    let cfg = ExperimentConfig {
        graph: GraphSource::Generate { n, seed },
        filter: FilterSpec::Spline { m },
        lambda: None,
        extremal: None,
        algorithms: Algorithm::ALL.to_vec(),
        c: 0.01,
        iterations,
        trials,
        seed,
        range: None,
        output: None,
    };
    Ok(serde_json::to_string(&run_experiment(&cfg)?.curves)?)
}

fn filter_spec(name: &str) -> Result<FilterSpec> {
    Ok(match name {
        "laplacian" => FilterSpec::Laplacian,
        "hyperlink" => FilterSpec::Hyperlink,
        _ => match name.strip_prefix("spline") {
            Some(m) => FilterSpec::Spline {
                m: m.parse().map_err(|_| Error::InvalidParameter(format!("unknown filter `{name}`")))?,
            },
            None => return Err(Error::InvalidParameter(format!("unknown filter `{name}`"))),
        },
    })
}

#[derive(Serialize)]
struct EigenvectorView {
    algorithm: Algorithm,
    /// Real parts after rotating the largest entry onto the positive axis,
    /// scaled to unit maximum.
    values: Vec<f64>,
    /// `(n, NR)` at up to [`TRACE_POINTS`] steps.
    nr: Vec<(usize, f64)>,
    breakdown: Option<usize>,
}

pub fn eigenvector(n: usize, seed: u64, filter: &str, algorithm: &str, iterations: usize) -> Result<String> {
    bounded("n", n, 1, MAX_N)?;
    bounded("iterations", iterations, 0, MAX_ITERATIONS)?;
    let algorithm = Algorithm::parse(algorithm)?;
    let g = Arc::new(Graph::random_geometric(n, seed)?);
    let problem = Problem::new(g, &filter_spec(filter)?, None, None)?;
    let x0 = trial_initial_vector(seed, 0, n);
    let every = (iterations / TRACE_POINTS).max(1);
    let mut eval = MetricEvaluator::new(&problem.a, &x0);
    let mut nr = Vec::new();
    let mut last = x0.clone();
    let mut observe = |k: usize, x: &[C64]| {
        if k.is_multiple_of(every) || k == iterations {
            if let Some(v) = eval.point(k, x).nr {
                nr.push((k, v));
            }
        }
        if k == iterations {
            last = x.to_vec();
        }
    };
    let breakdown = match preconditioner(&problem, algorithm, 0.01)? {
        None => {
            let start: Vec<C64> = x0.iter().map(|z| z / norm2(&x0)).collect();
            drive(&mut PowerStep::new(&problem.h), &start, iterations, &mut observe)
        }
        Some(q) if algorithm.is_symmetric() => drive(&mut SpgdaStep::new(&problem.a, &q)?, &x0, iterations, &mut observe),
        Some(q) => drive(&mut PgdaStep::new(&problem.a, &q)?, &x0, iterations, &mut observe),
    };
    let big = last.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
    let scale = if big.norm() > 0.0 { big.conj() / (big.norm() * big.norm()) } else { C64::new(0.0, 0.0) };
    let values = last.iter().map(|z| (z * scale).re).collect();
    Ok(serde_json::to_string(&EigenvectorView { algorithm, values, nr, breakdown })?)
}
