//! Seeded property suites run by `check`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::eig::dense_hermitian_eig;
use crate::error::{Error, Result};
use crate::filters::{abs_poly_matrix, hat_q, hat_q_sym, poly_to_matrix, spline_filter};
use crate::graph::Graph;
use crate::instances;
use crate::limit::{check_trajectory, iteration_matrix, residual_norm, Scheme};
use crate::matrix::{DiagonalMatrix, GeoMatrix};
use crate::precond::{make_qc, make_qc_sym, schur_norm};
use crate::rng::{self, INSTANCE_STREAM};
use crate::sim::{self, NetworkSim};
use crate::solvers::{
    extremal_shift, norm2, pgda_centralized, shift_for_eigenvalue, spgda_centralized, Extremal, ShiftSign,
};
use crate::C64;

pub const INSTANCES: usize = 20;
pub const SUITE_STEPS: usize = 200;
/// Tolerance of the dense eigendecomposition checks.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem1,
    Theorem2,
    Alg4,
    Oracle,
    Equivalence,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Theorem1, Suite::Theorem2, Suite::Alg4, Suite::Oracle, Suite::Equivalence];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Alg4 => "alg4",
            Suite::Oracle => "oracle",
            Suite::Equivalence => "equivalence",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub property: String,
    pub instance_seed: u64,
    /// Distance to the tolerance; negative when the property fails.
    pub margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.properties.iter().filter(|p| !p.passed)
    }
}

struct Recorder {
    seed: u64,
    out: Vec<PropertyResult>,
}

impl Recorder {
    fn margin(&mut self, property: &str, margin: f64) {
        self.out.push(PropertyResult {
            property: property.to_string(),
            instance_seed: self.seed,
            margin,
            passed: margin >= 0.0,
        });
    }

    fn bitwise(&mut self, property: &str, x: &[C64], y: &[C64]) {
        let same = x.len() == y.len()
            && x.iter().zip(y).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        let diff = x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        self.margin(property, if same { 0.0 } else { -diff.max(f64::MIN_POSITIVE) });
    }
}

pub fn instance_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(k as u64)
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<CheckReport> {
    let mut properties = Vec::new();
    for k in 0..INSTANCES {
        let mut rec = Recorder { seed: instance_seed(seed, k), out: Vec::new() };
        match suite {
            Suite::Oracle => oracle(&mut rec)?,
            Suite::Theorem1 => theorem1(&mut rec, k)?,
            Suite::Theorem2 => theorem2(&mut rec)?,
            Suite::Alg4 => alg4(&mut rec)?,
            Suite::Equivalence => equivalence(&mut rec, k)?,
        }
        properties.extend(rec.out);
    }
    let passed = properties.iter().all(|p| p.passed);
    Ok(CheckReport { suite, seed, passed, properties })
}

fn instance_graph(s: u64, lo: usize, hi: usize) -> Result<Arc<Graph>> {
    let n = rng::stream(s, INSTANCE_STREAM + 7).gen_range(lo..=hi);
    Ok(Arc::new(Graph::random_geometric(n, s)?))
}

fn oracle(rec: &mut Recorder) -> Result<()> {
    let n = rng::stream(rec.seed, INSTANCE_STREAM + 7).gen_range(1..=24);
    let b = instances::random_hermitian(rec.seed, n);
    let e = dense_hermitian_eig(&b)?;
    rec.margin("eig_residual", ORACLE_TOL - e.max_residual(&b));
    rec.margin("eig_orthonormality", ORACLE_TOL - e.orthonormality_defect());
    rec.margin("eig_reconstruction", ORACLE_TOL - e.reconstruct().sub(&b).max_abs());
    rec.margin("eig_sorted", if e.eigenvalues.windows(2).all(|w| w[0] <= w[1]) { 0.0 } else { -1.0 });
    Ok(())
}

/// Distance of the spectrum of the iteration matrix to the outside of
/// `[-1e-12, 1 + 1e-12]`.
pub fn containment_margin(a: &GeoMatrix, q: &DiagonalMatrix, scheme: Scheme) -> Result<f64> {
    let e = dense_hermitian_eig(&iteration_matrix(a, q, scheme)?)?;
    let lo = e.eigenvalues.first().copied().unwrap_or(0.0);
    let hi = e.eigenvalues.last().copied().unwrap_or(0.0);
    Ok((lo + 1e-12).min(1.0 + 1e-12 - hi))
}

/// `‖A u‖ <= 1e-8 ‖A‖_S ‖u‖`.
pub fn kernel_margin(a: &GeoMatrix, u: &[C64]) -> Result<f64> {
    Ok(1e-8 * schur_norm(a) * norm2(u) - residual_norm(a, u)?)
}

fn check_limit(
    rec: &mut Recorder,
    a: &GeoMatrix,
    q: &DiagonalMatrix,
    iterates: &[Vec<C64>],
    scheme: Scheme,
) -> Result<()> {
    rec.margin("containment", containment_margin(a, q, scheme)?);
    let (report, p) = check_trajectory(iterates, a, q, scheme)?;
    rec.margin("rate_bound", report.margin);
    rec.margin("rate_below_one", 1.0 - p.rate);
    rec.margin("limit_in_kernel", kernel_margin(a, &p.u)?);
    Ok(())
}

/// Even `k`: random complex matrix, limit zero. Odd `k`: `I - (I - L/2)^m`,
/// limit along `(√d_i)_i`.
pub fn theorem1_instance(s: u64, k: usize) -> Result<GeoMatrix> {
    let g = instance_graph(s, 6, 32)?;
    Ok(if k.is_multiple_of(2) {
        instances::random_local_matrix(&g, 1 + k / 2 % 2, s)
    } else {
        extremal_shift(&spline_filter(&g, 1 + k / 2 % 3)?, Extremal::Max, 1.0)?
    })
}

fn theorem1(rec: &mut Recorder, k: usize) -> Result<()> {
    let a = theorem1_instance(rec.seed, k)?;
    let q = make_qc(&a, 0.01)?;
    let x0 = rng::trial_initial_vector(rec.seed, 0, a.n());
    let t = pgda_centralized(&a, &q, &x0, SUITE_STEPS)?;
    check_limit(rec, &a, &q, &t.iterates, Scheme::General)
}

fn theorem2(rec: &mut Recorder) -> Result<()> {
    let g = instance_graph(rec.seed, 6, 32)?;
    let a = instances::random_psd_matrix(&g, rec.seed);
    let q = make_qc_sym(&a, 0.01)?;
    let x0 = rng::trial_initial_vector(rec.seed, 0, g.n());
    let t = spgda_centralized(&a, &q, &x0, SUITE_STEPS)?;
    check_limit(rec, &a, &q, &t.iterates, Scheme::Symmetric)
}

fn alg4(rec: &mut Recorder) -> Result<()> {
    let f = instances::random_poly_filter(rec.seed);
    let c = 0.01;
    let q = hat_q(&f, c)?;
    let mut sim = NetworkSim::new(f.graph().clone(), 1);
    let (qd, qd_sym) = sim::construct_hatq_distributed(&mut sim, &f, c)?;
    let as_c = |d: &DiagonalMatrix| d.as_slice().iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>();
    rec.bitwise("hatq_distributed_equals_centralized", &as_c(&q), &as_c(&qd));
    rec.bitwise("hatq_sym_distributed_equals_centralized", &as_c(&hat_q_sym(&f, c)?), &as_c(&qd_sym));
    let a = poly_to_matrix(&f)?;
    let abs = abs_poly_matrix(&f)?;
    let dominance = (0..f.n())
        .flat_map(|i| (0..f.n()).map(move |j| (i, j)))
        .map(|(i, j)| abs.get(i, j).re - a.get(i, j).norm() + 1e-12)
        .fold(f64::INFINITY, f64::min);
    rec.margin("abs_filter_dominates", dominance);
    rec.margin("containment", containment_margin(&a, &q, Scheme::General)?);
    Ok(())
}

fn equivalence(rec: &mut Recorder, k: usize) -> Result<()> {
    let n = [8, 16, 64][k % 3];
    let width = 1 + k / 3 % 2;
    let g = Arc::new(Graph::random_geometric(n, rec.seed)?);
    let h = instances::random_local_matrix(&g, width, rec.seed);
    let lambda = instances::random_complex(rec.seed);
    let a = shift_for_eigenvalue(&h, lambda, ShiftSign::HMinusLambda)?;
    let x0 = instances::random_vector(rec.seed, n);

    let q = make_qc(&a, 0.01)?;
    let mut s = NetworkSim::new(g.clone(), width);
    let p = sim::distributed_p(&mut s, &a)?;
    let pq = DiagonalMatrix::new(p.iter().map(|v| v.max(0.01)).collect())?;
    rec.bitwise(
        "p_distributed_equals_centralized",
        &q.as_slice().iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
        &pq.as_slice().iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
    );
    let central = pgda_centralized(&a, &q, &x0, SUITE_STEPS)?;
    let dist = sim::run_pgda(&mut NetworkSim::new(g.clone(), width).parallel(true), &h, lambda, &q, &x0, SUITE_STEPS)?;
    rec.bitwise("pgda_distributed_equals_centralized", central.last(), dist.last());

    let qs = make_qc_sym(&a, 0.01)?;
    let central = spgda_centralized(&a, &qs, &x0, SUITE_STEPS)?;
    let dist = sim::run_spgda(&mut NetworkSim::new(g, width).parallel(true), &a, &qs, &x0, SUITE_STEPS)?;
    rec.bitwise("spgda_distributed_equals_centralized", central.last(), dist.last());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(Suite::parse("theorem3").is_err());
    }

    #[test]
    fn all_suites_pass_for_seed_zero() {
        for s in Suite::ALL {
            let r = run_suite(s, 0).unwrap();
            let bad: Vec<_> = r.failures().collect();
            assert!(r.passed, "{s}: {bad:?}");
            assert!(r.properties.len() >= INSTANCES);
        }
    }
}
