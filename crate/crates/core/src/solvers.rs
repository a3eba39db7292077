//! Centralized reference iterations and eigenvalue shifts.
//!
//! The preconditioned updates are written with the same per-entry scaling and
//! ascending reduction order as the vertex programs in [`crate::sim`], so that
//! both produce identical floating-point results.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DiagonalMatrix, GeoMatrix};
use crate::C64;

/// Norms below this are treated as a breakdown of normalization.
pub const BREAKDOWN_NORM: f64 = 1e-30;

/// Tolerance for the Hermitian check of [`extremal_shift`].
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Pgda,
    Spgda,
    Pgda1h,
    Spgda1h,
    Gdaschur,
    Sgdaschur,
    Power,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Pgda,
        Algorithm::Spgda,
        Algorithm::Pgda1h,
        Algorithm::Spgda1h,
        Algorithm::Gdaschur,
        Algorithm::Sgdaschur,
        Algorithm::Power,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pgda => "pgda",
            Algorithm::Spgda => "spgda",
            Algorithm::Pgda1h => "pgda1h",
            Algorithm::Spgda1h => "spgda1h",
            Algorithm::Gdaschur => "gdaschur",
            Algorithm::Sgdaschur => "sgdaschur",
            Algorithm::Power => "power",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm `{s}`")))
    }

    /// Whether the iteration is the symmetric (Hermitian, PSD) variant.
    pub fn is_symmetric(self) -> bool {
        matches!(self, Algorithm::Spgda | Algorithm::Spgda1h | Algorithm::Sgdaschur)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Iterates `x_0, ..., x_M` of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub algorithm: Algorithm,
    pub iterates: Vec<Vec<C64>>,
    pub lambda: Option<C64>,
    pub c: Option<f64>,
    pub seed: Option<u64>,
    /// Index of the step at which normalization broke down, if any.
    pub breakdown: Option<usize>,
}

impl Trajectory {
    pub fn new(algorithm: Algorithm, iterates: Vec<Vec<C64>>) -> Self {
        Self { algorithm, iterates, lambda: None, c: None, seed: None, breakdown: None }
    }

    /// Number of iterations `M`.
    pub fn steps(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }

    pub fn last(&self) -> &[C64] {
        self.iterates.last().expect("trajectory holds x_0")
    }
}

/// One step of an iterative scheme acting in place.
pub trait Iteration {
    /// Advances `x`; returns `false` if the step broke down.
    fn step(&mut self, x: &mut [C64]) -> bool;
}

/// Runs `steps` iterations, calling `observe(n, x_n)` for `n = 0..=steps`.
/// Stops early on breakdown and returns the failing step.
pub fn drive(
    iteration: &mut impl Iteration,
    x0: &[C64],
    steps: usize,
    mut observe: impl FnMut(usize, &[C64]),
) -> Option<usize> {
    let mut x = x0.to_vec();
    observe(0, &x);
    for n in 1..=steps {
        if !iteration.step(&mut x) {
            return Some(n);
        }
        observe(n, &x);
    }
    None
}

fn collect(algorithm: Algorithm, iteration: &mut impl Iteration, x0: &[C64], steps: usize) -> Trajectory {
    let mut iterates = Vec::with_capacity(steps + 1);
    let breakdown = drive(iteration, x0, steps, |_, x| iterates.push(x.to_vec()));
    Trajectory { breakdown, ..Trajectory::new(algorithm, iterates) }
}

#[inline]
pub(crate) fn inv(q: f64) -> f64 {
    1.0 / q
}

#[inline]
pub(crate) fn inv_sq(q: f64) -> f64 {
    1.0 / (q * q)
}

fn check_dims(a: &GeoMatrix, q: &DiagonalMatrix, x0: &[C64]) -> Result<()> {
    if q.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: q.len() });
    }
    if x0.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: x0.len() });
    }
    Ok(())
}

/// `x ← (I - Q^{-2} A* A) x`.
#[derive(Debug, Clone)]
pub struct PgdaStep {
    a: GeoMatrix,
    /// Row `i` holds `(j, Q(i,i)^{-2} conj(A(j, i)))`, `j` ascending.
    scaled_adjoint: Vec<Vec<(usize, C64)>>,
    buf: Vec<C64>,
}

impl PgdaStep {
    pub fn new(a: &GeoMatrix, q: &DiagonalMatrix) -> Result<Self> {
        if q.len() != a.n() {
            return Err(Error::DimensionMismatch { expected: a.n(), got: q.len() });
        }
        let scaled_adjoint = (0..a.n())
            .map(|i| {
                let w = inv_sq(q.get(i));
                let (rows, vals) = a.col(i);
                rows.iter().zip(vals).map(|(&j, &v)| (j, v.conj() * w)).collect()
            })
            .collect();
        Ok(Self { a: a.clone(), scaled_adjoint, buf: vec![C64::new(0.0, 0.0); a.n()] })
    }
}

impl Iteration for PgdaStep {
    fn step(&mut self, x: &mut [C64]) -> bool {
        self.a.matvec_into(x, &mut self.buf);
        for (xi, row) in x.iter_mut().zip(&self.scaled_adjoint) {
            let mut acc = C64::new(0.0, 0.0);
            for &(j, w) in row {
                acc += w * self.buf[j];
            }
            *xi -= acc;
        }
        true
    }
}

/// `x ← (I - Q^{-1} A) x`.
#[derive(Debug, Clone)]
pub struct SpgdaStep {
    /// Row `i` holds `(j, Q(i,i)^{-1} A(i, j))`.
    scaled: Vec<Vec<(usize, C64)>>,
    buf: Vec<C64>,
}

impl SpgdaStep {
    pub fn new(a: &GeoMatrix, q: &DiagonalMatrix) -> Result<Self> {
        if q.len() != a.n() {
            return Err(Error::DimensionMismatch { expected: a.n(), got: q.len() });
        }
        let scaled = (0..a.n())
            .map(|i| {
                let w = inv(q.get(i));
                let (cols, vals) = a.row(i);
                cols.iter().zip(vals).map(|(&j, &v)| (j, v * w)).collect()
            })
            .collect();
        Ok(Self { scaled, buf: vec![C64::new(0.0, 0.0); a.n()] })
    }
}

impl Iteration for SpgdaStep {
    fn step(&mut self, x: &mut [C64]) -> bool {
        for (bi, row) in self.buf.iter_mut().zip(&self.scaled) {
            let mut acc = C64::new(0.0, 0.0);
            for &(j, w) in row {
                acc += w * x[j];
            }
            *bi = acc;
        }
        for (xi, d) in x.iter_mut().zip(&self.buf) {
            *xi -= d;
        }
        true
    }
}

/// Unpreconditioned gradient step `x ← x - s A* A x`.
#[derive(Debug, Clone)]
pub struct GradientStep {
    a: GeoMatrix,
    adjoint: GeoMatrix,
    step_size: f64,
    buf: Vec<C64>,
    buf2: Vec<C64>,
}

impl GradientStep {
    pub fn new(a: &GeoMatrix, step_size: f64) -> Self {
        Self {
            a: a.clone(),
            adjoint: a.hermitian_transpose(),
            step_size,
            buf: vec![C64::new(0.0, 0.0); a.n()],
            buf2: vec![C64::new(0.0, 0.0); a.n()],
        }
    }
}

impl Iteration for GradientStep {
    fn step(&mut self, x: &mut [C64]) -> bool {
        self.a.matvec_into(x, &mut self.buf);
        self.adjoint.matvec_into(&self.buf, &mut self.buf2);
        for (xi, d) in x.iter_mut().zip(&self.buf2) {
            *xi -= d * self.step_size;
        }
        true
    }
}

/// Normalized power step `x ← H x / ‖H x‖_2`.
#[derive(Debug, Clone)]
pub struct PowerStep {
    h: GeoMatrix,
    buf: Vec<C64>,
}

impl PowerStep {
    pub fn new(h: &GeoMatrix) -> Self {
        Self { h: h.clone(), buf: vec![C64::new(0.0, 0.0); h.n()] }
    }
}

impl Iteration for PowerStep {
    fn step(&mut self, x: &mut [C64]) -> bool {
        self.h.matvec_into(x, &mut self.buf);
        let norm = norm2(&self.buf);
        if norm < BREAKDOWN_NORM {
            return false;
        }
        for (xi, b) in x.iter_mut().zip(&self.buf) {
            *xi = b / norm;
        }
        true
    }
}

pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Preconditioned gradient descent `x_{n+1} = (I - Q^{-2} A* A) x_n`.
pub fn pgda_centralized(a: &GeoMatrix, q: &DiagonalMatrix, x0: &[C64], steps: usize) -> Result<Trajectory> {
    check_dims(a, q, x0)?;
    Ok(collect(Algorithm::Pgda, &mut PgdaStep::new(a, q)?, x0, steps))
}

/// Symmetric preconditioned gradient descent `x_{n+1} = (I - Q^{-1} A) x_n`.
pub fn spgda_centralized(a: &GeoMatrix, q: &DiagonalMatrix, x0: &[C64], steps: usize) -> Result<Trajectory> {
    check_dims(a, q, x0)?;
    Ok(collect(Algorithm::Spgda, &mut SpgdaStep::new(a, q)?, x0, steps))
}

/// Plain gradient descent `x_{n+1} = x_n - s A* A x_n`.
pub fn gradient_descent(a: &GeoMatrix, step_size: f64, x0: &[C64], steps: usize) -> Result<Trajectory> {
    if x0.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: x0.len() });
    }
    Ok(collect(Algorithm::Gdaschur, &mut GradientStep::new(a, step_size), x0, steps))
}

/// Power iteration on `H`. The first iterate is `x_0 / ‖x_0‖_2`.
pub fn power_iteration(h: &GeoMatrix, x0: &[C64], steps: usize) -> Result<Trajectory> {
    if x0.len() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), got: x0.len() });
    }
    let norm = norm2(x0);
    if norm < BREAKDOWN_NORM {
        return Err(Error::InvalidInput("power iteration needs a nonzero initial vector".into()));
    }
    let start: Vec<C64> = x0.iter().map(|z| z / norm).collect();
    Ok(collect(Algorithm::Power, &mut PowerStep::new(h), &start, steps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftSign {
    /// `H - λI`
    HMinusLambda,
    /// `λI - H`
    LambdaMinusH,
}

/// `H - λI` or `λI - H`; the width is recomputed, so exact cancellation on
/// the diagonal can only lower it.
pub fn shift_for_eigenvalue(h: &GeoMatrix, lambda: C64, sign: ShiftSign) -> Result<GeoMatrix> {
    match sign {
        ShiftSign::HMinusLambda => h.add_identity(-lambda),
        ShiftSign::LambdaMinusH => h.scale(C64::new(-1.0, 0.0))?.add_identity(lambda),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremal {
    Min,
    Max,
}

/// Positive semidefinite shift of a Hermitian matrix: `H - λ_min I` or
/// `λ_max I - H`, with the extremal eigenvalue supplied by the caller.
pub fn extremal_shift(h: &GeoMatrix, which: Extremal, lambda: f64) -> Result<GeoMatrix> {
    if !h.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::InvalidInput("extremal shift needs a Hermitian matrix".into()));
    }
    let lambda = C64::new(lambda, 0.0);
    match which {
        Extremal::Min => shift_for_eigenvalue(h, lambda, ShiftSign::HMinusLambda),
        Extremal::Max => shift_for_eigenvalue(h, lambda, ShiftSign::LambdaMinusH),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::{dense_hermitian_eig, Dense};
    use crate::filters::{normalized_laplacian, spline_filter};
    use crate::graph::Graph;
    use crate::precond::{make_qc, make_qc_sym, schur_norm};
    use crate::{instances, rng};
    use std::sync::Arc;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn pgda_trivial_cases() {
        let g = Arc::new(Graph::random_geometric(10, 1).unwrap());
        let x0 = rng::trial_initial_vector(1, 0, 10);
        let zero = GeoMatrix::zero(g.clone());
        let q = DiagonalMatrix::constant(10, 1.0).unwrap();
        let t = pgda_centralized(&zero, &q, &x0, 5).unwrap();
        assert!(t.iterates.iter().all(|x| *x == x0));
        let t = pgda_centralized(&GeoMatrix::identity(g.clone()), &q, &x0, 3).unwrap();
        assert!(t.iterates[1..].iter().all(|x| x.iter().all(|z| *z == c(0.0))));
        assert_eq!(t.steps(), 3);
        assert!(pgda_centralized(&zero, &q, &x0[..3], 1).is_err());
    }

    #[test]
    fn spgda_on_k2_laplacian() {
        let g = Arc::new(Graph::complete(2).unwrap());
        let a = normalized_laplacian(&g);
        let q = DiagonalMatrix::new(vec![2.0, 2.0]).unwrap();
        let t = spgda_centralized(&a, &q, &[c(1.0), c(0.0)], 4).unwrap();
        for x in &t.iterates[1..] {
            assert_eq!(*x, vec![c(0.5), c(0.5)]);
        }
        let zero = GeoMatrix::zero(g);
        let t = spgda_centralized(&zero, &q, &[c(1.0), c(3.0)], 3).unwrap();
        assert!(t.iterates.iter().all(|x| *x == vec![c(1.0), c(3.0)]));
    }

    #[test]
    fn shifts() {
        let g = Arc::new(Graph::random_geometric(15, 3).unwrap());
        let h = instances::random_local_matrix(&g, 1, 4);
        assert_eq!(shift_for_eigenvalue(&h, c(0.0), ShiftSign::HMinusLambda).unwrap(), h);
        let id = GeoMatrix::identity(g.clone());
        let z = shift_for_eigenvalue(&id, c(1.0), ShiftSign::HMinusLambda).unwrap();
        assert_eq!(z.nnz(), 0);
        let lam = C64::new(0.3, -1.2);
        let p = shift_for_eigenvalue(&h, lam, ShiftSign::HMinusLambda).unwrap();
        let m = shift_for_eigenvalue(&h, lam, ShiftSign::LambdaMinusH).unwrap();
        assert_eq!(p.add(&m).unwrap().nnz(), 0);
        assert_eq!(p.width(), h.width());
    }

    #[test]
    fn extremal_shift_examples() {
        let g = Arc::new(Graph::path(2).unwrap());
        let d = GeoMatrix::diagonal(g.clone(), &[c(1.0), c(3.0)]).unwrap();
        let s = extremal_shift(&d, Extremal::Min, 1.0).unwrap();
        assert_eq!(s.to_dense(), vec![c(0.0), c(0.0), c(0.0), c(2.0)]);
        let nh = instances::random_local_matrix(&g, 1, 2);
        assert!(extremal_shift(&nh, Extremal::Max, 1.0).is_err());

        let g = Arc::new(Graph::random_geometric(40, 7).unwrap());
        let h = spline_filter(&g, 2).unwrap();
        let a = extremal_shift(&h, Extremal::Max, 1.0).unwrap();
        let expect = h.scale(c(-1.0)).unwrap().add_identity(c(1.0)).unwrap();
        assert_eq!(a, expect);
        let e = dense_hermitian_eig(&Dense::from_geo(&a)).unwrap();
        assert!(e.eigenvalues[0] >= -1e-10);
    }

    #[test]
    fn power_examples() {
        let g = Arc::new(Graph::path(2).unwrap());
        let h = GeoMatrix::diagonal(g.clone(), &[c(2.0), c(1.0)]).unwrap();
        let t = power_iteration(&h, &[c(1.0), c(1.0)], 80).unwrap();
        assert!((t.last()[0].norm() - 1.0).abs() < 1e-15);
        assert!(t.last()[1].norm() < 1e-20);
        let id = GeoMatrix::identity(g.clone());
        let t = power_iteration(&id, &[c(3.0), c(4.0)], 5).unwrap();
        assert!(t.iterates.iter().all(|x| *x == vec![c(0.6), c(0.8)]));
        assert!(power_iteration(&id, &[c(0.0), c(0.0)], 5).is_err());
        let t = power_iteration(&GeoMatrix::zero(g), &[c(1.0), c(0.0)], 5).unwrap();
        assert_eq!(t.breakdown, Some(1));
    }

    #[test]
    fn power_on_spline_aligns_with_sqrt_degrees() {
        let g = Arc::new(Graph::random_geometric(64, 1).unwrap());
        let h = spline_filter(&g, 2).unwrap();
        let x0 = rng::trial_initial_vector(3, 0, 64);
        let t = power_iteration(&h, &x0, 5000).unwrap();
        let u = crate::filters::sqrt_degree_vector(&g);
        let cos = t.last().iter().zip(&u).map(|(a, b)| a * b.conj()).sum::<C64>().norm() / norm2(&u);
        assert!(cos >= 1.0 - 1e-8, "cosine {cos}");
    }

    #[test]
    fn gdaschur_reduces_to_plain_gradient() {
        let g = Arc::new(Graph::random_geometric(30, 4).unwrap());
        let a = instances::random_local_matrix(&g, 2, 9);
        let s = schur_norm(&a);
        let q = make_qc(&a, s).unwrap();
        assert!(q.as_slice().iter().all(|&v| v == s));
        let x0 = instances::random_vector(1, 30);
        let t1 = pgda_centralized(&a, &q, &x0, 50).unwrap();
        let t2 = gradient_descent(&a, 1.0 / (s * s), &x0, 50).unwrap();
        for (x, y) in t1.iterates.iter().zip(&t2.iterates) {
            let diff: f64 = norm2(&x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>());
            assert!(diff <= 1e-12 * norm2(y).max(1e-300));
        }
    }

    #[test]
    fn spgda_preconditioner_bounds_spectrum() {
        let g = Arc::new(Graph::random_geometric(20, 2).unwrap());
        let a = instances::random_psd_matrix(&g, 5);
        let q = make_qc_sym(&a, 0.01).unwrap();
        let half: Vec<f64> = q.as_slice().iter().map(|v| 1.0 / v.sqrt()).collect();
        let b = Dense::identity(20).sub(&Dense::from_geo(&a).scale_rows(&half).scale_columns(&half));
        let e = dense_hermitian_eig(&b).unwrap();
        assert!(e.eigenvalues.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
    }
}
