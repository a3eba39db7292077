//! Predicted limits and convergence rates of the preconditioned iterations.
//!
//! With `Q` diagonal and `Q^2 - A*A` positive semidefinite, the iteration
//! `x_{n+1} = (I - Q^{-2} A* A) x_n` satisfies `Q x_n = B^n Q x_0` for the
//! Hermitian `B = I - Q^{-1} A* A Q^{-1}`, whose spectrum lies in `[0, 1]`.
//! Expanding `Q x_0` in eigenvectors of `B` gives the limit (the part in the
//! eigenvalue-1 eigenspace) and the rate (the largest eigenvalue below 1).
//! The symmetric iteration is handled the same way with `Q^{1/2}` in place of
//! `Q` and `A` in place of `A* A`.

use crate::eig::{dense_hermitian_eig, Dense, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{DiagonalMatrix, GeoMatrix};
use crate::solvers::norm2;
use crate::C64;

/// Eigenvalues above `1 - UNIT_BAND` are treated as exactly one.
pub const UNIT_BAND: f64 = 1e-9;

/// Which preconditioned iteration a limit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `(I - Q^{-2} A* A)`; scaling `Q`.
    General,
    /// `(I - Q^{-1} A)` for positive semidefinite `A`; scaling `Q^{1/2}`.
    Symmetric,
}

#[derive(Debug, Clone)]
pub struct LimitPrediction {
    /// Limit `u` of the iterates.
    pub u: Vec<C64>,
    /// Contraction factor `r`: largest eigenvalue of `B` below one, 0 if none.
    pub rate: f64,
    /// Per-vertex scaling `D` (`Q` or `Q^{1/2}`) in which the bound holds.
    pub scaling: Vec<f64>,
    pub spectrum: EigenDecomposition,
}

/// The Hermitian iteration matrix `B` in the scaled coordinates.
pub fn iteration_matrix(a: &GeoMatrix, q: &DiagonalMatrix, scheme: Scheme) -> Result<Dense> {
    if q.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: q.len() });
    }
    let n = a.n();
    let dense = Dense::from_geo(a);
    let b = match scheme {
        Scheme::General => {
            let inv: Vec<f64> = q.as_slice().iter().map(|v| 1.0 / v).collect();
            let aq = dense.scale_columns(&inv);
            Dense::identity(n).sub(&aq.adjoint().matmul(&aq))
        }
        Scheme::Symmetric => {
            let inv_half: Vec<f64> = q.as_slice().iter().map(|v| 1.0 / v.sqrt()).collect();
            Dense::identity(n).sub(&dense.scale_rows(&inv_half).scale_columns(&inv_half))
        }
    };
    Ok(symmetrize(b))
}

fn symmetrize(mut b: Dense) -> Dense {
    let n = b.n();
    for i in 0..n {
        for j in i..n {
            let avg = (b[(i, j)] + b[(j, i)].conj()) * 0.5;
            b[(i, j)] = avg;
            b[(j, i)] = avg.conj();
        }
    }
    b
}

pub fn scaling(q: &DiagonalMatrix, scheme: Scheme) -> Vec<f64> {
    match scheme {
        Scheme::General => q.as_slice().to_vec(),
        Scheme::Symmetric => q.as_slice().iter().map(|v| v.sqrt()).collect(),
    }
}

/// Spectral data of one iteration, reusable across initial vectors.
#[derive(Debug, Clone)]
pub struct LimitOracle {
    pub spectrum: EigenDecomposition,
    pub scaling: Vec<f64>,
}

impl LimitOracle {
    pub fn new(a: &GeoMatrix, q: &DiagonalMatrix, scheme: Scheme) -> Result<Self> {
        let b = iteration_matrix(a, q, scheme)?;
        Ok(Self { spectrum: dense_hermitian_eig(&b)?, scaling: scaling(q, scheme) })
    }

    /// Largest eigenvalue of `B` below the unit band, 0 if none.
    pub fn rate(&self) -> f64 {
        self.spectrum.eigenvalues.iter().filter(|&&g| g <= 1.0 - UNIT_BAND).fold(0.0, |r, &g| r.max(g))
    }

    /// Limit of the iterates started at `x0`.
    pub fn limit(&self, x0: &[C64]) -> Result<Vec<C64>> {
        let d = &self.scaling;
        if x0.len() != d.len() {
            return Err(Error::DimensionMismatch { expected: d.len(), got: x0.len() });
        }
        let dx0: Vec<C64> = x0.iter().zip(d).map(|(x, s)| x * s).collect();
        let mut u = vec![C64::new(0.0, 0.0); d.len()];
        for (&gamma, v) in self.spectrum.eigenvalues.iter().zip(&self.spectrum.eigenvectors) {
            if gamma > 1.0 - UNIT_BAND {
                // <D x0, v> with the inner product linear in its first slot
                let coef: C64 = dx0.iter().zip(v).map(|(x, w)| x * w.conj()).sum();
                for ((ui, vi), s) in u.iter_mut().zip(v).zip(d) {
                    *ui += coef * vi / s;
                }
            }
        }
        Ok(u)
    }
}

/// Limit and rate of the iteration started at `x0`.
pub fn predicted_limit(a: &GeoMatrix, q: &DiagonalMatrix, x0: &[C64], scheme: Scheme) -> Result<LimitPrediction> {
    if x0.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: x0.len() });
    }
    let oracle = LimitOracle::new(a, q, scheme)?;
    let u = oracle.limit(x0)?;
    let rate = oracle.rate();
    Ok(LimitPrediction { u, rate, scaling: oracle.scaling, spectrum: oracle.spectrum })
}

/// Limit of `x_{n+1} = (I - Q^{-2} A* A) x_n`.
pub fn theorem1_limit(a: &GeoMatrix, q: &DiagonalMatrix, x0: &[C64]) -> Result<(Vec<C64>, f64)> {
    let p = predicted_limit(a, q, x0, Scheme::General)?;
    Ok((p.u, p.rate))
}

/// Limit of `x_{n+1} = (I - Q^{-1} A) x_n`.
pub fn theorem2_limit(a: &GeoMatrix, q: &DiagonalMatrix, x0: &[C64]) -> Result<(Vec<C64>, f64)> {
    let p = predicted_limit(a, q, x0, Scheme::Symmetric)?;
    Ok((p.u, p.rate))
}

#[derive(Debug, Clone)]
pub struct RateBoundReport {
    pub holds: bool,
    /// Smallest `bound - ‖D(x_n - u)‖` over the trajectory; negative on failure.
    pub margin: f64,
    pub worst_step: usize,
}

/// Checks `‖D(x_n - u)‖_2 <= ‖D x_0‖_2 r^n (1 + 1e-9) + 1e-12` at every
/// recorded step, with `D` the scheme's scaling.
pub fn rate_bound_check(iterates: &[Vec<C64>], u: &[C64], rate: f64, scaling: &[f64]) -> RateBoundReport {
    let scaled_norm = |v: &mut dyn Iterator<Item = C64>| -> f64 {
        v.zip(scaling).map(|(z, s)| (z * s).norm_sqr()).sum::<f64>().sqrt()
    };
    let Some(x0) = iterates.first() else {
        return RateBoundReport { holds: true, margin: f64::INFINITY, worst_step: 0 };
    };
    let base = scaled_norm(&mut x0.iter().copied());
    let mut margin = f64::INFINITY;
    let mut worst_step = 0;
    for (n, x) in iterates.iter().enumerate() {
        let err = scaled_norm(&mut x.iter().zip(u).map(|(a, b)| a - b));
        let bound = base * rate.powi(n as i32) * (1.0 + 1e-9) + 1e-12;
        if bound - err < margin {
            margin = bound - err;
            worst_step = n;
        }
    }
    RateBoundReport { holds: margin >= 0.0, margin, worst_step }
}

/// [`rate_bound_check`] against the oracle limit of the given scheme.
pub fn check_trajectory(
    iterates: &[Vec<C64>],
    a: &GeoMatrix,
    q: &DiagonalMatrix,
    scheme: Scheme,
) -> Result<(RateBoundReport, LimitPrediction)> {
    let x0 = iterates.first().ok_or_else(|| Error::InvalidInput("empty trajectory".into()))?;
    let p = predicted_limit(a, q, x0, scheme)?;
    Ok((rate_bound_check(iterates, &p.u, p.rate, &p.scaling), p))
}

/// `‖A u‖_2`.
pub fn residual_norm(a: &GeoMatrix, u: &[C64]) -> Result<f64> {
    Ok(norm2(&a.matvec(u)?))
}
