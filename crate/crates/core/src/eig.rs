//! Dense Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Only meant for oracle-scale problems (a few hundred vertices at most): the
//! limits and rates predicted for the iterations are read off the spectrum of
//! a dense Hermitian matrix.

use crate::error::{Error, Result};
use crate::matrix::GeoMatrix;
use crate::C64;

/// Off-diagonal Frobenius norm, relative to the full Frobenius norm, at which
/// the sweeps stop.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    n: usize,
    data: Vec<C64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn from_geo(a: &GeoMatrix) -> Self {
        Self { n: a.n(), data: a.to_dense() }
    }

    pub fn real_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        m
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Multiplies column `j` by `s[j]`.
    pub fn scale_columns(&self, s: &[f64]) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                m.data[i * self.n + j] *= s[j];
            }
        }
        m
    }

    /// Multiplies row `i` by `s[i]`.
    pub fn scale_rows(&self, s: &[f64]) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                m.data[i * self.n + j] *= s[i];
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| (i..n).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    fn off_diagonal_norm(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += self.data[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for Dense {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Dense {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<C64>>,
}

impl EigenDecomposition {
    /// `max_i ‖B u_i - γ_i u_i‖_2`.
    pub fn max_residual(&self, b: &Dense) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&g, u)| {
                let bu = b.matvec(u);
                bu.iter().zip(u).map(|(x, y)| (x - y * g).norm_sqr()).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max_{i,j} |<u_i, u_j> - δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.eigenvectors.iter().enumerate() {
            for (j, v) in self.eigenvectors.iter().enumerate() {
                let ip: C64 = u.iter().zip(v).map(|(a, b)| a * b.conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }

    /// `U Γ U*`.
    pub fn reconstruct(&self) -> Dense {
        let n = self.eigenvalues.len();
        let mut m = Dense::zeros(n);
        for (&g, u) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += u[i] * u[j].conj() * g;
                }
            }
        }
        m
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn dense_hermitian_eig(b: &Dense) -> Result<EigenDecomposition> {
    let n = b.n();
    let scale = b.max_abs().max(1.0);
    if !b.is_hermitian(1e-12 * scale) {
        return Err(Error::InvalidInput("matrix is not Hermitian".into()));
    }
    let mut a = b.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = Dense::identity(n);
    let target = OFF_DIAGONAL_TOL * a.frobenius();
    let mut converged = a.off_diagonal_norm() <= target;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = a.off_diagonal_norm() <= target;
    }
    if !converged {
        return Err(Error::InvalidInput(format!("Jacobi sweeps did not converge in {MAX_SWEEPS} sweeps")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = order.iter().map(|&k| (0..n).map(|i| v[(i, k)]).collect()).collect();
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// Annihilates `a[(p, q)]` with the unitary `G = Φ R`, where `Φ` rotates the
/// phase of `a_pq` onto the real axis and `R` is the real Jacobi rotation.
fn rotate(a: &mut Dense, v: &mut Dense, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = (apq / mag).conj();
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let (gpp, gpq, gqp, gqq) = (C64::new(c, 0.0), C64::new(s, 0.0), phase * (-s), phase * c);
    let n = a.n();
    for k in 0..n {
        let (x, y) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = x * gpp + y * gqp;
        a[(k, q)] = x * gpq + y * gqq;
    }
    for k in 0..n {
        let (x, y) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = gpp.conj() * x + gqp.conj() * y;
        a[(q, k)] = gpq.conj() * x + gqq.conj() * y;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let (x, y) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = x * gpp + y * gqp;
        v[(k, q)] = x * gpq + y * gqq;
    }
}
