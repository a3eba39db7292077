//! Streaming iteration kernels for multi-trial runs.
//!
//! Trajectories are never stored: every step produces `A x_n` once, which
//! feeds both the normalized residue and the update. Real problems run in
//! `f64`; since multiplying by a zero imaginary part is exact, this gives the
//! real parts of the complex computation bit for bit.

use std::ops::{Add, AddAssign, Div, Mul, Sub, SubAssign};

use crate::matrix::{DiagonalMatrix, GeoMatrix};
use crate::metrics::{clamped_log10, MetricPoint};
use crate::solvers::{inv, inv_sq, BREAKDOWN_NORM};
use crate::C64;

pub(crate) trait Scalar:
    Copy
    + Send
    + Sync
    + Default
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
{
    fn conj(self) -> Self;
    fn norm_sqr(self) -> f64;
    fn to_c64(self) -> C64;
    fn from_c64(z: C64) -> Self;
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
    fn from_c64(z: C64) -> Self {
        z.re
    }
}

impl Scalar for C64 {
    fn conj(self) -> Self {
        C64::conj(&self)
    }
    fn norm_sqr(self) -> f64 {
        C64::norm_sqr(&self)
    }
    fn to_c64(self) -> C64 {
        self
    }
    fn from_c64(z: C64) -> Self {
        z
    }
}

/// Row-compressed matrix over a scalar type.
#[derive(Debug, Clone)]
pub(crate) struct Csr<T> {
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<T>,
}

impl<T: Scalar> Csr<T> {
    fn from_lines(n: usize, line: impl Fn(usize) -> Vec<(usize, T)>) -> Self {
        let mut ptr = Vec::with_capacity(n + 1);
        let mut idx = Vec::new();
        let mut val = Vec::new();
        ptr.push(0);
        for i in 0..n {
            for (j, v) in line(i) {
                idx.push(j);
                val.push(v);
            }
            ptr.push(idx.len());
        }
        Self { ptr, idx, val }
    }

    pub(crate) fn rows(a: &GeoMatrix) -> Self {
        Self::from_lines(a.n(), |i| {
            let (idx, val) = a.row(i);
            idx.iter().zip(val).map(|(&j, &v)| (j, T::from_c64(v))).collect()
        })
    }

    /// Row `i` holds `w_i conj(A(j, i))`.
    fn scaled_adjoint(a: &GeoMatrix, w: impl Fn(usize) -> f64) -> Self {
        Self::from_lines(a.n(), |i| {
            let (idx, val) = a.col(i);
            let wi = w(i);
            idx.iter().zip(val).map(|(&j, &v)| (j, T::from_c64(v.conj()) * wi)).collect()
        })
    }

    fn matvec_into(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = T::default();
            for k in self.ptr[i]..self.ptr[i + 1] {
                acc += self.val[k] * x[self.idx[k]];
            }
            *yi = acc;
        }
    }
}

/// Whether every entry of `a` is real.
pub(crate) fn is_real(a: &GeoMatrix) -> bool {
    a.triplets().all(|(_, _, v)| v.im == 0.0)
}

#[derive(Debug, Clone)]
enum Update<T> {
    /// `x -= (w conj(A)^T) (A x)`
    General(Csr<T>),
    /// `x -= (A x) / q`
    Symmetric(Vec<f64>),
    /// `x = H x / ‖H x‖`
    Power(Csr<T>),
}

/// One algorithm with its residual matrix `A`.
#[derive(Debug, Clone)]
pub(crate) struct Kernel<T> {
    a: Csr<T>,
    update: Update<T>,
}

impl<T: Scalar> Kernel<T> {
    pub(crate) fn general(a: &GeoMatrix, q: &DiagonalMatrix) -> Self {
        Self { a: Csr::rows(a), update: Update::General(Csr::scaled_adjoint(a, |i| inv_sq(q.get(i)))) }
    }

    pub(crate) fn symmetric(a: &GeoMatrix, q: &DiagonalMatrix) -> Self {
        Self { a: Csr::rows(a), update: Update::Symmetric(q.as_slice().iter().map(|&v| inv(v)).collect()) }
    }

    pub(crate) fn power(a: &GeoMatrix, h: &GeoMatrix) -> Self {
        Self { a: Csr::rows(a), update: Update::Power(Csr::rows(h)) }
    }

    fn start(&self, x0: &[C64]) -> Option<Vec<T>> {
        let x: Vec<T> = x0.iter().map(|&z| T::from_c64(z)).collect();
        match self.update {
            Update::Power(_) => {
                let norm = norm2(&x);
                (norm >= BREAKDOWN_NORM).then(|| x.iter().map(|&v| v / norm).collect())
            }
            _ => Some(x),
        }
    }

    /// Advances `x` given `ax = A x`; `false` on breakdown.
    fn advance(&self, x: &mut [T], ax: &[T], buf: &mut [T]) -> bool {
        match &self.update {
            Update::General(adj) => {
                adj.matvec_into(ax, buf);
                for (xi, d) in x.iter_mut().zip(buf.iter()) {
                    *xi -= *d;
                }
            }
            Update::Symmetric(w) => {
                for ((xi, d), &wi) in x.iter_mut().zip(ax).zip(w) {
                    *xi -= *d * wi;
                }
            }
            Update::Power(h) => {
                h.matvec_into(x, buf);
                let norm = norm2(buf);
                if !(norm >= BREAKDOWN_NORM) {
                    return false;
                }
                for (xi, b) in x.iter_mut().zip(buf.iter()) {
                    *xi = *b / norm;
                }
            }
        }
        true
    }

    /// `x_steps` without metrics; `None` on breakdown.
    pub(crate) fn endpoint(&self, x0: &[C64], steps: usize) -> Option<Vec<C64>> {
        let mut x = self.start(x0)?;
        let n = x.len();
        let mut ax = vec![T::default(); n];
        let mut buf = vec![T::default(); n];
        for _ in 0..steps {
            if !matches!(self.update, Update::Power(_)) {
                self.a.matvec_into(&x, &mut ax);
            }
            if !self.advance(&mut x, &ax, &mut buf) {
                return None;
            }
        }
        Some(x.into_iter().map(T::to_c64).collect())
    }

    /// CE/NR at `n = 0..=steps`. After a breakdown the remaining points are
    /// undefined.
    pub(crate) fn series(&self, x0: &[C64], reference: Option<&[C64]>, steps: usize) -> Vec<MetricPoint> {
        let undefined = |n| MetricPoint { n, ce: None, nr: None };
        let Some(mut x) = self.start(x0) else {
            return (0..=steps).map(undefined).collect();
        };
        let unit_ref: Option<Vec<C64>> = reference.and_then(|u| {
            let norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            (norm >= BREAKDOWN_NORM).then(|| u.iter().map(|z| z / norm).collect())
        });
        let n = x.len();
        let mut ax = vec![T::default(); n];
        let mut buf = vec![T::default(); n];
        let mut out = Vec::with_capacity(steps + 1);
        for step in 0..=steps {
            self.a.matvec_into(&x, &mut ax);
            let norm = norm2(&x);
            if !(norm >= BREAKDOWN_NORM) {
                out.extend((step..=steps).map(undefined));
                break;
            }
            let nr = Some(clamped_log10(norm2(&ax) / norm));
            let ce = unit_ref.as_deref().map(|u| clamped_log10(aligned_error(&x, norm, u)));
            out.push(MetricPoint { n: step, ce, nr });
            if step < steps && !self.advance(&mut x, &ax, &mut buf) {
                out.extend((step + 1..=steps).map(undefined));
                break;
            }
        }
        out
    }
}

fn norm2<T: Scalar>(x: &[T]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `min_{|α|=1} ‖x / ‖x‖ - α u‖` for a unit `u`.
fn aligned_error<T: Scalar>(x: &[T], norm: f64, u: &[C64]) -> f64 {
    let s: C64 = x.iter().zip(u).map(|(v, w)| v.to_c64() * w.conj()).sum::<C64>() / norm;
    let alpha = if s.norm() > 0.0 { s / s.norm() } else { C64::new(1.0, 0.0) };
    x.iter()
        .zip(u)
        .map(|(v, w)| (v.to_c64() / norm - alpha * w).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{normalized_laplacian, sqrt_degree_vector};
    use crate::graph::Graph;
    use crate::metrics::metrics_ce_nr;
    use crate::precond::{make_qc, make_qc_sym};
    use crate::solvers::{pgda_centralized, power_iteration};
    use crate::{instances, rng};
    use std::sync::Arc;

    #[test]
    fn real_path_equals_complex_path() {
        let g = Arc::new(Graph::random_geometric(40, 3).unwrap());
        let a = normalized_laplacian(&g);
        let q = make_qc(&a, 0.01).unwrap();
        let x0 = rng::trial_initial_vector(3, 0, 40);
        let u = sqrt_degree_vector(&g);
        let r = Kernel::<f64>::general(&a, &q).series(&x0, Some(&u), 60);
        let c = Kernel::<C64>::general(&a, &q).series(&x0, Some(&u), 60);
        assert_eq!(r, c);
        assert_eq!(
            Kernel::<f64>::general(&a, &q).endpoint(&x0, 60).unwrap(),
            pgda_centralized(&a, &q, &x0, 60).unwrap().last().to_vec()
        );
    }

    #[test]
    fn series_agrees_with_stored_trajectory_metrics() {
        let g = Arc::new(Graph::random_geometric(24, 2).unwrap());
        let h = instances::random_local_matrix(&g, 1, 2);
        let a = h.add_identity(C64::new(-0.3, 0.1)).unwrap();
        let q = make_qc(&a, 0.01).unwrap();
        let x0 = rng::trial_initial_vector(2, 1, 24);
        let u = instances::random_vector(7, 24);
        let s = Kernel::<C64>::general(&a, &q).series(&x0, Some(&u), 30);
        let t = pgda_centralized(&a, &q, &x0, 30).unwrap();
        let m = metrics_ce_nr(&t.iterates, &u, &a);
        for (p, r) in s.iter().zip(&m) {
            assert!((p.nr.unwrap() - r.nr.unwrap()).abs() < 1e-9);
            assert!((p.ce.unwrap() - r.ce.unwrap()).abs() < 1e-9);
        }

        let qs = make_qc_sym(&a, 0.01).unwrap();
        let s = Kernel::<C64>::symmetric(&a, &qs).series(&x0, None, 5);
        assert!(s.iter().all(|p| p.ce.is_none() && p.nr.is_some()));

        let p = power_iteration(&h, &x0, 20).unwrap();
        let k = Kernel::<C64>::power(&a, &h);
        let end = k.endpoint(&x0, 20).unwrap();
        assert!(end.iter().zip(p.last()).all(|(x, y)| (x - y).norm() < 1e-14));
    }

    #[test]
    fn breakdown_marks_rest_undefined() {
        let g = Arc::new(Graph::path(3).unwrap());
        let id = GeoMatrix::identity(g.clone());
        let q = DiagonalMatrix::constant(3, 1.0).unwrap();
        let x0 = vec![C64::new(1.0, 0.0); 3];
        let s = Kernel::<f64>::general(&id, &q).series(&x0, None, 4);
        assert!(s[0].nr.is_some());
        assert!(s[1..].iter().all(|p| p.nr.is_none()));
        assert_eq!(s.len(), 5);
        let zero = GeoMatrix::zero(g);
        let s = Kernel::<f64>::power(&id, &zero).series(&x0, None, 3);
        assert!(s[0].nr.is_some() && s[1].nr.is_none());
    }
}
