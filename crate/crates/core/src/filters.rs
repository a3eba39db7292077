//! Graph filters: normalized Laplacian, spline and hyperlink matrices, and
//! multivariate polynomials in commuting graph shifts.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{DiagonalMatrix, GeoMatrix, GeoMatrixBuilder, MatrixFile};
use crate::precond::{ball_max, check_floor};
use crate::C64;

/// Absolute tolerance for shift commutativity.
pub const COMMUTE_TOL: f64 = 1e-12;

/// `L = I - D^{-1/2} A D^{-1/2}`.
pub fn normalized_laplacian(g: &Arc<Graph>) -> GeoMatrix {
    let mut b = GeoMatrixBuilder::new(g.clone());
    let sqrt_deg: Vec<f64> = g.degrees().into_iter().map(|d| (d as f64).sqrt()).collect();
    for i in 0..g.n() {
        b.set(i, i, C64::new(1.0, 0.0)).expect("in range");
        for &j in g.neighbors(i) {
            b.set(i, j, C64::new(-1.0 / (sqrt_deg[i] * sqrt_deg[j]), 0.0)).expect("in range");
        }
    }
    b.freeze().expect("finite entries on a connected graph")
}

/// `(√d_i)_i`, spanning the kernel of the normalized Laplacian.
pub fn sqrt_degree_vector(g: &Graph) -> Vec<C64> {
    g.degrees().into_iter().map(|d| C64::new((d as f64).sqrt(), 0.0)).collect()
}

/// Lowpass spline filter `(I - L/2)^m`.
pub fn spline_filter(g: &Arc<Graph>, m: usize) -> Result<GeoMatrix> {
    if m < 1 {
        return Err(Error::InvalidParameter("spline order must be at least 1".into()));
    }
    let half = normalized_laplacian(g).scale(C64::new(-0.5, 0.0))?.add_identity(C64::new(1.0, 0.0))?;
    half.pow(m)
}

/// Left-stochastic hyperlink matrix `W(i, j) = 1 / d_j` on edges.
pub fn hyperlink_matrix(g: &Arc<Graph>) -> GeoMatrix {
    let mut b = GeoMatrixBuilder::new(g.clone());
    for i in 0..g.n() {
        for &j in g.neighbors(i) {
            b.set(i, j, C64::new(1.0 / g.degree(j) as f64, 0.0)).expect("in range");
        }
    }
    b.freeze().expect("finite entries")
}

/// `h(S_1, ..., S_d) = Σ h_{l_1..l_d} S_1^{l_1} ⋯ S_d^{l_d}` with `0 <= l_k <= L_k`.
///
/// Coefficients are stored densely with the last index varying fastest.
#[derive(Debug, Clone)]
pub struct PolyFilter {
    shifts: Vec<GeoMatrix>,
    degrees: Vec<usize>,
    coeffs: Vec<C64>,
}

impl PolyFilter {
    pub fn new(shifts: Vec<GeoMatrix>, degrees: Vec<usize>, coeffs: Vec<C64>) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::InvalidShift("a filter needs at least one shift".into()));
        }
        if degrees.len() != shifts.len() {
            return Err(Error::DimensionMismatch { expected: shifts.len(), got: degrees.len() });
        }
        let total: usize = degrees.iter().map(|l| l + 1).product();
        if coeffs.len() != total {
            return Err(Error::DimensionMismatch { expected: total, got: coeffs.len() });
        }
        if let Some(k) = coeffs.iter().position(|h| !(h.re.is_finite() && h.im.is_finite())) {
            return Err(Error::InvalidInput(format!("coefficient {k} is not finite")));
        }
        let n = shifts[0].n();
        for (k, s) in shifts.iter().enumerate() {
            if s.n() != n || **s.graph() != **shifts[0].graph() {
                return Err(Error::GraphMismatch);
            }
            if s.width() > 1 {
                return Err(Error::InvalidShift(format!("shift {k} has geodesic-width {}", s.width())));
            }
        }
        for k in 0..shifts.len() {
            for k2 in k + 1..shifts.len() {
                let lhs = shifts[k].mul(&shifts[k2])?;
                let rhs = shifts[k2].mul(&shifts[k])?;
                let gap = lhs.max_abs_diff(&rhs)?;
                if gap > COMMUTE_TOL {
                    return Err(Error::InvalidShift(format!("shifts {k} and {k2} do not commute (gap {gap:e})")));
                }
            }
        }
        Ok(Self { shifts, degrees, coeffs })
    }

    /// Univariate polynomial `Σ_l h_l S^l`.
    pub fn univariate(shift: GeoMatrix, coeffs: Vec<C64>) -> Result<Self> {
        let degree = coeffs.len().saturating_sub(1);
        Self::new(vec![shift], vec![degree], coeffs)
    }

    /// `(1 - t/2)^m` in the normalized Laplacian, i.e. [`spline_filter`].
    pub fn spline(g: &Arc<Graph>, m: usize) -> Result<Self> {
        Self::univariate(normalized_laplacian(g), spline_coeffs(m)?)
    }

    /// `1 - (1 - t/2)^m` in the normalized Laplacian, i.e. `I - spline_filter`.
    pub fn spline_complement(g: &Arc<Graph>, m: usize) -> Result<Self> {
        let mut h: Vec<C64> = spline_coeffs(m)?.into_iter().map(|c| -c).collect();
        h[0] += 1.0;
        Self::univariate(normalized_laplacian(g), h)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        self.shifts[0].graph()
    }

    pub fn n(&self) -> usize {
        self.shifts[0].n()
    }

    pub fn shifts(&self) -> &[GeoMatrix] {
        &self.shifts
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// `L_1 + ... + L_d`, bounding the geodesic-width of the filter.
    pub fn total_degree(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Number of monomials `Π (L_k + 1)`.
    pub fn monomial_count(&self) -> usize {
        self.coeffs.len()
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.degrees.len()];
        for k in (0..self.degrees.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * (self.degrees[k + 1] + 1);
        }
        s
    }

    /// Multi-index of flat coefficient position `flat`.
    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        self.strides().iter().zip(&self.degrees).map(|(&s, &l)| (flat / s) % (l + 1)).collect()
    }

    /// Monomial lattice recursion: for every flat index `> 0`, the shift `k`
    /// (highest index with nonzero degree) and the predecessor obtained by
    /// lowering `l_k` by one. Predecessors always precede their successors.
    pub fn lattice_steps(&self) -> Vec<(usize, usize, usize)> {
        let strides = self.strides();
        (1..self.monomial_count())
            .map(|flat| {
                let l = self.multi_index(flat);
                let k = l.iter().rposition(|&v| v > 0).expect("nonzero multi-index");
                (flat, k, flat - strides[k])
            })
            .collect()
    }

    /// `A x` by the monomial lattice recursion, each shift product summed in
    /// ascending column order and the coefficients accumulated in ascending
    /// flat order. The distributed realization follows the same sequence.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
        let mut lattice = vec![Vec::new(); self.monomial_count()];
        lattice[0] = x.to_vec();
        for (flat, k, pred) in self.lattice_steps() {
            let mut v = vec![C64::new(0.0, 0.0); n];
            self.shifts[k].matvec_into(&lattice[pred], &mut v);
            lattice[flat] = v;
        }
        let mut y = vec![C64::new(0.0, 0.0); n];
        for (h, v) in self.coeffs.iter().zip(&lattice) {
            for (yi, vi) in y.iter_mut().zip(v) {
                *yi += h * vi;
            }
        }
        Ok(y)
    }

    /// Filter of the Hermitian transpose: conjugated coefficients in `S_k^*`.
    pub fn adjoint(&self) -> Self {
        Self {
            shifts: self.shifts.iter().map(GeoMatrix::hermitian_transpose).collect(),
            degrees: self.degrees.clone(),
            coeffs: self.coeffs.iter().map(|h| h.conj()).collect(),
        }
    }

    /// Filter with coefficients `|h|` in shifts `|S_k|`.
    pub fn abs_filter(&self) -> Self {
        Self {
            shifts: self.shifts.iter().map(GeoMatrix::abs).collect(),
            degrees: self.degrees.clone(),
            coeffs: self.coeffs.iter().map(|h| C64::new(h.norm(), 0.0)).collect(),
        }
    }

    /// Same polynomial with the shifts listed in the given order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.shifts.len() {
            return Err(Error::DimensionMismatch { expected: self.shifts.len(), got: order.len() });
        }
        let shifts = order.iter().map(|&k| self.shifts[k].clone()).collect();
        let degrees: Vec<usize> = order.iter().map(|&k| self.degrees[k]).collect();
        let mut coeffs = vec![C64::new(0.0, 0.0); self.coeffs.len()];
        let probe = Self { shifts: Vec::new(), degrees: degrees.clone(), coeffs: coeffs.clone() };
        let strides = probe.strides();
        for (flat, &h) in self.coeffs.iter().enumerate() {
            let l = self.multi_index(flat);
            let target: usize = order.iter().zip(&strides).map(|(&k, s)| l[k] * s).sum();
            coeffs[target] = h;
        }
        Ok(Self { shifts, degrees, coeffs })
    }

    pub fn to_file(&self) -> PolyFilterFile {
        PolyFilterFile {
            shifts: self.shifts.iter().map(GeoMatrix::to_file).collect(),
            degrees: self.degrees.clone(),
            coeffs: self.coeffs.iter().map(|h| [h.re, h.im]).collect(),
        }
    }

    pub fn from_file(graph: Arc<Graph>, file: &PolyFilterFile) -> Result<Self> {
        let shifts = file
            .shifts
            .iter()
            .map(|s| GeoMatrix::from_file(graph.clone(), s))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = file.coeffs.iter().map(|c| C64::new(c[0], c[1])).collect();
        Self::new(shifts, file.degrees.clone(), coeffs)
    }

    pub fn load(graph: Arc<Graph>, path: impl AsRef<Path>) -> Result<Self> {
        let file: PolyFilterFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        Self::from_file(graph, &file)
    }
}

/// On-disk polynomial filter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyFilterFile {
    pub shifts: Vec<MatrixFile>,
    pub degrees: Vec<usize>,
    pub coeffs: Vec<[f64; 2]>,
}

/// Coefficients of `(1 - t/2)^m`.
fn spline_coeffs(m: usize) -> Result<Vec<C64>> {
    if m < 1 {
        return Err(Error::InvalidParameter("spline order must be at least 1".into()));
    }
    let mut h = vec![C64::new(0.0, 0.0); m + 1];
    let mut binom = 1.0;
    for k in 0..=m {
        h[k] = C64::new(binom * (-0.5f64).powi(k as i32), 0.0);
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    Ok(h)
}

/// Explicit matrix of the filter, each monomial formed as the literal product
/// `S_1^{l_1} ⋯ S_d^{l_d}`.
pub fn poly_to_matrix(f: &PolyFilter) -> Result<GeoMatrix> {
    let g = f.graph().clone();
    let mut monomials = vec![GeoMatrix::identity(g.clone()); f.monomial_count()];
    for (flat, k, pred) in f.lattice_steps() {
        monomials[flat] = monomials[pred].mul(&f.shifts[k])?;
    }
    let mut b = GeoMatrixBuilder::new(g);
    for (h, m) in f.coeffs.iter().zip(&monomials) {
        for (i, j, v) in m.triplets() {
            b.add(i, j, h * v)?;
        }
    }
    b.freeze()
}

/// `Â = Σ |h| |S_1|^{l_1} ⋯ |S_d|^{l_d}`, entrywise dominating the filter matrix.
pub fn abs_poly_matrix(f: &PolyFilter) -> Result<GeoMatrix> {
    poly_to_matrix(&f.abs_filter())
}

/// `(Â 1, Â^T 1)`: the absolute row and column sums evaluated through the
/// lattice recursion.
pub fn abs_row_col_sums(f: &PolyFilter) -> Result<(Vec<f64>, Vec<f64>)> {
    let ones = vec![C64::new(1.0, 0.0); f.n()];
    let abs = f.abs_filter();
    let a1 = abs.apply(&ones)?.into_iter().map(|z| z.re).collect();
    let a2 = abs.adjoint().apply(&ones)?.into_iter().map(|z| z.re).collect();
    Ok((a1, a2))
}

/// `Q̂_c(i, i)`: max of `(Â 1)(j)`, `(Â^T 1)(j)` and `c` over `j` within
/// `L_1 + ... + L_d` hops of `i`.
pub fn hat_q(f: &PolyFilter, c: f64) -> Result<DiagonalMatrix> {
    check_floor(c)?;
    let (a1, a2) = abs_row_col_sums(f)?;
    let q0: Vec<f64> = a1.iter().zip(&a2).map(|(&x, &y)| x.max(y).max(c)).collect();
    DiagonalMatrix::new(ball_max(f.graph(), &q0, f.total_degree()))
}

/// `Q̂_c^sym(i, i) = max((Â 1)(i), c)`.
pub fn hat_q_sym(f: &PolyFilter, c: f64) -> Result<DiagonalMatrix> {
    check_floor(c)?;
    let (a1, _) = abs_row_col_sums(f)?;
    DiagonalMatrix::new(a1.into_iter().map(|x| x.max(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::precond::preconditioner_p;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn laplacian_of_k2() {
        let g = Arc::new(Graph::complete(2).unwrap());
        let l = normalized_laplacian(&g);
        assert_eq!(l.to_dense(), vec![c(1.0), c(-1.0), c(-1.0), c(1.0)]);
    }

    #[test]
    fn laplacian_kernel_and_diagonal() {
        let g = Arc::new(Graph::random_geometric(60, 5).unwrap());
        let l = normalized_laplacian(&g);
        assert_eq!(l.width(), 1);
        assert!((0..60).all(|i| l.get(i, i) == c(1.0)));
        assert!(l.is_hermitian(0.0));
        let r = l.matvec(&sqrt_degree_vector(&g)).unwrap();
        assert!(r.iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn spline_examples() {
        let k2 = Arc::new(Graph::complete(2).unwrap());
        assert_eq!(spline_filter(&k2, 1).unwrap().to_dense(), vec![c(0.5); 4]);
        assert!(spline_filter(&k2, 0).is_err());

        let g = Arc::new(Graph::random_geometric(40, 2).unwrap());
        let h1 = spline_filter(&g, 1).unwrap();
        let h2 = spline_filter(&g, 2).unwrap();
        assert!(h2.max_abs_diff(&h1.mul(&h1).unwrap()).unwrap() == 0.0);
        assert!(h2.width() <= 2);
        let sd = sqrt_degree_vector(&g);
        let hs = h2.matvec(&sd).unwrap();
        assert!(hs.iter().zip(&sd).all(|(a, b)| (a - b).norm() < 1e-13));
    }

    #[test]
    fn spline_width_on_path() {
        let g = Arc::new(Graph::path(5).unwrap());
        assert_eq!(spline_filter(&g, 2).unwrap().width(), 2);
    }

    #[test]
    fn hyperlink_examples() {
        let k2 = Arc::new(Graph::complete(2).unwrap());
        assert_eq!(hyperlink_matrix(&k2).to_dense(), vec![c(0.0), c(1.0), c(1.0), c(0.0)]);
        let star = Arc::new(Graph::star(3).unwrap());
        let w = hyperlink_matrix(&star);
        let (rows, vals) = w.col(0);
        assert_eq!(rows, &[1, 2, 3]);
        assert!(vals.iter().all(|&v| v == c(1.0 / 3.0)));
        let g = Arc::new(Graph::random_geometric(80, 3).unwrap());
        let w = hyperlink_matrix(&g);
        assert_eq!(w.width(), 1);
        for s in w.col_abs_sums() {
            assert!((s - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn poly_examples() {
        let g = Arc::new(Graph::random_geometric(30, 6).unwrap());
        let adj = GeoMatrix::adjacency(g.clone());
        let f = PolyFilter::univariate(adj.clone(), vec![c(0.0), c(1.0)]).unwrap();
        assert_eq!(poly_to_matrix(&f).unwrap(), adj);
        let k = PolyFilter::univariate(adj.clone(), vec![C64::new(2.0, -1.0)]).unwrap();
        assert_eq!(poly_to_matrix(&k).unwrap(), GeoMatrix::identity(g.clone()).scale(C64::new(2.0, -1.0)).unwrap());
        for m in 1..=4 {
            let p = poly_to_matrix(&PolyFilter::spline(&g, m).unwrap()).unwrap();
            let direct = spline_filter(&g, m).unwrap();
            assert!(p.max_abs_diff(&direct).unwrap() <= 1e-12, "m = {m}");
            assert!(p.width() <= m);
        }
        let neg = PolyFilter::univariate(adj.clone(), vec![c(0.0), c(-1.0)]).unwrap();
        assert_eq!(abs_poly_matrix(&neg).unwrap(), adj);
        assert_eq!(abs_poly_matrix(&f).unwrap(), adj);
    }

    #[test]
    fn poly_rejects_bad_shifts() {
        let g = Arc::new(Graph::path(6).unwrap());
        let adj2 = GeoMatrix::adjacency(g.clone()).pow(2).unwrap();
        assert!(matches!(PolyFilter::univariate(adj2, vec![c(1.0)]), Err(Error::InvalidShift(_))));
        let adj = GeoMatrix::adjacency(g.clone());
        let diag = GeoMatrix::diagonal(g.clone(), &(0..6).map(|i| c(i as f64)).collect::<Vec<_>>()).unwrap();
        assert!(matches!(
            PolyFilter::new(vec![adj, diag], vec![1, 1], vec![c(1.0); 4]),
            Err(Error::InvalidShift(_))
        ));
    }

    #[test]
    fn apply_matches_matrix_and_permutation() {
        for seed in 0..10 {
            let f = instances::random_poly_filter(seed);
            let a = poly_to_matrix(&f).unwrap();
            assert!(a.width() <= f.total_degree());
            let x = instances::random_vector(seed, f.n());
            let y1 = f.apply(&x).unwrap();
            let y2 = a.matvec(&x).unwrap();
            for (u, v) in y1.iter().zip(&y2) {
                assert!((u - v).norm() <= 1e-12, "seed {seed}");
            }
            if f.shifts().len() == 2 {
                let p = poly_to_matrix(&f.permuted(&[1, 0]).unwrap()).unwrap();
                assert!(p.max_abs_diff(&a).unwrap() <= 1e-12);
            }
            let adj_direct = a.hermitian_transpose();
            let adj_poly = poly_to_matrix(&f.adjoint()).unwrap();
            assert!(adj_direct.max_abs_diff(&adj_poly).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn abs_matrix_dominates_and_hat_q_dominates() {
        for seed in 0..12 {
            let f = instances::random_poly_filter(seed);
            let a = poly_to_matrix(&f).unwrap();
            let hat = abs_poly_matrix(&f).unwrap();
            let n = f.n();
            let (ad, hd) = (a.to_dense(), hat.to_dense());
            for k in 0..n * n {
                assert!(hd[k].im == 0.0 && hd[k].re >= 0.0);
                assert!(ad[k].norm() <= hd[k].re + 1e-12);
            }
            let (a1, a2) = abs_row_col_sums(&f).unwrap();
            for (s, t) in a1.iter().zip(hat.row_abs_sums()) {
                assert!((s - t).abs() <= 1e-12 * t.max(1.0));
            }
            for (s, t) in a2.iter().zip(hat.col_abs_sums()) {
                assert!((s - t).abs() <= 1e-12 * t.max(1.0));
            }
            let c_floor = 0.01;
            let q = hat_q(&f, c_floor).unwrap();
            let qs = hat_q_sym(&f, c_floor).unwrap();
            let p = preconditioner_p(&a);
            let rows = a.row_abs_sums();
            for i in 0..n {
                assert!(q.get(i) >= p[i] - 1e-12);
                assert!(qs.get(i) >= rows[i] - 1e-12);
                assert!(qs.get(i) >= c_floor);
            }
        }
    }

    #[test]
    fn hat_q_of_constant_filter() {
        let g = Arc::new(Graph::random_geometric(12, 1).unwrap());
        let f = PolyFilter::univariate(GeoMatrix::adjacency(g), vec![c(1.0)]).unwrap();
        for floor in [0.01, 1.0, 3.5] {
            let expect = [1.0f64.max(floor); 12];
            assert_eq!(hat_q(&f, floor).unwrap().as_slice(), &expect[..]);
            assert_eq!(hat_q_sym(&f, floor).unwrap().as_slice(), &expect[..]);
        }
        assert!(hat_q(&f, 0.0).is_err());
    }

    #[test]
    fn spline_complement_is_identity_minus_spline() {
        let g = Arc::new(Graph::random_geometric(25, 9).unwrap());
        for m in 1..=3 {
            let a = poly_to_matrix(&PolyFilter::spline_complement(&g, m).unwrap()).unwrap();
            let direct = spline_filter(&g, m).unwrap().scale(c(-1.0)).unwrap().add_identity(c(1.0)).unwrap();
            assert!(a.max_abs_diff(&direct).unwrap() <= 1e-12);
        }
    }
}
