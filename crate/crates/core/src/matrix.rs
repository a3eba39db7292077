//! Sparse complex matrices localized on a graph.
//!
//! A [`GeoMatrix`] is assembled through a [`GeoMatrixBuilder`] and frozen:
//! freezing drops explicit zeros, rejects non-finite entries and computes the
//! geodesic-width once. Frozen matrices keep both a row-major and a
//! column-major copy so that vertex `i` can be handed exactly its row
//! `A(i, ·)` and column `A(·, i)`.
//!
//! Every reduction over a row or column runs in ascending index order. The
//! distributed programs in [`crate::sim`] use the same order, which makes the
//! centralized and vertex-level results bitwise comparable.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::C64;

/// Mutable assembly stage of a [`GeoMatrix`].
#[derive(Debug, Clone)]
pub struct GeoMatrixBuilder {
    graph: Arc<Graph>,
    entries: BTreeMap<(usize, usize), C64>,
}

impl GeoMatrixBuilder {
    pub fn new(graph: Arc<Graph>) -> Self {
        Self { graph, entries: BTreeMap::new() }
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        let n = self.graph.n();
        for v in [i, j] {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
        }
        Ok(())
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) -> Result<&mut Self> {
        self.check(i, j)?;
        self.entries.insert((i, j), value);
        Ok(self)
    }

    pub fn add(&mut self, i: usize, j: usize, value: C64) -> Result<&mut Self> {
        self.check(i, j)?;
        *self.entries.entry((i, j)).or_default() += value;
        Ok(self)
    }

    pub fn freeze(self) -> Result<GeoMatrix> {
        let triplets: Vec<_> = self.entries.into_iter().map(|((i, j), v)| (i, j, v)).collect();
        GeoMatrix::from_sorted_triplets(self.graph, triplets)
    }
}

/// Compressed storage: `ptr[i]..ptr[i + 1]` indexes the entries of line `i`.
#[derive(Debug, Clone, PartialEq)]
struct Compressed {
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<C64>,
}

impl Compressed {
    fn line(&self, i: usize) -> (&[usize], &[C64]) {
        let r = self.ptr[i]..self.ptr[i + 1];
        (&self.idx[r.clone()], &self.val[r])
    }

    /// Builds from triplets sorted by (major, minor).
    fn from_sorted(n: usize, triplets: impl Iterator<Item = (usize, usize, C64)>) -> Self {
        let mut ptr = vec![0; n + 1];
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for (major, minor, v) in triplets {
            ptr[major + 1] += 1;
            idx.push(minor);
            val.push(v);
        }
        for i in 0..n {
            ptr[i + 1] += ptr[i];
        }
        Self { ptr, idx, val }
    }
}

/// Frozen complex matrix on a graph with cached geodesic-width.
#[derive(Debug, Clone)]
pub struct GeoMatrix {
    graph: Arc<Graph>,
    rows: Compressed,
    cols: Compressed,
    width: usize,
}

impl PartialEq for GeoMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.rows == other.rows
    }
}

impl GeoMatrix {
    fn from_sorted_triplets(graph: Arc<Graph>, triplets: Vec<(usize, usize, C64)>) -> Result<Self> {
        let n = graph.n();
        let mut kept = Vec::with_capacity(triplets.len());
        for (i, j, v) in triplets {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
            if v != C64::new(0.0, 0.0) {
                kept.push((i, j, v));
            }
        }
        let rows = Compressed::from_sorted(n, kept.iter().copied());
        let mut by_col: Vec<_> = kept.iter().map(|&(i, j, v)| (j, i, v)).collect();
        by_col.sort_by_key(|&(j, i, _)| (j, i));
        let cols = Compressed::from_sorted(n, by_col.into_iter());
        let width = geodesic_width(&graph, kept.iter().map(|&(i, j, _)| (i, j)));
        Ok(Self { graph, rows, cols, width })
    }

    /// Builds from unsorted triplets; duplicates are summed.
    pub fn from_triplets(graph: Arc<Graph>, triplets: &[(usize, usize, C64)]) -> Result<Self> {
        let mut b = GeoMatrixBuilder::new(graph);
        for &(i, j, v) in triplets {
            b.add(i, j, v)?;
        }
        b.freeze()
    }

    pub fn zero(graph: Arc<Graph>) -> Self {
        Self::from_sorted_triplets(graph, Vec::new()).expect("empty matrix")
    }

    pub fn identity(graph: Arc<Graph>) -> Self {
        Self::diagonal(graph.clone(), &vec![C64::new(1.0, 0.0); graph.n()]).expect("identity")
    }

    pub fn diagonal(graph: Arc<Graph>, diag: &[C64]) -> Result<Self> {
        if diag.len() != graph.n() {
            return Err(Error::DimensionMismatch { expected: graph.n(), got: diag.len() });
        }
        Self::from_sorted_triplets(graph, diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect())
    }

    /// Adjacency matrix of the graph.
    pub fn adjacency(graph: Arc<Graph>) -> Self {
        let mut t = Vec::new();
        for i in 0..graph.n() {
            t.extend(graph.neighbors(i).iter().map(|&j| (i, j, C64::new(1.0, 0.0))));
        }
        Self::from_sorted_triplets(graph, t).expect("adjacency")
    }

    /// Dense row-major input; entries beyond the graph's reach still count
    /// towards the width.
    pub fn from_dense(graph: Arc<Graph>, dense: &[C64]) -> Result<Self> {
        let n = graph.n();
        if dense.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: dense.len() });
        }
        let t = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, dense[i * n + j])).collect();
        Self::from_sorted_triplets(graph, t)
    }

    pub fn to_dense(&self) -> Vec<C64> {
        let n = self.n();
        let mut d = vec![C64::new(0.0, 0.0); n * n];
        for (i, j, v) in self.triplets() {
            d[i * n + j] = v;
        }
        d
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    /// Geodesic-width: the largest hop distance between the endpoints of a
    /// stored entry.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn nnz(&self) -> usize {
        self.rows.val.len()
    }

    /// Stored entries of row `i` as (column, value), columns ascending.
    pub fn row(&self, i: usize) -> (&[usize], &[C64]) {
        self.rows.line(i)
    }

    /// Stored entries of column `i` as (row, value), rows ascending.
    pub fn col(&self, i: usize) -> (&[usize], &[C64]) {
        self.cols.line(i)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (idx, val) = self.row(i);
        idx.binary_search(&j).map(|k| val[k]).unwrap_or_default()
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.n()).flat_map(move |i| {
            let (idx, val) = self.row(i);
            idx.iter().zip(val).map(move |(&j, &v)| (i, j, v))
        })
    }

    fn same_graph(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    /// `y(i) = Σ_j A(i, j) x(j)`, summed in ascending `j`.
    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.len() });
        }
        let mut y = vec![C64::new(0.0, 0.0); self.n()];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// Unchecked [`matvec`](Self::matvec) into a caller-provided buffer.
    pub fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (idx, val) = self.rows.line(i);
            let mut acc = C64::new(0.0, 0.0);
            for (&j, &a) in idx.iter().zip(val) {
                acc += a * x[j];
            }
            *yi = acc;
        }
    }

    pub fn hermitian_transpose(&self) -> Self {
        let t = self.triplets().map(|(i, j, v)| (j, i, v.conj())).collect::<Vec<_>>();
        let mut t = t;
        t.sort_by_key(|&(i, j, _)| (i, j));
        Self::from_sorted_triplets(self.graph.clone(), t).expect("finite entries stay finite")
    }

    pub fn map_entries(&self, f: impl Fn(C64) -> C64) -> Result<Self> {
        let t = self.triplets().map(|(i, j, v)| (i, j, f(v))).collect();
        Self::from_sorted_triplets(self.graph.clone(), t)
    }

    /// Entrywise modulus `|A|`.
    pub fn abs(&self) -> Self {
        self.map_entries(|v| C64::new(v.norm(), 0.0)).expect("finite")
    }

    pub fn scale(&self, s: C64) -> Result<Self> {
        self.map_entries(|v| v * s)
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: C64, other: &Self) -> Result<Self> {
        self.same_graph(other)?;
        let mut b = GeoMatrixBuilder::new(self.graph.clone());
        for (i, j, v) in self.triplets() {
            b.add(i, j, v)?;
        }
        for (i, j, v) in other.triplets() {
            b.add(i, j, alpha * v)?;
        }
        b.freeze()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    /// `self + mu * I`.
    pub fn add_identity(&self, mu: C64) -> Result<Self> {
        let mut b = GeoMatrixBuilder::new(self.graph.clone());
        for (i, j, v) in self.triplets() {
            b.add(i, j, v)?;
        }
        for i in 0..self.n() {
            b.add(i, i, mu)?;
        }
        b.freeze()
    }

    /// Sparse product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_graph(other)?;
        let n = self.n();
        let mut acc = vec![C64::new(0.0, 0.0); n];
        let mut touched = vec![false; n];
        let mut t = Vec::new();
        for i in 0..n {
            let mut cols = Vec::new();
            let (idx, val) = self.row(i);
            for (&k, &a) in idx.iter().zip(val) {
                let (jdx, bval) = other.row(k);
                for (&j, &b) in jdx.iter().zip(bval) {
                    if !touched[j] {
                        touched[j] = true;
                        cols.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            cols.sort_unstable();
            for j in cols {
                t.push((i, j, acc[j]));
                acc[j] = C64::new(0.0, 0.0);
                touched[j] = false;
            }
        }
        Self::from_sorted_triplets(self.graph.clone(), t)
    }

    pub fn pow(&self, m: usize) -> Result<Self> {
        let mut out = Self::identity(self.graph.clone());
        for _ in 0..m {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.rows.val.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |A(i, j) - B(i, j)|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.triplets().all(|(i, j, v)| (v - self.get(j, i).conj()).norm() <= tol)
    }

    /// `Σ_j |A(i, j)|` for each row.
    pub fn row_abs_sums(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.row(i).1.iter().map(|v| v.norm()).sum()).collect()
    }

    /// `Σ_j |A(j, i)|` for each column.
    pub fn col_abs_sums(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.col(i).1.iter().map(|v| v.norm()).sum()).collect()
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile { n: self.n(), triplets: self.triplets().map(|(i, j, v)| (i, j, v.re, v.im)).collect() }
    }

    pub fn from_file(graph: Arc<Graph>, file: &MatrixFile) -> Result<Self> {
        if file.n != graph.n() {
            return Err(Error::DimensionMismatch { expected: graph.n(), got: file.n });
        }
        let t: Vec<_> = file.triplets.iter().map(|&(i, j, re, im)| (i, j, C64::new(re, im))).collect();
        Self::from_triplets(graph, &t)
    }

    pub fn load(graph: Arc<Graph>, path: impl AsRef<Path>) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        Self::from_file(graph, &file)
    }
}

/// On-disk matrix: `{"n": N, "triplets": [[i, j, re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub n: usize,
    pub triplets: Vec<(usize, usize, f64, f64)>,
}

/// Largest hop distance between the endpoints of the given index pairs, 0 if
/// none lie off the diagonal.
pub fn geodesic_width(graph: &Graph, pairs: impl IntoIterator<Item = (usize, usize)>) -> usize {
    let mut by_row: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, j) in pairs {
        if i != j {
            by_row.entry(i).or_default().push(j);
        }
    }
    let mut width = 0;
    for (i, cols) in by_row {
        let dist = graph.bfs_distances(i).expect("validated vertex");
        for j in cols {
            width = width.max(dist[j]);
        }
    }
    width
}

/// Diagonal matrix with strictly positive real entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMatrix {
    d: Vec<f64>,
}

impl DiagonalMatrix {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = d.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidPreconditioner { index, value });
        }
        Ok(Self { d })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.d[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// `Q x`
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.d.iter().zip(x).map(|(&q, &v)| v * q).collect()
    }

    /// `Q^p x` for a real power `p`.
    pub fn apply_pow(&self, p: f64, x: &[C64]) -> Vec<C64> {
        self.d.iter().zip(x).map(|(&q, &v)| v * q.powf(p)).collect()
    }
}
