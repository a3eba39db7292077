//! Diagonal preconditioners built from localized absolute row and column sums.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{DiagonalMatrix, GeoMatrix};

/// `max(Σ_j |A(j, k)|, Σ_j |A(k, j)|)` for every vertex `k`.
pub fn local_abs_sums(a: &GeoMatrix) -> Vec<f64> {
    a.col_abs_sums().into_iter().zip(a.row_abs_sums()).map(|(c, r)| c.max(r)).collect()
}

/// Maximum of `values` over the `radius`-ball of every vertex.
pub fn ball_max(g: &Graph, values: &[f64], radius: usize) -> Vec<f64> {
    (0..g.n())
        .map(|i| {
            g.ball(i, radius)
                .expect("vertex in range")
                .into_iter()
                .map(|k| values[k])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// Entries `P_A(i, i)`: the largest localized absolute row or column sum over
/// the `ω(A)`-ball around `i`. May contain zeros (e.g. for the zero matrix),
/// hence plain values rather than a [`DiagonalMatrix`].
pub fn preconditioner_p(a: &GeoMatrix) -> Vec<f64> {
    ball_max(a.graph(), &local_abs_sums(a), a.width())
}

/// `‖A‖_S = max_i P_A(i, i)`.
pub fn schur_norm(a: &GeoMatrix) -> f64 {
    local_abs_sums(a).into_iter().fold(0.0, f64::max)
}

pub(crate) fn check_floor(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("floor c must be positive, got {c}")))
    }
}

/// `Q_c(i, i) = max(P_A(i, i), c)`.
pub fn make_qc(a: &GeoMatrix, c: f64) -> Result<DiagonalMatrix> {
    check_floor(c)?;
    DiagonalMatrix::new(preconditioner_p(a).into_iter().map(|p| p.max(c)).collect())
}

/// `Q_c^sym(i, i) = max(Σ_j |A(i, j)|, c)`.
pub fn make_qc_sym(a: &GeoMatrix, c: f64) -> Result<DiagonalMatrix> {
    check_floor(c)?;
    DiagonalMatrix::new(a.row_abs_sums().into_iter().map(|s| s.max(c)).collect())
}
