//! Seeded random problem instances shared by the property suites.

use std::sync::Arc;

use rand::Rng;

use crate::eig::Dense;
use crate::filters::PolyFilter;
use crate::graph::Graph;
use crate::matrix::{GeoMatrix, GeoMatrixBuilder};
use crate::rng::{self, StreamRng, INSTANCE_STREAM};
use crate::C64;

fn instance_rng(seed: u64, salt: u64) -> StreamRng {
    rng::stream(seed, INSTANCE_STREAM.wrapping_add(salt << 20))
}

/// Matrix with a uniform complex entry on every pair within `width` hops.
pub fn random_local_matrix(g: &Arc<Graph>, width: usize, seed: u64) -> GeoMatrix {
    let mut r = instance_rng(seed, 1);
    let mut b = GeoMatrixBuilder::new(g.clone());
    for i in 0..g.n() {
        for j in g.ball(i, width).expect("vertex in range") {
            b.set(i, j, rng::uniform_complex(&mut r)).expect("in range");
        }
    }
    b.freeze().expect("finite")
}

/// Positive semidefinite `(B L)^* (B L)` with `B` random of width 1 and `L`
/// the normalized Laplacian, so `(√d_i)_i` lies in its kernel. Width at most 4.
pub fn random_psd_matrix(g: &Arc<Graph>, seed: u64) -> GeoMatrix {
    let b = random_local_matrix(g, 1, seed);
    let bl = b.mul(&crate::filters::normalized_laplacian(g)).expect("same graph");
    bl.hermitian_transpose().mul(&bl).expect("same graph")
}

pub fn random_vector(seed: u64, n: usize) -> Vec<C64> {
    let mut r = instance_rng(seed, 2);
    (0..n).map(|_| rng::uniform_complex(&mut r)).collect()
}

/// Dense Hermitian `(M + M*) / 2` with `M` uniform complex entries.
pub fn random_hermitian(seed: u64, n: usize) -> Dense {
    let m = Dense::from_row_major(n, random_vector(seed, n * n)).expect("square");
    let ma = m.adjoint();
    let mut h = m.clone();
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = (m[(i, j)] + ma[(i, j)]) * 0.5;
        }
    }
    h
}

pub fn random_complex(seed: u64) -> C64 {
    rng::uniform_complex(&mut instance_rng(seed, 3))
}

/// Random polynomial filter with `d ∈ {1, 2}` shifts, degrees `L_k ≤ 2` and
/// at most 32 vertices.
///
/// Two-shift filters live on a grid and use weighted row and column shifts
/// `P ⊗ I` and `I ⊗ P'`, which commute exactly. One-shift filters use a random
/// width-1 matrix on a random geometric graph.
pub fn random_poly_filter(seed: u64) -> PolyFilter {
    let mut r = instance_rng(seed, 4);
    let two = r.gen_bool(0.5);
    if two {
        let rows = r.gen_range(2..=5);
        let cols = r.gen_range(2..=(32 / rows).min(6));
        let g = Arc::new(Graph::grid(rows, cols).expect("grid"));
        let pr = random_tridiagonal(&mut r, rows);
        let pc = random_tridiagonal(&mut r, cols);
        let mut s1 = GeoMatrixBuilder::new(g.clone());
        let mut s2 = GeoMatrixBuilder::new(g.clone());
        for i in 0..rows {
            for c in 0..cols {
                let v = i * cols + c;
                for &(i2, w) in &pr[i] {
                    s1.set(v, i2 * cols + c, w).expect("in range");
                }
                for &(c2, w) in &pc[c] {
                    s2.set(v, i * cols + c2, w).expect("in range");
                }
            }
        }
        let degrees = vec![r.gen_range(0..=2), r.gen_range(0..=2)];
        let count = (degrees[0] + 1) * (degrees[1] + 1);
        let coeffs = (0..count).map(|_| rng::uniform_complex(&mut r)).collect();
        PolyFilter::new(vec![s1.freeze().expect("finite"), s2.freeze().expect("finite")], degrees, coeffs)
            .expect("commuting shifts")
    } else {
        let n = r.gen_range(4..=32);
        let g = Arc::new(Graph::random_geometric(n, r.gen()).expect("graph"));
        let s = random_local_matrix(&g, 1, r.gen());
        let degree = r.gen_range(0..=2);
        let coeffs = (0..=degree).map(|_| rng::uniform_complex(&mut r)).collect();
        PolyFilter::univariate(s, coeffs).expect("width-1 shift")
    }
}

fn random_tridiagonal(r: &mut StreamRng, n: usize) -> Vec<Vec<(usize, C64)>> {
    (0..n)
        .map(|i| {
            (i.saturating_sub(1)..=(i + 1).min(n - 1))
                .map(|j| (j, rng::uniform_complex(r)))
                .collect()
        })
        .collect()
}
