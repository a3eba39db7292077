//! Vertex-level programs run on a [`NetworkSim`].
//!
//! Every program loads only the matrix entries a vertex stores (its row and
//! column within its ball), then proceeds in exchange rounds. Local sums are
//! formed in ascending index order with the same per-entry scaling as the
//! centralized iterations in [`crate::solvers`], so results agree bit for bit.

use crate::error::{Error, Result};
use crate::filters::PolyFilter;
use crate::matrix::{DiagonalMatrix, GeoMatrix};
use crate::precond::check_floor;
use crate::solvers::{inv, inv_sq, Algorithm, Trajectory};
use crate::C64;

use super::{local_dot, NetworkSim};

const ZERO: C64 = C64::new(0.0, 0.0);

/// What a single vertex knows and holds.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexState {
    pub id: usize,
    /// `(j, A(i, j))`, `j` ascending, possibly pre-scaled.
    pub local_row: Vec<(usize, C64)>,
    /// `(j, A(j, i))`, `j` ascending, possibly pre-scaled.
    pub local_col: Vec<(usize, C64)>,
    pub q: f64,
    pub x: C64,
    /// Intermediate values of the running program.
    pub scratch: Vec<C64>,
}

impl VertexState {
    fn new(id: usize, q: f64, x: C64) -> Self {
        Self { id, local_row: Vec::new(), local_col: Vec::new(), q, x, scratch: Vec::new() }
    }
}

fn check_inputs(sim: &NetworkSim, n: usize, q: &DiagonalMatrix, x0: &[C64]) -> Result<()> {
    if n != sim.n() {
        return Err(Error::DimensionMismatch { expected: sim.n(), got: n });
    }
    if q.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: q.len() });
    }
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
    }
    Ok(())
}

fn gather(states: &[VertexState]) -> Vec<C64> {
    states.iter().map(|s| s.x).collect()
}

/// Line `i` of `H - λI` from the stored entries of `H`, with the same
/// additions as [`GeoMatrix::add_identity`]; exact zeros dropped.
fn shifted_line(line: (&[usize], &[C64]), i: usize, lambda: C64) -> Vec<(usize, C64)> {
    let (idx, val) = line;
    let mu = -lambda;
    let mut out: Vec<(usize, C64)> = idx.iter().zip(val).map(|(&j, &v)| (j, ZERO + v)).collect();
    match out.binary_search_by_key(&i, |e| e.0) {
        Ok(k) => out[k].1 += mu,
        Err(k) => out.insert(k, (i, ZERO + mu)),
    }
    out.retain(|&(_, v)| v != ZERO);
    out
}

fn log_line(sim: &mut NetworkSim, i: usize, line: &[(usize, C64)]) {
    if sim.logging() {
        for &(j, _) in line {
            sim.log_local_read(i, j);
        }
    }
}

/// Distributed `x_{n+1} = (I - Q^{-2} A* A) x_n` with `A = H - λI`.
///
/// Each iteration takes two rounds of radius `ω(H)`: vertices share `x_n`
/// and form `x̂ = A x_n` from their rows, then share `x̂` and subtract
/// `Q(i,i)^{-2} (A* x̂)(i)` formed from their columns.
pub fn run_pgda(
    sim: &mut NetworkSim,
    h: &GeoMatrix,
    lambda: C64,
    q: &DiagonalMatrix,
    x0: &[C64],
    steps: usize,
) -> Result<Trajectory> {
    check_inputs(sim, h.n(), q, x0)?;
    let radius = h.width();
    sim.require_range(radius)?;
    let mut states: Vec<VertexState> = (0..h.n()).map(|i| VertexState::new(i, q.get(i), x0[i])).collect();
    for s in states.iter_mut() {
        let i = s.id;
        s.local_row = shifted_line(h.row(i), i, lambda);
        let w = inv_sq(s.q);
        s.local_col = shifted_line(h.col(i), i, lambda).into_iter().map(|(j, v)| (j, v.conj() * w)).collect();
        s.scratch = vec![ZERO];
        log_line(sim, i, &s.local_row);
        log_line(sim, i, &s.local_col);
    }
    let mut iterates = Vec::with_capacity(steps + 1);
    iterates.push(gather(&states));
    for _ in 0..steps {
        sim.exchange(&mut states, radius, "x", |s| s.x, |s, inbox| {
            s.scratch[0] = local_dot(&s.local_row, s.id, s.x, inbox)?;
            Ok(())
        })?;
        sim.exchange(&mut states, radius, "x_hat", |s| s.scratch[0], |s, inbox| {
            let d = local_dot(&s.local_col, s.id, s.scratch[0], inbox)?;
            s.x -= d;
            Ok(())
        })?;
        iterates.push(gather(&states));
    }
    Ok(Trajectory { lambda: Some(lambda), ..Trajectory::new(Algorithm::Pgda, iterates) })
}

/// Distributed `x_{n+1} = (I - Q^{-1} A) x_n`, one round of radius `ω(A)`
/// per iteration.
pub fn run_spgda(sim: &mut NetworkSim, a: &GeoMatrix, q: &DiagonalMatrix, x0: &[C64], steps: usize) -> Result<Trajectory> {
    check_inputs(sim, a.n(), q, x0)?;
    let radius = a.width();
    sim.require_range(radius)?;
    let mut states: Vec<VertexState> = (0..a.n()).map(|i| VertexState::new(i, q.get(i), x0[i])).collect();
    for s in states.iter_mut() {
        let w = inv(s.q);
        let (idx, val) = a.row(s.id);
        s.local_row = idx.iter().zip(val).map(|(&j, &v)| (j, v * w)).collect();
        log_line(sim, s.id, &s.local_row);
    }
    let mut iterates = Vec::with_capacity(steps + 1);
    iterates.push(gather(&states));
    for _ in 0..steps {
        sim.exchange(&mut states, radius, "x", |s| s.x, |s, inbox| {
            let d = local_dot(&s.local_row, s.id, s.x, inbox)?;
            s.x -= d;
            Ok(())
        })?;
        iterates.push(gather(&states));
    }
    Ok(Trajectory::new(Algorithm::Spgda, iterates))
}

/// `rounds` one-hop max rounds: afterwards `values[i]` is the maximum of the
/// initial values over `B(i, rounds)`.
fn max_cascade(sim: &mut NetworkSim, values: Vec<f64>, rounds: usize, tag: super::Tag) -> Result<Vec<f64>> {
    let mut states: Vec<f64> = values;
    for _ in 0..rounds {
        sim.exchange(&mut states, 1, tag, |v| C64::new(*v, 0.0), |v, inbox| {
            *v = inbox.iter().map(|e| e.payload.re).fold(*v, f64::max);
            Ok(())
        })?;
    }
    Ok(states)
}

/// Entries `P_A(i, i)` computed at the vertices: local absolute row and
/// column sums followed by `ω(A)` one-hop max rounds.
pub fn distributed_p(sim: &mut NetworkSim, a: &GeoMatrix) -> Result<Vec<f64>> {
    if a.n() != sim.n() {
        return Err(Error::DimensionMismatch { expected: sim.n(), got: a.n() });
    }
    let width = a.width();
    sim.require_range(width)?;
    if width > 0 {
        sim.require_range(1)?;
    }
    let mut local = Vec::with_capacity(a.n());
    for i in 0..a.n() {
        let (rows, col_vals) = a.col(i);
        let (cols, row_vals) = a.row(i);
        if sim.logging() {
            for &j in rows.iter().chain(cols) {
                sim.log_local_read(i, j);
            }
        }
        let col_sum: f64 = col_vals.iter().map(|v| v.norm()).sum();
        let row_sum: f64 = row_vals.iter().map(|v| v.norm()).sum();
        local.push(col_sum.max(row_sum));
    }
    max_cascade(sim, local, width, "p_max")
}

struct LatticeVertex {
    id: usize,
    /// Row `i` of every shift.
    rows: Vec<Vec<(usize, C64)>>,
    values: Vec<C64>,
}

/// `f(S_1, ..., S_d) x` by the monomial lattice recursion, one round of
/// radius 1 per lattice step. A constant filter needs no communication.
pub fn poly_apply_distributed(sim: &mut NetworkSim, f: &PolyFilter, x: &[C64]) -> Result<Vec<C64>> {
    let n = f.n();
    if n != sim.n() {
        return Err(Error::DimensionMismatch { expected: sim.n(), got: n });
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    if let Some(k) = f.shifts().iter().position(|s| s.width() > 1) {
        return Err(Error::InvalidShift(format!("shift {k} has geodesic-width {}", f.shifts()[k].width())));
    }
    sim.require_range(1)?;
    let count = f.monomial_count();
    let mut states: Vec<LatticeVertex> = (0..n)
        .map(|i| {
            let rows = f
                .shifts()
                .iter()
                .map(|s| {
                    let (idx, val) = s.row(i);
                    idx.iter().copied().zip(val.iter().copied()).collect::<Vec<_>>()
                })
                .collect();
            let mut values = vec![ZERO; count];
            values[0] = x[i];
            LatticeVertex { id: i, rows, values }
        })
        .collect();
    if sim.logging() {
        for s in &states {
            for row in &s.rows {
                for &(j, _) in row {
                    sim.log_local_read(s.id, j);
                }
            }
        }
    }
    for (flat, k, pred) in f.lattice_steps() {
        sim.exchange(&mut states, 1, "lattice", |s| s.values[pred], |s, inbox| {
            s.values[flat] = local_dot(&s.rows[k], s.id, s.values[pred], inbox)?;
            Ok(())
        })?;
    }
    let coeffs = f.coeffs();
    Ok(states
        .iter()
        .map(|s| {
            let mut y = ZERO;
            for (h, v) in coeffs.iter().zip(&s.values) {
                y += h * v;
            }
            y
        })
        .collect())
}

/// Which update of a polynomial-filter iteration to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyStep {
    /// `x - Q^{-2} A* A x`
    General,
    /// `x - Q^{-1} A x`
    Symmetric,
}

/// One iteration from a shared `x_n`, returning both
/// `x_{n+1} = x_n - Q^{-2} A* A x_n` and `x̃_{n+1} = x_n - Q^{-1} A x_n`,
/// with `A` the filter matrix and `A*` applied as the adjoint filter.
pub fn run_poly_iteration(
    sim: &mut NetworkSim,
    f: &PolyFilter,
    q: &DiagonalMatrix,
    x: &[C64],
) -> Result<(Vec<C64>, Vec<C64>)> {
    check_inputs(sim, f.n(), q, x)?;
    let x_hat = poly_apply_distributed(sim, f, x)?;
    let x_check = poly_apply_distributed(sim, &f.adjoint(), &x_hat)?;
    let general = (0..x.len()).map(|i| x[i] - x_check[i] * inv_sq(q.get(i))).collect();
    let symmetric = (0..x.len()).map(|i| x[i] - x_hat[i] * inv(q.get(i))).collect();
    Ok((general, symmetric))
}

fn run_poly(
    sim: &mut NetworkSim,
    f: &PolyFilter,
    q: &DiagonalMatrix,
    x0: &[C64],
    steps: usize,
    kind: PolyStep,
) -> Result<Trajectory> {
    check_inputs(sim, f.n(), q, x0)?;
    let adjoint = f.adjoint();
    let mut iterates = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    iterates.push(x.clone());
    for _ in 0..steps {
        let x_hat = poly_apply_distributed(sim, f, &x)?;
        match kind {
            PolyStep::General => {
                let x_check = poly_apply_distributed(sim, &adjoint, &x_hat)?;
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi -= x_check[i] * inv_sq(q.get(i));
                }
            }
            PolyStep::Symmetric => {
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi -= x_hat[i] * inv(q.get(i));
                }
            }
        }
        iterates.push(x.clone());
    }
    let algorithm = match kind {
        PolyStep::General => Algorithm::Pgda1h,
        PolyStep::Symmetric => Algorithm::Spgda1h,
    };
    Ok(Trajectory::new(algorithm, iterates))
}

/// Iterates the `x` branch of [`run_poly_iteration`].
pub fn run_poly_pgda(sim: &mut NetworkSim, f: &PolyFilter, q: &DiagonalMatrix, x0: &[C64], steps: usize) -> Result<Trajectory> {
    run_poly(sim, f, q, x0, steps, PolyStep::General)
}

/// Iterates the `x̃` branch of [`run_poly_iteration`].
pub fn run_poly_spgda(sim: &mut NetworkSim, f: &PolyFilter, q: &DiagonalMatrix, x0: &[C64], steps: usize) -> Result<Trajectory> {
    run_poly(sim, f, q, x0, steps, PolyStep::Symmetric)
}

/// `(Q̂_c, Q̂_c^sym)` built at the vertices: `Â 1` and `Â* 1` through the
/// lattice recursion of the absolute filter, then `L_1 + ... + L_d` one-hop
/// max rounds.
pub fn construct_hatq_distributed(
    sim: &mut NetworkSim,
    f: &PolyFilter,
    c: f64,
) -> Result<(DiagonalMatrix, DiagonalMatrix)> {
    check_floor(c)?;
    let ones = vec![C64::new(1.0, 0.0); f.n()];
    let abs = f.abs_filter();
    let a1: Vec<f64> = poly_apply_distributed(sim, &abs, &ones)?.into_iter().map(|z| z.re).collect();
    let a2: Vec<f64> = poly_apply_distributed(sim, &abs.adjoint(), &ones)?.into_iter().map(|z| z.re).collect();
    let q0: Vec<f64> = a1.iter().zip(&a2).map(|(&x, &y)| x.max(y).max(c)).collect();
    let hat = max_cascade(sim, q0, f.total_degree(), "q_max")?;
    let sym = a1.into_iter().map(|x| x.max(c)).collect();
    Ok((DiagonalMatrix::new(hat)?, DiagonalMatrix::new(sym)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{hat_q, hat_q_sym, normalized_laplacian, poly_to_matrix};
    use crate::graph::Graph;
    use crate::precond::{make_qc, make_qc_sym, preconditioner_p};
    use crate::solvers::{pgda_centralized, shift_for_eigenvalue, spgda_centralized, ShiftSign};
    use crate::{instances, rng};
    use std::sync::Arc;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn pgda_matches_centralized_bitwise() {
        for seed in 0..6 {
            let n = [8, 16, 40][seed as usize % 3];
            let g = Arc::new(Graph::random_geometric(n, seed).unwrap());
            let h = instances::random_local_matrix(&g, 1 + seed as usize % 2, seed);
            let lambda = instances::random_complex(seed);
            let a = shift_for_eigenvalue(&h, lambda, ShiftSign::HMinusLambda).unwrap();
            let q = make_qc(&a, 0.01).unwrap();
            let x0 = rng::trial_initial_vector(seed, 0, n);
            let mut sim = NetworkSim::new(g.clone(), 2);
            let d = run_pgda(&mut sim, &h, lambda, &q, &x0, 30).unwrap();
            let c = pgda_centralized(&a, &q, &x0, 30).unwrap();
            assert_eq!(d.iterates, c.iterates);
            assert_eq!(sim.round_count(), 60);
        }
    }

    #[test]
    fn pgda_trivial_examples() {
        let g = Arc::new(Graph::random_geometric(12, 3).unwrap());
        let id = GeoMatrix::identity(g.clone());
        let x0 = rng::trial_initial_vector(1, 0, 12);
        let q = DiagonalMatrix::constant(12, 1.0).unwrap();
        let mut sim = NetworkSim::new(g.clone(), 1);
        let t = run_pgda(&mut sim, &id, c(1.0), &q, &x0, 4).unwrap();
        assert!(t.iterates.iter().all(|x| *x == x0));
        let q = make_qc(&id, 0.01).unwrap();
        let t = run_pgda(&mut sim, &id, c(0.0), &q, &x0, 3).unwrap();
        assert!(t.iterates[1..].iter().all(|x| x.iter().all(|z| *z == c(0.0))));
    }

    #[test]
    fn range_violation_before_start() {
        let g = Arc::new(Graph::path(6).unwrap());
        let h = instances::random_local_matrix(&g, 2, 1);
        let q = DiagonalMatrix::constant(6, 10.0).unwrap();
        let mut sim = NetworkSim::new(g, 1);
        let err = run_pgda(&mut sim, &h, c(0.0), &q, &[c(1.0); 6], 5);
        assert!(matches!(err, Err(Error::RangeViolation { width: 2, range: 1 })));
        assert!(matches!(run_spgda(&mut sim, &h, &q, &[c(1.0); 6], 5), Err(Error::RangeViolation { .. })));
        assert_eq!(sim.round_count(), 0);
    }

    #[test]
    fn spgda_examples_and_equivalence() {
        let g = Arc::new(Graph::complete(2).unwrap());
        let a = normalized_laplacian(&g);
        let q = DiagonalMatrix::new(vec![2.0, 2.0]).unwrap();
        let mut sim = NetworkSim::new(g, 1);
        let t = run_spgda(&mut sim, &a, &q, &[c(1.0), c(0.0)], 3).unwrap();
        assert!(t.iterates[1..].iter().all(|x| *x == vec![c(0.5), c(0.5)]));
        assert_eq!(sim.round_count(), 3);

        let g = Arc::new(Graph::random_geometric(30, 8).unwrap());
        let a = instances::random_psd_matrix(&g, 8);
        let q = make_qc_sym(&a, 0.01).unwrap();
        let x0 = rng::trial_initial_vector(8, 0, 30);
        let mut sim = NetworkSim::new(g, a.width());
        let d = run_spgda(&mut sim, &a, &q, &x0, 40).unwrap();
        assert_eq!(d.iterates, spgda_centralized(&a, &q, &x0, 40).unwrap().iterates);
        assert_eq!(sim.round_count(), 40);
    }

    #[test]
    fn locality_and_message_bounds() {
        let g = Arc::new(Graph::random_geometric(40, 2).unwrap());
        let h = instances::random_local_matrix(&g, 2, 2);
        let q = make_qc(&h, 0.01).unwrap();
        let mut sim = NetworkSim::new(g.clone(), 2).with_access_log();
        run_pgda(&mut sim, &h, c(0.2), &q, &instances::random_vector(2, 40), 5).unwrap();
        let dist: Vec<Vec<usize>> = (0..40).map(|i| g.bfs_distances(i).unwrap()).collect();
        assert!(sim.access_log().unwrap().iter().all(|a| dist[a.reader][a.owner] <= 2));
        let balls = g.balls(2);
        for r in sim.rounds() {
            for (i, &m) in r.messages_sent.iter().enumerate() {
                assert!(m < balls[i].len());
            }
        }
    }

    #[test]
    fn parallel_schedule_is_deterministic() {
        let g = Arc::new(Graph::random_geometric(64, 4).unwrap());
        let h = instances::random_local_matrix(&g, 1, 4);
        let q = make_qc(&h, 0.01).unwrap();
        let x0 = instances::random_vector(4, 64);
        let mut a = NetworkSim::new(g.clone(), 1);
        let mut b = NetworkSim::new(g, 1).parallel(true);
        let ta = run_pgda(&mut a, &h, c(0.5), &q, &x0, 20).unwrap();
        let tb = run_pgda(&mut b, &h, c(0.5), &q, &x0, 20).unwrap();
        assert_eq!(ta.iterates, tb.iterates);
        assert_eq!(a.rounds(), b.rounds());
    }

    #[test]
    fn distributed_p_examples() {
        let g = Arc::new(Graph::path(3).unwrap());
        let mut sim = NetworkSim::new(g.clone(), 1);
        assert_eq!(distributed_p(&mut sim, &GeoMatrix::adjacency(g.clone())).unwrap(), vec![2.0; 3]);
        assert_eq!(distributed_p(&mut sim, &GeoMatrix::identity(g)).unwrap(), vec![1.0; 3]);
        for seed in 0..10 {
            let g = Arc::new(Graph::random_geometric(24, seed).unwrap());
            let a = instances::random_local_matrix(&g, 1 + seed as usize % 3, seed);
            let mut sim = NetworkSim::new(g, 3);
            assert_eq!(distributed_p(&mut sim, &a).unwrap(), preconditioner_p(&a));
            assert_eq!(sim.round_count(), a.width());
        }
    }

    #[test]
    fn poly_apply_examples() {
        let g = Arc::new(Graph::random_geometric(16, 5).unwrap());
        let adj = GeoMatrix::adjacency(g.clone());
        let x = instances::random_vector(5, 16);
        let mut sim = NetworkSim::new(g.clone(), 1);
        let f = PolyFilter::univariate(adj.clone(), vec![c(0.0), c(1.0)]).unwrap();
        assert_eq!(poly_apply_distributed(&mut sim, &f, &x).unwrap(), adj.matvec(&x).unwrap());
        assert_eq!(sim.round_count(), 1);
        sim.reset_meters();
        let k = PolyFilter::univariate(adj, vec![C64::new(2.0, -1.0)]).unwrap();
        let y = poly_apply_distributed(&mut sim, &k, &x).unwrap();
        assert_eq!(sim.round_count(), 0);
        for (a, b) in y.iter().zip(&x) {
            assert!((a - b * C64::new(2.0, -1.0)).norm() < 1e-15);
        }
        let mut sim0 = NetworkSim::new(g, 0);
        assert!(matches!(poly_apply_distributed(&mut sim0, &f, &x), Err(Error::RangeViolation { .. })));
    }

    #[test]
    fn poly_apply_matches_lattice_and_matrix() {
        for seed in 0..12 {
            let f = instances::random_poly_filter(seed);
            let x = instances::random_vector(seed, f.n());
            let mut sim = NetworkSim::new(f.graph().clone(), 1);
            let y = poly_apply_distributed(&mut sim, &f, &x).unwrap();
            assert_eq!(y, f.apply(&x).unwrap());
            assert_eq!(sim.round_count(), f.monomial_count() - 1);
            let z = poly_to_matrix(&f).unwrap().matvec(&x).unwrap();
            let scale = z.iter().map(|v| v.norm()).fold(1.0, f64::max);
            assert!(y.iter().zip(&z).all(|(a, b)| (a - b).norm() <= 1e-12 * scale));
        }
    }

    #[test]
    fn poly_iteration_branches_match_centralized() {
        let g = Arc::new(Graph::random_geometric(20, 6).unwrap());
        let f = PolyFilter::spline_complement(&g, 2).unwrap();
        let a = poly_to_matrix(&f).unwrap();
        let x0 = rng::trial_initial_vector(6, 0, 20);
        let mut sim = NetworkSim::new(g.clone(), 1);
        let (q, qs) = construct_hatq_distributed(&mut sim, &f, 0.01).unwrap();
        let tg = run_poly_pgda(&mut sim, &f, &q, &x0, 50).unwrap();
        let ts = run_poly_spgda(&mut sim, &f, &qs, &x0, 50).unwrap();
        let cg = pgda_centralized(&a, &q, &x0, 50).unwrap();
        let cs = spgda_centralized(&a, &qs, &x0, 50).unwrap();
        for (t, c) in [(&tg, &cg), (&ts, &cs)] {
            for (x, y) in t.iterates.iter().zip(&c.iterates) {
                let err: f64 = x.iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                let norm: f64 = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                assert!(err <= 1e-10 * norm.max(1e-300));
            }
        }
        let zero = PolyFilter::univariate(normalized_laplacian(&g), vec![c(0.0), c(0.0)]).unwrap();
        let one = DiagonalMatrix::constant(20, 1.0).unwrap();
        let (x1, xt1) = run_poly_iteration(&mut sim, &zero, &one, &x0).unwrap();
        assert_eq!((x1.clone(), xt1), (x0.clone(), x0));
    }

    #[test]
    fn hatq_matches_centralized_bitwise() {
        for seed in 0..12 {
            let f = instances::random_poly_filter(seed);
            let mut sim = NetworkSim::new(f.graph().clone(), 1);
            let (q, qs) = construct_hatq_distributed(&mut sim, &f, 0.01).unwrap();
            assert_eq!(q, hat_q(&f, 0.01).unwrap());
            assert_eq!(qs, hat_q_sym(&f, 0.01).unwrap());
            assert_eq!(sim.round_count(), 2 * (f.monomial_count() - 1) + f.total_degree());
        }
        let f = instances::random_poly_filter(3);
        let mut sim = NetworkSim::new(f.graph().clone(), 1);
        let (q, qs) = construct_hatq_distributed(&mut sim, &f, 1e6).unwrap();
        assert!(q.as_slice().iter().chain(qs.as_slice()).all(|&v| v == 1e6));
        assert!(matches!(construct_hatq_distributed(&mut sim, &f, 0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn constant_filter_hatq() {
        let g = Arc::new(Graph::random_geometric(10, 1).unwrap());
        let f = PolyFilter::univariate(normalized_laplacian(&g), vec![c(1.0)]).unwrap();
        let mut sim = NetworkSim::new(g, 1);
        let (q, qs) = construct_hatq_distributed(&mut sim, &f, 0.5).unwrap();
        assert!(q.as_slice().iter().chain(qs.as_slice()).all(|&v| v == 1.0));
        assert_eq!(sim.round_count(), 0);
    }
}
