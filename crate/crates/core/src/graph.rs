//! Undirected connected graphs, hop distances and random geometric graphs.

use std::collections::VecDeque;
use std::path::Path;

use log::info;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, GRAPH_STREAM};

/// Maximum number of reseeded draws before random graph generation gives up.
pub const MAX_RESAMPLES: usize = 1000;

/// Connected, undirected, unweighted simple graph with dense vertex ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    coords: Option<Vec<[f64; 2]>>,
}

impl Graph {
    /// Builds a graph from an undirected edge list. Edges may be given in either
    /// orientation and repeated; self-loops and disconnected inputs are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one vertex".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::InvalidVertex { vertex: v, n });
                }
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        if !is_connected(&adjacency) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(Self { adjacency, coords: None })
    }

    pub fn with_coords(mut self, coords: Vec<[f64; 2]>) -> Result<Self> {
        if coords.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: coords.len() });
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Self::from_edges(n, &edges)
    }

    /// Star with hub 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=leaves).map(|j| (0, j)).collect();
        Self::from_edges(leaves + 1, &edges)
    }

    /// `rows × cols` grid; vertex `(r, c)` has index `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::from_edges(rows * cols, &edges)
            .and_then(|g| {
                let coords = (0..rows * cols)
                    .map(|v| {
                        let (r, c) = (v / cols, v % cols);
                        [(c as f64 + 0.5) / cols as f64, (r as f64 + 0.5) / rows as f64]
                    })
                    .collect();
                g.with_coords(coords)
            })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count() as f64 / self.n() as f64
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    /// Edges `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    fn check_vertex(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: i, n: self.n() })
        }
    }

    /// Hop distance from `i` to every vertex.
    pub fn bfs_distances(&self, i: usize) -> Result<Vec<usize>> {
        self.check_vertex(i)?;
        let mut dist = vec![usize::MAX; self.n()];
        dist[i] = 0;
        let mut queue = VecDeque::from([i]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Vertices within `s` hops of `i`, ascending.
    pub fn ball(&self, i: usize, s: usize) -> Result<Vec<usize>> {
        self.check_vertex(i)?;
        let mut seen = vec![false; self.n()];
        seen[i] = true;
        let mut members = vec![i];
        let mut frontier = vec![i];
        for _ in 0..s {
            let mut next = Vec::new();
            for &v in &frontier {
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            members.extend_from_slice(&next);
            frontier = next;
        }
        members.sort_unstable();
        Ok(members)
    }

    /// `ball(i, s)` for every vertex.
    pub fn balls(&self, s: usize) -> Vec<Vec<usize>> {
        (0..self.n()).map(|i| self.ball(i, s).expect("vertex in range")).collect()
    }

    pub fn diameter(&self) -> usize {
        (0..self.n())
            .map(|i| self.bfs_distances(i).expect("vertex in range").into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Random geometric graph on `n` uniform points of the unit square with an
    /// edge whenever two points are at distance at most `sqrt(2 / n)`.
    ///
    /// Disconnected draws are rejected and redrawn with seed `seed + k`,
    /// `k = 1, 2, ...`, up to [`MAX_RESAMPLES`] times.
    pub fn random_geometric(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("random geometric graph needs n >= 1".into()));
        }
        for k in 0..=MAX_RESAMPLES as u64 {
            let (adjacency, coords) = draw_geometric(n, seed.wrapping_add(k));
            if is_connected(&adjacency) {
                if k > 0 {
                    info!("random geometric graph n={n} seed={seed}: {k} resamples");
                }
                return Ok(Self { adjacency, coords: Some(coords) });
            }
        }
        Err(Error::GenerationFailed { attempts: MAX_RESAMPLES + 1 })
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n(),
            edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            coords: self.coords.clone(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let edges: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Self::from_edges(file.n, &edges)?;
        match &file.coords {
            Some(c) => g.with_coords(c.clone()),
            None => Ok(g),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// On-disk graph: edges listed once with `i < j`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<[f64; 2]>>,
}

fn draw_geometric(n: usize, seed: u64) -> (Vec<Vec<usize>>, Vec<[f64; 2]>) {
    let mut rng = rng::stream(seed, GRAPH_STREAM);
    let coords: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
    let radius2 = 2.0 / n as f64;
    let mut adjacency = vec![Vec::new(); n];
    // bucket grid with cell side >= radius so only neighbouring cells interact
    let cells = ((1.0 / radius2.sqrt()).floor() as usize).max(1);
    let cell_of = |p: &[f64; 2]| {
        let cx = ((p[0] * cells as f64) as usize).min(cells - 1);
        let cy = ((p[1] * cells as f64) as usize).min(cells - 1);
        (cx, cy)
    };
    let mut buckets = vec![Vec::new(); cells * cells];
    for (v, p) in coords.iter().enumerate() {
        let (cx, cy) = cell_of(p);
        buckets[cy * cells + cx].push(v);
    }
    for (i, p) in coords.iter().enumerate() {
        let (cx, cy) = cell_of(p);
        for ny in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
            for nx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                for &j in &buckets[ny * cells + nx] {
                    if j == i {
                        continue;
                    }
                    let q = &coords[j];
                    let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
                    if d2 <= radius2 {
                        adjacency[i].push(j);
                    }
                }
            }
        }
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
    }
    (adjacency, coords)
}

/// True iff a breadth-first search from vertex 0 reaches every vertex.
/// The empty graph is reported as disconnected.
pub fn is_connected(adjacency: &[Vec<usize>]) -> bool {
    let n = adjacency.len();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}
