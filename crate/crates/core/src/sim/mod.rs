//! Synchronous message-passing network simulator.
//!
//! Each vertex owns a state value and may only learn about other vertices
//! through messages. A round is an [`exchange`](NetworkSim::exchange): every
//! vertex broadcasts one complex scalar to the vertices within a given hop
//! radius, all messages are delivered at once, and each vertex then updates
//! its own state from its inbox. Inboxes are ordered by ascending sender, so
//! any reduction over received values has a fixed order regardless of how
//! the vertex updates are scheduled.
//!
//! Links exist between vertices at hop distance at most the communication
//! range; longer hops are rejected before anything is sent.

mod programs;

pub use programs::{
    construct_hatq_distributed, distributed_p, poly_apply_distributed, run_pgda, run_poly_iteration,
    run_poly_pgda, run_poly_spgda, run_spgda, PolyStep, VertexState,
};

use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::C64;

/// Label attached to every message of a round, for traces.
pub type Tag = &'static str;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub from: usize,
    pub tag: Tag,
    pub payload: C64,
}

/// Traffic of one exchange round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundStats {
    pub round: usize,
    pub tag: Tag,
    pub radius: usize,
    pub messages_sent: Vec<usize>,
    pub scalars_sent: Vec<usize>,
}

/// A message observed by a vertex: `(round, receiver, sender)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Access {
    pub round: usize,
    pub reader: usize,
    pub owner: usize,
}

#[derive(Debug)]
pub struct NetworkSim {
    graph: Arc<Graph>,
    range: usize,
    balls: HashMap<usize, Arc<Vec<Vec<usize>>>>,
    rounds: Vec<RoundStats>,
    access_log: Option<Vec<Access>>,
    parallel: bool,
}

impl NetworkSim {
    pub fn new(graph: Arc<Graph>, range: usize) -> Self {
        Self { graph, range, balls: HashMap::new(), rounds: Vec::new(), access_log: None, parallel: false }
    }

    /// Runs vertex updates of a round on the rayon pool.
    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    /// Records every delivered message and every local matrix entry read.
    pub fn with_access_log(mut self) -> Self {
        self.access_log = Some(Vec::new());
        self
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn rounds(&self) -> &[RoundStats] {
        &self.rounds
    }

    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    pub fn total_messages(&self) -> usize {
        self.rounds.iter().map(|r| r.messages_sent.iter().sum::<usize>()).sum()
    }

    pub fn access_log(&self) -> Option<&[Access]> {
        self.access_log.as_deref()
    }

    pub fn reset_meters(&mut self) {
        self.rounds.clear();
        if let Some(log) = &mut self.access_log {
            log.clear();
        }
    }

    /// Fails unless `radius` hops are within the communication range.
    pub fn require_range(&self, radius: usize) -> Result<()> {
        if radius > self.range {
            Err(Error::RangeViolation { width: radius, range: self.range })
        } else {
            Ok(())
        }
    }

    /// `B(i, radius)` for every vertex, cached.
    pub fn balls(&mut self, radius: usize) -> Arc<Vec<Vec<usize>>> {
        let g = &self.graph;
        self.balls.entry(radius).or_insert_with(|| Arc::new(g.balls(radius))).clone()
    }

    /// Logs that `reader` used locally stored data about `owner`.
    pub(crate) fn log_local_read(&mut self, reader: usize, owner: usize) {
        let round = self.rounds.len();
        if let Some(log) = &mut self.access_log {
            log.push(Access { round, reader, owner });
        }
    }

    pub(crate) fn logging(&self) -> bool {
        self.access_log.is_some()
    }

    /// One synchronous round: every vertex `i` sends `send(state_i)` to all
    /// of `B(i, radius) \ {i}`, then `receive(state_j, inbox_j)` runs on every
    /// vertex with its inbox sorted by sender.
    pub fn exchange<S, F, R>(&mut self, states: &mut [S], radius: usize, tag: Tag, send: F, receive: R) -> Result<()>
    where
        S: Send + Sync,
        F: Fn(&S) -> C64 + Sync,
        R: Fn(&mut S, &[Envelope]) -> Result<()> + Sync,
    {
        let n = self.n();
        if states.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: states.len() });
        }
        self.require_range(radius)?;
        let payloads: Vec<C64> =
            if self.parallel { states.par_iter().map(&send).collect() } else { states.iter().map(&send).collect() };
        let round = self.rounds.len();
        let range = self.range;
        let balls = self.balls(radius);
        let mut inboxes: Vec<Vec<Envelope>> = balls.iter().map(|b| Vec::with_capacity(b.len())).collect();
        let mut messages_sent = vec![0; n];
        for (from, targets) in balls.iter().enumerate() {
            for &to in targets {
                if to == from {
                    continue;
                }
                // hop distance is symmetric, so `from ∈ B(to, radius)`
                if balls[to].binary_search(&from).is_err() {
                    return Err(Error::Undeliverable { from, to, range });
                }
                inboxes[to].push(Envelope { from, tag, payload: payloads[from] });
                messages_sent[from] += 1;
            }
        }
        if let Some(log) = &mut self.access_log {
            for (reader, inbox) in inboxes.iter().enumerate() {
                log.extend(inbox.iter().map(|e| Access { round, reader, owner: e.from }));
            }
        }
        if self.parallel {
            states.par_iter_mut().zip(inboxes.par_iter()).try_for_each(|(s, inbox)| receive(s, inbox))?;
        } else {
            states.iter_mut().zip(&inboxes).try_for_each(|(s, inbox)| receive(s, inbox))?;
        }
        self.rounds.push(RoundStats {
            round,
            tag,
            radius,
            scalars_sent: messages_sent.clone(),
            messages_sent,
        });
        Ok(())
    }

    /// Local computation on every vertex, no communication.
    pub fn local<S, F>(&self, states: &mut [S], f: F)
    where
        S: Send,
        F: Fn(&mut S) + Send + Sync,
    {
        if self.parallel {
            states.par_iter_mut().for_each(&f);
        } else {
            states.iter_mut().for_each(&f);
        }
    }

    /// Per-round, per-vertex traffic as CSV `round,vertex,messages_sent,scalars_sent`.
    pub fn write_trace(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "round,vertex,messages_sent,scalars_sent")?;
        for r in &self.rounds {
            for (v, (m, s)) in r.messages_sent.iter().zip(&r.scalars_sent).enumerate() {
                writeln!(out, "{},{},{},{}", r.round, v, m, s)?;
            }
        }
        Ok(())
    }
}

/// Value sent by `owner` in `inbox`, if any.
pub fn received(inbox: &[Envelope], owner: usize) -> Option<C64> {
    inbox.binary_search_by_key(&owner, |e| e.from).ok().map(|k| inbox[k].payload)
}

/// `Σ_j w_j v_j` over `entries` (ascending `j`), with `v_j` the vertex's own
/// value when `j == me` and the received value otherwise.
pub fn local_dot(entries: &[(usize, C64)], me: usize, own: C64, inbox: &[Envelope]) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for &(j, w) in entries {
        let v = if j == me {
            own
        } else {
            received(inbox, j).ok_or(Error::Undeliverable { from: j, to: me, range: usize::MAX })?
        };
        acc += w * v;
    }
    Ok(acc)
}
