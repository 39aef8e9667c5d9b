//! Maximum matching on state vertices and the minimum driver count.
//!
//! A matching here is a set of state-to-state edges with no shared start and
//! no shared end. It is computed on the bipartite double cover: the left copy
//! of each state vertex plays its out-role, the right copy its in-role. A
//! self-loop is an ordinary matching edge that matches its own vertex.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bipartite::hopcroft_karp;
use crate::graph::{QDigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<(VertexId, VertexId)>,
    matched: BTreeSet<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("empty network")]
    EmptyNetwork,
    #[error("matching edge {0} -> {1} is not a state edge of the graph")]
    MissingEdge(String, String),
    #[error("vertex {0} starts more than one matching edge")]
    SharedStart(String),
    #[error("vertex {0} ends more than one matching edge")]
    SharedEnd(String),
}

impl Matching {
    /// Validates `edges` against `g`.
    pub fn from_edges(
        g: &QDigraph,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, MatchingError> {
        let mut edges: Vec<_> = edges.into_iter().collect();
        edges.sort_unstable();
        let mut starts = BTreeSet::new();
        let mut matched = BTreeSet::new();
        for &(s, d) in &edges {
            if !g.has_edge(s, d) || !g.is_state(s) || !g.is_state(d) {
                return Err(MatchingError::MissingEdge(
                    g.label(s).to_string(),
                    g.label(d).to_string(),
                ));
            }
            if !starts.insert(s) {
                return Err(MatchingError::SharedStart(g.label(s).to_string()));
            }
            if !matched.insert(d) {
                return Err(MatchingError::SharedEnd(g.label(d).to_string()));
            }
        }
        Ok(Matching { edges, matched })
    }

    /// Matching edges sorted by `(src, dst)`.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Vertices that end a matching edge.
    pub fn matched(&self) -> &BTreeSet<VertexId> {
        &self.matched
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn is_matched(&self, v: VertexId) -> bool {
        self.matched.contains(&v)
    }

    /// State vertices that end no matching edge, in index order.
    pub fn unmatched(&self, g: &QDigraph) -> Vec<VertexId> {
        g.state_vertices()
            .iter()
            .copied()
            .filter(|v| !self.matched.contains(v))
            .collect()
    }
}

/// Maximum matching over the state-to-state edges of `g`.
pub fn maximum_matching(g: &QDigraph) -> Matching {
    let states = g.state_vertices();
    let adj: Vec<Vec<usize>> = states
        .iter()
        .map(|&v| {
            g.successors(v)
                .iter()
                .filter_map(|&w| g.state_index(w))
                .collect()
        })
        .collect();
    let bm = hopcroft_karp(states.len(), &adj);
    let edges: Vec<_> = bm
        .left
        .iter()
        .enumerate()
        .filter_map(|(l, r)| r.map(|r| (states[l], states[r])))
        .collect();
    let matched = edges.iter().map(|&(_, d)| d).collect();
    let mut edges = edges;
    edges.sort_unstable();
    Matching { edges, matched }
}

/// Result of the Minimum Input Theorem: how many drivers, and where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DriverAssignment {
    pub n_d: usize,
    pub unmatched: Vec<VertexId>,
    pub chosen_drivers: Vec<VertexId>,
}

pub fn minimum_drivers(g: &QDigraph) -> Result<DriverAssignment, MatchingError> {
    let m = maximum_matching(g);
    drivers_for_matching(g, &m)
}

/// `n_d = max(N - M, 1)`. Drivers sit on the unmatched vertices; when every
/// vertex is matched the lowest-index state vertex is chosen.
pub fn drivers_for_matching(g: &QDigraph, m: &Matching) -> Result<DriverAssignment, MatchingError> {
    if g.n() == 0 {
        return Err(MatchingError::EmptyNetwork);
    }
    let unmatched = m.unmatched(g);
    let n_d = (g.n() - m.size()).max(1);
    let chosen_drivers = if unmatched.is_empty() {
        vec![g.state_vertices()[0]]
    } else {
        unmatched.clone()
    };
    Ok(DriverAssignment {
        n_d,
        unmatched,
        chosen_drivers,
    })
}

/// Vertex-disjoint paths and cycles formed by a matching's edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    /// Each path starts at an unmatched vertex. Single vertices count as paths.
    pub paths: Vec<Vec<VertexId>>,
    /// Each cycle starts at its lowest-index vertex. A self-loop is a 1-cycle.
    pub cycles: Vec<Vec<VertexId>>,
}

pub fn matching_decomposition(g: &QDigraph, m: &Matching) -> Result<Decomposition, MatchingError> {
    // Re-validate: `m` may come from a different graph.
    let m = Matching::from_edges(g, m.edges().iter().copied())?;
    let mut succ = vec![None; g.n_total()];
    for &(s, d) in m.edges() {
        succ[s.index()] = Some(d);
    }
    let mut seen = vec![false; g.n_total()];
    let mut out = Decomposition::default();
    for &head in g.state_vertices() {
        if m.is_matched(head) {
            continue;
        }
        let mut path = vec![head];
        seen[head.index()] = true;
        let mut cur = head;
        while let Some(next) = succ[cur.index()] {
            seen[next.index()] = true;
            path.push(next);
            cur = next;
        }
        out.paths.push(path);
    }
    for &start in g.state_vertices() {
        if seen[start.index()] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start.index()] = true;
        let mut cur = succ[start.index()].expect("vertex outside every path lies on a cycle");
        while cur != start {
            seen[cur.index()] = true;
            cycle.push(cur);
            cur = succ[cur.index()].expect("cycle continues");
        }
        out.cycles.push(cycle);
    }
    Ok(out)
}
