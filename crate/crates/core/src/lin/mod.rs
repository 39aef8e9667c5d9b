//! Structural controllability by accessibility and dilations.
//!
//! A network with drivers is structurally controllable iff every state vertex
//! is reachable from some driver and no state subset `S` has an in-neighborhood
//! `T(S)` (over state and driver vertices) smaller than itself.

mod cactus;

use std::collections::{BTreeSet, VecDeque};

use crate::bipartite::hopcroft_karp;
use crate::graph::{QDigraph, VertexId};

pub use cactus::{
    build_cactus_cover, cover_declared, verify_cactus_cover, Bud, Cactus, CactusCover, CoverCheck,
    CoverError, DrivenCover,
};

/// A Hall violator: `|t_set| < |s_set|`, `t_set` the in-neighborhood of `s_set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dilation {
    pub s_set: BTreeSet<VertexId>,
    pub t_set: BTreeSet<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinReport {
    pub accessible: BTreeSet<VertexId>,
    pub inaccessible: BTreeSet<VertexId>,
    pub dilation: Option<Dilation>,
    pub controllable: bool,
}

/// Splits state vertices into those reachable from a driver and the rest.
pub fn accessibility(g: &QDigraph) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    accessible_from(g, g.driver_vertices())
}

pub(crate) fn accessible_from(
    g: &QDigraph,
    sources: &[VertexId],
) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    let mut seen = vec![false; g.n_total()];
    let mut queue: VecDeque<VertexId> = sources.iter().copied().collect();
    for &s in sources {
        seen[s.index()] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.successors(v) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    g.state_vertices().iter().partition(|v| seen[v.index()])
}

/// Finds a dilation, if any.
///
/// Matches every state vertex (in-role) to a distinct in-neighbor (out-role,
/// state or driver). If some state vertex stays unmatched, the vertices
/// reachable from it by alternating paths form `S`, and the out-roles
/// visited on the way form `T(S)` with `|T(S)| = |S| - 1`. The search starts
/// from the lowest-index unmatched vertex.
pub fn find_dilation(g: &QDigraph) -> Option<Dilation> {
    let states = g.state_vertices();
    // right side: state positions; left side: all vertex indices
    let mut adj = vec![Vec::new(); g.n_total()];
    for e in g.edges() {
        let r = g.state_index(e.dst).expect("edges end at state vertices");
        adj[e.src.index()].push(r);
    }
    let bm = hopcroft_karp(states.len(), &adj);
    let free = bm.right.iter().position(Option::is_none)?;

    let mut s_set = BTreeSet::new();
    let mut t_set = BTreeSet::new();
    let mut queue = VecDeque::from([free]);
    s_set.insert(states[free]);
    while let Some(r) = queue.pop_front() {
        for &w in g.predecessors(states[r]) {
            if !t_set.insert(w) {
                continue;
            }
            let r2 = bm.left[w.index()].expect("maximum matching leaves no augmenting path");
            if s_set.insert(states[r2]) {
                queue.push_back(r2);
            }
        }
    }
    debug_assert_eq!(t_set.len() + 1, s_set.len());
    Some(Dilation { s_set, t_set })
}

pub fn lin_check(g: &QDigraph) -> LinReport {
    let (accessible, inaccessible) = accessibility(g);
    let dilation = find_dilation(g);
    let controllable = inaccessible.is_empty() && dilation.is_none();
    LinReport {
        accessible,
        inaccessible,
        dilation,
        controllable,
    }
}
