//! Cactus covers: the constructive certificate of structural controllability.
//!
//! A cactus is a stem (an elementary path leaving a driver) plus buds, each bud
//! an elementary cycle hooked onto the part already built by one entry edge
//! that ends, but does not begin, on the cycle. Vertex-disjoint cacti covering
//! every state vertex certify controllability.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{lin_check, LinReport};
use crate::bipartite::hopcroft_karp;
use crate::graph::{EdgeKind, GraphBuilder, QDigraph, Role, VertexId};
use crate::matching::{
    matching_decomposition, maximum_matching, DriverAssignment, Matching, MatchingError,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bud {
    pub cycle: Vec<VertexId>,
    pub entry: (VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cactus {
    /// Driver at the start of the stem.
    pub root: VertexId,
    /// State vertices of the stem, in path order; `root -> stem[0]` is a drive edge.
    pub stem: Vec<VertexId>,
    /// In attachment order: each entry edge starts in the stem or an earlier bud.
    pub buds: Vec<Bud>,
}

impl Cactus {
    pub fn state_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.stem
            .iter()
            .chain(self.buds.iter().flat_map(|b| b.cycle.iter()))
            .copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CactusCover {
    pub cacti: Vec<Cactus>,
}

impl CactusCover {
    pub fn bud_count(&self) -> usize {
        self.cacti.iter().map(|c| c.buds.len()).sum()
    }
}

/// A cover built after attaching drivers according to a [`DriverAssignment`].
#[derive(Debug, Clone)]
pub struct DrivenCover {
    /// Input graph plus any roots and drive edges the construction added.
    pub graph: QDigraph,
    pub cover: CactusCover,
    pub added_roots: Vec<VertexId>,
    pub added_drive_edges: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("driver assignment does not fit the matching: {0}")]
    InconsistentAssignment(&'static str),
    #[error("network is not structurally controllable with the given drivers")]
    NotControllable(Box<LinReport>),
}

/// Outcome of [`verify_cactus_cover`]; empty `violations` means valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverCheck {
    pub violations: Vec<String>,
}

impl CoverCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Attaches drivers per `d` and builds a cover of the driven graph.
///
/// Every nontrivial or single-vertex matched path gets a root on its head,
/// reusing a driver of `g` that already drives the head when one is free.
/// When the matching is perfect, the single chosen driver vertex is rooted and
/// its cycle opened into the stem. Remaining matched cycles become buds through
/// existing edges; a cycle no existing edge can reach gets an extra drive edge
/// from the first root.
pub fn build_cactus_cover(
    g: &QDigraph,
    m: &Matching,
    d: &DriverAssignment,
) -> Result<DrivenCover, CoverError> {
    let m = Matching::from_edges(g, m.edges().iter().copied())?;
    if m.size() != maximum_matching(g).size() {
        return Err(CoverError::InconsistentAssignment(
            "matching is not maximum",
        ));
    }
    let unmatched = m.unmatched(g);
    if d.n_d != (g.n().saturating_sub(m.size())).max(1) || d.unmatched != unmatched {
        return Err(CoverError::InconsistentAssignment(
            "driver count or unmatched set differs",
        ));
    }
    let decomposition = matching_decomposition(g, &m)?;

    let mut b = g.to_builder();
    // room for one new root per path head
    let mut succ: Vec<Option<VertexId>> = vec![None; g.n_total() + decomposition.paths.len() + 1];
    for &(s, t) in m.edges() {
        succ[s.index()] = Some(t);
    }
    let mut roots = Vec::new();
    let mut added_roots = Vec::new();
    let mut added_drive_edges = Vec::new();
    let mut used = BTreeSet::new();
    let mut root_for = |b: &mut GraphBuilder, head: VertexId| -> VertexId {
        let existing = g
            .predecessors(head)
            .iter()
            .copied()
            .find(|&p| g.role(p) == Role::Driver && !used.contains(&p));
        let r = match existing {
            Some(r) => r,
            None => {
                let r = b.add_driver(&fresh_root_label(b)).expect("fresh label");
                b.add_edge_kind(r, head, EdgeKind::Drive).expect("new edge");
                added_roots.push(r);
                added_drive_edges.push((r, head));
                r
            }
        };
        used.insert(r);
        r
    };

    if decomposition.paths.is_empty() {
        if d.chosen_drivers.len() != 1 {
            return Err(CoverError::InconsistentAssignment(
                "perfect matching needs exactly one chosen driver",
            ));
        }
        let v = d.chosen_drivers[0];
        let cycle = decomposition.cycles.iter().find(|c| c.contains(&v)).ok_or(
            CoverError::InconsistentAssignment("chosen driver is not a state vertex"),
        )?;
        let pos = cycle.iter().position(|&x| x == v).unwrap();
        let before = cycle[(pos + cycle.len() - 1) % cycle.len()];
        succ[before.index()] = None;
        let r = root_for(&mut b, v);
        succ[r.index()] = Some(v);
        roots.push(r);
    } else {
        let heads: Vec<VertexId> = decomposition.paths.iter().map(|p| p[0]).collect();
        if d.chosen_drivers != heads {
            return Err(CoverError::InconsistentAssignment(
                "chosen drivers must be the unmatched vertices",
            ));
        }
        for &h in &heads {
            let r = root_for(&mut b, h);
            succ[r.index()] = Some(h);
            roots.push(r);
        }
    }

    let driven = b.clone().build();
    let (cover, extra) = assemble(&driven, &succ, &roots, true)
        .expect("extra drive edges make every cycle attachable");
    for &(r, v) in &extra {
        b.add_edge_kind(r, v, EdgeKind::Drive)
            .expect("edge was absent");
    }
    added_drive_edges.extend(extra);
    let graph = b.build();

    let report = lin_check(&graph);
    if !report.controllable {
        return Err(CoverError::NotControllable(Box::new(report)));
    }
    debug_assert!(verify_cactus_cover(&graph, &cover).is_valid());
    Ok(DrivenCover {
        graph,
        cover,
        added_roots,
        added_drive_edges,
    })
}

/// Builds a cover that uses only the drivers and edges already in `g`.
///
/// Fails with the Lin report when `g` is not structurally controllable.
pub fn cover_declared(g: &QDigraph) -> Result<CactusCover, CoverError> {
    let report = lin_check(g);
    if !report.controllable {
        return Err(CoverError::NotControllable(Box::new(report)));
    }
    let mut adj = vec![Vec::new(); g.n_total()];
    for e in g.edges() {
        adj[e.src.index()].push(g.state_index(e.dst).expect("state target"));
    }
    let bm = hopcroft_karp(g.n(), &adj);
    let succ: Vec<Option<VertexId>> = bm
        .left
        .iter()
        .map(|r| r.map(|r| g.state_vertices()[r]))
        .collect();
    let (cover, extra) = assemble(g, &succ, g.driver_vertices(), false)
        .ok_or_else(|| CoverError::NotControllable(Box::new(report.clone())))?;
    debug_assert!(extra.is_empty());
    Ok(cover)
}

/// Turns a successor map (every state vertex has exactly one matched
/// predecessor) into cacti. `roots` are tried in order; roots whose stem is
/// empty may later be used to open an otherwise unreachable cycle. With
/// `extra_edges`, a still-unreachable cycle is hooked to the first root by a
/// new drive edge, returned alongside the cover.
fn assemble(
    g: &QDigraph,
    succ: &[Option<VertexId>],
    roots: &[VertexId],
    extra_edges: bool,
) -> Option<(CactusCover, Vec<(VertexId, VertexId)>)> {
    const FREE: usize = usize::MAX;
    let mut owner = vec![FREE; g.n_total()];
    let mut cacti: Vec<Cactus> = Vec::new();
    let mut idle_roots = Vec::new();

    let follow = |start: VertexId, owner: &[usize]| {
        let mut out = Vec::new();
        let mut cur = succ[start.index()];
        while let Some(v) = cur {
            if owner[v.index()] != FREE || out.contains(&v) {
                break;
            }
            out.push(v);
            cur = succ[v.index()];
        }
        out
    };

    for &r in roots {
        let stem = follow(r, &owner);
        if stem.is_empty() {
            idle_roots.push(r);
            continue;
        }
        let id = cacti.len();
        owner[r.index()] = id;
        for &v in &stem {
            owner[v.index()] = id;
        }
        cacti.push(Cactus {
            root: r,
            stem,
            buds: Vec::new(),
        });
    }

    // Everything off the stems lies on a cycle of `succ`.
    let mut cycles: Vec<Vec<VertexId>> = Vec::new();
    let mut on_cycle = vec![false; g.n_total()];
    for &v in g.state_vertices() {
        if owner[v.index()] != FREE || on_cycle[v.index()] {
            continue;
        }
        let mut cycle = vec![v];
        on_cycle[v.index()] = true;
        let mut cur = succ[v.index()]?;
        while cur != v {
            if on_cycle[cur.index()] || owner[cur.index()] != FREE {
                return None;
            }
            on_cycle[cur.index()] = true;
            cycle.push(cur);
            cur = succ[cur.index()]?;
        }
        cycles.push(cycle);
    }

    let mut attached = vec![false; cycles.len()];
    let mut extra = Vec::new();
    loop {
        let mut progress = false;
        for (ci, cycle) in cycles.iter().enumerate() {
            if attached[ci] {
                continue;
            }
            let entry = cycle
                .iter()
                .flat_map(|&v| {
                    g.predecessors(v)
                        .iter()
                        .filter(|p| owner[p.index()] != FREE)
                        .map(move |&p| (p, v))
                })
                .min();
            if let Some((src, dst)) = entry {
                let id = owner[src.index()];
                for &v in cycle {
                    owner[v.index()] = id;
                }
                cacti[id].buds.push(Bud {
                    cycle: rotate_to(cycle, dst),
                    entry: (src, dst),
                });
                attached[ci] = true;
                progress = true;
            }
        }
        if attached.iter().all(|&a| a) {
            break;
        }
        if progress {
            continue;
        }
        // An idle driver feeding some cycle can open it into a stem.
        let idle = &idle_roots;
        let opener = cycles
            .iter()
            .enumerate()
            .filter(|(ci, _)| !attached[*ci])
            .flat_map(|(ci, cycle)| {
                cycle.iter().flat_map(move |&v| {
                    g.predecessors(v)
                        .iter()
                        .filter(|p| idle.contains(p))
                        .map(move |&p| (p, v, ci))
                })
            })
            .min();
        let ci = opener.map_or_else(|| attached.iter().position(|&a| !a).unwrap(), |o| o.2);
        let cycle = &cycles[ci];
        if let Some((r, v, _)) = opener {
            idle_roots.retain(|&x| x != r);
            let id = cacti.len();
            owner[r.index()] = id;
            let stem = rotate_to(cycle, v);
            for &x in &stem {
                owner[x.index()] = id;
            }
            cacti.push(Cactus {
                root: r,
                stem,
                buds: Vec::new(),
            });
            attached[ci] = true;
        } else if extra_edges && !cacti.is_empty() {
            let root = cacti[0].root;
            let dst = cycle[0];
            for &v in cycle {
                owner[v.index()] = 0;
            }
            cacti[0].buds.push(Bud {
                cycle: cycle.clone(),
                entry: (root, dst),
            });
            extra.push((root, dst));
            attached[ci] = true;
        } else {
            return None;
        }
    }
    Some((CactusCover { cacti }, extra))
}

fn rotate_to(cycle: &[VertexId], start: VertexId) -> Vec<VertexId> {
    let pos = cycle.iter().position(|&x| x == start).unwrap_or(0);
    cycle[pos..].iter().chain(&cycle[..pos]).copied().collect()
}

fn fresh_root_label(b: &GraphBuilder) -> String {
    (1..)
        .map(|k| format!("U{k}"))
        .find(|l| b.id(l).is_none())
        .unwrap()
}

/// Checks every structural clause of a cover against the edges of `g`.
pub fn verify_cactus_cover(g: &QDigraph, c: &CactusCover) -> CoverCheck {
    let mut violations = Vec::new();
    let name = |v: VertexId| {
        if v.index() < g.n_total() {
            g.label(v).to_string()
        } else {
            v.to_string()
        }
    };
    let exists = |v: VertexId| v.index() < g.n_total();
    let mut covered = BTreeSet::new();
    let mut roots = BTreeSet::new();

    for (ci, cactus) in c.cacti.iter().enumerate() {
        let r = cactus.root;
        if !exists(r) || g.role(r) != Role::Driver {
            violations.push(format!("cactus {ci}: root {} is not a driver", name(r)));
            continue;
        }
        if !roots.insert(r) {
            violations.push(format!(
                "cactus {ci}: root {} shared with another cactus",
                name(r)
            ));
        }
        let Some(&first) = cactus.stem.first() else {
            violations.push(format!("cactus {ci}: empty stem"));
            continue;
        };
        let mut built: BTreeSet<VertexId> = BTreeSet::from([r]);
        let mut prev = r;
        for &v in &cactus.stem {
            if !exists(v) || !g.is_state(v) {
                violations.push(format!(
                    "cactus {ci}: stem vertex {} is not a state vertex",
                    name(v)
                ));
                prev = v;
                continue;
            }
            if !g.has_edge(prev, v) {
                violations.push(format!(
                    "cactus {ci}: stem edge {} -> {} missing",
                    name(prev),
                    name(v)
                ));
            }
            if !built.insert(v) {
                violations.push(format!("cactus {ci}: stem repeats {}", name(v)));
            }
            prev = v;
        }
        if exists(first) && g.edge_kind(r, first).is_some_and(|k| k != EdgeKind::Drive) {
            violations.push(format!("cactus {ci}: first stem edge is not a drive edge"));
        }
        for (bi, bud) in cactus.buds.iter().enumerate() {
            let cyc = &bud.cycle;
            if cyc.is_empty() {
                violations.push(format!("cactus {ci} bud {bi}: empty cycle"));
                continue;
            }
            if cyc.iter().any(|&v| !exists(v) || !g.is_state(v)) {
                violations.push(format!("cactus {ci} bud {bi}: non-state vertex on cycle"));
                continue;
            }
            for k in 0..cyc.len() {
                let (a, b) = (cyc[k], cyc[(k + 1) % cyc.len()]);
                if !g.has_edge(a, b) {
                    violations.push(format!(
                        "cactus {ci} bud {bi}: cycle edge {} -> {} missing",
                        name(a),
                        name(b)
                    ));
                }
            }
            let (src, dst) = bud.entry;
            if !cyc.contains(&dst) {
                violations.push(format!(
                    "cactus {ci} bud {bi}: entry edge does not end on the cycle"
                ));
            }
            if cyc.contains(&src) {
                violations.push(format!(
                    "cactus {ci} bud {bi}: entry edge begins on the cycle"
                ));
            }
            if !built.contains(&src) {
                violations.push(format!(
                    "cactus {ci} bud {bi}: entry source {} is not in the cactus built so far",
                    name(src)
                ));
            }
            if !(exists(src) && exists(dst) && g.has_edge(src, dst)) {
                violations.push(format!(
                    "cactus {ci} bud {bi}: entry edge {} -> {} missing",
                    name(src),
                    name(dst)
                ));
            }
            for &v in cyc {
                if !built.insert(v) {
                    violations.push(format!("cactus {ci} bud {bi}: vertex {} repeated", name(v)));
                }
            }
        }
        built.remove(&r);
        for v in built {
            if !covered.insert(v) {
                violations.push(format!(
                    "vertex {} appears in more than one cactus",
                    name(v)
                ));
            }
        }
    }
    for &v in g.state_vertices() {
        if !covered.contains(&v) {
            violations.push(format!("vertex {} is not covered", name(v)));
        }
    }
    CoverCheck { violations }
}
