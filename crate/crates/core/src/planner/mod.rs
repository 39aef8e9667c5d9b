//! Entanglement-edge augmentation that leaves a connected network
//! controllable from a single driver.
//!
//! The plan is built in three phases on top of a maximum matching:
//!
//! 1. every matched path `v1 -> ... -> vk` (k >= 2) is closed by `vk -> v1`;
//! 2. every isolated unmatched vertex is spliced into an adjacent cycle
//!    (or paired with a neighbor into a 2-cycle);
//! 3. the root drives the lowest-index vertex, and while some vertex is
//!    unreachable from it, an inaccessible vertex `b` with an edge `b -> a`
//!    into the reached part gets the reverse edge `a -> b`.
//!
//! After phases 1 and 2 the matching is perfect (except for a lone
//! edgeless vertex), so one driver suffices once phase 3 restores
//! accessibility. Each added edge is charged `N^3` LOCC operations.

mod contract;
mod format;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeKind, GraphBuilder, GraphError, QDigraph, Role, VertexId};
use crate::lin::lin_check;
use crate::matching::{matching_decomposition, maximum_matching, minimum_drivers};

pub use contract::{contract_supervertex, SupervertexMap};
pub use format::{parse_plan, PlanParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reason {
    ClosePath,
    SpliceSingleton,
    Accessibility,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::ClosePath => "close-path",
            Reason::SpliceSingleton => "splice-singleton",
            Reason::Accessibility => "accessibility",
        }
    }

    pub fn parse(s: &str) -> Option<Reason> {
        match s {
            "close-path" => Some(Reason::ClosePath),
            "splice-singleton" => Some(Reason::SpliceSingleton),
            "accessibility" => Some(Reason::Accessibility),
            _ => None,
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedEdge {
    pub src: String,
    pub dst: String,
    pub reason: Reason,
}

/// Ordered entanglement edges plus the single root and its attachment.
/// Vertices are referenced by label so a plan can be stored and re-applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentationPlan {
    pub added_edges: Vec<PlannedEdge>,
    pub root: String,
    pub drive_attachment: String,
    /// Number of state vertices of the planned network.
    pub n: usize,
}

impl AugmentationPlan {
    /// `|added_edges| * N^3`.
    pub fn locc_cost_bound(&self) -> u64 {
        let n = self.n as u64;
        self.added_edges.len() as u64 * n * n * n
    }

    pub fn to_text(&self) -> String {
        format::plan_to_text(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("empty network")]
    Empty,
    #[error("network is disconnected: {}", format_components(.0))]
    Disconnected(Vec<Vec<String>>),
    #[error("plan references unknown vertex \"{0}\"")]
    UnknownVertex(String),
    #[error("\"{0}\" is not a state vertex")]
    NotState(String),
    #[error("root \"{0}\" is a state vertex")]
    RootIsState(String),
    #[error("edge {0} -> {1} already present")]
    EdgePresent(String, String),
    #[error("sequence is not an elementary cycle: {0}")]
    NotACycle(String),
    #[error("augmented network fails the single-driver check: {0}")]
    Postcondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn format_components(comps: &[Vec<String>]) -> String {
    comps
        .iter()
        .map(|c| format!("{{{}}}", c.join(" ")))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn plan_augmentation(g: &QDigraph) -> Result<AugmentationPlan, PlanError> {
    let n = g.n();
    if n == 0 {
        return Err(PlanError::Empty);
    }
    let components = g.state_components();
    if components.len() > 1 {
        return Err(PlanError::Disconnected(
            components
                .iter()
                .map(|c| c.iter().map(|&v| g.label(v).to_string()).collect())
                .collect(),
        ));
    }

    let m = maximum_matching(g);
    let dec = matching_decomposition(g, &m).expect("matching of g");
    let mut additions = Additions {
        present: g.state_edges().map(|e| (e.src, e.dst)).collect(),
        added: Vec::new(),
    };
    let mut add = |s, d, reason| additions.add(s, d, reason);
    let mut succ: Vec<Option<VertexId>> = vec![None; g.n_total()];
    for &(s, d) in m.edges() {
        succ[s.index()] = Some(d);
    }

    // Phase 1: close every nontrivial matched path into a cycle.
    for path in dec.paths.iter().filter(|p| p.len() >= 2) {
        let (head, tail) = (path[0], path[path.len() - 1]);
        add(tail, head, Reason::ClosePath);
        succ[tail.index()] = Some(head);
    }

    // Phase 2: splice isolated unmatched vertices into neighboring cycles.
    for path in dec.paths.iter().filter(|p| p.len() == 1) {
        let v = path[0];
        let neighbors: BTreeSet<VertexId> = g
            .successors(v)
            .iter()
            .chain(g.predecessors(v))
            .copied()
            .filter(|&u| u != v && g.is_state(u))
            .collect();
        if let Some(&u) = neighbors.iter().find(|u| succ[u.index()].is_some()) {
            let w = succ[u.index()].unwrap();
            add(u, v, Reason::SpliceSingleton);
            add(v, w, Reason::SpliceSingleton);
            succ[u.index()] = Some(v);
            succ[v.index()] = Some(w);
        } else if let Some(&u) = neighbors.first() {
            add(u, v, Reason::SpliceSingleton);
            add(v, u, Reason::SpliceSingleton);
            succ[u.index()] = Some(v);
            succ[v.index()] = Some(u);
        }
    }

    // Phase 3: one root, then reverse border edges until everything is reached.
    let root = g.driver_vertices().first().copied();
    let root_label = match root {
        Some(r) => g.label(r).to_string(),
        None => fresh_label(g, "U"),
    };
    let attachment = g.state_vertices()[0];
    let mut out: Vec<Vec<VertexId>> = (0..g.n_total())
        .map(|i| g.successors(VertexId(i)).to_vec())
        .collect();
    for &(s, d, _) in &additions.added {
        out[s.index()].push(d);
    }
    let mut reached = vec![false; g.n_total()];
    let mut frontier = vec![attachment];
    if let Some(r) = root {
        frontier.extend(g.successors(r));
    }
    let mut n_reached = 0;
    loop {
        while let Some(v) = frontier.pop() {
            if reached[v.index()] {
                continue;
            }
            reached[v.index()] = true;
            n_reached += 1;
            frontier.extend(out[v.index()].iter().copied());
        }
        if n_reached == n {
            break;
        }
        let (b, a) = g
            .state_vertices()
            .iter()
            .filter(|b| !reached[b.index()])
            .find_map(|&b| {
                out[b.index()]
                    .iter()
                    .copied()
                    .filter(|a| reached[a.index()])
                    .min()
                    .map(|a| (b, a))
            })
            .expect("connected network has a border edge out of the unreached part");
        additions.add(a, b, Reason::Accessibility);
        out[a.index()].push(b);
        frontier.push(b);
    }

    let plan = AugmentationPlan {
        added_edges: additions
            .added
            .iter()
            .map(|&(s, d, reason)| PlannedEdge {
                src: g.label(s).to_string(),
                dst: g.label(d).to_string(),
                reason,
            })
            .collect(),
        root: root_label,
        drive_attachment: g.label(attachment).to_string(),
        n,
    };
    check_postcondition(g, &plan)?;
    Ok(plan)
}

struct Additions {
    present: BTreeSet<(VertexId, VertexId)>,
    added: Vec<(VertexId, VertexId, Reason)>,
}

impl Additions {
    /// Records `s -> d` unless the edge already exists.
    fn add(&mut self, s: VertexId, d: VertexId, reason: Reason) {
        if self.present.insert((s, d)) {
            self.added.push((s, d, reason));
        }
    }
}

fn check_postcondition(g: &QDigraph, plan: &AugmentationPlan) -> Result<(), PlanError> {
    let post = root_only(&apply_plan(g, plan)?, &plan.root);
    let d = minimum_drivers(&post).map_err(|e| PlanError::Postcondition(e.to_string()))?;
    if d.n_d != 1 {
        return Err(PlanError::Postcondition(format!("n_d = {}", d.n_d)));
    }
    if !lin_check(&post).controllable {
        return Err(PlanError::Postcondition("Lin check fails".into()));
    }
    Ok(())
}

/// Copy of `g` in which only `root` keeps its drive edges.
pub fn root_only(g: &QDigraph, root: &str) -> QDigraph {
    let mut b = GraphBuilder::new();
    for v in g.vertices() {
        b.add_vertex(&v.label, v.role)
            .expect("labels of a valid graph");
    }
    for e in g.edges() {
        if e.kind == EdgeKind::Drive && g.label(e.src) != root {
            continue;
        }
        b.add_edge_kind(e.src, e.dst, e.kind)
            .expect("edges of a valid graph");
    }
    b.build()
}

fn fresh_label(g: &QDigraph, prefix: &str) -> String {
    (1..)
        .map(|k| format!("{prefix}{k}"))
        .find(|l| g.id(l).is_none())
        .unwrap()
}

/// Returns `g` plus the plan's entanglement edges and the root's drive edge.
/// The root is created if `g` has no vertex with its label.
pub fn apply_plan(g: &QDigraph, p: &AugmentationPlan) -> Result<QDigraph, PlanError> {
    let mut b = g.to_builder();
    let state = |b: &GraphBuilder, label: &str| -> Result<VertexId, PlanError> {
        let id = b
            .id(label)
            .ok_or_else(|| PlanError::UnknownVertex(label.to_string()))?;
        if b.role(id) != Role::State {
            return Err(PlanError::NotState(label.to_string()));
        }
        Ok(id)
    };
    for e in &p.added_edges {
        let s = state(&b, &e.src)?;
        let d = state(&b, &e.dst)?;
        if b.contains_edge(s, d) {
            return Err(PlanError::EdgePresent(e.src.clone(), e.dst.clone()));
        }
        b.add_edge_kind(s, d, EdgeKind::Entanglement)?;
    }
    let attachment = state(&b, &p.drive_attachment)?;
    let root = match b.id(&p.root) {
        Some(r) if b.role(r) == Role::Driver => r,
        Some(_) => return Err(PlanError::RootIsState(p.root.clone())),
        None => b.add_driver(&p.root)?,
    };
    if !b.contains_edge(root, attachment) {
        b.add_edge_kind(root, attachment, EdgeKind::Drive)?;
    }
    Ok(b.build())
}
