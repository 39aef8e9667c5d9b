//! Digraph model for networks with driver (input) vertices.
//!
//! A [`QDigraph`] holds two kinds of vertices: state vertices, which carry the
//! network dynamics, and driver vertices, which inject external signals. Every
//! vertex gets a dense index in declaration order, so matchings and pattern
//! matrices can be addressed by plain arrays.
//!
//! Graphs are immutable once built. Use [`GraphBuilder`] (or
//! [`QDigraph::to_builder`]) to produce a modified copy.

mod dot;
mod lti;
mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

pub use dot::to_dot;
pub use lti::{patterns, LtiInstance};
pub use parse::{parse_network, ParseError, ParseErrorKind};

/// Dense vertex index, unique across state and driver vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    State,
    Driver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// An edge of the original network.
    Intrinsic,
    /// An edge created by the augmentation planner.
    Entanglement,
    /// Driver to state vertex.
    Drive,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Intrinsic => "intrinsic",
            EdgeKind::Entanglement => "entanglement",
            EdgeKind::Drive => "drive",
        }
    }

    pub fn parse(s: &str) -> Option<EdgeKind> {
        match s {
            "intrinsic" => Some(EdgeKind::Intrinsic),
            "entanglement" => Some(EdgeKind::Entanglement),
            "drive" => Some(EdgeKind::Drive),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub role: Role,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex label \"{0}\"")]
    DuplicateLabel(String),
    #[error("invalid vertex label \"{0}\"")]
    InvalidLabel(String),
    #[error("undeclared vertex \"{0}\"")]
    UnknownVertex(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("self-loop on \"{0}\" not permitted")]
    SelfLoop(String),
    #[error("drive edge must start at a driver vertex, got {0} -> {1}")]
    DriveFromState(String, String),
    #[error("{kind} edge {src} -> {dst} must connect two state vertices")]
    KindMismatch {
        kind: EdgeKind,
        src: String,
        dst: String,
    },
    #[error("edge {0} -> {1} ends at a driver vertex")]
    EdgeIntoDriver(String, String),
}

/// Accumulates vertices and edges, validating each insertion.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    vertices: Vec<Vertex>,
    by_label: HashMap<String, VertexId>,
    edges: BTreeMap<(usize, usize), EdgeKind>,
    allow_self_loops: bool,
}

impl Default for GraphBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphBuilder {
    pub fn new() -> Self {
        GraphBuilder {
            vertices: Vec::new(),
            by_label: HashMap::new(),
            edges: BTreeMap::new(),
            allow_self_loops: true,
        }
    }

    pub fn allow_self_loops(mut self, allow: bool) -> Self {
        self.allow_self_loops = allow;
        self
    }

    pub fn add_state(&mut self, label: &str) -> Result<VertexId, GraphError> {
        self.add_vertex(label, Role::State)
    }

    pub fn add_driver(&mut self, label: &str) -> Result<VertexId, GraphError> {
        self.add_vertex(label, Role::Driver)
    }

    pub fn add_vertex(&mut self, label: &str, role: Role) -> Result<VertexId, GraphError> {
        if !is_valid_label(label) {
            return Err(GraphError::InvalidLabel(label.to_string()));
        }
        if self.by_label.contains_key(label) {
            return Err(GraphError::DuplicateLabel(label.to_string()));
        }
        let id = VertexId(self.vertices.len());
        self.vertices.push(Vertex {
            label: label.to_string(),
            role,
        });
        self.by_label.insert(label.to_string(), id);
        Ok(id)
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.by_label.get(label).copied()
    }

    pub fn role(&self, id: VertexId) -> Role {
        self.vertices[id.0].role
    }

    pub fn contains_edge(&self, src: VertexId, dst: VertexId) -> bool {
        self.edges.contains_key(&(src.0, dst.0))
    }

    /// Adds an edge, inferring the kind from the source role.
    pub fn add_edge(&mut self, src: VertexId, dst: VertexId) -> Result<(), GraphError> {
        let kind = match self.role(src) {
            Role::Driver => EdgeKind::Drive,
            Role::State => EdgeKind::Intrinsic,
        };
        self.add_edge_kind(src, dst, kind)
    }

    pub fn add_edge_kind(
        &mut self,
        src: VertexId,
        dst: VertexId,
        kind: EdgeKind,
    ) -> Result<(), GraphError> {
        let label = |v: VertexId| self.vertices[v.0].label.clone();
        if self.role(dst) == Role::Driver {
            return Err(GraphError::EdgeIntoDriver(label(src), label(dst)));
        }
        match (kind, self.role(src)) {
            (EdgeKind::Drive, Role::State) => {
                return Err(GraphError::DriveFromState(label(src), label(dst)));
            }
            (EdgeKind::Intrinsic | EdgeKind::Entanglement, Role::Driver) => {
                return Err(GraphError::KindMismatch {
                    kind,
                    src: label(src),
                    dst: label(dst),
                });
            }
            _ => {}
        }
        if src == dst && !self.allow_self_loops {
            return Err(GraphError::SelfLoop(label(src)));
        }
        if self.edges.contains_key(&(src.0, dst.0)) {
            return Err(GraphError::DuplicateEdge(label(src), label(dst)));
        }
        self.edges.insert((src.0, dst.0), kind);
        Ok(())
    }

    pub fn build(self) -> QDigraph {
        let n_total = self.vertices.len();
        let mut state = Vec::new();
        let mut drivers = Vec::new();
        let mut state_pos = vec![None; n_total];
        for (i, v) in self.vertices.iter().enumerate() {
            match v.role {
                Role::State => {
                    state_pos[i] = Some(state.len());
                    state.push(VertexId(i));
                }
                Role::Driver => drivers.push(VertexId(i)),
            }
        }
        let mut succ = vec![Vec::new(); n_total];
        let mut pred = vec![Vec::new(); n_total];
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|(&(s, d), &kind)| Edge {
                src: VertexId(s),
                dst: VertexId(d),
                kind,
            })
            .collect();
        for e in &edges {
            succ[e.src.0].push(e.dst);
            pred[e.dst.0].push(e.src);
        }
        for p in &mut pred {
            p.sort_unstable();
        }
        QDigraph {
            vertices: self.vertices,
            by_label: self.by_label,
            state,
            drivers,
            state_pos,
            edges,
            succ,
            pred,
            edge_map: self.edges,
        }
    }
}

fn is_valid_label(label: &str) -> bool {
    !label.is_empty() && !label.contains('#') && !label.chars().any(char::is_whitespace)
}

/// A network with state vertices, driver vertices and typed directed edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QDigraph {
    vertices: Vec<Vertex>,
    by_label: HashMap<String, VertexId>,
    state: Vec<VertexId>,
    drivers: Vec<VertexId>,
    state_pos: Vec<Option<usize>>,
    edges: Vec<Edge>,
    succ: Vec<Vec<VertexId>>,
    pred: Vec<Vec<VertexId>>,
    edge_map: BTreeMap<(usize, usize), EdgeKind>,
}

impl QDigraph {
    pub fn empty() -> Self {
        GraphBuilder::new().build()
    }

    /// Number of state vertices.
    pub fn n(&self) -> usize {
        self.state.len()
    }

    /// Number of driver vertices.
    pub fn n_drivers(&self) -> usize {
        self.drivers.len()
    }

    pub fn n_total(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn state_vertices(&self) -> &[VertexId] {
        &self.state
    }

    pub fn driver_vertices(&self) -> &[VertexId] {
        &self.drivers
    }

    /// Edges sorted by `(src, dst)` index.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.vertices[v.0].label
    }

    pub fn role(&self, v: VertexId) -> Role {
        self.vertices[v.0].role
    }

    pub fn is_state(&self, v: VertexId) -> bool {
        self.role(v) == Role::State
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.by_label.get(label).copied()
    }

    /// Position of a state vertex among the state vertices (0..N).
    pub fn state_index(&self, v: VertexId) -> Option<usize> {
        self.state_pos.get(v.0).copied().flatten()
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v.0]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.pred[v.0]
    }

    pub fn has_edge(&self, src: VertexId, dst: VertexId) -> bool {
        self.edge_map.contains_key(&(src.0, dst.0))
    }

    pub fn edge_kind(&self, src: VertexId, dst: VertexId) -> Option<EdgeKind> {
        self.edge_map.get(&(src.0, dst.0)).copied()
    }

    /// Edges whose endpoints are both state vertices.
    pub fn state_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(|e| e.kind != EdgeKind::Drive)
    }

    pub fn drive_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Drive)
    }

    pub fn labels<'a>(&'a self, ids: impl IntoIterator<Item = &'a VertexId>) -> Vec<&'a str> {
        ids.into_iter().map(|&v| self.label(v)).collect()
    }

    /// A builder pre-loaded with this graph's vertices and edges.
    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder {
            vertices: self.vertices.clone(),
            by_label: self.by_label.clone(),
            edges: self.edge_map.clone(),
            allow_self_loops: true,
        }
    }

    /// Canonical network-file text; `parse_network` reads it back to an equal graph.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let kw = match v.role {
                Role::State => "state",
                Role::Driver => "driver",
            };
            out.push_str(kw);
            out.push(' ');
            out.push_str(&v.label);
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str("edge ");
            out.push_str(self.label(e.src));
            out.push(' ');
            out.push_str(self.label(e.dst));
            out.push(' ');
            out.push_str(e.kind.as_str());
            out.push('\n');
        }
        out
    }

    /// Weakly connected components of the state subgraph, each sorted by index.
    /// Drive edges are ignored.
    pub fn state_components(&self) -> Vec<Vec<VertexId>> {
        let mut comp = vec![usize::MAX; self.n_total()];
        let mut out = Vec::new();
        for &start in &self.state {
            if comp[start.0] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start.0] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in self.succ[v.0].iter().chain(self.pred[v.0].iter()) {
                    if self.is_state(w) && comp[w.0] == usize::MAX {
                        comp[w.0] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}
