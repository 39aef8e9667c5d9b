use std::collections::{BTreeMap, BTreeSet};

use super::PlanError;
use crate::graph::{EdgeKind, GraphBuilder, QDigraph, VertexId};

/// Which original vertices a supervertex replaced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupervertexMap {
    /// Ids in the original graph.
    pub merged: BTreeSet<VertexId>,
    pub representative: String,
    /// Id of the supervertex in the contracted graph.
    pub representative_id: VertexId,
}

/// Contracts the elementary cycle `cycle` of `g` into one vertex.
///
/// Edges inside the cycle disappear; edges crossing it are re-attached to the
/// supervertex, with parallel copies collapsed (an intrinsic copy wins over an
/// entanglement one). The supervertex takes the position of the
/// lowest-index merged vertex.
pub fn contract_supervertex(
    g: &QDigraph,
    cycle: &[VertexId],
) -> Result<(QDigraph, SupervertexMap), PlanError> {
    let describe = || {
        cycle
            .iter()
            .map(|&v| {
                if v.index() < g.n_total() {
                    g.label(v).to_string()
                } else {
                    v.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    if cycle.is_empty() {
        return Err(PlanError::NotACycle("empty sequence".into()));
    }
    let merged: BTreeSet<VertexId> = cycle.iter().copied().collect();
    if merged.len() != cycle.len()
        || cycle
            .iter()
            .any(|&v| v.index() >= g.n_total() || !g.is_state(v))
    {
        return Err(PlanError::NotACycle(describe()));
    }
    for k in 0..cycle.len() {
        if !g.has_edge(cycle[k], cycle[(k + 1) % cycle.len()]) {
            return Err(PlanError::NotACycle(describe()));
        }
    }

    let representative = supervertex_label(g, &merged);
    let mut b = GraphBuilder::new();
    let mut map = vec![VertexId(0); g.n_total()];
    let mut rep_id = None;
    for (i, v) in g.vertices().iter().enumerate() {
        if merged.contains(&VertexId(i)) {
            let id = match rep_id {
                Some(id) => id,
                None => {
                    let id = b.add_vertex(&representative, v.role)?;
                    rep_id = Some(id);
                    id
                }
            };
            map[i] = id;
        } else {
            map[i] = b.add_vertex(&v.label, v.role)?;
        }
    }
    let mut edges: BTreeMap<(VertexId, VertexId), EdgeKind> = BTreeMap::new();
    for e in g.edges() {
        if merged.contains(&e.src) && merged.contains(&e.dst) {
            continue;
        }
        let key = (map[e.src.index()], map[e.dst.index()]);
        edges
            .entry(key)
            .and_modify(|k| *k = (*k).min(e.kind))
            .or_insert(e.kind);
    }
    for ((s, d), kind) in edges {
        b.add_edge_kind(s, d, kind)?;
    }
    Ok((
        b.build(),
        SupervertexMap {
            merged,
            representative,
            representative_id: rep_id.expect("nonempty cycle"),
        },
    ))
}

/// `V2`..`V6` become `V2-6`; labels without a shared prefix and numeric
/// suffix are joined with `-`. A clash with a surviving label gets `'`
/// appended.
fn supervertex_label(g: &QDigraph, merged: &BTreeSet<VertexId>) -> String {
    let labels: Vec<&str> = merged.iter().map(|&v| g.label(v)).collect();
    let split: Option<Vec<(&str, u64)>> = labels.iter().map(|l| split_numeric(l)).collect();
    let mut label = match split {
        Some(parts) if parts.iter().all(|(p, _)| *p == parts[0].0) => {
            let lo = parts.iter().map(|p| p.1).min().unwrap();
            let hi = parts.iter().map(|p| p.1).max().unwrap();
            if lo == hi {
                format!("{}{lo}", parts[0].0)
            } else {
                format!("{}{lo}-{hi}", parts[0].0)
            }
        }
        _ => labels.join("-"),
    };
    while g.id(&label).is_some_and(|v| !merged.contains(&v)) {
        label.push('\'');
    }
    label
}

fn split_numeric(label: &str) -> Option<(&str, u64)> {
    let cut = label.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (prefix, digits) = label.split_at(cut);
    digits.parse().ok().map(|n| (prefix, n))
}
