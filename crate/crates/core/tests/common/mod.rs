#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::Rng;
use structctl::graph::{GraphBuilder, QDigraph};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> QDigraph {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    structctl::parse_network(&text).unwrap()
}

/// States `V1..Vn`, then drivers `U1..`, with the given edges on 0-based
/// vertex indices (states first).
pub fn build(n: usize, n_u: usize, edges: &[(usize, usize)]) -> QDigraph {
    let mut b = GraphBuilder::new();
    for i in 1..=n {
        b.add_state(&format!("V{i}")).unwrap();
    }
    for i in 1..=n_u {
        b.add_driver(&format!("U{i}")).unwrap();
    }
    for &(s, d) in edges {
        let s = b.id(&label(n, s)).unwrap();
        let d = b.id(&label(n, d)).unwrap();
        b.add_edge(s, d).unwrap();
    }
    b.build()
}

fn label(n: usize, i: usize) -> String {
    if i < n {
        format!("V{}", i + 1)
    } else {
        format!("U{}", i - n + 1)
    }
}

/// Edges among `n` states, each present with probability `p`.
pub fn random_state_edges(rng: &mut impl Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for s in 0..n {
        for d in 0..n {
            if rng.gen_bool(p) {
                e.push((s, d));
            }
        }
    }
    e
}

/// Random digraph on `n` states plus `n_u` drivers, each driver hitting each
/// state with probability `p_drive`.
pub fn random_driven(rng: &mut impl Rng, n: usize, n_u: usize, p: f64, p_drive: f64) -> QDigraph {
    let mut edges = random_state_edges(rng, n, p);
    for u in 0..n_u {
        for v in 0..n {
            if rng.gen_bool(p_drive) {
                edges.push((n + u, v));
            }
        }
    }
    build(n, n_u, &edges)
}

/// Weakly connected random digraph: a random tree with random orientations
/// plus extra edges with probability `p`.
pub fn random_connected(rng: &mut impl Rng, n: usize, p: f64) -> QDigraph {
    let mut set = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        if rng.gen_bool(0.5) {
            set.insert((u, v));
        } else {
            set.insert((v, u));
        }
    }
    for (s, d) in random_state_edges(rng, n, p) {
        if s != d || rng.gen_bool(0.3) {
            set.insert((s, d));
        }
    }
    build(n, 0, &set.into_iter().collect::<Vec<_>>())
}

/// Largest matching by exhaustive enumeration: every state vertex picks a
/// distinct matched predecessor or none.
pub fn brute_max_matching(g: &QDigraph) -> usize {
    let n = g.n();
    let mut preds = vec![Vec::new(); n];
    for e in g.state_edges() {
        preds[g.state_index(e.dst).unwrap()].push(g.state_index(e.src).unwrap());
    }
    fn go(v: usize, preds: &[Vec<usize>], used: &mut [bool]) -> usize {
        if v == preds.len() {
            return 0;
        }
        let mut best = go(v + 1, preds, used);
        for &u in &preds[v] {
            if !used[u] {
                used[u] = true;
                best = best.max(1 + go(v + 1, preds, used));
                used[u] = false;
            }
        }
        best
    }
    go(0, &preds, &mut vec![false; n])
}

/// In-neighborhood over all vertices, by direct edge scan.
pub fn neighborhood(g: &QDigraph, s: &BTreeSet<usize>) -> BTreeSet<usize> {
    g.edges()
        .iter()
        .filter(|e| s.contains(&e.dst.index()))
        .map(|e| e.src.index())
        .collect()
}

/// Some nonempty `S` with `|T(S)| < |S|`, by trying all `2^N - 1` subsets.
pub fn brute_has_dilation(g: &QDigraph) -> bool {
    let states: Vec<usize> = g.state_vertices().iter().map(|v| v.index()).collect();
    (1u32..(1 << states.len())).any(|mask| {
        let s: BTreeSet<usize> = states
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        neighborhood(g, &s).len() < s.len()
    })
}
