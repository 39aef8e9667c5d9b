//! Hopcroft–Karp maximum bipartite matching.
//!
//! Left vertices are scanned in ascending order and each adjacency list in the
//! order given, so the resulting matching is a deterministic function of the
//! input. The augmenting DFS is iterative.

use std::collections::VecDeque;

const INF: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BipartiteMatching {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
}

#[cfg(test)]
impl BipartiteMatching {
    pub fn size(&self) -> usize {
        self.left.iter().filter(|m| m.is_some()).count()
    }
}

pub(crate) fn hopcroft_karp(n_right: usize, adj: &[Vec<usize>]) -> BipartiteMatching {
    let n_left = adj.len();
    let mut left = vec![None; n_left];
    let mut right: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![INF; n_left];
    let mut cursor = vec![0usize; n_left];
    let mut stack = Vec::new();

    loop {
        // BFS layering from the free left vertices.
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if left[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = INF;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match right[r] {
                    None => found = true,
                    Some(l2) if dist[l2] == INF => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }

        cursor.iter_mut().for_each(|c| *c = 0);
        for start in 0..n_left {
            if left[start].is_some() || dist[start] != 0 {
                continue;
            }
            stack.clear();
            stack.push(start);
            while let Some(&l) = stack.last() {
                if cursor[l] == adj[l].len() {
                    dist[l] = INF;
                    stack.pop();
                    continue;
                }
                let r = adj[l][cursor[l]];
                match right[r] {
                    None => {
                        for &li in &stack {
                            let ri = adj[li][cursor[li]];
                            left[li] = Some(ri);
                            right[ri] = Some(li);
                        }
                        break;
                    }
                    Some(l2) if dist[l2] != INF && dist[l2] == dist[l] + 1 => stack.push(l2),
                    Some(_) => cursor[l] += 1,
                }
            }
        }
    }
    BipartiteMatching { left, right }
}
