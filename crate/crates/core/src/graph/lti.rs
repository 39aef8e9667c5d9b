use super::{EdgeKind, QDigraph};

/// Zero/nonzero structure of the state matrix `A` (N×N) and input matrix `B` (N×N_U).
///
/// `a(v, u)` is set iff there is a state edge `u -> v`; `b(v, d)` iff a drive
/// edge `d -> v`. Rows and columns use state and driver positions, not vertex
/// indices. Intrinsic and entanglement edges are indistinguishable here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtiInstance {
    n: usize,
    n_u: usize,
    a: Vec<bool>,
    b: Vec<bool>,
}

impl LtiInstance {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_u(&self) -> usize {
        self.n_u
    }

    pub fn a(&self, row: usize, col: usize) -> bool {
        self.a[row * self.n + col]
    }

    pub fn b(&self, row: usize, col: usize) -> bool {
        self.b[row * self.n_u + col]
    }

    /// Nonzero positions of `A` as `(row, col)`, row-major.
    pub fn a_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.a
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .map(move |(i, _)| (i / n, i % n))
    }

    pub fn b_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n_u = self.n_u;
        self.b
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .map(move |(i, _)| (i / n_u, i % n_u))
    }
}

pub fn patterns(g: &QDigraph) -> LtiInstance {
    let n = g.n();
    let n_u = g.n_drivers();
    let mut a = vec![false; n * n];
    let mut b = vec![false; n * n_u];
    let driver_pos = |v| g.driver_vertices().iter().position(|&d| d == v);
    for e in g.edges() {
        let row = g.state_index(e.dst).expect("edges end at state vertices");
        match e.kind {
            EdgeKind::Drive => {
                let col = driver_pos(e.src).expect("drive edges start at drivers");
                b[row * n_u + col] = true;
            }
            EdgeKind::Intrinsic | EdgeKind::Entanglement => {
                let col = g.state_index(e.src).expect("state edge");
                a[row * n + col] = true;
            }
        }
    }
    LtiInstance { n, n_u, a, b }
}
