//! Generic-rank test of the Kalman controllability matrix.
//!
//! Each nonzero of the `A`/`B` patterns gets an independent uniform weight in
//! `1..p` with `p = 2^31 - 1`, and the rank of `[B, AB, A^2 B, ...]` is
//! computed exactly over `Z_p`. A full-rank instance proves the pattern is
//! generically controllable. A rank-deficient trial is wrong about a
//! controllable pattern with probability at most `N^2 / p` (Schwartz–Zippel),
//! so three trials misreport with probability at most `(N^2 / p)^3`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{patterns, LtiInstance, QDigraph};
use crate::matching::DriverAssignment;

pub const FIELD_PRIME: u64 = (1 << 31) - 1;
pub const DEFAULT_TRIALS: u32 = 3;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllabilityCertificate {
    pub full_rank: bool,
    pub achieved_rank: usize,
    pub n: usize,
    pub trials: u32,
    pub field_prime: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KalmanError {
    #[error("no drivers defined")]
    NoDrivers,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("chosen driver is not a state vertex")]
    NotAState,
}

/// Rank check with `B` taken from the drive edges of `g`: one column per
/// driver vertex, nonzero at every drive-edge target.
pub fn generic_rank_check(
    g: &QDigraph,
    trials: u32,
    seed: u64,
) -> Result<ControllabilityCertificate, KalmanError> {
    if g.n_drivers() == 0 {
        return Err(KalmanError::NoDrivers);
    }
    let lti = patterns(g);
    let b: Vec<(usize, usize)> = lti.b_entries().collect();
    rank_check(&lti, &b, g.n_drivers(), trials, seed)
}

/// Rank check with one independent input per chosen driver vertex.
pub fn generic_rank_check_assigned(
    g: &QDigraph,
    drivers: &DriverAssignment,
    trials: u32,
    seed: u64,
) -> Result<ControllabilityCertificate, KalmanError> {
    if drivers.chosen_drivers.is_empty() {
        return Err(KalmanError::NoDrivers);
    }
    let lti = patterns(g);
    let b = drivers
        .chosen_drivers
        .iter()
        .enumerate()
        .map(|(col, &v)| {
            g.state_index(v)
                .map(|row| (row, col))
                .ok_or(KalmanError::NotAState)
        })
        .collect::<Result<Vec<_>, _>>()?;
    rank_check(&lti, &b, drivers.chosen_drivers.len(), trials, seed)
}

fn rank_check(
    lti: &LtiInstance,
    b_entries: &[(usize, usize)],
    n_inputs: usize,
    trials: u32,
    seed: u64,
) -> Result<ControllabilityCertificate, KalmanError> {
    if trials == 0 {
        return Err(KalmanError::NoTrials);
    }
    let n = lti.n();
    let a_entries: Vec<(usize, usize)> = lti.a_entries().collect();
    let mut best = 0;
    for t in 0..trials {
        // Per-trial seeds keep trials independent of each other's draw counts.
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(u64::from(t)));
        let a: Vec<(usize, usize, u64)> = a_entries
            .iter()
            .map(|&(r, c)| (r, c, rng.gen_range(1..FIELD_PRIME)))
            .collect();
        let mut block = vec![vec![0u64; n]; n_inputs];
        for &(r, c) in b_entries {
            block[c][r] = rng.gen_range(1..FIELD_PRIME);
        }
        best = best.max(krylov_rank(n, &a, block));
        if best == n {
            break;
        }
    }
    Ok(ControllabilityCertificate {
        full_rank: best == n,
        achieved_rank: best,
        n,
        trials,
        field_prime: FIELD_PRIME,
        seed,
    })
}

/// Rank of `[B, AB, A^2 B, ...]` with `A` given as sparse `(row, col, w)`
/// and `B` as a list of columns. Stops once the span reaches `n` or stops
/// growing, since a non-growing Krylov span is `A`-invariant.
fn krylov_rank(n: usize, a: &[(usize, usize, u64)], mut block: Vec<Vec<u64>>) -> usize {
    let mut basis = EchelonBasis::new(n);
    for _ in 0..n.max(1) {
        let before = basis.rank();
        for col in &block {
            basis.insert(col.clone());
            if basis.rank() == n {
                return n;
            }
        }
        if basis.rank() == before {
            break;
        }
        block = block
            .iter()
            .map(|col| {
                let mut out = vec![0u64; n];
                for &(r, c, w) in a {
                    out[r] = add(out[r], mul(w, col[c]));
                }
                out
            })
            .collect();
    }
    basis.rank()
}

struct EchelonBasis {
    /// Normalized vectors, each with a 1 at its pivot.
    rows: Vec<(usize, Vec<u64>)>,
    n: usize,
}

impl EchelonBasis {
    fn new(n: usize) -> Self {
        EchelonBasis {
            rows: Vec::new(),
            n,
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.n);
        for (pivot, row) in &self.rows {
            let f = v[*pivot];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = sub(*x, mul(f, y));
                }
            }
        }
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inverse(v[pivot]);
        v.iter_mut().for_each(|x| *x = mul(*x, inv));
        self.rows.push((pivot, v));
        true
    }
}

fn add(a: u64, b: u64) -> u64 {
    (a + b) % FIELD_PRIME
}

fn sub(a: u64, b: u64) -> u64 {
    (a + FIELD_PRIME - b) % FIELD_PRIME
}

fn mul(a: u64, b: u64) -> u64 {
    a * b % FIELD_PRIME
}

fn inverse(a: u64) -> u64 {
    let mut result = 1;
    let mut base = a;
    let mut e = FIELD_PRIME - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(result, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    result
}

/// Rank of a dense matrix over `Z_p` by plain row reduction.
pub fn rank_mod_p(rows: &[Vec<u64>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut basis = EchelonBasis::new(width);
    for r in rows {
        basis.insert(r.iter().map(|x| x % FIELD_PRIME).collect());
    }
    basis.rank()
}
