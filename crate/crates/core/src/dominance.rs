//! Diagonal H-dominance, the cycle criterion, and the shortest-path
//! potentials that bring a matrix into dominant form by similarity.

use std::fmt;

use serde::Serialize;

use crate::error::{Result, TropError};
use crate::permanent::{Permutation, MAX_ENUM_ORDER};
use crate::tropcore::{Potentials, TropMatrix, TropScalar};

/// The dominance strength `H > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DominanceParams(TropScalar);

impl DominanceParams {
    pub fn new(h: TropScalar) -> Result<Self> {
        if !h.is_positive() {
            return Err(TropError::Parameter(format!("H must be positive, got {h}")));
        }
        Ok(DominanceParams(h))
    }

    pub fn from_int(h: i64) -> Result<Self> {
        Self::new(TropScalar::from_int(h))
    }

    pub fn value(&self) -> &TropScalar {
        &self.0
    }
}

impl fmt::Display for DominanceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `max(a, b) + H|a - b|`, the lower bound dominance imposes between two diagonal entries.
pub fn dominance_bound(a: &TropScalar, b: &TropScalar, h: &DominanceParams) -> TropScalar {
    &a.max(b) + &(h.value() * &(a - b).abs())
}

/// `A[i][j] >= max(A[i][i], A[j][j]) + H|A[i][i] - A[j][j]|` for all `i, j`.
pub fn is_dominant(a: &TropMatrix, h: &DominanceParams) -> Result<bool> {
    let n = a.order("is_dominant")?;
    for i in 0..n {
        for j in 0..n {
            if i != j && *a.get(i, j) < dominance_bound(a.get(i, i), a.get(j, j), h) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Equal diagonals, and `A ⊕ B` diagonally H-dominant.
pub fn is_dominant_pair(a: &TropMatrix, b: &TropMatrix, h: &DominanceParams) -> Result<bool> {
    let c = a.hadamard_min(b)?;
    if a.diagonal() != b.diagonal() {
        return Ok(false);
    }
    is_dominant(&c, h)
}

/// A subset `K` together with a cyclic permutation on it, stored as the
/// traversal order `k_1 -> k_2 -> ... -> k_t -> k_1` (zero-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    pub cycle: Vec<usize>,
    /// `Σ C[k][σ(k)]`
    pub cycle_sum: TropScalar,
    /// `|K| max C[k][k] + H Σ |C[k][k] - C[σ(k)][σ(k)]|`
    pub bound: TropScalar,
}

impl CycleWitness {
    /// Members of `K`, sorted, zero-based.
    pub fn subset(&self) -> Vec<usize> {
        let mut k = self.cycle.clone();
        k.sort_unstable();
        k
    }

    /// The cycle as a permutation of `{0..n-1}` fixing everything outside `K`.
    pub fn to_permutation(&self, n: usize) -> Result<Permutation> {
        let one_based: Vec<usize> = self.cycle.iter().map(|k| k + 1).collect();
        Permutation::from_cycles(n, &[&one_based])
    }
}

impl fmt::Display for CycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k: Vec<String> = self.subset().iter().map(|k| (k + 1).to_string()).collect();
        let c: Vec<String> = self.cycle.iter().map(|k| (k + 1).to_string()).collect();
        write!(
            f,
            "K={{{}}} sigma=({}): {} < {}",
            k.join(","),
            c.join(" "),
            self.cycle_sum,
            self.bound
        )
    }
}

/// Both sides of the cycle inequality for the cycle `order` in `c`.
pub fn cycle_sides(
    c: &TropMatrix,
    order: &[usize],
    h: &DominanceParams,
) -> (TropScalar, TropScalar) {
    let t = order.len();
    let mut sum = TropScalar::ZERO;
    let mut spread = TropScalar::ZERO;
    let mut top = c.get(order[0], order[0]).clone();
    for (idx, &k) in order.iter().enumerate() {
        let next = order[(idx + 1) % t];
        sum = &sum + c.get(k, next);
        spread = &spread + &(c.get(k, k) - c.get(next, next)).abs();
        top = TropScalar::max(&top, c.get(k, k));
    }
    let bound = &top.times(t as u64) + &(h.value() * &spread);
    (sum, bound)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CycleCheck {
    Pass,
    Violated(CycleWitness),
}

/// Calls `f` on every ordering of `rest` in lexicographic order.
fn for_each_arrangement(rest: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(k: usize, v: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if k == v.len() {
            return f(v);
        }
        for i in k..v.len() {
            v[k..=i].rotate_right(1);
            let stop = go(k + 1, v, f);
            v[k..=i].rotate_left(1);
            if stop {
                return true;
            }
        }
        false
    }
    go(0, rest, f)
}

/// Checks the cycle inequality over every subset `K` and every cyclic
/// permutation on `K`; returns the first violation found.
///
/// Subsets are visited by increasing bitmask. Each cycle is rooted at the
/// least element of `K`, and the remaining elements run through all orders.
pub fn cycle_criterion(c: &TropMatrix, h: &DominanceParams) -> Result<CycleCheck> {
    let n = c.order("cycle_criterion")?;
    if n > MAX_ENUM_ORDER {
        return Err(TropError::TooLarge {
            n,
            max: MAX_ENUM_ORDER,
        });
    }
    let mut found = None;
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let root = members[0];
        let mut rest = members[1..].to_vec();
        let mut order = Vec::with_capacity(members.len());
        for_each_arrangement(&mut rest, &mut |tail| {
            order.clear();
            order.push(root);
            order.extend_from_slice(tail);
            let (sum, bound) = cycle_sides(c, &order, h);
            if sum < bound {
                found = Some(CycleWitness {
                    cycle: order.clone(),
                    cycle_sum: sum,
                    bound,
                });
                true
            } else {
                false
            }
        });
        if let Some(w) = found {
            return Ok(CycleCheck::Violated(w));
        }
    }
    Ok(CycleCheck::Pass)
}

/// A cycle `v_1 -> ... -> v_t -> v_1` of negative total arc weight (zero-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegativeCycle {
    pub vertices: Vec<usize>,
    pub weight: TropScalar,
}

impl fmt::Display for NegativeCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vertices.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "cycle ({}) of weight {}", v.join(" -> "), self.weight)
    }
}

/// Sum of `M[v_l][v_{l+1}]` around a closed walk.
pub fn closed_walk_weight(m: &TropMatrix, vertices: &[usize]) -> TropScalar {
    let t = vertices.len();
    (0..t)
        .map(|l| m.get(vertices[l], vertices[(l + 1) % t]).clone())
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PotentialsOutcome {
    Found { potentials: Potentials },
    NoSolution { cycle: NegativeCycle },
}

/// Finds `r` with `M[i][j] + r_i - r_j >= 0` for all `i, j`.
///
/// Runs Bellman-Ford from a virtual source joined to every vertex by a
/// zero-weight arc. Shortest distances `d` satisfy `d_j <= d_i + M[i][j]`,
/// so `r = d` works. If relaxation still succeeds after `n` rounds the
/// digraph with arc weights `M[i][j]` has a negative cycle, which is
/// extracted from the predecessor chain and returned instead.
pub fn potentials_for_nonneg(m: &TropMatrix) -> Result<PotentialsOutcome> {
    let n = m.order("potentials_for_nonneg")?;
    let mut dist = vec![TropScalar::ZERO; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut last_relaxed = None;
    // n + 1 vertices including the source: n rounds settle all shortest paths
    for _ in 0..=n {
        last_relaxed = None;
        for i in 0..n {
            for j in 0..n {
                let cand = &dist[i] + m.get(i, j);
                if cand < dist[j] {
                    dist[j] = cand;
                    pred[j] = Some(i);
                    last_relaxed = Some(j);
                }
            }
        }
        if last_relaxed.is_none() {
            break;
        }
    }
    let Some(mut v) = last_relaxed else {
        return Ok(PotentialsOutcome::Found {
            potentials: Potentials(dist),
        });
    };
    for _ in 0..n {
        v = pred[v].expect("relaxed vertex has a predecessor");
    }
    let start = v;
    let mut rev = vec![start];
    let mut u = pred[start].expect("vertex on cycle has a predecessor");
    while u != start {
        rev.push(u);
        u = pred[u].expect("vertex on cycle has a predecessor");
    }
    rev.reverse();
    let weight = closed_walk_weight(m, &rev);
    assert!(weight.is_negative(), "extracted cycle must be negative");
    Ok(PotentialsOutcome::NoSolution {
        cycle: NegativeCycle {
            vertices: rev,
            weight,
        },
    })
}

/// `D[i][j] = C[i][j] - H|C[i][i] - C[j][j]| - max(C[i][i], C[j][j])`.
pub fn slack_matrix(c: &TropMatrix, h: &DominanceParams) -> Result<TropMatrix> {
    let n = c.order("slack_matrix")?;
    TropMatrix::from_fn(n, n, |i, j| {
        c.get(i, j) - &dominance_bound(c.get(i, i), c.get(j, j), h)
    })
}

/// `Σ C[k][σ(k)]` around `order` against `Σ (max(C[k][k], C[σk][σk]) + H|C[k][k] - C[σk][σk]|)`,
/// the sum of the dominance bounds along the cycle.
pub fn slack_cycle_sides(
    c: &TropMatrix,
    order: &[usize],
    h: &DominanceParams,
) -> (TropScalar, TropScalar) {
    let t = order.len();
    let mut sum = TropScalar::ZERO;
    let mut bound = TropScalar::ZERO;
    for (idx, &k) in order.iter().enumerate() {
        let next = order[(idx + 1) % t];
        sum = &sum + c.get(k, next);
        bound = &bound + &dominance_bound(c.get(k, k), c.get(next, next), h);
    }
    (sum, bound)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Dominantized {
    Normalized {
        potentials: Potentials,
        matrix: TropMatrix,
    },
    /// No similarity makes `C` H-dominant. The witness bound is the one of
    /// [`slack_cycle_sides`]: similarity keeps both cycle sums and the
    /// diagonal, so a cycle below the summed dominance bounds stays below it.
    Violated {
        witness: CycleWitness,
    },
}

/// Finds a similarity taking `C` to a diagonally H-dominant matrix, or a
/// cycle proving none exists.
///
/// Similarity leaves the diagonal alone, so `C` is similar to an H-dominant
/// matrix exactly when the slack matrix `D` admits potentials. Whenever
/// [`cycle_criterion`] passes this succeeds; the converse fails in general,
/// since the criterion's `|K| max C[k][k]` term can exceed the summed bounds.
pub fn dominantize(c: &TropMatrix, h: &DominanceParams) -> Result<Dominantized> {
    let d = slack_matrix(c, h)?;
    match potentials_for_nonneg(&d)? {
        PotentialsOutcome::Found { potentials } => {
            let matrix = c.similarity(&potentials)?;
            assert!(is_dominant(&matrix, h)?, "normalized matrix is not H-dominant");
            Ok(Dominantized::Normalized { potentials, matrix })
        }
        PotentialsOutcome::NoSolution { cycle } => {
            let (cycle_sum, bound) = slack_cycle_sides(c, &cycle.vertices, h);
            assert!(cycle_sum < bound, "slack cycle must be negative");
            Ok(Dominantized::Violated {
                witness: CycleWitness {
                    cycle: cycle.vertices,
                    cycle_sum,
                    bound,
                },
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PairDominantized {
    Normalized {
        potentials: Potentials,
        a: TropMatrix,
        b: TropMatrix,
    },
    Violated {
        witness: CycleWitness,
    },
}

/// Pair form of [`dominantize`]: normalizes `A ⊕ B` and applies the same
/// potentials to both matrices. The diagonals must agree.
pub fn dominantize_pair(
    a: &TropMatrix,
    b: &TropMatrix,
    h: &DominanceParams,
) -> Result<PairDominantized> {
    let c = a.hadamard_min(b)?;
    if a.diagonal() != b.diagonal() {
        return Err(TropError::Parameter("pair diagonals differ".into()));
    }
    match dominantize(&c, h)? {
        Dominantized::Violated { witness } => Ok(PairDominantized::Violated { witness }),
        Dominantized::Normalized { potentials, .. } => {
            let a2 = a.similarity(&potentials)?;
            let b2 = b.similarity(&potentials)?;
            assert!(is_dominant_pair(&a2, &b2, h)?, "normalized pair is not H-dominant");
            Ok(PairDominantized::Normalized {
                potentials,
                a: a2,
                b: b2,
            })
        }
    }
}
