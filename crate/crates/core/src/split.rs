//! Decomposability of torus representations.
//!
//! A toric representation splits when its weight classes fall into two
//! nonempty groups whose rational spans meet only in zero, which is the same
//! as rank additivity `rank Θ₁ + rank Θ₂ = rank Θ`. The finest such splitting
//! is the set of connected components of the linear matroid on the weight
//! classes. Multiplicities play no role here.

use serde::Serialize;
use thiserror::Error;

use crate::lattice;
use crate::weights::{primitive, WeightSystem};

/// Above this many classes the witness search stops enumerating bipartitions
/// and reads a split off the matroid components instead.
pub const EXHAUSTIVE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    pub theta1: Vec<usize>,
    pub theta2: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub flat_dim: usize,
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Decomposability {
    /// `V₀` is a nontrivial Euclidean factor next to a nontrivial remainder.
    FlatFactor {
        fixed_dim: usize,
    },
    /// Trivial action on a space of dimension at least 2.
    TrivialSplit {
        dim: usize,
    },
    Witness(SplitWitness),
    Indecomposable,
}

impl Decomposability {
    pub fn is_decomposable(&self) -> bool {
        !matches!(self, Decomposability::Indecomposable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineBoundError {
    #[error("torus rank {0} < 2")]
    RankTooSmall(usize),
    #[error("kernel is not discrete (weights have rank {rank} < {k})")]
    NotDiscreteKernel { rank: usize, k: usize },
    #[error("representation is not faithful")]
    NotFaithful,
    #[error("representation is decomposable")]
    Decomposable,
}

/// Distinct lines spanned by the weights, as primitive sign-canonical vectors
/// in lexicographic order.
pub fn induced_lines(ws: &WeightSystem) -> Vec<Vec<i64>> {
    let mut lines: Vec<Vec<i64>> = ws.weights().iter().map(|w| primitive(&w.vector)).collect();
    lines.sort();
    lines.dedup();
    lines
}

fn rank_of(ws: &WeightSystem, classes: &[usize]) -> usize {
    lattice::rank(&ws.matrix_of(classes))
}

/// First rank-additive bipartition of the weight classes, or `None`.
///
/// Partitions are ordered by the bitmask of `theta2` over classes `1..m`,
/// so class 0 always lands in `theta1`.
pub fn find_split_witness(ws: &WeightSystem) -> Option<SplitWitness> {
    let m = ws.num_classes();
    if m < 2 {
        return None;
    }
    if m > EXHAUSTIVE_LIMIT {
        let comps = matroid_components(ws);
        if comps.len() < 2 {
            return None;
        }
        let theta1 = comps[0].clone();
        let mut theta2: Vec<usize> = comps[1..].concat();
        theta2.sort_unstable();
        return Some(SplitWitness { theta1, theta2 });
    }
    let total = ws.weight_rank();
    for mask in 1u64..(1u64 << (m - 1)) {
        let (theta1, theta2): (Vec<usize>, Vec<usize>) = (0..m).partition(|&i| i == 0 || mask & (1 << (i - 1)) == 0);
        if rank_of(ws, &theta1) + rank_of(ws, &theta2) == total {
            return Some(SplitWitness { theta1, theta2 });
        }
    }
    None
}

pub fn is_decomposable(ws: &WeightSystem) -> Decomposability {
    let fixed = ws.fixed_dim();
    let total = ws.total_dim();
    if fixed > 0 && total > fixed {
        return Decomposability::FlatFactor { fixed_dim: fixed };
    }
    if fixed == total && total >= 2 {
        return Decomposability::TrivialSplit { dim: total };
    }
    match find_split_witness(ws) {
        Some(w) => Decomposability::Witness(w),
        None => Decomposability::Indecomposable,
    }
}

/// Connected components of the linear matroid on the weight classes.
///
/// Every element outside a basis `B` closes a unique circuit inside
/// `B ∪ {e}`; the components are the classes of the relation generated by
/// these fundamental circuits.
pub fn matroid_components(ws: &WeightSystem) -> Vec<Vec<usize>> {
    let m = ws.num_classes();
    let mut uf = UnionFind::new(m);
    let mut basis: Vec<usize> = Vec::new();
    let mut dependent: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut trial = basis.clone();
        trial.push(i);
        if rank_of(ws, &trial) == trial.len() {
            basis.push(i);
        } else {
            dependent.push(i);
        }
    }
    for &e in &dependent {
        // b is in the fundamental circuit of e iff B - b + e is again a basis
        for (pos, &b) in basis.iter().enumerate() {
            let mut swapped: Vec<usize> = basis.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, &x)| x).collect();
            swapped.push(e);
            if rank_of(ws, &swapped) == basis.len() {
                uf.union(e, b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_to_group: Vec<Option<usize>> = vec![None; m];
    for i in 0..m {
        let r = uf.find(i);
        match root_to_group[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_to_group[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

pub fn indecomposable_blocks(ws: &WeightSystem) -> BlockDecomposition {
    BlockDecomposition { flat_dim: ws.fixed_dim(), blocks: matroid_components(ws) }
}

/// At least `k + 1` induced lines for a faithful indecomposable system with
/// `k ≥ 2`. Inputs outside those hypotheses are rejected.
pub fn check_line_bound(ws: &WeightSystem) -> Result<bool, LineBoundError> {
    let k = ws.k();
    if k < 2 {
        return Err(LineBoundError::RankTooSmall(k));
    }
    let rank = ws.weight_rank();
    if rank < k {
        return Err(LineBoundError::NotDiscreteKernel { rank, k });
    }
    if !ws.is_faithful() {
        return Err(LineBoundError::NotFaithful);
    }
    if is_decomposable(ws).is_decomposable() {
        return Err(LineBoundError::Decomposable);
    }
    Ok(induced_lines(ws).len() > k)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index wins so roots are deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
