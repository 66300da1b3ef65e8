//! Torus representations as weight systems.
//!
//! A real representation of `T^k` splits as `V₀ ⊕ V₁ ⊕ … ⊕ Vₙ`: the fixed
//! space plus one real isotypical component per weight class `±θ`. Each class
//! is stored once, sign-canonical (first nonzero entry positive), with its
//! multiplicity; a component of multiplicity `μ` has real dimension `2μ`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{self, IntMatrix};

/// Largest accepted absolute weight entry. Keeps negation and content
/// computations inside `i64`.
pub const MAX_ENTRY: i64 = i32::MAX as i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("torus rank must be at least 1")]
    ZeroRank,
    #[error("weight {index} has length {got}, expected {expected}")]
    WrongLength { index: usize, expected: usize, got: usize },
    #[error("weight {index} is the zero vector")]
    ZeroWeight { index: usize },
    #[error("weight {index} has multiplicity 0")]
    ZeroMultiplicity { index: usize },
    #[error("weight {index} has an entry outside ±{MAX_ENTRY}")]
    EntryTooLarge { index: usize },
    #[error("dimension overflows")]
    DimensionOverflow,
}

/// One weight class with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Weight {
    pub vector: Vec<i64>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightSystem {
    k: usize,
    fixed_dim: usize,
    weights: Vec<Weight>,
}

/// Position of one isotypical component inside `V`'s coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotypicalComponent {
    pub weight: Vec<i64>,
    pub multiplicity: usize,
    pub real_dim: usize,
    pub coordinate_offset: usize,
}

/// Flips `v` so that its first nonzero entry is positive.
pub fn sign_canonical(v: &[i64]) -> Vec<i64> {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.iter().map(|&x| -x).collect(),
        _ => v.to_vec(),
    }
}

/// The primitive sign-canonical representative of the line through `v`.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
    if g == 0 {
        return v.to_vec();
    }
    sign_canonical(&v.iter().map(|&x| x / g).collect::<Vec<_>>())
}

impl WeightSystem {
    /// Canonicalizes raw `(vector, multiplicity)` pairs: `θ` and `-θ` merge,
    /// multiplicities add, classes are sorted lexicographically.
    pub fn canonicalize(k: usize, fixed_dim: usize, raw: &[(Vec<i64>, usize)]) -> Result<Self, WeightError> {
        if k == 0 {
            return Err(WeightError::ZeroRank);
        }
        let mut merged: Vec<Weight> = Vec::with_capacity(raw.len());
        for (index, (v, mult)) in raw.iter().enumerate() {
            if v.len() != k {
                return Err(WeightError::WrongLength { index, expected: k, got: v.len() });
            }
            if v.iter().any(|x| x.unsigned_abs() > MAX_ENTRY as u64) {
                return Err(WeightError::EntryTooLarge { index });
            }
            if v.iter().all(|&x| x == 0) {
                return Err(WeightError::ZeroWeight { index });
            }
            if *mult == 0 {
                return Err(WeightError::ZeroMultiplicity { index });
            }
            merged.push(Weight { vector: sign_canonical(v), multiplicity: *mult });
        }
        merged.sort();
        let mut weights: Vec<Weight> = Vec::with_capacity(merged.len());
        for w in merged {
            match weights.last_mut() {
                Some(last) if last.vector == w.vector => {
                    last.multiplicity = last.multiplicity.checked_add(w.multiplicity).ok_or(WeightError::DimensionOverflow)?;
                }
                _ => weights.push(w),
            }
        }
        let ws = WeightSystem { k, fixed_dim, weights };
        ws.checked_total_dim().ok_or(WeightError::DimensionOverflow)?;
        Ok(ws)
    }

    /// Shorthand for tests and examples: every listed vector with multiplicity 1.
    pub fn from_vectors(k: usize, fixed_dim: usize, vectors: &[&[i64]]) -> Result<Self, WeightError> {
        let raw: Vec<_> = vectors.iter().map(|v| (v.to_vec(), 1)).collect();
        Self::canonicalize(k, fixed_dim, &raw)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn fixed_dim(&self) -> usize {
        self.fixed_dim
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn num_classes(&self) -> usize {
        self.weights.len()
    }

    fn checked_total_dim(&self) -> Option<usize> {
        self.weights.iter().try_fold(self.fixed_dim, |acc, w| w.multiplicity.checked_mul(2).and_then(|d| acc.checked_add(d)))
    }

    /// `dim V = dim V₀ + 2·Σ multiplicities`.
    pub fn total_dim(&self) -> usize {
        self.checked_total_dim().expect("checked at construction")
    }

    pub fn components(&self) -> Vec<IsotypicalComponent> {
        let mut offset = self.fixed_dim;
        self.weights
            .iter()
            .map(|w| {
                let c = IsotypicalComponent {
                    weight: w.vector.clone(),
                    multiplicity: w.multiplicity,
                    real_dim: 2 * w.multiplicity,
                    coordinate_offset: offset,
                };
                offset += c.real_dim;
                c
            })
            .collect()
    }

    /// Weight classes as the rows of an integer matrix.
    pub fn weight_matrix(&self) -> IntMatrix {
        self.matrix_of(&(0..self.weights.len()).collect::<Vec<_>>())
    }

    /// Rows for a subset of weight classes.
    pub fn matrix_of(&self, classes: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = classes.iter().map(|&i| self.weights[i].vector.clone()).collect();
        IntMatrix::from_rows(self.k, &rows).expect("weights have length k")
    }

    pub fn weight_rank(&self) -> usize {
        lattice::rank(&self.weight_matrix())
    }

    /// The kernel is discrete iff the weights span the dual Lie algebra.
    pub fn has_discrete_kernel(&self) -> bool {
        self.weight_rank() == self.k
    }

    /// The kernel is trivial iff the weights generate the whole character
    /// lattice, i.e. the Smith form has `k` unit invariant factors.
    pub fn is_faithful(&self) -> bool {
        let m = self.weight_matrix();
        if m.rows() < self.k {
            return false;
        }
        let factors = lattice::snf(&m);
        factors.len() == self.k && factors.iter().all(One::is_one)
    }

    /// `dim V` minus the principal orbit dimension, which for a torus is the
    /// rank of the weights.
    pub fn cohomogeneity(&self) -> usize {
        self.total_dim() - self.weight_rank()
    }

    pub fn weight_as_bigint(&self, class: usize) -> Vec<BigInt> {
        self.weights[class].vector.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// `Σ multiplicity` over the listed classes.
    pub fn multiplicity_of(&self, classes: &[usize]) -> usize {
        classes.iter().map(|&i| self.weights[i].multiplicity).sum()
    }
}
