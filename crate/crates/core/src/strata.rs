//! Isotropy strata of a torus representation and the boundary of its orbit
//! space.
//!
//! A point whose nonzero isotypical coordinates are exactly the classes in
//! `S` has isotropy `H_S = {t : φ_θ(t) = 1 for θ ∈ S}`, the annihilator of
//! the lattice `L(S)` spanned by `S`. The characters trivial on `H_S` are
//! exactly `L(S)`, so `V^{H_S}` is `V₀` plus every component whose weight lies
//! in `L(S)`. For an abelian group the normalizer of `H_S` is everything, and
//! the stratum has dimension `dim V^{H_S}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{self, IntMatrix};
use crate::split;
use crate::weights::WeightSystem;

/// Largest number of weight classes whose support subsets are enumerated.
pub const MAX_CLASSES: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("{classes} weight classes exceed the enumeration cap of {MAX_CLASSES} (2^{MAX_CLASSES} subsets)")]
    TooManyClasses { classes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumRecord {
    /// Union of all supports realizing this isotropy group.
    pub support: Vec<usize>,
    pub isotropy_dim: usize,
    /// Smith invariants of the support matrix; the entries above 1 describe
    /// the finite part of the isotropy group.
    #[serde(serialize_with = "serialize_bigints")]
    pub isotropy_component_invariants: Vec<BigInt>,
    pub fixed_dim_of_isotropy: usize,
    pub stratum_dim: usize,
    pub quotient_dim: usize,
    pub quotient_codim: usize,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl StratumRecord {
    pub fn is_principal(&self) -> bool {
        self.quotient_codim == 0
    }

    /// Finite and nontrivial isotropy.
    pub fn has_finite_nontrivial_isotropy(&self) -> bool {
        self.isotropy_dim == 0 && self.isotropy_component_invariants.iter().any(|d| !d.is_one())
    }
}

/// One record per distinct isotropy subgroup, ordered by the Hermite basis of
/// `L(S)` (so the origin, `S = ∅`, comes first).
pub fn enumerate_strata(ws: &WeightSystem) -> Result<Vec<StratumRecord>, StrataError> {
    let m = ws.num_classes();
    if m > MAX_CLASSES {
        return Err(StrataError::TooManyClasses { classes: m });
    }
    let k = ws.k();
    let chm = ws.cohomogeneity();
    let classes: Vec<Vec<BigInt>> = (0..m).map(|i| ws.weight_as_bigint(i)).collect();

    // Hermite basis of L(S) -> (union of supports, first support matrix)
    let mut seen: BTreeMap<Vec<Vec<BigInt>>, (Vec<usize>, IntMatrix)> = BTreeMap::new();
    for mask in 0u32..(1u32 << m) {
        let support: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let mat = ws.matrix_of(&support);
        let key = lattice::lattice_basis(&mat);
        match seen.get_mut(&key) {
            Some((union, _)) => {
                for i in support {
                    if !union.contains(&i) {
                        union.push(i);
                    }
                }
            }
            None => {
                seen.insert(key, (support, mat));
            }
        }
    }

    let mut records = Vec::with_capacity(seen.len());
    for (key, (mut support, mat)) in seen {
        support.sort_unstable();
        let rank = key.len();
        let basis = IntMatrix::from_rows(k, &key).expect("basis rows have length k");
        let (h, _) = lattice::hnf(&basis);
        let in_lattice: Vec<usize> = (0..m).filter(|&i| lattice::reduce_against_hnf(&classes[i], &h)).collect();
        let fixed = ws.fixed_dim() + 2 * ws.multiplicity_of(&in_lattice);
        let invariants = if mat.rows() == 0 { Vec::new() } else { lattice::snf(&mat) };
        let quotient_dim = fixed - rank;
        records.push(StratumRecord {
            support,
            isotropy_dim: k - rank,
            isotropy_component_invariants: invariants,
            fixed_dim_of_isotropy: fixed,
            stratum_dim: fixed,
            quotient_dim,
            quotient_codim: chm - quotient_dim,
        });
    }
    Ok(records)
}

/// No non-principal stratum of codimension 1 in the orbit space.
pub fn boundary_empty(ws: &WeightSystem) -> Result<bool, StrataError> {
    Ok(!enumerate_strata(ws)?.iter().any(|r| !r.is_principal() && r.quotient_codim == 1))
}

/// For torus actions, trivial copolarity is the same as an orbit space
/// without boundary.
pub fn has_trivial_copolarity(ws: &WeightSystem) -> Result<bool, StrataError> {
    boundary_empty(ws)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateFailure {
    NontrivialFixedSpace,
    NotFaithful,
    Decomposable,
    BoundaryNonempty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateReport {
    pub candidate: bool,
    pub failures: Vec<CandidateFailure>,
}

/// Could this be the identity component of a minimal reduction: no fixed
/// vectors, faithful, indecomposable and without boundary.
pub fn minimal_reduction_candidate(ws: &WeightSystem) -> Result<CandidateReport, StrataError> {
    let mut failures = Vec::new();
    if ws.fixed_dim() != 0 {
        failures.push(CandidateFailure::NontrivialFixedSpace);
    }
    if !ws.is_faithful() {
        failures.push(CandidateFailure::NotFaithful);
    }
    if split::is_decomposable(ws).is_decomposable() {
        failures.push(CandidateFailure::Decomposable);
    }
    if !boundary_empty(ws)? {
        failures.push(CandidateFailure::BoundaryNonempty);
    }
    Ok(CandidateReport { candidate: failures.is_empty(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(k: usize, v: &[&[i64]]) -> WeightSystem {
        WeightSystem::from_vectors(k, 0, v).unwrap()
    }

    fn codims(ws: &WeightSystem) -> Vec<usize> {
        enumerate_strata(ws).unwrap().iter().map(|r| r.quotient_codim).collect()
    }

    #[test]
    fn rotation_plane() {
        let recs = enumerate_strata(&ws(1, &[&[1]])).unwrap();
        assert_eq!(recs.len(), 2);
        let origin = &recs[0];
        assert_eq!((origin.isotropy_dim, origin.quotient_dim, origin.quotient_codim), (1, 0, 1));
        assert!(recs[1].is_principal());
        assert!(!boundary_empty(&ws(1, &[&[1]])).unwrap());
    }

    #[test]
    fn weights_one_and_two() {
        let recs = enumerate_strata(&ws(1, &[&[1], &[2]])).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].quotient_codim, 3);
        let z2 = recs.iter().find(|r| r.support == vec![1]).unwrap();
        assert_eq!(z2.isotropy_dim, 0);
        assert_eq!(z2.isotropy_component_invariants, vec![BigInt::from(2)]);
        assert_eq!(z2.fixed_dim_of_isotropy, 2);
        assert_eq!(z2.quotient_codim, 2);
        assert!(!codims(&ws(1, &[&[1], &[2]])).contains(&1));
        assert!(has_trivial_copolarity(&ws(1, &[&[1], &[2]])).unwrap());
    }

    #[test]
    fn product_of_planes() {
        let w = ws(2, &[&[1, 0], &[0, 1]]);
        let recs = enumerate_strata(&w).unwrap();
        let r = recs.iter().find(|r| r.support == vec![1]).unwrap();
        assert_eq!((r.isotropy_dim, r.fixed_dim_of_isotropy, r.quotient_dim, r.quotient_codim), (1, 2, 1, 1));
        assert!(!has_trivial_copolarity(&w).unwrap());
    }

    #[test]
    fn boundary_examples() {
        let hopf = WeightSystem::canonicalize(1, 0, &[(vec![1], 2)]).unwrap();
        assert!(boundary_empty(&hopf).unwrap());
        assert_eq!(codims(&hopf), vec![3, 0]);
        assert!(boundary_empty(&ws(2, &[&[1, 0], &[0, 1], &[1, 1]])).unwrap());
        // same orbits as weight 1: a half-line
        assert!(!boundary_empty(&ws(1, &[&[2]])).unwrap());
        // a trivially acting circle changes nothing
        assert!(boundary_empty(&ws(2, &[&[1, 0], &[2, 0]])).unwrap());
        // a flat factor next to a rotation plane
        assert!(!boundary_empty(&WeightSystem::from_vectors(1, 2, &[&[1]]).unwrap()).unwrap());
    }

    #[test]
    fn candidates() {
        let good = minimal_reduction_candidate(&ws(2, &[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert!(good.candidate);
        let split = minimal_reduction_candidate(&ws(2, &[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(split.failures, vec![CandidateFailure::Decomposable, CandidateFailure::BoundaryNonempty]);
        let z2 = minimal_reduction_candidate(&ws(1, &[&[2]])).unwrap();
        assert!(z2.failures.contains(&CandidateFailure::NotFaithful));
    }

    #[test]
    fn refuses_too_many_classes() {
        let v: Vec<Vec<i64>> = (1..=19).map(|a| vec![1, a]).collect();
        let refs: Vec<&[i64]> = v.iter().map(Vec::as_slice).collect();
        assert_eq!(enumerate_strata(&ws(2, &refs)), Err(StrataError::TooManyClasses { classes: 19 }));
    }
}
