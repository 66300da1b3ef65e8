mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use copolarity::lattice::{self, IntMatrix};
use copolarity::strata;
use copolarity::sweep;
use copolarity::WeightSystem;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn weights(k: usize) -> impl Strategy<Value = Vec<(Vec<i64>, usize)>> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, k), 1usize..=2), 1..=5)
        .prop_filter("nonzero weights", |v| v.iter().all(|(w, _)| w.iter().any(|&x| x != 0)))
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

proptest! {
    #[test]
    fn hnf_is_a_unimodular_transform(rows in matrix()) {
        let m = IntMatrix::from_i64_rows(&rows);
        let (h, u) = lattice::hnf(&m);
        prop_assert_eq!(u.mul(&m).unwrap(), h.clone());
        prop_assert!(u.determinant().unwrap().abs().is_one());
        // echelon with positive pivots and reduced entries above them
        let mut last: Option<usize> = None;
        for i in 0..h.rows() {
            let Some(p) = (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) else { continue };
            prop_assert!(last.is_none_or(|l| p > l));
            prop_assert!(h[(i, p)].is_positive());
            for above in 0..i {
                prop_assert!(!h[(above, p)].is_negative() && h[(above, p)] < h[(i, p)]);
            }
            last = Some(p);
        }
    }

    #[test]
    fn rank_counts_hermite_rows(rows in matrix()) {
        let m = IntMatrix::from_i64_rows(&rows);
        prop_assert_eq!(lattice::rank(&m), lattice::lattice_basis(&m).len());
        prop_assert_eq!(lattice::rank(&m), common::rank(&common::to_i128(&rows)));
    }

    #[test]
    fn smith_factors_divide(rows in matrix()) {
        let d = lattice::snf(&IntMatrix::from_i64_rows(&rows));
        for w in d.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
    }

    #[test]
    fn membership_matches_bounded_search(
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 1..=2),
        coeffs in prop::collection::vec(-10i64..=10, 2),
        offset in prop::collection::vec(-1i64..=1, 2),
    ) {
        let m = IntMatrix::from_i64_rows(&gens);
        let v: Vec<i64> = (0..2).map(|j| gens.iter().zip(&coeffs).map(|(g, c)| g[j] * c).sum::<i64>() + offset[j]).collect();
        let found = lattice::in_sublattice(&big(&v), &m).unwrap();
        prop_assert_eq!(found, common::in_lattice(&v, &gens));
        // with a bounded witness the search settles it directly
        let reachable = (-10i64..=10).any(|a| (-10i64..=10).any(|b| {
            let c = [a, b];
            (0..2).all(|j| gens.iter().zip(&c).map(|(g, c)| g[j] * c).sum::<i64>() == v[j])
        }));
        if reachable {
            prop_assert!(found);
        }
        if offset == vec![0, 0] {
            prop_assert!(found);
        }
    }

    #[test]
    fn canonicalize_is_order_free_and_idempotent(raw in weights(2), seed in any::<u64>()) {
        let a = WeightSystem::canonicalize(2, 0, &raw).unwrap();
        let mut shuffled: Vec<(Vec<i64>, usize)> = raw.iter().map(|(v, m)| {
            if seed % 2 == 0 { (v.iter().map(|x| -x).collect(), *m) } else { (v.clone(), *m) }
        }).collect();
        shuffled.reverse();
        let b = WeightSystem::canonicalize(2, 0, &shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        let again: Vec<(Vec<i64>, usize)> = a.weights().iter().map(|w| (w.vector.clone(), w.multiplicity)).collect();
        prop_assert_eq!(WeightSystem::canonicalize(2, 0, &again).unwrap(), a.clone());
        prop_assert_eq!(a.total_dim(), 2 * raw.iter().map(|(_, m)| m).sum::<usize>());
    }

    #[test]
    fn faithful_implies_discrete_kernel(raw in weights(2)) {
        let w = WeightSystem::canonicalize(2, 0, &raw).unwrap();
        if w.is_faithful() {
            prop_assert!(w.has_discrete_kernel());
        }
        let rows: Vec<Vec<i64>> = w.weights().iter().map(|c| c.vector.clone()).collect();
        let r = common::rank(&common::to_i128(&rows));
        prop_assert_eq!(w.has_discrete_kernel(), r == 2);
        prop_assert_eq!(w.is_faithful(), r == 2 && common::minors_gcd(&common::to_i128(&rows), 2) == 1);
    }

    #[test]
    fn strata_invariants(raw in weights(2), fixed in 0usize..=2) {
        let w = WeightSystem::canonicalize(2, fixed, &raw).unwrap();
        let records = strata::enumerate_strata(&w).unwrap();
        let principal: Vec<_> = records.iter().filter(|r| r.is_principal()).collect();
        prop_assert_eq!(principal.len(), 1);
        let trivial = principal[0].isotropy_dim == 0 && principal[0].isotropy_component_invariants.iter().all(|d| d.is_one());
        prop_assert_eq!(trivial, w.is_faithful());
        for r in &records {
            prop_assert!(r.quotient_dim <= w.cohomogeneity());
            prop_assert_eq!(r.stratum_dim, r.fixed_dim_of_isotropy);
            // a finite isotropy group acting as a reflection cannot sit inside a torus
            if r.has_finite_nontrivial_isotropy() {
                prop_assert_ne!(r.fixed_dim_of_isotropy + 1, w.total_dim());
            }
        }
        let pairs: Vec<(Vec<i64>, usize)> = w.weights().iter().map(|c| (c.vector.clone(), c.multiplicity)).collect();
        prop_assert_eq!(strata::boundary_empty(&w).unwrap(), !common::boundary_nonempty(fixed, &pairs));
    }
}

type Row = (usize, &'static [(&'static [i64], usize)], bool);

#[test]
fn boundary_matches_minor_oracle_on_curated_systems() {
    let table: [Row; 8] = [
        (1, &[(&[1], 1)], false),
        (1, &[(&[1], 2)], true),
        (1, &[(&[1], 1), (&[2], 1)], true),
        // the orbit space of a doubled rotation is still a half-line
        (1, &[(&[2], 1)], false),
        (2, &[(&[1, 0], 1), (&[0, 1], 1)], false),
        (2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)], true),
        // same orbits as weights 1 and 2 of a circle
        (2, &[(&[1, 0], 1), (&[2, 0], 1)], true),
        (2, &[(&[1, 1], 2), (&[1, 0], 1), (&[0, 1], 1)], true),
    ];
    for (k, raw, expected) in table {
        let pairs: Vec<(Vec<i64>, usize)> = raw.iter().map(|(v, m)| (v.to_vec(), *m)).collect();
        let w = WeightSystem::canonicalize(k, 0, &pairs).unwrap();
        assert_eq!(strata::boundary_empty(&w).unwrap(), expected, "{pairs:?}");
        assert_eq!(!common::boundary_nonempty(0, &pairs), expected, "{pairs:?}");
    }
}

#[test]
fn boundary_matches_minor_oracle_on_sweep_universe() {
    for k in 1..=2 {
        for w in sweep::enumerate_weight_systems(k, 2, 3, 2) {
            let pairs: Vec<(Vec<i64>, usize)> = w.weights().iter().map(|c| (c.vector.clone(), c.multiplicity)).collect();
            assert_eq!(strata::boundary_empty(&w).unwrap(), !common::boundary_nonempty(0, &pairs), "{pairs:?}");
        }
    }
}

#[test]
fn orbit_dimensions_add_up() {
    use copolarity::numlab::{self, FamilySpec};
    for (n, w) in [(3, vec![1, 2]), (4, vec![1, 1]), (6, vec![2, 3])] {
        let spec = FamilySpec::new(n, w).unwrap();
        let s = numlab::survey(&spec);
        let (iso, _) = numlab::principal_isotropy_algebra_dim(&spec);
        let (chm, _) = numlab::cohomogeneity_numeric(&spec);
        assert_eq!(iso + s.max_orbit_dim, spec.dim_h());
        assert_eq!(chm + s.max_orbit_dim, spec.dim_w());
        assert_eq!(chm, 6);
    }
}
