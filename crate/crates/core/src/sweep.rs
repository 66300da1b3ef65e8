//! Exhaustive verification sweeps over small weight systems.
//!
//! The universe for every sweep is: torus rank `k`, no fixed vectors, between
//! one and `max_classes` distinct sign-canonical weights with entries in
//! `[-max_entry, max_entry]`, each with multiplicity `1..=max_mult`. Sweeps
//! that involve extensions also range over every order-two `A` with entries
//! in the same box and every signed-permutation `ω` compatible with it.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::involution::{self, InvolutionError, InvolutiveExtension, OmegaFamily, Verdict};
use crate::io;
use crate::lattice::IntMatrix;
use crate::split::{self, LineBoundError};
use crate::strata;
use crate::weights::{sign_canonical, WeightSystem};

/// Largest ranges a sweep accepts.
pub const MAX_SWEEP_ENTRY: i64 = 3;
pub const MAX_SWEEP_CLASSES: usize = 4;
pub const MAX_SWEEP_K: usize = 2;
pub const MAX_SWEEP_MULT: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Faithful indecomposable systems with `k ≥ 2` induce at least `k + 1`
    /// lines.
    #[serde(rename = "cor2.7")]
    LineBound,
    /// Candidates have even `dim V ≥ 2k + 2`.
    #[serde(rename = "lem3.3")]
    DimensionBound,
    /// No nice involution fixes a hyperplane.
    #[serde(rename = "lem3.4")]
    NoHyperplaneFixed,
    /// `k = 1`: every nice involution on a candidate forces cohomogeneity 3.
    #[serde(rename = "thm4.1")]
    CircleCohomogeneity,
    /// Full codimension forces `dim V = 2k + 2` and cohomogeneity `k + 2`.
    #[serde(rename = "prop3.8")]
    FullCodimension,
}

impl Theorem {
    pub const ALL: [Theorem; 5] =
        [Theorem::LineBound, Theorem::DimensionBound, Theorem::NoHyperplaneFixed, Theorem::CircleCohomogeneity, Theorem::FullCodimension];

    pub fn id(&self) -> &'static str {
        match self {
            Theorem::LineBound => "cor2.7",
            Theorem::DimensionBound => "lem3.3",
            Theorem::NoHyperplaneFixed => "lem3.4",
            Theorem::CircleCohomogeneity => "thm4.1",
            Theorem::FullCodimension => "prop3.8",
        }
    }

    /// Torus ranks swept when none is given.
    pub fn default_ks(&self) -> Vec<usize> {
        match self {
            Theorem::LineBound => vec![2],
            Theorem::CircleCohomogeneity => vec![1],
            Theorem::FullCodimension => vec![2],
            Theorem::DimensionBound | Theorem::NoHyperplaneFixed => vec![1, 2],
        }
    }

    /// Torus ranks the statement applies to.
    fn admits_k(&self, k: usize) -> bool {
        match self {
            Theorem::LineBound => k >= 2,
            Theorem::CircleCohomogeneity => k == 1,
            _ => k >= 1,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("unknown theorem id {0:?}; expected one of cor2.7, lem3.3, lem3.4, thm4.1, prop3.8")]
    UnknownTheorem(String),
    #[error("{what} = {got} is outside the supported range {lo}..={hi}")]
    OutOfRange { what: &'static str, got: i64, lo: i64, hi: i64 },
    #[error("{theorem} does not apply to k = {k}")]
    RankNotApplicable { theorem: Theorem, k: usize },
}

impl FromStr for Theorem {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL.into_iter().find(|t| t.id() == s).ok_or_else(|| SweepError::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ranges {
    pub k: Vec<usize>,
    pub max_entry: i64,
    pub max_classes: usize,
    pub max_mult: usize,
    pub fixed_dim: usize,
}

impl Ranges {
    pub fn new(k: Vec<usize>, max_entry: i64, max_classes: usize, max_mult: usize) -> Result<Self, SweepError> {
        let check = |what, got: i64, lo: i64, hi: i64| {
            if got < lo || got > hi {
                Err(SweepError::OutOfRange { what, got, lo, hi })
            } else {
                Ok(())
            }
        };
        for &kk in &k {
            check("k", kk as i64, 1, MAX_SWEEP_K as i64)?;
        }
        check("max_entry", max_entry, 1, MAX_SWEEP_ENTRY)?;
        check("max_classes", max_classes as i64, 1, MAX_SWEEP_CLASSES as i64)?;
        check("max_mult", max_mult as i64, 1, MAX_SWEEP_MULT as i64)?;
        Ok(Ranges { k, max_entry, max_classes, max_mult, fixed_dim: 0 })
    }

    pub fn defaults(theorem: Theorem) -> Self {
        Ranges { k: theorem.default_ks(), max_entry: 2, max_classes: 4, max_mult: 2, fixed_dim: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    /// Input JSON that reproduces the failure through `analyze` or
    /// `involution`.
    pub input: serde_json::Value,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub theorem: Theorem,
    pub ranges: Ranges,
    /// Weight systems visited.
    pub systems: usize,
    /// Objects examined: weight systems, or extensions for the sweeps over
    /// involutions.
    pub enumerated: usize,
    pub passing_preconditions: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl SweepResult {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Sign-canonical nonzero vectors in `[-e, e]^k`, lexicographically sorted.
pub fn canonical_vectors(k: usize, max_entry: i64) -> Vec<Vec<i64>> {
    let width = (2 * max_entry + 1) as usize;
    let mut out = Vec::new();
    for code in 0..width.pow(k as u32) {
        let mut c = code;
        let v: Vec<i64> = (0..k)
            .map(|_| {
                let x = (c % width) as i64 - max_entry;
                c /= width;
                x
            })
            .collect();
        if v.iter().any(|&x| x != 0) && sign_canonical(&v) == v {
            out.push(v);
        }
    }
    out.sort();
    out
}

/// Every system of the sweep universe for one `k`, in a fixed order.
pub fn enumerate_weight_systems(k: usize, max_entry: i64, max_classes: usize, max_mult: usize) -> Vec<WeightSystem> {
    let vectors = canonical_vectors(k, max_entry);
    let mut out = Vec::new();
    for size in 1..=max_classes.min(vectors.len()) {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            let mut mults = vec![1usize; size];
            loop {
                let raw: Vec<(Vec<i64>, usize)> = pick.iter().zip(&mults).map(|(&i, &m)| (vectors[i].clone(), m)).collect();
                out.push(WeightSystem::canonicalize(k, 0, &raw).expect("canonical inputs"));
                let Some(pos) = mults.iter().rposition(|&m| m < max_mult) else { break };
                mults[pos] += 1;
                mults[pos + 1..].iter_mut().for_each(|m| *m = 1);
            }
            // next combination in lexicographic order
            let Some(pos) = (0..size).rev().find(|&i| pick[i] < vectors.len() - size + i) else { break };
            pick[pos] += 1;
            for i in pos + 1..size {
                pick[i] = pick[i - 1] + 1;
            }
        }
    }
    out
}

/// Validity and fixed dimension of every local choice of a family.
struct LocalTable {
    /// Per factor: fixed dimension of each valid choice.
    valid: Vec<Vec<(usize, usize)>>,
}

impl LocalTable {
    fn new(fam: &OmegaFamily) -> Self {
        let valid = (0..fam.num_factors())
            .map(|f| {
                (0..fam.num_choices(f))
                    .filter_map(|c| {
                        let local = fam.local(f, c);
                        local.validate().is_ok().then(|| (c, local.fixed_space_dim()))
                    })
                    .collect()
            })
            .collect();
        LocalTable { valid }
    }

    /// Picks made of valid choices whose fixed dimensions add up to `target`.
    fn picks_with_fixed_dim(&self, target: usize) -> Vec<Vec<usize>> {
        let max_rest: Vec<usize> =
            (0..=self.valid.len()).map(|f| self.valid[f..].iter().map(|v| v.iter().map(|&(_, d)| d).max().unwrap_or(0)).sum()).collect();
        let min_rest: Vec<usize> =
            (0..=self.valid.len()).map(|f| self.valid[f..].iter().map(|v| v.iter().map(|&(_, d)| d).min().unwrap_or(0)).sum()).collect();
        let mut out = Vec::new();
        let mut pick = Vec::with_capacity(self.valid.len());
        self.extend(0, target, &mut pick, &max_rest, &min_rest, &mut out);
        out
    }

    fn extend(&self, f: usize, left: usize, pick: &mut Vec<usize>, max_rest: &[usize], min_rest: &[usize], out: &mut Vec<Vec<usize>>) {
        if left > max_rest[f] || left < min_rest[f] {
            return;
        }
        if f == self.valid.len() {
            out.push(pick.clone());
            return;
        }
        for &(c, d) in &self.valid[f] {
            if d <= left {
                pick.push(c);
                self.extend(f + 1, left - d, pick, max_rest, min_rest, out);
                pick.pop();
            }
        }
    }
}

/// The nice involutions of one family. Validity is blockwise and the fixed
/// dimension is additive over factors, so candidates come from the local
/// table; each is then assembled and checked again as a whole.
fn nice_in_family(fam: &OmegaFamily, t: &mut Tally) -> Vec<InvolutiveExtension> {
    t.enumerated += fam.len() as usize;
    let ws = fam.weight_system();
    // dim V^ω = dim V − 1 − k + dim Z_G(ω)
    let reach = ws.total_dim() + involution::adjoint_fixed_dim(fam.adjoint());
    let Some(target) = reach.checked_sub(1 + ws.k()) else { return Vec::new() };
    let table = LocalTable::new(fam);
    let mut out = Vec::new();
    for pick in table.picks_with_fixed_dim(target) {
        let ext = fam.assemble(&pick);
        match ext.is_nice_involution() {
            Ok(true) => {
                t.passing += 1;
                out.push(ext);
            }
            other => t.fail_ext(&ext, format!("blockwise checks say nice, whole-matrix check gives {other:?}")),
        }
    }
    out
}

struct Tally {
    systems: usize,
    enumerated: usize,
    passing: usize,
    counterexamples: Vec<Counterexample>,
}

impl Tally {
    fn fail_ws(&mut self, ws: &WeightSystem, reason: String) {
        self.counterexamples.push(Counterexample { input: io::weight_system_to_json(ws), reason });
    }

    fn fail_ext(&mut self, ext: &InvolutiveExtension, reason: String) {
        self.counterexamples.push(Counterexample { input: io::extension_to_json(ext), reason });
    }
}

fn sweep_rank(theorem: Theorem, k: usize, r: &Ranges, t: &mut Tally) {
    let systems = enumerate_weight_systems(k, r.max_entry, r.max_classes, r.max_mult);
    let adjoints: Vec<IntMatrix> = involution::order_two_matrices(k, r.max_entry);
    for ws in &systems {
        t.systems += 1;
        match theorem {
            Theorem::LineBound => {
                t.enumerated += 1;
                match split::check_line_bound(ws) {
                    Ok(true) => t.passing += 1,
                    Ok(false) => {
                        t.passing += 1;
                        t.fail_ws(ws, format!("only {} induced lines for k = {k}", split::induced_lines(ws).len()));
                    }
                    Err(LineBoundError::NotFaithful | LineBoundError::Decomposable | LineBoundError::NotDiscreteKernel { .. }) => {}
                    Err(e @ LineBoundError::RankTooSmall(_)) => t.fail_ws(ws, e.to_string()),
                }
            }
            Theorem::DimensionBound => {
                t.enumerated += 1;
                let cand = strata::minimal_reduction_candidate(ws).expect("sweep systems are small");
                if cand.candidate {
                    t.passing += 1;
                    let n = ws.total_dim();
                    if n % 2 != 0 || n < 2 * k + 2 {
                        t.fail_ws(ws, format!("candidate with dim V = {n} for k = {k}"));
                    }
                }
            }
            Theorem::NoHyperplaneFixed => {
                for fam in adjoints.iter().filter_map(|a| OmegaFamily::new(ws, a)) {
                    for ext in nice_in_family(&fam, t) {
                        if ext.codim() == 1 {
                            t.fail_ext(&ext, "nice involution with codim V^omega = 1".into());
                        }
                    }
                }
            }
            Theorem::CircleCohomogeneity | Theorem::FullCodimension => {
                let cand = strata::minimal_reduction_candidate(ws).expect("sweep systems are small");
                if !cand.candidate {
                    continue;
                }
                for fam in adjoints.iter().filter_map(|a| OmegaFamily::new(ws, a)) {
                    for ext in nice_in_family(&fam, t) {
                        check_verdict(&ext, t);
                    }
                }
            }
        }
    }
}

/// Full codimension must give `Chm(k + 2)` on `dim V = 2k + 2`; every
/// verdict must agree with `dim V − rank`.
fn check_verdict(ext: &InvolutiveExtension, t: &mut Tally) {
    let k = ext.k();
    let chm = ext.ws.cohomogeneity();
    let full = ext.codim() == k + 1;
    match ext.conclude_cohomogeneity() {
        Ok(v) => {
            if full && v != (Verdict::Chm { chm: k + 2 }) {
                t.fail_ext(ext, format!("verdict {v:?} at codim {}", k + 1));
            } else if full && ext.ws.total_dim() != 2 * k + 2 {
                t.fail_ext(ext, format!("dim V = {} at codim {}", ext.ws.total_dim(), k + 1));
            } else if v.chm() != chm {
                t.fail_ext(ext, format!("verdict chm {} but dim V - rank = {chm}", v.chm()));
            }
        }
        Err(e @ InvolutionError::Violation { .. }) => t.fail_ext(ext, e.to_string()),
        Err(e) => t.fail_ext(ext, format!("chain stopped early: {e}")),
    }
}

pub fn run(theorem: Theorem, ranges: &Ranges) -> Result<SweepResult, SweepError> {
    if let Some(&k) = ranges.k.iter().find(|&&k| !theorem.admits_k(k)) {
        return Err(SweepError::RankNotApplicable { theorem, k });
    }
    let mut t = Tally { systems: 0, enumerated: 0, passing: 0, counterexamples: Vec::new() };
    for &k in &ranges.k {
        sweep_rank(theorem, k, ranges, &mut t);
    }
    let mut counterexamples = t.counterexamples;
    counterexamples.sort_by_cached_key(|c| c.input.to_string());
    Ok(SweepResult {
        theorem,
        ranges: ranges.clone(),
        systems: t.systems,
        enumerated: t.enumerated,
        passing_preconditions: t.passing,
        counterexamples,
    })
}
