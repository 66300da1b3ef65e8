//! Involutive extensions `G = T^k ∪ ωT^k`.
//!
//! `ω` is given twice: as the integer matrix `A = Ad(ω)` on the torus Lie
//! algebra (acting on column vectors), and as a rational orthogonal matrix on
//! `V` in the block coordinates of the weight system. Coordinates of `V` are
//! `V₀` first, then each isotypical component as `μ` consecutive planes; a
//! Lie algebra element `x` acts on a plane of weight `θ` by `θ(x)·J` with
//! `J = [[0, -1], [1, 0]]`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{self, IntMatrix, RationalMatrix};
use crate::split;
use crate::strata::{self, StrataError};
use crate::weights::{sign_canonical, WeightSystem, MAX_ENTRY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionViolation {
    #[error("A is {rows}x{cols}, expected {k}x{k}")]
    AdjointShape { rows: usize, cols: usize, k: usize },
    #[error("omega is {rows}x{cols}, expected {dim}x{dim}")]
    OmegaShape { rows: usize, cols: usize, dim: usize },
    #[error("A·A is not the identity")]
    AdjointNotInvolution,
    #[error("omega is not orthogonal")]
    NotOrthogonal,
    #[error("omega·omega is not the identity")]
    NotInvolution,
    #[error("omega·D(e{generator})·omega⁻¹ differs from D(A·e{generator})")]
    Incompatible { generator: usize },
}

/// Statements that a valid input must satisfy; a failure is a counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    /// `dim V` is even and at least `2k + 2`.
    EvenDimension,
    /// A nice involution never fixes a hyperplane.
    CodimensionNotOne,
    /// `2 ≤ codim V^ω ≤ k + 1` and `dim Z_G(ω) ≤ k − 1`.
    CodimensionBounds,
    /// `ω` acts nontrivially on every invariant block it preserves.
    Nontriviality,
    /// Codimension `k + 1` forces `k + 1` planes and `dim V = 2k + 2`.
    FullCodimension,
    /// Codimension 2 with `k = 2` forces `V₊ = 0`, two swapped planes in `V̄`
    /// and `ω = id` on `V₋`.
    CodimensionTwoSplit,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Lemma::EvenDimension => "dim V is even and at least 2k+2",
            Lemma::CodimensionNotOne => "a nice involution has fixed-space codimension != 1",
            Lemma::CodimensionBounds => "2 <= codim V^omega <= k+1 for a nice involution",
            Lemma::Nontriviality => "omega acts nontrivially on every invariant block it preserves",
            Lemma::FullCodimension => "codim k+1 forces k+1 planes, dim V = 2k+2 and cohomogeneity k+2",
            Lemma::CodimensionTwoSplit => "codim 2 forces V+ = 0, two swapped planes and omega = id on V-",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("invalid extension: {0}")]
    Invalid(#[from] ExtensionViolation),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("violated: {lemma} ({detail})")]
    Violation { lemma: Lemma, detail: String },
}

impl InvolutionError {
    fn violation(lemma: Lemma, detail: impl Into<String>) -> Self {
        InvolutionError::Violation { lemma, detail: detail.into() }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, InvolutionError::Violation { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutiveExtension {
    pub ws: WeightSystem,
    pub adjoint: IntMatrix,
    pub omega: RationalMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodimReport {
    pub codim: usize,
    pub lower: usize,
    pub upper: usize,
    pub centralizer_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionSplit {
    pub v_plus_indices: Vec<usize>,
    pub v_minus_indices: Vec<usize>,
    pub v_bar_indices: Vec<usize>,
    pub dim_v_plus: usize,
    pub dim_v_minus: usize,
    pub dim_v_bar: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Codimension `k + 1`: cohomogeneity `k + 2`.
    Chm { chm: usize },
    /// `k = 2`, codimension 2 and `dim V₋ = 2`.
    Chm4,
    /// `k = 2`, codimension 2 and `dim V₋ > 2`: cohomogeneity `2 + dim V₋`.
    Exceptional { dim_v_minus: usize },
}

impl Verdict {
    pub fn chm(&self) -> usize {
        match *self {
            Verdict::Chm { chm } => chm,
            Verdict::Chm4 => 4,
            Verdict::Exceptional { dim_v_minus } => 2 + dim_v_minus,
        }
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `D(x)`: block diagonal, `θ(x)·J` on every plane, zero on `V₀`.
pub fn generator(ws: &WeightSystem, x: &[BigInt]) -> RationalMatrix {
    let n = ws.total_dim();
    let mut d = RationalMatrix::zeros(n, n);
    for c in ws.components() {
        let s: BigInt = c.weight.iter().zip(x).map(|(&a, b)| BigInt::from(a) * b).sum();
        if s.is_zero() {
            continue;
        }
        let s = BigRational::from_integer(s);
        for p in 0..c.multiplicity {
            let b = c.coordinate_offset + 2 * p;
            d[(b, b + 1)] = -s.clone();
            d[(b + 1, b)] = s.clone();
        }
    }
    d
}

impl InvolutiveExtension {
    pub fn new(ws: WeightSystem, adjoint: IntMatrix, omega: RationalMatrix) -> Self {
        InvolutiveExtension { ws, adjoint, omega }
    }

    pub fn k(&self) -> usize {
        self.ws.k()
    }

    /// Checks shapes, `A² = I`, `ωᵀω = I`, `ω² = I` and
    /// `ω·D(e_j)·ω⁻¹ = D(A·e_j)` for every basis vector, in that order.
    pub fn validate(&self) -> Result<(), ExtensionViolation> {
        let k = self.k();
        let n = self.ws.total_dim();
        let a = &self.adjoint;
        if a.rows() != k || a.cols() != k {
            return Err(ExtensionViolation::AdjointShape { rows: a.rows(), cols: a.cols(), k });
        }
        if self.omega.rows() != n || self.omega.cols() != n {
            return Err(ExtensionViolation::OmegaShape { rows: self.omega.rows(), cols: self.omega.cols(), dim: n });
        }
        if a.mul(a).expect("square") != IntMatrix::identity(k) {
            return Err(ExtensionViolation::AdjointNotInvolution);
        }
        let id = RationalMatrix::identity(n);
        let omega_t = self.omega.transpose();
        if omega_t.mul(&self.omega).expect("square") != id {
            return Err(ExtensionViolation::NotOrthogonal);
        }
        if self.omega.mul(&self.omega).expect("square") != id {
            return Err(ExtensionViolation::NotInvolution);
        }
        for j in 0..k {
            let e: Vec<BigInt> = (0..k).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
            let ae: Vec<BigInt> = (0..k).map(|i| a[(i, j)].clone()).collect();
            let lhs = self.omega.mul(&generator(&self.ws, &e)).expect("square").mul(&omega_t).expect("square");
            if lhs != generator(&self.ws, &ae) {
                return Err(ExtensionViolation::Incompatible { generator: j });
            }
        }
        Ok(())
    }

    /// `dim V^ω = dim V − rank(ω − I)`.
    pub fn fixed_space_dim(&self) -> usize {
        let n = self.ws.total_dim();
        n - self.omega.sub(&RationalMatrix::identity(n)).expect("square").rank()
    }

    pub fn codim(&self) -> usize {
        self.ws.total_dim() - self.fixed_space_dim()
    }

    /// `dim Z_G(ω)`: the Lie algebra of the centralizer is `ker(A − I)`.
    pub fn centralizer_dim(&self) -> usize {
        adjoint_fixed_dim(&self.adjoint)
    }

    fn omega_is_identity(&self) -> bool {
        self.omega == RationalMatrix::identity(self.ws.total_dim())
    }

    /// `dim V^ω + dim G − dim Z_G(ω) = dim V − 1`.
    pub fn is_nice_involution(&self) -> Result<bool, InvolutionError> {
        self.validate()?;
        if self.omega_is_identity() {
            return Err(InvolutionError::Precondition("omega is the identity".into()));
        }
        Ok(self.fixed_space_dim() + self.k() - self.centralizer_dim() + 1 == self.ws.total_dim())
    }

    fn require_nice(&self) -> Result<(), InvolutionError> {
        if self.is_nice_involution()? {
            Ok(())
        } else {
            Err(InvolutionError::Precondition("not a nice involution".into()))
        }
    }

    pub fn codim_bounds_check(&self) -> Result<CodimReport, InvolutionError> {
        self.require_nice()?;
        let k = self.k();
        let report = CodimReport { codim: self.codim(), lower: 2, upper: k + 1, centralizer_dim: self.centralizer_dim() };
        if report.codim == 1 {
            return Err(InvolutionError::violation(Lemma::CodimensionNotOne, "codim V^omega = 1"));
        }
        if report.codim < report.lower || report.codim > report.upper || report.centralizer_dim + 1 > k {
            return Err(InvolutionError::violation(
                Lemma::CodimensionBounds,
                format!("codim {} with centralizer dimension {} for k = {k}", report.codim, report.centralizer_dim),
            ));
        }
        Ok(report)
    }

    /// Coordinate indices of one isotypical component.
    fn block(&self, class: usize) -> Vec<usize> {
        let c = &self.ws.components()[class];
        (c.coordinate_offset..c.coordinate_offset + c.real_dim).collect()
    }

    /// `V = V₊ ⊕ V₋ ⊕ V̄` for `k = 2` and codimension 2, where `V±` collects
    /// the components whose weight annihilates the `±1` eigenline of `A`.
    pub fn split_by_involution(&self) -> Result<InvolutionSplit, InvolutionError> {
        self.require_nice()?;
        if self.k() != 2 {
            return Err(InvolutionError::Precondition(format!("split needs k = 2, got {}", self.k())));
        }
        if self.codim() != 2 {
            return Err(InvolutionError::Precondition(format!("split needs codim 2, got {}", self.codim())));
        }
        let plus = eigenline(&self.adjoint, 1).ok_or_else(|| InvolutionError::Precondition("A = -I has no +1 eigenline".into()))?;
        let minus = eigenline(&self.adjoint, -1).ok_or_else(|| InvolutionError::Precondition("A = I has no -1 eigenline".into()))?;

        let mut split = InvolutionSplit {
            v_plus_indices: Vec::new(),
            v_minus_indices: Vec::new(),
            v_bar_indices: Vec::new(),
            dim_v_plus: 0,
            dim_v_minus: 0,
            dim_v_bar: 0,
        };
        for (i, c) in self.ws.components().iter().enumerate() {
            let pairing = |u: &[i64; 2]| c.weight[0] as i128 * u[0] as i128 + c.weight[1] as i128 * u[1] as i128;
            if pairing(&plus) == 0 {
                split.v_plus_indices.push(i);
                split.dim_v_plus += c.real_dim;
            } else if pairing(&minus) == 0 {
                split.v_minus_indices.push(i);
                split.dim_v_minus += c.real_dim;
            } else {
                split.v_bar_indices.push(i);
                split.dim_v_bar += c.real_dim;
            }
        }
        self.check_split(&split)?;
        Ok(split)
    }

    fn check_split(&self, split: &InvolutionSplit) -> Result<(), InvolutionError> {
        let fail = |detail: String| Err(InvolutionError::violation(Lemma::CodimensionTwoSplit, detail));
        if !split.v_plus_indices.is_empty() {
            return fail(format!("V+ contains components {:?}", split.v_plus_indices));
        }
        let comps = self.ws.components();
        if split.v_bar_indices.len() != 2 || split.v_bar_indices.iter().any(|&i| comps[i].real_dim != 2) {
            return fail(format!("V-bar components {:?} are not two planes", split.v_bar_indices));
        }
        let (b1, b2) = (self.block(split.v_bar_indices[0]), self.block(split.v_bar_indices[1]));
        let stays = self.omega.submatrix(&b1, &b1);
        let moves = self.omega.submatrix(&b2, &b1);
        if !stays.is_zero() || moves.rank() != 2 {
            return fail("omega does not interchange the two planes of V-bar".into());
        }
        let (t1, t2) = (&comps[split.v_bar_indices[0]].weight, &comps[split.v_bar_indices[1]].weight);
        if transpose_apply(&self.adjoint, t1).map(|t| sign_canonical(&t)).as_ref() != Some(t2) {
            return fail("A does not exchange the weights of V-bar".into());
        }
        let minus: Vec<usize> = split.v_minus_indices.iter().flat_map(|&i| self.block(i)).collect();
        if self.omega.submatrix(&minus, &minus) != RationalMatrix::identity(minus.len()) {
            return fail("omega is not the identity on V-".into());
        }
        let lines = split::induced_lines(&self.ws).len();
        if lines != 3 {
            return fail(format!("{lines} induced lines instead of 3"));
        }
        Ok(())
    }

    /// For `dim Z_G(ω) = 0`: `ω` is not the identity on any isotypical block.
    pub fn nontriviality_check(&self) -> Result<bool, InvolutionError> {
        self.require_nice()?;
        if self.centralizer_dim() != 0 {
            return Err(InvolutionError::Precondition("needs dim Z_G(omega) = 0".into()));
        }
        let n = self.ws.total_dim();
        let diff = self.omega.sub(&RationalMatrix::identity(n)).expect("square");
        Ok((0..self.ws.num_classes()).all(|i| {
            let b = self.block(i);
            !diff.submatrix(&b, &b).is_zero()
        }))
    }

    /// Runs the whole chain for `k ∈ {1, 2}` on a candidate minimal reduction
    /// and returns the forced cohomogeneity.
    pub fn conclude_cohomogeneity(&self) -> Result<Verdict, InvolutionError> {
        let k = self.k();
        if k != 1 && k != 2 {
            return Err(InvolutionError::Precondition(format!("k = {k} is outside {{1, 2}}")));
        }
        let cand = strata::minimal_reduction_candidate(&self.ws)?;
        if !cand.candidate {
            return Err(InvolutionError::Precondition(format!("not a minimal reduction candidate: {:?}", cand.failures)));
        }
        let report = self.codim_bounds_check()?;
        let n = self.ws.total_dim();
        if !n.is_multiple_of(2) || n < 2 * k + 2 {
            return Err(InvolutionError::violation(Lemma::EvenDimension, format!("dim V = {n}, k = {k}")));
        }
        if report.codim == k + 1 {
            if !self.nontriviality_check()? {
                return Err(InvolutionError::violation(Lemma::Nontriviality, "omega fixes a whole block"));
            }
            // count irreducible planes; for k ≥ 2 they are also distinct classes
            let planes = self.ws.multiplicity_of(&(0..self.ws.num_classes()).collect::<Vec<_>>());
            let distinct_ok = k < 2 || (self.ws.num_classes() == k + 1);
            if planes != k + 1 || n != 2 * k + 2 || !distinct_ok {
                return Err(InvolutionError::violation(
                    Lemma::FullCodimension,
                    format!("{planes} planes in {} classes, dim V = {n}", self.ws.num_classes()),
                ));
            }
            return Ok(Verdict::Chm { chm: k + 2 });
        }
        if k == 2 && report.codim == 2 {
            let split = self.split_by_involution()?;
            if split.dim_v_minus == 2 {
                if n != 6 {
                    return Err(InvolutionError::violation(Lemma::CodimensionTwoSplit, format!("dim V- = 2 but dim V = {n}")));
                }
                return Ok(Verdict::Chm4);
            }
            return Ok(Verdict::Exceptional { dim_v_minus: split.dim_v_minus });
        }
        Err(InvolutionError::violation(Lemma::CodimensionBounds, format!("codim {} for k = {k}", report.codim)))
    }
}

/// `dim ker(A − I)`.
pub fn adjoint_fixed_dim(adjoint: &IntMatrix) -> usize {
    let k = adjoint.rows();
    let mut d = adjoint.clone();
    for i in 0..k {
        d[(i, i)] -= BigInt::one();
    }
    k - lattice::rank(&d)
}

/// Primitive integer vector spanning `ker(A − λI)` when it is a line (`k = 2`).
fn eigenline(a: &IntMatrix, lambda: i64) -> Option<[i64; 2]> {
    if a.rows() != 2 {
        return None;
    }
    let entry = |i: usize, j: usize| -> Option<i64> {
        let v: i64 = (&a[(i, j)]).try_into().ok()?;
        let v = if i == j { v.checked_sub(lambda)? } else { v };
        (v.unsigned_abs() <= MAX_ENTRY as u64).then_some(v)
    };
    let rows = [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]];
    let det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
    if det != 0 {
        return None;
    }
    let r = if rows[0] != [0, 0] { rows[0] } else { rows[1] };
    if r == [0, 0] {
        return None;
    }
    Some([-r[1], r[0]])
}

/// `Aᵀθ`: how `ω` moves a weight. `None` when the image leaves the range
/// of admissible weight entries.
pub fn transpose_apply(a: &IntMatrix, theta: &[i64]) -> Option<Vec<i64>> {
    (0..a.cols())
        .map(|j| {
            let v: BigInt = (0..a.rows()).map(|i| &a[(i, j)] * BigInt::from(theta[i])).sum();
            let v: i64 = v.try_into().ok()?;
            (v.unsigned_abs() <= MAX_ENTRY as u64).then_some(v)
        })
        .collect()
}

// ---- constructors -------------------------------------------------------

fn conj() -> [[i64; 2]; 2] {
    [[1, 0], [0, -1]]
}

fn put_plane(omega: &mut RationalMatrix, dst: usize, src: usize, p: [[i64; 2]; 2]) {
    for (r, c, v) in plane_entries(dst, src, p) {
        omega[(r, c)] = rat(v);
    }
}

/// `A = −I` and `ω` = complex conjugation on every plane, identity on `V₀`.
pub fn full_conjugation(ws: &WeightSystem) -> InvolutiveExtension {
    let k = ws.k();
    let n = ws.total_dim();
    let mut adjoint = IntMatrix::zeros(k, k);
    for i in 0..k {
        adjoint[(i, i)] = BigInt::from(-1);
    }
    let mut omega = RationalMatrix::identity(n);
    for start in (ws.fixed_dim()..n).step_by(2) {
        put_plane(&mut omega, start, start, conj());
    }
    InvolutiveExtension::new(ws.clone(), adjoint, omega)
}

/// `ω` exchanges components `i` and `j` plane by plane and is the identity
/// elsewhere. Validity depends on `A`; check with [`InvolutiveExtension::validate`].
pub fn swap_blocks(ws: &WeightSystem, adjoint: IntMatrix, i: usize, j: usize) -> Option<InvolutiveExtension> {
    let comps = ws.components();
    let (ci, cj) = (comps.get(i)?, comps.get(j)?);
    if i == j || ci.multiplicity != cj.multiplicity {
        return None;
    }
    let n = ws.total_dim();
    let mut omega = RationalMatrix::identity(n);
    for d in 0..ci.real_dim {
        let (a, b) = (ci.coordinate_offset + d, cj.coordinate_offset + d);
        omega[(a, a)] = BigRational::zero();
        omega[(b, b)] = BigRational::zero();
        omega[(a, b)] = BigRational::one();
        omega[(b, a)] = BigRational::one();
    }
    Some(InvolutiveExtension::new(ws.clone(), adjoint, omega))
}

/// Integer `k×k` matrices with entries in `[-bound, bound]` and `A² = I`.
pub fn order_two_matrices(k: usize, bound: i64) -> Vec<IntMatrix> {
    let entries = k * k;
    let width = (2 * bound + 1) as usize;
    let total = width.checked_pow(entries as u32).expect("small search space");
    let id = IntMatrix::identity(k);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut rows = vec![vec![0i64; k]; k];
        for e in 0..entries {
            rows[e / k][e % k] = (c % width) as i64 - bound;
            c /= width;
        }
        let a = IntMatrix::from_i64_rows(&rows);
        if a.mul(&a).expect("square") == id {
            out.push(a);
        }
    }
    out
}

/// How `A` permutes the components: `Aᵀθ_i = sign·θ_{image}`. `None` if
/// some weight is not mapped onto a weight of equal multiplicity.
pub fn component_permutation(ws: &WeightSystem, adjoint: &IntMatrix) -> Option<Vec<(usize, i64)>> {
    let weights = ws.weights();
    weights
        .iter()
        .map(|w| {
            let t = transpose_apply(adjoint, &w.vector)?;
            let canon = sign_canonical(&t);
            let j = weights.iter().position(|u| u.vector == canon)?;
            (weights[j].multiplicity == w.multiplicity).then_some((j, if canon == t { 1 } else { -1 }))
        })
        .collect()
}

/// Involutions on `0..n`, as image arrays.
fn involutions(n: usize) -> Vec<Vec<usize>> {
    fn go(perm: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        let Some(i) = perm.iter().position(Option::is_none) else {
            out.push(perm.iter().map(|x| x.expect("filled")).collect());
            return;
        };
        perm[i] = Some(i);
        go(perm, out);
        for j in i + 1..perm.len() {
            if perm[j].is_none() {
                perm[i] = Some(j);
                perm[j] = Some(i);
                go(perm, out);
                perm[j] = None;
            }
        }
        perm[i] = None;
    }
    let mut out = Vec::new();
    go(&mut vec![None; n], &mut out);
    out
}

/// Scalar entries `(row, col, value)` of `ω` on one factor.
type LocalEntries = Vec<(usize, usize, i64)>;

fn plane_entries(dst: usize, src: usize, p: [[i64; 2]; 2]) -> impl Iterator<Item = (usize, usize, i64)> {
    (0..4).map(move |e| (dst + e / 2, src + e % 2, p[e / 2][e % 2]))
}

/// The part of `V` one family factor acts on: an `A`-orbit of components
/// (one component or a swapped pair) or a single coordinate of `V₀`.
#[derive(Debug, Clone)]
struct Factor {
    classes: Vec<usize>,
    flat: Vec<usize>,
    choices: Vec<LocalEntries>,
}

/// The signed-permutation involutions compatible with a fixed `A`: on a
/// component `A` maps to itself, an involution of its planes with a sign on
/// each fixed plane, composed with conjugation where `A` reverses the
/// weight; on a swapped pair, the plane-by-plane exchange; on `V₀`, a sign
/// per coordinate. Every `ω` in the family is a direct sum of one choice
/// per factor.
#[derive(Debug, Clone)]
pub struct OmegaFamily {
    ws: WeightSystem,
    adjoint: IntMatrix,
    factors: Vec<Factor>,
}

impl OmegaFamily {
    /// `None` when `A` does not permute the components.
    pub fn new(ws: &WeightSystem, adjoint: &IntMatrix) -> Option<Self> {
        let perm = component_permutation(ws, adjoint)?;
        let comps = ws.components();
        let mut factors = Vec::new();
        for d in 0..ws.fixed_dim() {
            factors.push(Factor { classes: Vec::new(), flat: vec![d], choices: vec![vec![(d, d, 1)], vec![(d, d, -1)]] });
        }
        for (i, &(j, sign)) in perm.iter().enumerate() {
            let p = if sign > 0 { [[1, 0], [0, 1]] } else { conj() };
            let c = &comps[i];
            let plane = |q: usize| c.coordinate_offset + 2 * q;
            if j == i {
                let mut choices = Vec::new();
                for sigma in involutions(c.multiplicity) {
                    let fixed: Vec<usize> = (0..c.multiplicity).filter(|&q| sigma[q] == q).collect();
                    for signs in 0u32..(1 << fixed.len()) {
                        let mut entries = Vec::new();
                        for (q, &s) in sigma.iter().enumerate() {
                            let m = match fixed.iter().position(|&f| f == q) {
                                Some(pos) if signs & (1 << pos) != 0 => p.map(|r| r.map(|x| -x)),
                                _ => p,
                            };
                            entries.extend(plane_entries(plane(s), plane(q), m));
                        }
                        choices.push(entries);
                    }
                }
                factors.push(Factor { classes: vec![i], flat: Vec::new(), choices });
            } else if i < j {
                let d = &comps[j];
                let mut entries = Vec::new();
                for q in 0..c.multiplicity {
                    let (a, b) = (plane(q), d.coordinate_offset + 2 * q);
                    entries.extend(plane_entries(b, a, p));
                    entries.extend(plane_entries(a, b, p));
                }
                factors.push(Factor { classes: vec![i, j], flat: Vec::new(), choices: vec![entries] });
            }
        }
        Some(OmegaFamily { ws: ws.clone(), adjoint: adjoint.clone(), factors })
    }

    pub fn weight_system(&self) -> &WeightSystem {
        &self.ws
    }

    pub fn adjoint(&self) -> &IntMatrix {
        &self.adjoint
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn num_choices(&self, factor: usize) -> usize {
        self.factors[factor].choices.len()
    }

    /// Number of involutions in the family.
    pub fn len(&self) -> u64 {
        self.factors.iter().map(|f| f.choices.len() as u64).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The extension whose `ω` uses choice `pick[f]` on factor `f`.
    pub fn assemble(&self, pick: &[usize]) -> InvolutiveExtension {
        let n = self.ws.total_dim();
        let mut omega = RationalMatrix::zeros(n, n);
        for (f, &c) in self.factors.iter().zip(pick) {
            for &(r, col, v) in &f.choices[c] {
                omega[(r, col)] = rat(v);
            }
        }
        InvolutiveExtension::new(self.ws.clone(), self.adjoint.clone(), omega)
    }

    /// Choice `c` of factor `f` as an extension of the subrepresentation the
    /// factor acts on, with the same `A`.
    pub fn local(&self, f: usize, c: usize) -> InvolutiveExtension {
        let factor = &self.factors[f];
        let comps = self.ws.components();
        let raw: Vec<(Vec<i64>, usize)> = factor.classes.iter().map(|&i| (comps[i].weight.clone(), comps[i].multiplicity)).collect();
        let sub = WeightSystem::canonicalize(self.ws.k(), factor.flat.len(), &raw).expect("subsystem of a valid system");
        let mut local_index = vec![usize::MAX; self.ws.total_dim()];
        let mut next = 0;
        for &d in &factor.flat {
            local_index[d] = next;
            next += 1;
        }
        for &i in &factor.classes {
            let start = comps[i].coordinate_offset;
            for slot in &mut local_index[start..start + comps[i].real_dim] {
                *slot = next;
                next += 1;
            }
        }
        let mut omega = RationalMatrix::zeros(next, next);
        for &(r, col, v) in &factor.choices[c] {
            omega[(local_index[r], local_index[col])] = rat(v);
        }
        InvolutiveExtension::new(sub, self.adjoint.clone(), omega)
    }

    /// Every pick, in odometer order with the last factor fastest.
    pub fn picks(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut pick = vec![0usize; self.factors.len()];
        'outer: loop {
            out.push(pick.clone());
            for pos in (0..pick.len()).rev() {
                pick[pos] += 1;
                if pick[pos] < self.factors[pos].choices.len() {
                    continue 'outer;
                }
                pick[pos] = 0;
            }
            break;
        }
        out
    }
}

/// Every extension of [`OmegaFamily`] for `A`, assembled. Returned
/// extensions are not yet validated.
pub fn signed_permutation_involutions(ws: &WeightSystem, adjoint: &IntMatrix) -> Vec<InvolutiveExtension> {
    match OmegaFamily::new(ws, adjoint) {
        Some(fam) => fam.picks().iter().map(|p| fam.assemble(p)).collect(),
        None => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(k: usize, v: &[(&[i64], usize)]) -> WeightSystem {
        let raw: Vec<_> = v.iter().map(|(w, m)| (w.to_vec(), *m)).collect();
        WeightSystem::canonicalize(k, 0, &raw).unwrap()
    }

    fn swap_ext(minus_mult: usize) -> InvolutiveExtension {
        // sorted classes: (0,1), (1,0), (1,1)
        let w = ws(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], minus_mult)]);
        swap_blocks(&w, IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]), 0, 1).unwrap()
    }

    #[test]
    fn validate_examples() {
        let one_two = ws(1, &[(&[1], 1), (&[2], 1)]);
        let conj = full_conjugation(&one_two);
        assert_eq!(conj.validate(), Ok(()));
        let trivial = InvolutiveExtension::new(one_two.clone(), IntMatrix::identity(1), RationalMatrix::identity(4));
        assert_eq!(trivial.validate(), Ok(()));
        let mut bad = swap_ext(1);
        bad.omega = RationalMatrix::identity(4);
        assert_eq!(bad.validate(), Err(ExtensionViolation::OmegaShape { rows: 4, cols: 4, dim: 6 }));
        assert_eq!(swap_ext(1).validate(), Ok(()));
    }

    #[test]
    fn validate_catches_each_identity() {
        let w = ws(1, &[(&[1], 1)]);
        let mut e = full_conjugation(&w);
        e.adjoint = IntMatrix::from_i64_rows(&[vec![2]]);
        assert_eq!(e.validate(), Err(ExtensionViolation::AdjointNotInvolution));

        let mut e = full_conjugation(&w);
        e.omega[(0, 0)] = rat(2);
        assert_eq!(e.validate(), Err(ExtensionViolation::NotOrthogonal));

        // a rotation by π/2 is orthogonal but not an involution
        let mut e = full_conjugation(&w);
        e.omega = RationalMatrix::from_rows(2, vec![vec![rat(0), rat(-1)], vec![rat(1), rat(0)]]).unwrap();
        assert_eq!(e.validate(), Err(ExtensionViolation::NotInvolution));

        // identity on a plane while A inverts the torus forces t² = 1 there
        let mut e = full_conjugation(&w);
        e.omega = RationalMatrix::identity(2);
        assert_eq!(e.validate(), Err(ExtensionViolation::Incompatible { generator: 0 }));
    }

    #[test]
    fn fixed_dims_and_niceness() {
        let c1 = full_conjugation(&ws(1, &[(&[1], 1), (&[2], 1)]));
        assert_eq!(c1.fixed_space_dim(), 2);
        assert_eq!(c1.is_nice_involution(), Ok(true));
        let c2 = full_conjugation(&ws(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]));
        assert_eq!(c2.fixed_space_dim(), 3);
        assert_eq!(c2.is_nice_involution(), Ok(true));
        let s = swap_ext(1);
        assert_eq!((s.fixed_space_dim(), s.centralizer_dim()), (4, 1));
        assert_eq!(s.is_nice_involution(), Ok(true));
        let id = InvolutiveExtension::new(c1.ws.clone(), IntMatrix::identity(1), RationalMatrix::identity(4));
        assert_eq!(id.fixed_space_dim(), 4);
        assert!(matches!(id.is_nice_involution(), Err(InvolutionError::Precondition(_))));
    }

    #[test]
    fn codim_bounds() {
        let c1 = full_conjugation(&ws(1, &[(&[1], 1), (&[2], 1)]));
        assert_eq!(c1.codim_bounds_check().unwrap(), CodimReport { codim: 2, lower: 2, upper: 2, centralizer_dim: 0 });
        let c2 = full_conjugation(&ws(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]));
        assert_eq!(c2.codim_bounds_check().unwrap().codim, 3);
        assert_eq!(swap_ext(1).codim_bounds_check().unwrap().codim, 2);
    }

    #[test]
    fn splits() {
        let s = swap_ext(1).split_by_involution().unwrap();
        assert!(s.v_plus_indices.is_empty());
        assert_eq!(s.v_minus_indices, vec![2]);
        assert_eq!(s.v_bar_indices, vec![0, 1]);
        assert_eq!(s.dim_v_minus, 2);
        let s2 = swap_ext(2).split_by_involution().unwrap();
        assert_eq!((s2.v_minus_indices.clone(), s2.dim_v_minus), (vec![2], 4));
        let c2 = full_conjugation(&ws(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]));
        assert!(matches!(c2.split_by_involution(), Err(InvolutionError::Precondition(_))));
    }

    #[test]
    fn nontriviality() {
        assert_eq!(full_conjugation(&ws(1, &[(&[1], 1), (&[2], 1)])).nontriviality_check(), Ok(true));
        assert_eq!(full_conjugation(&ws(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)])).nontriviality_check(), Ok(true));
    }

    #[test]
    fn verdicts() {
        assert_eq!(full_conjugation(&ws(1, &[(&[1], 1), (&[2], 1)])).conclude_cohomogeneity(), Ok(Verdict::Chm { chm: 3 }));
        assert_eq!(
            full_conjugation(&ws(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)])).conclude_cohomogeneity(),
            Ok(Verdict::Chm { chm: 4 })
        );
        assert_eq!(swap_ext(1).conclude_cohomogeneity(), Ok(Verdict::Chm4));
        let v = swap_ext(2).conclude_cohomogeneity().unwrap();
        assert_eq!(v, Verdict::Exceptional { dim_v_minus: 4 });
        assert_eq!(v.chm(), 6);
        // a polar rotation is no candidate
        let polar = full_conjugation(&ws(1, &[(&[1], 1)]));
        assert!(matches!(polar.conclude_cohomogeneity(), Err(InvolutionError::Precondition(_))));
    }

    #[test]
    fn hopf_conjugation_has_two_planes_in_one_class() {
        let e = full_conjugation(&ws(1, &[(&[1], 2)]));
        assert_eq!(e.conclude_cohomogeneity(), Ok(Verdict::Chm { chm: 3 }));
    }

    #[test]
    fn order_two_enumeration() {
        assert_eq!(order_two_matrices(1, 2).len(), 2);
        let twos = order_two_matrices(2, 1);
        assert!(twos.contains(&IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]])));
        assert!(twos.iter().all(|a| a.mul(a).unwrap() == IntMatrix::identity(2)));
    }

    #[test]
    fn enumerated_involutions_are_valid() {
        let w = ws(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 2)]);
        let swap = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        let all = signed_permutation_involutions(&w, &swap);
        // (1,1) block: 5 local choices; the swapped pair: 1
        assert_eq!(all.len(), 5);
        for e in &all {
            assert_eq!(e.validate(), Ok(()));
        }
        let minus_id = IntMatrix::from_i64_rows(&[vec![-1, 0], vec![0, -1]]);
        let conjs = signed_permutation_involutions(&w, &minus_id);
        assert_eq!(conjs.len(), 2 * 2 * 5);
        assert!(conjs.iter().all(|e| e.validate().is_ok()));
        // A = diag(1, -1) sends (1,1) to (1,-1), which is not a weight
        let refl = IntMatrix::from_i64_rows(&[vec![1, 0], vec![0, -1]]);
        assert!(signed_permutation_involutions(&w, &refl).is_empty());
    }
}
