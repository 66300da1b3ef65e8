//! Numerical orbit analysis of `ρ = ρ₁ ⊕ ρ₂` for `H = SO(2)×SO(n)`.
//!
//! `W₁ = R²⊗Rⁿ` is stored as a 2×n matrix `M` (row-major) with
//! `(g, h)·M = g·M·hᵀ`; `W₂` is a sum of planes on which the `SO(2)` factor
//! rotates with integer weights `a₁, …, a_m`. Orbit dimensions are ranks of
//! the infinitesimal action map, read off singular values with a relative
//! cutoff, and every rank decision is repeated at `0.1×` and `10×` the
//! cutoff.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("n must be at least 3, got {0}")]
    NTooSmall(usize),
    #[error("at least one circle weight is required")]
    NoWeights,
    #[error("circle weight {0} is zero")]
    ZeroWeight(usize),
    #[error("sample count must be positive")]
    NoSamples,
    #[error("tolerance must be a positive finite number")]
    BadTolerance,
    #[error("normalizer computation is blind to the finite isotropy part at n = {0}; needs n >= 4")]
    LrsRefused(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySpec {
    pub n: usize,
    pub circle_weights: Vec<i64>,
    pub seed: u64,
    pub samples: usize,
    pub svd_tol: f64,
}

impl FamilySpec {
    pub fn new(n: usize, circle_weights: Vec<i64>) -> Result<Self, FamilyError> {
        Self::with_options(n, circle_weights, DEFAULT_SEED, DEFAULT_SAMPLES, DEFAULT_TOL)
    }

    pub fn with_options(n: usize, circle_weights: Vec<i64>, seed: u64, samples: usize, svd_tol: f64) -> Result<Self, FamilyError> {
        if n < 3 {
            return Err(FamilyError::NTooSmall(n));
        }
        if circle_weights.is_empty() {
            return Err(FamilyError::NoWeights);
        }
        if let Some(i) = circle_weights.iter().position(|&a| a == 0) {
            return Err(FamilyError::ZeroWeight(i));
        }
        if samples == 0 {
            return Err(FamilyError::NoSamples);
        }
        if !(svd_tol.is_finite() && svd_tol > 0.0) {
            return Err(FamilyError::BadTolerance);
        }
        Ok(FamilySpec { n, circle_weights, seed, samples, svd_tol })
    }

    pub fn m(&self) -> usize {
        self.circle_weights.len()
    }

    pub fn dim_w(&self) -> usize {
        2 * self.n + 2 * self.m()
    }

    pub fn dim_h(&self) -> usize {
        1 + self.n * (self.n - 1) / 2
    }

    /// `(a, b)` with `a < b` for every `so(n)` basis element, in order.
    fn so_n_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| (a + 1..self.n).map(move |b| (a, b))).collect()
    }
}

/// Columns are the basis of `so(2) ⊕ so(n)` applied to `point`: first the
/// `so(2)` generator, then `E_ab = e_a e_bᵀ − e_b e_aᵀ` for `a < b`.
pub fn action_matrix(spec: &FamilySpec, point: &DVector<f64>) -> DMatrix<f64> {
    let n = spec.n;
    let mut out = DMatrix::zeros(spec.dim_w(), spec.dim_h());
    let m = |r: usize, c: usize| point[r * n + c];
    // so(2): J·M on W₁, a_j·J on the j-th plane of W₂
    for c in 0..n {
        out[(c, 0)] = -m(1, c);
        out[(n + c, 0)] = m(0, c);
    }
    for (j, &a) in spec.circle_weights.iter().enumerate() {
        let base = 2 * n + 2 * j;
        let a = a as f64;
        out[(base, 0)] = -a * point[base + 1];
        out[(base + 1, 0)] = a * point[base];
    }
    // so(n): M ↦ M·E_abᵀ, so column a gets M[:, b] and column b gets −M[:, a]
    for (col, (a, b)) in spec.so_n_pairs().into_iter().enumerate() {
        for r in 0..2 {
            out[(r * n + a, col + 1)] = m(r, b);
            out[(r * n + b, col + 1)] = -m(r, a);
        }
    }
    out
}

/// Pads with zero rows so a thin SVD still sees every right singular vector.
fn padded(a: &DMatrix<f64>) -> DMatrix<f64> {
    if a.nrows() >= a.ncols() {
        return a.clone();
    }
    let mut p = DMatrix::zeros(a.ncols(), a.ncols());
    p.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    p
}

/// Singular values paired with right singular vectors.
fn singular_pairs(a: &DMatrix<f64>) -> Vec<(f64, DVector<f64>)> {
    let p = padded(a);
    let svd = p.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    svd.singular_values.iter().enumerate().map(|(i, &s)| (s, vt.row(i).transpose())).collect()
}

fn rank_at(sigmas: &[f64], tol: f64) -> usize {
    let max = sigmas.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sigmas.iter().filter(|&&s| s > tol * max).count()
}

/// A rank decision with its behavior at `0.1×` and `10×` the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankDecision {
    pub rank: usize,
    pub stable: bool,
}

pub fn numerical_rank(a: &DMatrix<f64>, tol: f64) -> RankDecision {
    let sigmas: Vec<f64> = singular_pairs(a).into_iter().map(|(s, _)| s).collect();
    decide(&sigmas, tol)
}

fn decide(sigmas: &[f64], tol: f64) -> RankDecision {
    let rank = rank_at(sigmas, tol);
    let stable = rank_at(sigmas, tol * 0.1) == rank && rank_at(sigmas, tol * 10.0) == rank;
    RankDecision { rank, stable }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitProbe {
    pub point: Vec<f64>,
    pub orbit_dim: usize,
    pub isotropy_algebra_dim: usize,
    pub stable: bool,
}

pub fn probe(spec: &FamilySpec, point: &DVector<f64>) -> OrbitProbe {
    let d = numerical_rank(&action_matrix(spec, point), spec.svd_tol);
    OrbitProbe { point: point.iter().copied().collect(), orbit_dim: d.rank, isotropy_algebra_dim: spec.dim_h() - d.rank, stable: d.stable }
}

/// Sample `i` uses its own ChaCha stream, so results do not depend on how
/// samples are scheduled.
pub fn sample_point(spec: &FamilySpec, i: usize) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(i as u64);
    DVector::from_fn(spec.dim_w(), |_, _| StandardNormal.sample(&mut rng))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Survey {
    pub max_orbit_dim: usize,
    /// Fraction of samples whose orbit dimension equals the maximum.
    pub principal_fraction: f64,
    /// Index of the first sample reaching the maximum.
    pub first_principal: usize,
    pub tol_stable: bool,
    /// Every sample rescaled to the unit sphere keeps its orbit dimension.
    pub sphere_consistent: bool,
}

pub fn survey(spec: &FamilySpec) -> Survey {
    let probes: Vec<OrbitProbe> = (0..spec.samples).map(|i| probe(spec, &sample_point(spec, i))).collect();
    let max = probes.iter().map(|p| p.orbit_dim).max().unwrap_or(0);
    let count = probes.iter().filter(|p| p.orbit_dim == max).count();
    let first = probes.iter().position(|p| p.orbit_dim == max).unwrap_or(0);
    let sphere_consistent = (0..spec.samples).all(|i| {
        let x = sample_point(spec, i);
        let norm = x.norm();
        norm == 0.0 || probe(spec, &(x / norm)).orbit_dim == probes[i].orbit_dim
    });
    Survey {
        max_orbit_dim: max,
        principal_fraction: count as f64 / spec.samples as f64,
        first_principal: first,
        tol_stable: probes.iter().all(|p| p.stable),
        sphere_consistent,
    }
}

/// `dim H` minus the largest sampled orbit dimension.
pub fn principal_isotropy_algebra_dim(spec: &FamilySpec) -> (usize, bool) {
    let s = survey(spec);
    (spec.dim_h() - s.max_orbit_dim, s.tol_stable)
}

/// `dim W` minus the largest sampled orbit dimension.
pub fn cohomogeneity_numeric(spec: &FamilySpec) -> (usize, bool) {
    let s = survey(spec);
    (spec.dim_w() - s.max_orbit_dim, s.tol_stable)
}

/// Skew `n×n` matrix of the `so(n)` part of a coefficient vector.
fn so_n_part(spec: &FamilySpec, coeffs: &DVector<f64>) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(spec.n, spec.n);
    for (i, (a, b)) in spec.so_n_pairs().into_iter().enumerate() {
        y[(a, b)] = coeffs[i + 1];
        y[(b, a)] = -coeffs[i + 1];
    }
    y
}

/// `[x, y]` in basis coordinates; the `so(2)` factor is central.
fn bracket(spec: &FamilySpec, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let (a, b) = (so_n_part(spec, x), so_n_part(spec, y));
    let c = &a * &b - &b * &a;
    let mut out = DVector::zeros(spec.dim_h());
    for (i, (p, q)) in spec.so_n_pairs().into_iter().enumerate() {
        out[i + 1] = c[(p, q)];
    }
    out
}

/// `dim N_𝔥(𝔨) − dim 𝔨` for the isotropy algebra `𝔨` of a principal sample:
/// the dimension of the connected group acting on the fixed space of the
/// principal isotropy.
pub fn lrs_quotient_dim(spec: &FamilySpec) -> Result<(usize, bool), FamilyError> {
    if spec.n < 4 {
        return Err(FamilyError::LrsRefused(spec.n));
    }
    let s = survey(spec);
    let point = sample_point(spec, s.first_principal);
    let dh = spec.dim_h();
    let pairs = singular_pairs(&action_matrix(spec, &point));
    let sigmas: Vec<f64> = pairs.iter().map(|(s, _)| *s).collect();
    let max = sigmas.iter().cloned().fold(0.0, f64::max);
    let kernel: Vec<DVector<f64>> = pairs.into_iter().filter(|(s, _)| *s <= spec.svd_tol * max).map(|(_, v)| v).collect();
    let dk = kernel.len();

    // x normalizes 𝔨 iff the component of [k_i, x] orthogonal to 𝔨 vanishes
    let q = DMatrix::from_columns(&kernel);
    let proj = DMatrix::<f64>::identity(dh, dh) - &q * q.transpose();
    let mut stack = DMatrix::zeros(dk * dh, dh);
    for (i, k) in kernel.iter().enumerate() {
        for b in 0..dh {
            let e = DVector::from_fn(dh, |r, _| if r == b { 1.0 } else { 0.0 });
            let col = &proj * bracket(spec, k, &e);
            stack.view_mut((i * dh, b), (dh, 1)).copy_from(&col);
        }
    }
    let d = if dk == 0 { RankDecision { rank: 0, stable: true } } else { numerical_rank(&stack, spec.svd_tol) };
    let normalizer = dh - d.rank;
    Ok((normalizer - dk, d.stable && s.tol_stable))
}

/// A circle representation without fixed vectors is polar iff it is a single
/// rotation plane.
pub fn circle_rep_is_polar(weights: &[i64]) -> Result<bool, FamilyError> {
    if let Some(i) = weights.iter().position(|&a| a == 0) {
        return Err(FamilyError::ZeroWeight(i));
    }
    Ok(weights.len() <= 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub n: usize,
    pub weights: Vec<i64>,
    pub chm: usize,
    pub isotropy_dim: usize,
    pub lrs_dim: Option<usize>,
    pub tol_stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyCheck {
    pub name: &'static str,
    pub expected: usize,
    pub observed: Option<usize>,
    pub pass: bool,
}

pub fn family_report(spec: &FamilySpec) -> FamilyReport {
    let s = survey(spec);
    let lrs = lrs_quotient_dim(spec).ok();
    FamilyReport {
        n: spec.n,
        weights: spec.circle_weights.clone(),
        chm: spec.dim_w() - s.max_orbit_dim,
        isotropy_dim: spec.dim_h() - s.max_orbit_dim,
        lrs_dim: lrs.map(|(d, _)| d),
        tol_stable: s.tol_stable && lrs.is_none_or(|(_, st)| st),
    }
}

/// Closed-form expectations: `chm = 2 + 2m`, principal isotropy algebra
/// `so(n−2)`, and a 2-dimensional reduction for `n ≥ 4`.
pub fn family_checks(spec: &FamilySpec, report: &FamilyReport) -> Vec<FamilyCheck> {
    let n = spec.n;
    let mut checks = vec![
        FamilyCheck { name: "chm", expected: 2 + 2 * spec.m(), observed: Some(report.chm), pass: report.chm == 2 + 2 * spec.m() },
        FamilyCheck {
            name: "isotropy_dim",
            expected: (n - 2) * (n - 3) / 2,
            observed: Some(report.isotropy_dim),
            pass: report.isotropy_dim == (n - 2) * (n - 3) / 2,
        },
    ];
    if n >= 4 {
        checks.push(FamilyCheck { name: "lrs_dim", expected: 2, observed: report.lrs_dim, pass: report.lrs_dim == Some(2) });
    }
    checks
}
