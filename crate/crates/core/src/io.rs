//! JSON inputs: weight systems and involutive extensions.
//!
//! Weight system:
//! `{"k": 2, "fixed_dim": 0, "weights": [[1,0],[0,1]], "multiplicities": [1,1]}`
//!
//! Extension:
//! `{"weight_system": {...}, "A": [[0,1],[1,0]], "omega": [["1","0",...],...]}`
//! where omega entries are `"p/q"` strings (plain JSON integers are accepted
//! too). Omega acts in block coordinates, so the embedded weight system has
//! to list its weights already in canonical order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Deserialize;
use thiserror::Error;

use crate::involution::InvolutiveExtension;
use crate::lattice::{IntMatrix, RationalMatrix};
use crate::weights::{WeightError, WeightSystem};

/// Largest torus rank accepted from input.
pub const MAX_K: usize = 64;
/// Largest number of weight entries accepted from input.
pub const MAX_WEIGHTS: usize = 4096;
/// Largest `dim V` for an extension, which carries a dense `dim V × dim V`
/// omega.
pub const MAX_EXTENSION_DIM: usize = 256;
/// Longest accepted rational literal.
pub const MAX_RATIONAL_LEN: usize = 128;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error("{what}: {detail}")]
    Shape { what: &'static str, detail: String },
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("invalid integer list {0:?}")]
    IntList(String),
    #[error("weights must be listed sign-canonical, sorted and without repeats when omega is given (class {index})")]
    NonCanonical { index: usize },
    #[error("{what} = {got} exceeds the input limit {limit}")]
    TooLarge { what: &'static str, got: usize, limit: usize },
}

fn shape(what: &'static str, detail: impl Into<String>) -> InputError {
    InputError::Shape { what, detail: detail.into() }
}

fn limit(what: &'static str, got: usize, limit: usize) -> Result<(), InputError> {
    if got > limit {
        Err(InputError::TooLarge { what, got, limit })
    } else {
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeightSystem {
    k: usize,
    fixed_dim: usize,
    weights: Vec<Vec<i64>>,
    multiplicities: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    weight_system: RawWeightSystem,
    #[serde(rename = "A")]
    adjoint: Vec<Vec<i64>>,
    omega: Vec<Vec<RawRational>>,
}

fn build_weight_system(raw: &RawWeightSystem) -> Result<WeightSystem, InputError> {
    if raw.k == 0 {
        return Err(WeightError::ZeroRank.into());
    }
    limit("k", raw.k, MAX_K)?;
    limit("number of weights", raw.weights.len(), MAX_WEIGHTS)?;
    if raw.weights.len() != raw.multiplicities.len() {
        return Err(shape(
            "weights/multiplicities",
            format!("{} weights but {} multiplicities", raw.weights.len(), raw.multiplicities.len()),
        ));
    }
    let pairs: Vec<(Vec<i64>, usize)> = raw.weights.iter().cloned().zip(raw.multiplicities.iter().copied()).collect();
    Ok(WeightSystem::canonicalize(raw.k, raw.fixed_dim, &pairs)?)
}

pub fn parse_weight_system(text: &str) -> Result<WeightSystem, InputError> {
    let raw: RawWeightSystem = serde_json::from_str(text)?;
    build_weight_system(&raw)
}

/// `"p/q"`, `"p"` or `"-p/q"` with `q ≠ 0`, reduced to lowest terms.
pub fn parse_rational(text: &str) -> Result<BigRational, InputError> {
    let bad = || InputError::Rational(text.to_string());
    if text.len() > MAX_RATIONAL_LEN {
        return Err(bad());
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let digits = |s: &str, signed: bool| {
        let body = if signed { s.strip_prefix('-').unwrap_or(s) } else { s };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num, true) || !digits(den, false) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Comma-separated integers, as in `--weights 1,2,3`.
pub fn parse_weight_list(text: &str) -> Result<Vec<i64>, InputError> {
    let out: Result<Vec<i64>, _> = text.split(',').map(|s| s.trim().parse::<i64>()).collect();
    match out {
        Ok(v) if !v.is_empty() && v.len() <= MAX_WEIGHTS => Ok(v),
        _ => Err(InputError::IntList(text.to_string())),
    }
}

pub fn parse_extension(text: &str) -> Result<InvolutiveExtension, InputError> {
    let raw: RawExtension = serde_json::from_str(text)?;
    let ws = build_weight_system(&raw.weight_system)?;

    // omega's block coordinates follow the listed order, so it must already
    // be the canonical one
    if ws.num_classes() != raw.weight_system.weights.len() {
        return Err(InputError::NonCanonical { index: ws.num_classes() });
    }
    for (i, (w, listed)) in ws.weights().iter().zip(&raw.weight_system.weights).enumerate() {
        if &w.vector != listed {
            return Err(InputError::NonCanonical { index: i });
        }
    }

    let k = ws.k();
    if raw.adjoint.len() != k || raw.adjoint.iter().any(|r| r.len() != k) {
        return Err(shape("A", format!("expected a {k}×{k} matrix")));
    }
    let adjoint = IntMatrix::from_i64_rows(&raw.adjoint);

    let n = ws.total_dim();
    limit("dim V", n, MAX_EXTENSION_DIM)?;
    if raw.omega.len() != n || raw.omega.iter().any(|r| r.len() != n) {
        return Err(shape("omega", format!("expected a {n}×{n} matrix")));
    }
    let mut rows = Vec::with_capacity(n);
    for r in &raw.omega {
        let row: Result<Vec<BigRational>, InputError> = r
            .iter()
            .map(|e| match e {
                RawRational::Int(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
                RawRational::Text(s) => parse_rational(s),
            })
            .collect();
        rows.push(row?);
    }
    let omega = RationalMatrix::from_rows(n, rows).map_err(|e| shape("omega", e.to_string()))?;
    Ok(InvolutiveExtension::new(ws, adjoint, omega))
}

/// Extension JSON for `ext`, with omega entries written as `"p/q"` strings.
pub fn extension_to_json(ext: &InvolutiveExtension) -> serde_json::Value {
    let a: Vec<Vec<i64>> =
        ext.adjoint.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().expect("A entries fit in i64")).collect()).collect();
    let omega: Vec<Vec<String>> = ext.omega.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    serde_json::json!({
        "weight_system": weight_system_to_json(&ext.ws),
        "A": a,
        "omega": omega,
    })
}

pub fn weight_system_to_json(ws: &WeightSystem) -> serde_json::Value {
    let weights: Vec<&Vec<i64>> = ws.weights().iter().map(|w| &w.vector).collect();
    let mults: Vec<usize> = ws.weights().iter().map(|w| w.multiplicity).collect();
    serde_json::json!({"k": ws.k(), "fixed_dim": ws.fixed_dim(), "weights": weights, "multiplicities": mults})
}
