//! Command-line front end. Reports go to stdout as JSON, a short summary to
//! stderr. Exit status: 0 when every check passes, 1 for a counterexample or
//! a violated statement, 2 for unusable input.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::involution::{ExtensionViolation, InvolutionError, InvolutiveExtension};
use crate::io::{self, InputError};
use crate::numlab::{self, FamilyError, FamilySpec};
use crate::split::{self, Decomposability};
use crate::strata::{self, StrataError};
use crate::sweep::{self, Ranges, SweepError, Theorem};
use crate::weights::WeightSystem;

#[derive(Debug, Parser)]
#[command(name = "copolarity", version, about = "Weight-lattice analysis of torus representations and their involutive extensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of a weight system given as JSON ("-" reads stdin).
    Analyze {
        path: PathBuf,
        /// Also run the involution chain on this extension.
        #[arg(long = "ext")]
        ext: Option<PathBuf>,
    },
    /// Niceness, codimension bounds, split and forced cohomogeneity of an
    /// involutive extension.
    Involution {
        /// `EXT` or `WS EXT`; a leading weight system must match the one
        /// inside the extension.
        #[arg(value_name = "PATH", num_args = 1..=2, required = true)]
        paths: Vec<PathBuf>,
    },
    /// Exhaustive sweep: cor2.7, lem3.3, lem3.4, thm4.1 or prop3.8.
    Verify {
        theorem: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_entry: i64,
        #[arg(long, default_value_t = 4)]
        max_classes: usize,
        #[arg(long, default_value_t = 2)]
        max_mult: usize,
    },
    /// Numerical orbit data of SO(2)×SO(n) on R²⊗Rⁿ plus circle planes.
    Family {
        #[arg(long)]
        n: usize,
        /// Circle weights, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, default_value_t = numlab::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = numlab::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = numlab::DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("invalid extension: {0}")]
    Extension(#[from] ExtensionViolation),
    #[error("the extension's weight system differs from the one given")]
    WeightSystemMismatch,
    #[error("the family needs at least two circle weights, got {0}")]
    TooFewWeights(usize),
}

impl CliError {
    pub const EXIT_CODE: u8 = 2;
}

/// What a command produced: the JSON report, a summary line and an exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub code: u8,
}

fn read(path: &Path) -> Result<String, CliError> {
    let err = |source| CliError::Read { path: path.display().to_string(), source };
    if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(err)
    } else {
        std::fs::read_to_string(path).map_err(err)
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Analyze { path, ext } => {
            let ext = ext.map(|p| read(&p)).transpose()?;
            cmd_analyze(&read(&path)?, ext.as_deref())
        }
        Command::Involution { paths } => {
            let (ws, ext) = match paths.as_slice() {
                [ext] => (None, read(ext)?),
                [ws, ext] => (Some(read(ws)?), read(ext)?),
                _ => unreachable!("clap bounds the path count"),
            };
            cmd_involution(ws.as_deref(), &ext)
        }
        Command::Verify { theorem, k, max_entry, max_classes, max_mult } => {
            let theorem: Theorem = theorem.parse()?;
            let ks = k.map_or_else(|| theorem.default_ks(), |k| vec![k]);
            cmd_verify(theorem, &Ranges::new(ks, max_entry, max_classes, max_mult)?)
        }
        Command::Family { n, weights, seed, samples, tol } => {
            let weights = io::parse_weight_list(&weights)?;
            cmd_family(&FamilySpec::with_options(n, weights, seed, samples, tol)?)
        }
    }
}

#[derive(Debug, Serialize)]
struct Lines {
    count: usize,
    lines: Vec<Vec<i64>>,
}

#[derive(Debug, Serialize)]
struct Decomposition {
    decomposable: bool,
    reason: Decomposability,
    blocks: split::BlockDecomposition,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    input: Value,
    total_dim: usize,
    faithful: bool,
    discrete_kernel: bool,
    cohomogeneity: usize,
    lines: Lines,
    decomposition: Decomposition,
    boundary_empty: bool,
    trivial_copolarity: bool,
    minimal_reduction_candidate: strata::CandidateReport,
    strata: Vec<strata::StratumRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    involution: Option<Value>,
}

pub fn analyze(ws: &WeightSystem) -> Result<AnalysisReport, CliError> {
    let lines = split::induced_lines(ws);
    let reason = split::is_decomposable(ws);
    let records = strata::enumerate_strata(ws)?;
    let boundary_empty = !records.iter().any(|r| !r.is_principal() && r.quotient_codim == 1);
    Ok(AnalysisReport {
        input: io::weight_system_to_json(ws),
        total_dim: ws.total_dim(),
        faithful: ws.is_faithful(),
        discrete_kernel: ws.has_discrete_kernel(),
        cohomogeneity: ws.cohomogeneity(),
        lines: Lines { count: lines.len(), lines },
        decomposition: Decomposition { decomposable: reason.is_decomposable(), reason, blocks: split::indecomposable_blocks(ws) },
        boundary_empty,
        trivial_copolarity: strata::has_trivial_copolarity(ws)?,
        minimal_reduction_candidate: strata::minimal_reduction_candidate(ws)?,
        strata: records,
        involution: None,
    })
}

pub fn cmd_analyze(ws_text: &str, ext_text: Option<&str>) -> Result<Outcome, CliError> {
    let ws = io::parse_weight_system(ws_text)?;
    let mut report = analyze(&ws)?;
    let mut code = 0;
    let mut summary = format!(
        "dim V = {}, chm = {}, {}, boundary {}",
        report.total_dim,
        report.cohomogeneity,
        if report.decomposition.decomposable { "decomposable" } else { "indecomposable" },
        if report.boundary_empty { "empty" } else { "nonempty" },
    );
    if let Some(text) = ext_text {
        let inv = cmd_involution(Some(ws_text), text)?;
        code = inv.code;
        summary.push_str("; ");
        summary.push_str(&inv.summary);
        report.involution = Some(inv.report);
    }
    Ok(Outcome { report: serde_json::to_value(&report).expect("report serializes"), summary, code })
}

/// Runs the chain step by step and records how far it got.
pub fn involution_report(ext: &InvolutiveExtension) -> Result<Outcome, CliError> {
    ext.validate()?;
    let mut report = json!({
        "input": io::extension_to_json(ext),
        "fixed_space_dim": ext.fixed_space_dim(),
        "centralizer_dim": ext.centralizer_dim(),
        "codim": ext.codim(),
    });
    let stop = |mut report: Value, err: InvolutionError| {
        let code = if err.is_violation() { 1 } else { CliError::EXIT_CODE };
        report["stopped"] = json!(err.to_string());
        if let InvolutionError::Violation { lemma, .. } = &err {
            report["violated"] = json!(lemma);
        }
        Outcome { report, summary: err.to_string(), code }
    };
    match ext.is_nice_involution() {
        Ok(nice) => report["nice"] = json!(nice),
        Err(e) => return Ok(stop(report, e)),
    }
    if report["nice"] == json!(false) {
        return Ok(stop(report, InvolutionError::Precondition("not a nice involution".into())));
    }
    // the remaining checks only claim anything for candidate reductions
    let cand = strata::minimal_reduction_candidate(&ext.ws)?;
    report["minimal_reduction_candidate"] = json!(cand);
    if !cand.candidate {
        return Ok(stop(report, InvolutionError::Precondition(format!("not a minimal reduction candidate: {:?}", cand.failures))));
    }
    match ext.codim_bounds_check() {
        Ok(r) => report["codim_bounds"] = json!(r),
        Err(e) => return Ok(stop(report, e)),
    }
    if ext.centralizer_dim() == 0 {
        match ext.nontriviality_check() {
            Ok(b) => report["nontrivial_on_blocks"] = json!(b),
            Err(e) => return Ok(stop(report, e)),
        }
    }
    if ext.k() == 2 && ext.codim() == 2 {
        match ext.split_by_involution() {
            Ok(s) => report["split"] = json!(s),
            Err(e) => return Ok(stop(report, e)),
        }
    }
    match ext.conclude_cohomogeneity() {
        Ok(v) => {
            report["verdict"] = json!(v);
            report["chm"] = json!(v.chm());
            let summary = format!("nice involution, codim {}, verdict {:?}, chm {}", ext.codim(), v, v.chm());
            if v.chm() != ext.ws.cohomogeneity() {
                let msg = format!("verdict chm {} differs from dim V - rank = {}", v.chm(), ext.ws.cohomogeneity());
                report["stopped"] = json!(msg);
                return Ok(Outcome { report, summary: msg, code: 1 });
            }
            Ok(Outcome { report, summary, code: 0 })
        }
        Err(e) => Ok(stop(report, e)),
    }
}

pub fn cmd_involution(ws_text: Option<&str>, ext_text: &str) -> Result<Outcome, CliError> {
    let ext = io::parse_extension(ext_text)?;
    if let Some(text) = ws_text {
        if io::parse_weight_system(text)? != ext.ws {
            return Err(CliError::WeightSystemMismatch);
        }
    }
    involution_report(&ext)
}

pub fn cmd_verify(theorem: Theorem, ranges: &Ranges) -> Result<Outcome, CliError> {
    let result = sweep::run(theorem, ranges)?;
    let summary = format!(
        "{theorem}: {} enumerated, {} meet the hypotheses, {} counterexamples",
        result.enumerated,
        result.passing_preconditions,
        result.counterexamples.len()
    );
    let code = if result.holds() { 0 } else { 1 };
    Ok(Outcome { report: serde_json::to_value(&result).expect("result serializes"), summary, code })
}

pub fn cmd_family(spec: &FamilySpec) -> Result<Outcome, CliError> {
    if spec.m() < 2 {
        return Err(CliError::TooFewWeights(spec.m()));
    }
    let report = numlab::family_report(spec);
    let checks = numlab::family_checks(spec, &report);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let mut summary = format!(
        "n = {}, weights {:?}: chm {}, isotropy algebra dim {}, reduction dim {}",
        report.n,
        report.weights,
        report.chm,
        report.isotropy_dim,
        report.lrs_dim.map_or("refused".to_string(), |d| d.to_string())
    );
    if !report.tol_stable {
        summary.push_str("; rank decisions change with the tolerance");
    }
    if !failed.is_empty() {
        summary.push_str(&format!("; failed: {}", failed.join(", ")));
    }
    let code = if failed.is_empty() && report.tol_stable { 0 } else { 1 };
    Ok(Outcome { report: serde_json::to_value(&report).expect("report serializes"), summary, code })
}
