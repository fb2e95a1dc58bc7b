//! Structured report documents and their human/JSON renderings.
//!
//! The JSON form is the machine-readable contract: field order is fixed by
//! the struct declarations, maps are avoided, and timings are deliberately
//! omitted so that repeated exact-mode runs on the same input are
//! byte-identical. Wall-clock timing appears in the human rendering only.

use serde::{Deserialize, Serialize};
use symsim_core::{
    ConditionAReport, ConditionBReport, ConditionStatus, OracleReport, RankResult,
    SimulabilityReport, SymmetryBasis, Verdict,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Human,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithmeticMeta {
    pub mode: String,
    pub used_modular: bool,
    pub modular_primes: Vec<u64>,
}

/// Machine-readable result of `decide`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecideDocument {
    pub format_version: u32,
    pub tool_version: String,
    pub command: String,
    pub input_sha256: String,
    pub verdict: Verdict,
    pub condition_a: ConditionAReport,
    pub condition_b: ConditionBReport,
    pub linear_dim_p: usize,
    pub linear_dim_union: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure_witness: Option<String>,
    pub arithmetic: ArithmeticMeta,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleReport>,
}

/// Machine-readable result of `closure`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosureDocument {
    pub format_version: u32,
    pub tool_version: String,
    pub command: String,
    pub input_sha256: String,
    pub lie_dim_p: usize,
    pub lie_dim_union: usize,
    pub generation_depth: usize,
    pub semisimple_dim: usize,
    pub center_dim: usize,
    pub quadratic_dim_p: usize,
    pub quadratic_dim_union: usize,
    pub linear_dim_p: usize,
    pub linear_dim_union: usize,
    pub commutant_center_dim: usize,
    pub central_rank_full: RankResult,
    pub central_rank_restricted: RankResult,
    pub simulable: bool,
    pub arithmetic: ArithmeticMeta,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisEntryDoc {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisMatrixDoc {
    pub index: usize,
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<BasisEntryDoc>,
}

/// Machine-readable result of `symmetries`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetriesDocument {
    pub format_version: u32,
    pub tool_version: String,
    pub command: String,
    pub input_sha256: String,
    pub kind: String,
    pub dim: usize,
    pub basis: Vec<BasisMatrixDoc>,
}

pub fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

pub fn decide_document(
    input_sha256: String,
    mode: &str,
    report: &SimulabilityReport,
    oracle: Option<OracleReport>,
) -> DecideDocument {
    DecideDocument {
        format_version: FORMAT_VERSION,
        tool_version: tool_version(),
        command: "decide".to_string(),
        input_sha256,
        verdict: report.verdict,
        condition_a: report.condition_a.clone(),
        condition_b: report.condition_b.clone(),
        linear_dim_p: report.linear_dim_p,
        linear_dim_union: report.linear_dim_union,
        failure_witness: report.failure_witness.clone(),
        arithmetic: ArithmeticMeta {
            mode: mode.to_string(),
            used_modular: report.used_modular,
            modular_primes: report.modular_primes.clone(),
        },
        oracle,
    }
}

pub fn basis_document(basis: &SymmetryBasis) -> Vec<BasisMatrixDoc> {
    basis
        .basis
        .iter()
        .enumerate()
        .map(|(index, m)| BasisMatrixDoc {
            index,
            nrows: m.nrows(),
            ncols: m.ncols(),
            entries: m
                .iter()
                .map(|(row, col, v)| BasisEntryDoc {
                    row,
                    col,
                    value: v.to_string(),
                })
                .collect(),
        })
        .collect()
}

pub fn matrices_document(mats: &[symsim_core::SparseMatrix]) -> Vec<BasisMatrixDoc> {
    mats.iter()
        .enumerate()
        .map(|(index, m)| BasisMatrixDoc {
            index,
            nrows: m.nrows(),
            ncols: m.ncols(),
            entries: m
                .iter()
                .map(|(row, col, v)| BasisEntryDoc {
                    row,
                    col,
                    value: v.to_string(),
                })
                .collect(),
        })
        .collect()
}

fn status_word(s: ConditionStatus) -> &'static str {
    match s {
        ConditionStatus::Holds => "holds",
        ConditionStatus::Fails => "fails",
        ConditionStatus::Skipped => "skipped",
    }
}

fn rank_note(r: &RankResult) -> String {
    match r.prime {
        Some(p) => format!("{} (modular, p = {p})", r.rank),
        None => format!("{} (exact)", r.rank),
    }
}

pub fn render_decide_human(doc: &DecideDocument, elapsed_ms: u128) -> String {
    let mut out = String::new();
    let verdict = match doc.verdict {
        Verdict::Simulable => "SIMULABLE",
        Verdict::NotSimulable => "NOT SIMULABLE",
    };
    out.push_str(&format!("verdict: {verdict}\n"));
    out.push_str(&format!(
        "condition (A) {}: dim ts(P) = {}, dim ts(P u Q) = {}\n",
        status_word(doc.condition_a.status),
        doc.condition_a.dim_ts_p,
        doc.condition_a.dim_ts_union
    ));
    match doc.condition_b.status {
        ConditionStatus::Skipped => {
            out.push_str("condition (B) skipped (condition (A) already failed)\n")
        }
        s => {
            out.push_str(&format!(
                "condition (B) {}: rank(T~) = {}, rank(T) = {}, center dim = {}\n",
                status_word(s),
                doc.condition_b
                    .rank_restricted
                    .as_ref()
                    .map(rank_note)
                    .unwrap_or_default(),
                doc.condition_b
                    .rank_full
                    .as_ref()
                    .map(rank_note)
                    .unwrap_or_default(),
                doc.condition_b.center_dim.unwrap_or_default()
            ));
        }
    }
    out.push_str(&format!(
        "linear symmetries: dim P' = {}, dim (P u Q)' = {}\n",
        doc.linear_dim_p, doc.linear_dim_union
    ));
    if let Some(w) = &doc.failure_witness {
        out.push_str(&format!("witness: {w}\n"));
    }
    if let Some(o) = &doc.oracle {
        out.push_str(&format!(
            "oracle: closure dims ({}, {}) -> {} (agrees)\n",
            o.closure_dim_p,
            o.closure_dim_union,
            if o.simulable { "simulable" } else { "not simulable" }
        ));
    }
    if doc.arithmetic.used_modular {
        out.push_str(&format!(
            "arithmetic: Monte-Carlo modular ranks used (primes {:?}); rerun with --mode exact to certify\n",
            doc.arithmetic.modular_primes
        ));
    } else {
        out.push_str("arithmetic: exact\n");
    }
    out.push_str(&format!("elapsed: {elapsed_ms} ms\n"));
    out
}

pub fn render_closure_human(doc: &ClosureDocument, elapsed_ms: u128) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Lie closure: dim <P> = {}, dim <P u Q> = {} (depth {})\n",
        doc.lie_dim_p, doc.lie_dim_union, doc.generation_depth
    ));
    out.push_str(&format!(
        "decomposition of <P u Q>: semisimple {}, center {}\n",
        doc.semisimple_dim, doc.center_dim
    ));
    out.push_str(&format!(
        "quadratic symmetries: dim ts(P) = {}, dim ts(P u Q) = {}\n",
        doc.quadratic_dim_p, doc.quadratic_dim_union
    ));
    out.push_str(&format!(
        "linear symmetries: dim P' = {}, dim (P u Q)' = {}\n",
        doc.linear_dim_p, doc.linear_dim_union
    ));
    out.push_str(&format!(
        "central projections: rank(T~) = {}, rank(T) = {} over a center of dim {}\n",
        rank_note(&doc.central_rank_restricted),
        rank_note(&doc.central_rank_full),
        doc.commutant_center_dim
    ));
    out.push_str(&format!(
        "closure verdict: {}\n",
        if doc.simulable { "simulable" } else { "not simulable" }
    ));
    out.push_str(&format!("elapsed: {elapsed_ms} ms\n"));
    out
}

pub fn render_symmetries_human(doc: &SymmetriesDocument, elapsed_ms: u128) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} basis, dim {}\n", doc.kind, doc.dim));
    for m in &doc.basis {
        out.push_str(&format!("--- element {} ({}x{})\n", m.index, m.nrows, m.ncols));
        if m.nrows <= 16 {
            // Dense rendering for small matrices.
            let mut grid = vec![vec!["0".to_string(); m.ncols]; m.nrows];
            for e in &m.entries {
                grid[e.row][e.col] = e.value.clone();
            }
            let width = grid
                .iter()
                .flat_map(|r| r.iter().map(|s| s.len()))
                .max()
                .unwrap_or(1);
            for row in grid {
                let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
                out.push_str(&format!("  [{}]\n", cells.join(", ")));
            }
        } else {
            for e in &m.entries {
                out.push_str(&format!("  ({}, {}) = {}\n", e.row, e.col, e.value));
            }
        }
    }
    out.push_str(&format!("elapsed: {elapsed_ms} ms\n"));
    out
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
