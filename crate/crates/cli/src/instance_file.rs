//! The line-oriented instance file format.
//!
//! ```text
//! # optional comments and blank lines
//! system: qubits 2
//! P: 2*Z1*Z2 - X1*X2 - Y1*Y2; X1 - Y1 + X2 - Y2
//! Q: X1*X2 + Y1*Y2 + Z1*Z2
//! ```
//!
//! In qubit mode the P/Q entries are Hermitian Pauli expressions; the engine
//! multiplies them by i. Raw-matrix mode (`system: dim <d>`) takes the
//! skew-Hermitian generators directly, as bracketed rows of exact complex
//! literals `a+b*i`:
//!
//! ```text
//! system: dim 2
//! P: [[i, 0], [0, -i]]; [[0, 1], [-1, 0]]
//! Q:
//! ```
//!
//! The `Q:` line may be empty or absent.

use std::fmt::Write as _;

use symsim_core::{
    GaussianRational, InstanceError, PauliError, PauliPolynomial, ProblemInstance, QubitInstance,
    SparseMatrix,
};

/// Parse failure with 1-based position information.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct FileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl FileError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A parsed instance file, still at the syntactic level.
#[derive(Debug, Clone)]
pub enum ParsedInstance {
    Qubit(QubitInstance),
    Raw {
        dim: usize,
        p: Vec<SparseMatrix>,
        q: Vec<SparseMatrix>,
    },
}

impl ParsedInstance {
    pub fn to_problem(&self) -> Result<ProblemInstance, InstanceError> {
        match self {
            ParsedInstance::Qubit(q) => q.to_problem(),
            ParsedInstance::Raw { p, q, .. } => {
                let labels = (0..p.len())
                    .map(|k| format!("P[{}]", k + 1))
                    .chain((0..q.len()).map(|k| format!("Q[{}]", k + 1)))
                    .collect();
                ProblemInstance::new(p.clone(), q.clone(), Some(labels))
            }
        }
    }

    #[allow(dead_code)] // exercised by unit tests; handy for callers
    #[allow(dead_code)] // exercised by unit tests; handy for callers
    pub fn dim(&self) -> usize {
        match self {
            ParsedInstance::Qubit(q) => 1 << q.nqubits,
            ParsedInstance::Raw { dim, .. } => *dim,
        }
    }
}

fn pauli_error_to_file(e: PauliError, line: usize, col_offset: usize) -> FileError {
    match e {
        PauliError::Parse { column, expected } => FileError::new(
            line,
            col_offset + column,
            format!("expected {expected}"),
        ),
        PauliError::IndexOutOfRange {
            index,
            nqubits,
            column,
        } => FileError::new(
            line,
            col_offset + column,
            format!("qubit index {index} out of range, valid indices are 1..={nqubits}"),
        ),
        PauliError::QubitCountMismatch { lhs, rhs } => {
            FileError::new(line, col_offset, format!("qubit count mismatch: {lhs} vs {rhs}"))
        }
    }
}

/// Splits a generator list on top-level semicolons, keeping column offsets.
fn split_entries(body: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (k, c) in body.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ';' if depth == 0 => {
                out.push((start, &body[start..k]));
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push((start, &body[start..]));
    out.into_iter()
        .filter(|(_, s)| !s.trim().is_empty())
        .collect()
}

/// Parses one bracketed matrix literal `[[a, b], [c, d]]`.
fn parse_matrix(text: &str, dim: usize, line: usize, col_offset: usize) -> Result<SparseMatrix, FileError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let err = |pos: usize, msg: &str| FileError::new(line, col_offset + pos + 1, msg.to_string());
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_whitespace() {
            *pos += 1;
        }
    };

    skip_ws(&mut pos);
    if pos >= bytes.len() || bytes[pos] != '[' {
        return Err(err(pos, "expected '[' to open the matrix"));
    }
    pos += 1;
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() || bytes[pos] != '[' {
            return Err(err(pos, "expected '[' to open a row"));
        }
        pos += 1;
        let mut row = Vec::new();
        loop {
            skip_ws(&mut pos);
            let start = pos;
            while pos < bytes.len() && bytes[pos] != ',' && bytes[pos] != ']' {
                pos += 1;
            }
            if pos >= bytes.len() {
                return Err(err(start, "unterminated row"));
            }
            let literal: String = bytes[start..pos].iter().collect();
            let value: GaussianRational = literal
                .trim()
                .parse()
                .map_err(|e| err(start, &format!("{e}")))?;
            row.push(value);
            if bytes[pos] == ']' {
                pos += 1;
                break;
            }
            pos += 1; // consume ','
        }
        rows.push(row);
        skip_ws(&mut pos);
        if pos < bytes.len() && bytes[pos] == ',' {
            pos += 1;
            continue;
        }
        break;
    }
    skip_ws(&mut pos);
    if pos >= bytes.len() || bytes[pos] != ']' {
        return Err(err(pos, "expected ']' to close the matrix"));
    }
    pos += 1;
    skip_ws(&mut pos);
    if pos != bytes.len() {
        return Err(err(pos, "unexpected trailing input after matrix"));
    }

    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(err(
            0,
            &format!("matrix must be {dim}x{dim} to match the declared dimension"),
        ));
    }
    let mut m = SparseMatrix::zero(dim, dim);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Parses the full instance file.
pub fn parse_instance_file(text: &str) -> Result<ParsedInstance, FileError> {
    enum Mode {
        Qubits(usize),
        Dim(usize),
    }
    let mut mode: Option<Mode> = None;
    let mut p_line: Option<(usize, usize, String)> = None;
    let mut q_line: Option<(usize, usize, String)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lower = trimmed.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("system:") {
            if mode.is_some() {
                return Err(FileError::new(line_no, 1, "duplicate system line"));
            }
            let rest = rest.trim();
            let parse_count = |s: &str| -> Result<usize, FileError> {
                s.trim().parse::<usize>().map_err(|_| {
                    FileError::new(line_no, 1, format!("expected a positive integer, got {s:?}"))
                })
            };
            if let Some(n) = rest.strip_prefix("qubits") {
                let n = parse_count(n)?;
                if n == 0 {
                    return Err(FileError::new(line_no, 1, "qubit count must be at least 1"));
                }
                mode = Some(Mode::Qubits(n));
            } else if let Some(d) = rest.strip_prefix("dim") {
                let d = parse_count(d)?;
                if d == 0 {
                    return Err(FileError::new(line_no, 1, "dimension must be at least 1"));
                }
                mode = Some(Mode::Dim(d));
            } else {
                return Err(FileError::new(
                    line_no,
                    1,
                    "system line must be 'system: qubits <n>' or 'system: dim <d>'",
                ));
            }
        } else if let Some(rest) = trimmed.strip_prefix("P:").or_else(|| trimmed.strip_prefix("p:")) {
            if p_line.is_some() {
                return Err(FileError::new(line_no, 1, "duplicate P line"));
            }
            let offset = raw.len() - raw.trim_start().len() + 2;
            p_line = Some((line_no, offset, rest.to_string()));
        } else if let Some(rest) = trimmed.strip_prefix("Q:").or_else(|| trimmed.strip_prefix("q:")) {
            if q_line.is_some() {
                return Err(FileError::new(line_no, 1, "duplicate Q line"));
            }
            let offset = raw.len() - raw.trim_start().len() + 2;
            q_line = Some((line_no, offset, rest.to_string()));
        } else {
            return Err(FileError::new(
                line_no,
                1,
                "expected a 'system:', 'P:' or 'Q:' line (or a '#' comment)",
            ));
        }
    }

    let mode = mode.ok_or_else(|| FileError::new(1, 1, "missing 'system:' line"))?;
    let (p_no, p_off, p_body) =
        p_line.ok_or_else(|| FileError::new(1, 1, "missing 'P:' line"))?;
    let (q_no, q_off, q_body) = q_line.unwrap_or((0, 0, String::new()));

    match mode {
        Mode::Qubits(n) => {
            let parse_side = |line: usize, off: usize, body: &str| {
                split_entries(body)
                    .into_iter()
                    .map(|(col, expr)| {
                        symsim_core::parse_pauli(expr, n)
                            .map_err(|e| pauli_error_to_file(e, line, off + col))
                    })
                    .collect::<Result<Vec<PauliPolynomial>, FileError>>()
            };
            let p_exprs = parse_side(p_no, p_off, &p_body)?;
            let q_exprs = parse_side(q_no, q_off, &q_body)?;
            if p_exprs.is_empty() {
                return Err(FileError::new(p_no, 1, "P must list at least one generator"));
            }
            Ok(ParsedInstance::Qubit(QubitInstance {
                nqubits: n,
                p_exprs,
                q_exprs,
            }))
        }
        Mode::Dim(d) => {
            let parse_side = |line: usize, off: usize, body: &str| {
                split_entries(body)
                    .into_iter()
                    .map(|(col, m)| parse_matrix(m, d, line, off + col))
                    .collect::<Result<Vec<SparseMatrix>, FileError>>()
            };
            let p = parse_side(p_no, p_off, &p_body)?;
            let q = parse_side(q_no, q_off, &q_body)?;
            if p.is_empty() {
                return Err(FileError::new(p_no, 1, "P must list at least one generator"));
            }
            Ok(ParsedInstance::Raw { dim: d, p, q })
        }
    }
}

/// Renders a qubit-level instance in the file format; `parse_instance_file`
/// inverts this exactly.
pub fn render_qubit_instance(inst: &QubitInstance, header: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = header {
        let _ = writeln!(out, "# {h}");
    }
    let _ = writeln!(out, "system: qubits {}", inst.nqubits);
    let p: Vec<String> = inst.p_exprs.iter().map(|e| e.to_string()).collect();
    let _ = writeln!(out, "P: {}", p.join("; "));
    let q: Vec<String> = inst.q_exprs.iter().map(|e| e.to_string()).collect();
    let _ = writeln!(out, "Q: {}", q.join("; "));
    out
}
