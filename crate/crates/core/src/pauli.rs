//! Symbolic Pauli-string Hamiltonians on n qubits.
//!
//! The text grammar (whitespace insignificant):
//!
//! ```text
//! expr   := ["+" | "-"] term (("+" | "-") term)*
//! term   := [coeff "*"] factor ("*" factor)* | coeff
//! factor := ("X" | "Y" | "Z") integer
//! coeff  := rational like "2" or "1/3"
//! ```
//!
//! Qubit indices are 1-based and each may appear at most once per term. A
//! bare `coeff` term is a multiple of the identity.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{GaussianRational, Rational};
use crate::sparse::SparseMatrix;

/// Single-qubit Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn letter(&self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    /// The 2x2 matrix of this Pauli.
    pub fn matrix(&self) -> SparseMatrix {
        let one = GaussianRational::one();
        let i = GaussianRational::i();
        let entries: Vec<(usize, usize, GaussianRational)> = match self {
            Axis::X => vec![(0, 1, one.clone()), (1, 0, one)],
            Axis::Y => vec![(0, 1, -&i), (1, 0, i)],
            Axis::Z => vec![(0, 0, one.clone()), (1, 1, -&one)],
        };
        SparseMatrix::from_entries(2, 2, entries).unwrap()
    }
}

/// One product term: a rational coefficient times a product of Paulis on
/// distinct qubits. An empty factor map is the scaled identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliTerm {
    pub coeff: Rational,
    pub factors: BTreeMap<usize, Axis>,
}

impl PauliTerm {
    pub fn identity(coeff: Rational) -> Self {
        Self {
            coeff,
            factors: BTreeMap::new(),
        }
    }

    fn signature(&self) -> Vec<(usize, Axis)> {
        self.factors.iter().map(|(q, a)| (*q, *a)).collect()
    }
}

/// Errors from the expression parser and polynomial constructors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PauliError {
    #[error("parse error at column {column}: expected {expected}")]
    Parse { column: usize, expected: String },
    #[error("qubit index {index} out of range at column {column}: valid indices are 1..={nqubits}")]
    IndexOutOfRange {
        index: usize,
        nqubits: usize,
        column: usize,
    },
    #[error("qubit count mismatch: {lhs} vs {rhs}")]
    QubitCountMismatch { lhs: usize, rhs: usize },
}

/// Canonical real-coefficient sum of Pauli-string terms on `nqubits` qubits.
///
/// Canonical form: terms sorted by factor signature, no duplicate
/// signatures, no zero coefficients. The realized matrix is Hermitian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliPolynomial {
    nqubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliPolynomial {
    pub fn new(nqubits: usize, terms: Vec<PauliTerm>) -> Result<Self, PauliError> {
        for t in &terms {
            for &q in t.factors.keys() {
                if q == 0 || q > nqubits {
                    return Err(PauliError::IndexOutOfRange {
                        index: q,
                        nqubits,
                        column: 0,
                    });
                }
            }
        }
        let mut merged: BTreeMap<Vec<(usize, Axis)>, PauliTerm> = BTreeMap::new();
        for t in terms {
            let sig = t.signature();
            match merged.get_mut(&sig) {
                Some(existing) => existing.coeff += t.coeff,
                None => {
                    merged.insert(sig, t);
                }
            }
        }
        let terms = merged
            .into_values()
            .filter(|t| !t.coeff.is_zero())
            .collect();
        Ok(Self { nqubits, terms })
    }

    pub fn zero(nqubits: usize) -> Self {
        Self {
            nqubits,
            terms: Vec::new(),
        }
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        1 << self.nqubits
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, PauliError> {
        if self.nqubits != other.nqubits {
            return Err(PauliError::QubitCountMismatch {
                lhs: self.nqubits,
                rhs: other.nqubits,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(self.nqubits, terms)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm {
                coeff: &t.coeff * factor,
                factors: t.factors.clone(),
            })
            .collect();
        Self::new(self.nqubits, terms).unwrap()
    }

    /// Realizes the polynomial as a `2^n x 2^n` Hermitian sparse matrix,
    /// with the factor for qubit k sitting at tensor position k (identity
    /// elsewhere) and qubit 1 leftmost.
    pub fn realize(&self) -> SparseMatrix {
        let d = self.dim();
        let mut out = SparseMatrix::zero(d, d);
        for term in &self.terms {
            let mut acc = SparseMatrix::identity(1);
            for q in 1..=self.nqubits {
                let factor = match term.factors.get(&q) {
                    Some(axis) => axis.matrix(),
                    None => SparseMatrix::identity(2),
                };
                acc = acc.kron(&factor);
            }
            let coeff = GaussianRational::from_rational(term.coeff.clone());
            out = out.add(&acc.scale(&coeff)).unwrap();
        }
        out
    }

    /// `i * realize()`, the skew-Hermitian generator form.
    pub fn skewify(&self) -> SparseMatrix {
        self.realize().scale(&GaussianRational::i())
    }
}

impl fmt::Display for PauliPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            let coeff = &term.coeff;
            if k == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            if term.factors.is_empty() {
                write!(f, "{}", mag)?;
            } else {
                let mut lead = true;
                if !mag.is_one() {
                    write!(f, "{}", mag)?;
                    lead = false;
                }
                for (q, axis) in &term.factors {
                    if !lead {
                        write!(f, "*")?;
                    }
                    write!(f, "{}{}", axis.letter(), q)?;
                    lead = false;
                }
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    nqubits: usize,
    _text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, nqubits: usize) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
            nqubits,
            _text: text,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn error(&self, expected: &str) -> PauliError {
        PauliError::Parse {
            column: self.column(),
            expected: expected.to_string(),
        }
    }

    fn parse_integer(&mut self, what: &str) -> Result<usize, PauliError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error(what));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse::<usize>()
            .map_err(|_| self.error("a smaller integer"))
    }

    fn parse_rational(&mut self) -> Result<Rational, PauliError> {
        let numer = self.parse_integer("a numerator digit")?;
        let mut value = Rational::from_integer(numer.into());
        if self.peek() == Some('/') {
            self.bump();
            let col = self.column();
            let denom = self.parse_integer("a denominator digit")?;
            if denom == 0 {
                return Err(PauliError::Parse {
                    column: col,
                    expected: "a nonzero denominator".to_string(),
                });
            }
            value /= Rational::from_integer(denom.into());
        }
        Ok(value)
    }

    fn parse_factor(&mut self, term: &mut PauliTerm) -> Result<(), PauliError> {
        let axis = match self.peek() {
            Some('X') => Axis::X,
            Some('Y') => Axis::Y,
            Some('Z') => Axis::Z,
            _ => return Err(self.error("a Pauli factor X, Y or Z")),
        };
        self.bump();
        let index_col = self.column();
        let index = self.parse_integer("a qubit index")?;
        if index == 0 || index > self.nqubits {
            return Err(PauliError::IndexOutOfRange {
                index,
                nqubits: self.nqubits,
                column: index_col,
            });
        }
        if term.factors.insert(index, axis).is_some() {
            return Err(PauliError::Parse {
                column: index_col,
                expected: format!("a qubit index not already used in this term (got {index})"),
            });
        }
        Ok(())
    }

    fn parse_term(&mut self, sign_negative: bool) -> Result<PauliTerm, PauliError> {
        let mut term = PauliTerm::identity(Rational::one());
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                term.coeff = self.parse_rational()?;
                if self.peek() == Some('*') {
                    self.bump();
                    self.parse_factor(&mut term)?;
                    while self.peek() == Some('*') {
                        self.bump();
                        self.parse_factor(&mut term)?;
                    }
                }
            }
            Some('X') | Some('Y') | Some('Z') => {
                self.parse_factor(&mut term)?;
                while self.peek() == Some('*') {
                    self.bump();
                    self.parse_factor(&mut term)?;
                }
            }
            _ => return Err(self.error("a coefficient or a Pauli factor")),
        }
        if sign_negative {
            term.coeff = -term.coeff;
        }
        Ok(term)
    }
}

/// Parses an expression into canonical form. Total on the grammar above;
/// everything else is rejected with a position and the expected token.
pub fn parse_pauli(text: &str, nqubits: usize) -> Result<PauliPolynomial, PauliError> {
    let mut cur = Cursor::new(text, nqubits);
    let mut terms = Vec::new();
    let mut negative = match cur.peek() {
        Some('-') => {
            cur.bump();
            true
        }
        Some('+') => {
            cur.bump();
            false
        }
        _ => false,
    };
    loop {
        terms.push(cur.parse_term(negative)?);
        match cur.peek() {
            None => break,
            Some('+') => {
                cur.bump();
                negative = false;
            }
            Some('-') => {
                cur.bump();
                negative = true;
            }
            Some(_) => return Err(cur.error("'+', '-' or end of expression")),
        }
    }
    PauliPolynomial::new(nqubits, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn parses_the_dipole_expression() {
        let p = parse_pauli("2*Z1*Z2 - X1*X2 - Y1*Y2", 2).unwrap();
        assert_eq!(p.terms().len(), 3);
        let coeffs: Vec<Rational> = p.terms().iter().map(|t| t.coeff.clone()).collect();
        // Canonical order sorts X1X2 before Y1Y2 before Z1Z2.
        assert_eq!(coeffs, vec![rat(-1), rat(-1), rat(2)]);
    }

    #[test]
    fn single_factor_defaults_to_unit_coefficient() {
        let p = parse_pauli("X1", 2).unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].coeff, rat(1));
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        match parse_pauli("X3", 2) {
            Err(PauliError::IndexOutOfRange {
                index, nqubits, ..
            }) => {
                assert_eq!((index, nqubits), (3, 2));
            }
            other => panic!("expected IndexOutOfRange, got {other:?}"),
        }
        assert!(matches!(
            parse_pauli("X0", 2),
            Err(PauliError::IndexOutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn duplicate_qubit_in_term_is_a_parse_error() {
        assert!(matches!(
            parse_pauli("X1*X1", 2),
            Err(PauliError::Parse { .. })
        ));
    }

    #[test]
    fn garbage_is_rejected_with_position() {
        match parse_pauli("X1 + * Y2", 2) {
            Err(PauliError::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn realize_z_is_diagonal() {
        let p = parse_pauli("Z1", 1).unwrap();
        let m = p.realize();
        assert_eq!(m.get(0, 0), GaussianRational::from_integer(1));
        assert_eq!(m.get(1, 1), GaussianRational::from_integer(-1));
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn realize_zz_is_diag_1_m1_m1_1() {
        let p = parse_pauli("Z1*Z2", 2).unwrap();
        let m = p.realize();
        for (k, want) in [1i64, -1, -1, 1].iter().enumerate() {
            assert_eq!(m.get(k, k), GaussianRational::from_integer(*want));
        }
    }

    #[test]
    fn skewify_is_skew_hermitian() {
        let p = parse_pauli("2*Z1*Z2 - X1*X2 - Y1*Y2 + 1/2", 2).unwrap();
        assert!(p.realize().is_hermitian());
        assert!(p.skewify().is_skew_hermitian());
    }

    #[test]
    fn constant_terms_scale_the_identity() {
        let p = parse_pauli("3/2", 2).unwrap();
        let m = p.realize();
        assert_eq!(m, SparseMatrix::identity(4).scale(&GaussianRational::new(
            crate::scalar::ratio(3, 2),
            rat(0)
        )));
    }

    #[test]
    fn display_parse_round_trip() {
        for text in [
            "2*Z1*Z2 - X1*X2 - Y1*Y2",
            "X1 - Y1 + X2 - Y2",
            "-X1 + 1/3*Y2",
            "0",
            "5",
            "X1*Y2*Z3 + 2",
        ] {
            let p = parse_pauli(text, 3).unwrap();
            let printed = p.to_string();
            let q = parse_pauli(&printed, 3).unwrap();
            assert_eq!(p, q, "round trip through {printed:?}");
        }
    }

    #[test]
    fn terms_with_cancelling_coefficients_vanish() {
        let p = parse_pauli("X1 - X1", 1).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn realize_is_traceless_without_identity_terms() {
        let p = parse_pauli("X1*Y2 - 3*Z1 + 1/2*Z1*Z2*X3", 3).unwrap();
        assert_eq!(
            p.realize().trace().unwrap(),
            GaussianRational::zero()
        );
    }

    #[test]
    fn realize_matches_explicit_kron_of_factors() {
        let p = parse_pauli("X1*Z3", 3).unwrap();
        let want = Axis::X
            .matrix()
            .kron(&SparseMatrix::identity(2))
            .kron(&Axis::Z.matrix());
        assert_eq!(p.realize(), want);
    }

    #[test]
    fn realize_is_linear() {
        let p = parse_pauli("X1*Y2 + 2*Z1", 2).unwrap();
        let q = parse_pauli("Z1 - 3*Y2", 2).unwrap();
        let lhs = p.scale(&rat(3)).add(&q.scale(&rat(-2))).unwrap().realize();
        let rhs = p
            .realize()
            .scale(&GaussianRational::from_integer(3))
            .sub(&q.realize().scale(&GaussianRational::from_integer(2)))
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}
