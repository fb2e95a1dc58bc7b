//! Problem instances: control set P and target set Q as skew-Hermitian
//! generators, plus the built-in example families.

use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::pauli::{parse_pauli, PauliPolynomial};
use crate::scalar::Rational;
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("the control set P must not be empty")]
    EmptyControlSet,
    #[error("generator {index} of {set} is {rows}x{cols}, expected {dim}x{dim}")]
    DimensionMismatch {
        set: &'static str,
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("generator {index} of {set} is not exactly skew-Hermitian")]
    NotSkewHermitian { set: &'static str, index: usize },
    #[error("central-spin model on {n} spins needs {expected} couplings, got {found}")]
    BadArity {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown fixture {name:?}; available: ex1, ex2a, ex2b")]
    UnknownFixture { name: String },
}

/// A simulability question: can the targets Q be generated from the
/// controls P? All generators are d×d and exactly skew-Hermitian.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    dim: usize,
    p_set: Vec<SparseMatrix>,
    q_set: Vec<SparseMatrix>,
    labels: Option<Vec<String>>,
}

impl ProblemInstance {
    /// Validates shapes and exact skew-Hermiticity. `labels`, when present,
    /// names the generators of P then Q in order.
    pub fn new(
        p_set: Vec<SparseMatrix>,
        q_set: Vec<SparseMatrix>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, InstanceError> {
        let dim = p_set
            .first()
            .map(|m| m.nrows())
            .ok_or(InstanceError::EmptyControlSet)?;
        for (set, mats) in [("P", &p_set), ("Q", &q_set)] {
            for (index, m) in mats.iter().enumerate() {
                if m.nrows() != dim || m.ncols() != dim {
                    return Err(InstanceError::DimensionMismatch {
                        set,
                        index,
                        rows: m.nrows(),
                        cols: m.ncols(),
                        dim,
                    });
                }
                if !m.is_skew_hermitian() {
                    return Err(InstanceError::NotSkewHermitian { set, index });
                }
            }
        }
        Ok(Self {
            dim,
            p_set,
            q_set,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p_set(&self) -> &[SparseMatrix] {
        &self.p_set
    }

    pub fn q_set(&self) -> &[SparseMatrix] {
        &self.q_set
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// P followed by Q, the generator list for the union side.
    pub fn union(&self) -> Vec<SparseMatrix> {
        let mut all = self.p_set.clone();
        all.extend(self.q_set.iter().cloned());
        all
    }

    /// The reversed question: can P be generated from Q? Q must be
    /// non-empty.
    pub fn swapped(&self) -> Result<Self, InstanceError> {
        Self::new(self.q_set.clone(), self.p_set.clone(), None)
    }
}

/// A problem stated at the Pauli-expression level (Hermitian Hamiltonians;
/// generators are obtained by multiplying with i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitInstance {
    pub nqubits: usize,
    pub p_exprs: Vec<PauliPolynomial>,
    pub q_exprs: Vec<PauliPolynomial>,
}

impl QubitInstance {
    pub fn to_problem(&self) -> Result<ProblemInstance, InstanceError> {
        let p_set = self.p_exprs.iter().map(|p| p.skewify()).collect();
        let q_set = self.q_exprs.iter().map(|p| p.skewify()).collect();
        let labels = self
            .p_exprs
            .iter()
            .chain(self.q_exprs.iter())
            .map(|p| format!("i({})", p))
            .collect();
        ProblemInstance::new(p_set, q_set, Some(labels))
    }
}

/// Built-in two-qubit fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureName {
    /// Local controls {iX1, iY1, iX2, iY2} against the pair target iZ1Z2.
    Ex1,
    /// Dipole coupling with tilted field against a Heisenberg target.
    Ex2a,
    /// Dipole coupling with tilted field against a pairing-type target.
    Ex2b,
}

impl FromStr for FixtureName {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ex1" => Ok(Self::Ex1),
            "ex2a" => Ok(Self::Ex2a),
            "ex2b" => Ok(Self::Ex2b),
            _ => Err(InstanceError::UnknownFixture {
                name: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Ex1 => "ex1",
            Self::Ex2a => "ex2a",
            Self::Ex2b => "ex2b",
        };
        write!(f, "{s}")
    }
}

fn parse_fixture_exprs(nqubits: usize, exprs: &[&str]) -> Vec<PauliPolynomial> {
    exprs
        .iter()
        .map(|e| parse_pauli(e, nqubits).expect("fixture expression parses"))
        .collect()
}

/// The named fixture at the Pauli-expression level.
pub fn example_fixture_qubit(name: FixtureName) -> QubitInstance {
    match name {
        FixtureName::Ex1 => QubitInstance {
            nqubits: 2,
            p_exprs: parse_fixture_exprs(2, &["X1", "Y1", "X2", "Y2"]),
            q_exprs: parse_fixture_exprs(2, &["Z1*Z2"]),
        },
        FixtureName::Ex2a => QubitInstance {
            nqubits: 2,
            p_exprs: parse_fixture_exprs(
                2,
                &["2*Z1*Z2 - X1*X2 - Y1*Y2", "X1 - Y1 + X2 - Y2"],
            ),
            q_exprs: parse_fixture_exprs(2, &["X1*X2 + Y1*Y2 + Z1*Z2"]),
        },
        FixtureName::Ex2b => QubitInstance {
            nqubits: 2,
            p_exprs: parse_fixture_exprs(
                2,
                &["2*Z1*Z2 - X1*X2 - Y1*Y2", "X1 - Y1 + X2 - Y2"],
            ),
            q_exprs: parse_fixture_exprs(2, &["X1*Z2 + Z1*X2 + Y1*Z2 + Z1*Y2"]),
        },
    }
}

/// The named fixture as a validated instance.
pub fn example_fixture(name: FixtureName) -> ProblemInstance {
    example_fixture_qubit(name)
        .to_problem()
        .expect("fixtures are valid")
}

/// Central-spin model at the Pauli-expression level: spin 1 couples
/// Heisenberg-style to spins 2..=n with strengths `couplings[k-2]`; controls
/// are the drift (tunneling plus coupling) and a local Z on spin 1; the
/// target is a bare local X on spin 1.
pub fn central_spin_qubit(
    n: usize,
    couplings: &[Rational],
) -> Result<QubitInstance, InstanceError> {
    if n < 2 || couplings.len() != n - 1 {
        return Err(InstanceError::BadArity {
            n,
            expected: n.saturating_sub(1),
            found: couplings.len(),
        });
    }
    let mut drift = parse_pauli("X1", n).expect("valid");
    for (k, coupling) in couplings.iter().enumerate() {
        let spin = k + 2;
        let pair = parse_pauli(
            &format!("X1*X{spin} + Y1*Y{spin} + Z1*Z{spin}"),
            n,
        )
        .expect("valid");
        drift = drift.add(&pair.scale(coupling)).expect("same width");
    }
    Ok(QubitInstance {
        nqubits: n,
        p_exprs: vec![drift, parse_pauli("Z1", n).expect("valid")],
        q_exprs: vec![parse_pauli("X1", n).expect("valid")],
    })
}

/// Central-spin model as a validated instance.
pub fn central_spin_instance(
    n: usize,
    couplings: &[Rational],
) -> Result<ProblemInstance, InstanceError> {
    central_spin_qubit(n, couplings)?.to_problem()
}

/// The coupling pattern `J_k = 1` everywhere (case a) or `J_k = 2` for even
/// k and 1 otherwise (case b).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingCase {
    A,
    B,
}

impl FromStr for CouplingCase {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            _ => Err(InstanceError::UnknownFixture {
                name: s.to_string(),
            }),
        }
    }
}

pub fn coupling_pattern(case: CouplingCase, n: usize) -> Vec<Rational> {
    (2..=n)
        .map(|k| match case {
            CouplingCase::A => Rational::one(),
            CouplingCase::B => {
                if k % 2 == 0 {
                    Rational::from_integer(2.into())
                } else {
                    Rational::one()
                }
            }
        })
        .collect()
}
