//! Exact decision engine for Hamiltonian simulability.
//!
//! Given a set P of control generators and a set Q of targets (both as
//! skew-Hermitian matrices over the Gaussian rationals), [`decide`] answers
//! whether everything in Q can already be generated from P, by comparing
//! linear and quadratic symmetries and the ranks of central projections.
//! [`lie_closure`] provides the brute-force ground truth for
//! cross-validation.

// Index loops over both axes are the natural shape for the matrix kernels.
#![allow(clippy::needless_range_loop)]

pub mod closure;
pub mod decide;
pub mod elim;
pub mod entangle;
pub mod instance;
pub mod modular;
pub mod pauli;
pub mod rank;
pub mod scalar;
pub mod sparse;
pub mod symmetry;

pub use closure::{
    decompose, lie_closure, oracle_verdict, AlgebraDecomposition, ClosureError, LieBasis,
    OracleReport,
};
pub use decide::{
    central_projections, decide, decide_mutual, CentralProjectionData, ConditionAReport,
    ConditionBReport, ConditionStatus, EngineError, EngineOptions, MutualReport, MutualVerdict,
    SimulabilityReport, Verdict,
};
pub use entangle::{concurrence_squared, quadratic_invariant, slot_swap, InvariantError};
pub use instance::{
    central_spin_instance, central_spin_qubit, coupling_pattern, example_fixture,
    example_fixture_qubit, CouplingCase, FixtureName, InstanceError, ProblemInstance,
    QubitInstance,
};
pub use pauli::{parse_pauli, Axis, PauliError, PauliPolynomial, PauliTerm};
pub use rank::{RankMethod, RankMode, RankOptions, RankResult, DEFAULT_AUTO_THRESHOLD_CELLS};
pub use scalar::{GaussianRational, Rational};
pub use sparse::{MatrixError, SparseMatrix};
pub use symmetry::{
    center_from_commutant, center_of_commutant, commutant, constraint_operator, quadratic_commutant,
    quadratic_commutant_dims, tensor_square_lift, QuadraticDims, SymmetryBasis, SymmetryKind,
};
