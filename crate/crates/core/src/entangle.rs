//! Degree-two invariants built from quadratic symmetries.

use crate::scalar::{GaussianRational, Rational};
use crate::sparse::{MatrixError, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("density operator must have unit trace, found {found}")]
    NotUnitTrace { found: String },
    #[error("state vector must be nonzero so it can be normalized exactly")]
    NotNormalized,
}

/// `Tr(a·b)` without materializing the product.
fn trace_product(a: &SparseMatrix, b: &SparseMatrix) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for (i, j, v) in a.iter() {
        let w = b.get(j, i);
        if !w.is_zero() {
            acc += &(v * &w);
        }
    }
    acc
}

/// The degree-two invariant `Tr[(ρ ⊗ ρ) s]` of a unit-trace operator ρ
/// against a doubled-space operator s. For s in the quadratic commutant of
/// the controls this quantity is conserved by everything they generate.
pub fn quadratic_invariant(
    rho: &SparseMatrix,
    s: &SparseMatrix,
) -> Result<GaussianRational, InvariantError> {
    let tr = rho.trace()?;
    if tr != GaussianRational::one() {
        return Err(InvariantError::NotUnitTrace {
            found: tr.to_string(),
        });
    }
    let d2 = rho.nrows() * rho.nrows();
    if s.nrows() != d2 || s.ncols() != d2 {
        return Err(MatrixError::DimensionMismatch {
            op: "quadratic_invariant",
            lhs_rows: d2,
            lhs_cols: d2,
            rhs_rows: s.nrows(),
            rhs_cols: s.ncols(),
        }
        .into());
    }
    Ok(trace_product(&rho.kron(rho), s))
}

/// Permutation matrix on `(C²)^⊗nslots` exchanging two tensor slots
/// (1-based, counted from the left).
pub fn slot_swap(nslots: usize, a: usize, b: usize) -> SparseMatrix {
    assert!(a >= 1 && b >= 1 && a <= nslots && b <= nslots && a != b);
    let dim = 1usize << nslots;
    let bit = |slot: usize| nslots - slot; // slot 1 is the most significant bit
    let (ba, bb) = (bit(a), bit(b));
    let mut m = SparseMatrix::zero(dim, dim);
    for src in 0..dim {
        let xa = (src >> ba) & 1;
        let xb = (src >> bb) & 1;
        let dst = (src & !(1 << ba) & !(1 << bb)) | (xb << ba) | (xa << bb);
        m.set(dst, src, GaussianRational::one());
    }
    m
}

/// Squared concurrence of a two-qubit pure state, evaluated through the
/// quadratic symmetries of local interactions:
///
/// `C² = ⟨ψ|⟨ψ| (1 - M₍₁,₃₎ - M₍₂,₄₎ + M₍₁,₃₎₍₂,₄₎) |ψ⟩|ψ⟩ / ⟨ψ|ψ⟩²`
///
/// The input need not be normalized: the expression is divided by the exact
/// squared norm, so states with irrational-amplitude normalizations (for
/// example Bell states) are handled by passing an unnormalized
/// representative. Squaring keeps everything inside exact arithmetic;
/// the concurrence itself is the square root.
pub fn concurrence_squared(psi: &SparseMatrix) -> Result<GaussianRational, InvariantError> {
    if psi.nrows() != 4 || psi.ncols() != 1 {
        return Err(MatrixError::DimensionMismatch {
            op: "concurrence_squared",
            lhs_rows: 4,
            lhs_cols: 1,
            rhs_rows: psi.nrows(),
            rhs_cols: psi.ncols(),
        }
        .into());
    }
    let norm2 = psi.hs_inner(psi)?;
    if norm2.is_zero() {
        return Err(InvariantError::NotNormalized);
    }
    let m13 = slot_swap(4, 1, 3);
    let m24 = slot_swap(4, 2, 4);
    let joint = m13.matmul(&m24).expect("square");
    let op = SparseMatrix::identity(16)
        .sub(&m13)
        .and_then(|m| m.sub(&m24))
        .and_then(|m| m.add(&joint))
        .expect("shapes agree");
    let doubled = psi.kron(psi);
    let value = doubled.hs_inner(&op.matmul(&doubled)?)?;
    Ok(&value / &(&norm2 * &norm2))
}

/// Independent cross-check for tests: `C² = 4 |ad - bc|² / ⟨ψ|ψ⟩²` for the
/// amplitude vector (a, b, c, d).
pub fn concurrence_squared_reference(psi: &SparseMatrix) -> Result<GaussianRational, InvariantError> {
    if psi.nrows() != 4 || psi.ncols() != 1 {
        return Err(MatrixError::DimensionMismatch {
            op: "concurrence_squared_reference",
            lhs_rows: 4,
            lhs_cols: 1,
            rhs_rows: psi.nrows(),
            rhs_cols: psi.ncols(),
        }
        .into());
    }
    let norm2 = psi.hs_inner(psi)?;
    if norm2.is_zero() {
        return Err(InvariantError::NotNormalized);
    }
    let det = &(&psi.get(0, 0) * &psi.get(3, 0)) - &(&psi.get(1, 0) * &psi.get(2, 0));
    let four = GaussianRational::from_rational(Rational::from_integer(4.into()));
    Ok(&(&four * &GaussianRational::from_rational(det.norm_sqr())) / &(&norm2 * &norm2))
}
