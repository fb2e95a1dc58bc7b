//! Sparse matrices over the Gaussian rationals.
//!
//! Entries live in a `BTreeMap` keyed by `(row, col)` so that iteration order
//! is deterministic (row-major). Zero values are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::scalar::{GaussianRational, Rational};

/// Errors from shape-checked matrix operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch in {op}: left is {lhs_rows}x{lhs_cols}, right is {rhs_rows}x{rhs_cols}")]
    DimensionMismatch {
        op: &'static str,
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("entry index ({row}, {col}) out of bounds for {rows}x{cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// Sparse matrix with exact complex-rational entries.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    entries: BTreeMap<(usize, usize), GaussianRational>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for k in 0..n {
            m.entries.insert((k, k), GaussianRational::one());
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples, summing duplicates.
    pub fn from_entries<I>(nrows: usize, ncols: usize, entries: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (usize, usize, GaussianRational)>,
    {
        let mut m = Self::zero(nrows, ncols);
        for (i, j, v) in entries {
            if i >= nrows || j >= ncols {
                return Err(MatrixError::IndexOutOfBounds {
                    row: i,
                    col: j,
                    rows: nrows,
                    cols: ncols,
                });
            }
            m.add_to_entry(i, j, v);
        }
        Ok(m)
    }

    /// Column vector from dense coefficients.
    pub fn column_from_slice(values: &[GaussianRational]) -> Self {
        let mut m = Self::zero(values.len(), 1);
        for (i, v) in values.iter().enumerate() {
            if !v.is_zero() {
                m.entries.insert((i, 0), v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> GaussianRational {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: GaussianRational) {
        assert!(row < self.nrows && col < self.ncols, "index out of bounds");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_to_entry(&mut self, row: usize, col: usize, value: GaussianRational) {
        if value.is_zero() {
            return;
        }
        let slot = self
            .entries
            .entry((row, col))
            .or_insert_with(GaussianRational::zero);
        *slot += &value;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    /// Row-major iteration over nonzero entries.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &GaussianRational)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// Nonzero entries of one row.
    pub fn row_iter(&self, row: usize) -> impl Iterator<Item = (usize, &GaussianRational)> {
        self.entries
            .range((row, 0)..=(row, self.ncols.max(1) - 1))
            .map(|(&(_, j), v)| (j, v))
    }

    fn shape_check(
        &self,
        rhs: &Self,
        op: &'static str,
        want_equal: bool,
    ) -> Result<(), MatrixError> {
        let bad = if want_equal {
            self.nrows != rhs.nrows || self.ncols != rhs.ncols
        } else {
            self.ncols != rhs.nrows
        };
        if bad {
            return Err(MatrixError::DimensionMismatch {
                op,
                lhs_rows: self.nrows,
                lhs_cols: self.ncols,
                rhs_rows: rhs.nrows,
                rhs_cols: rhs.ncols,
            });
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.shape_check(rhs, "add", true)?;
        let mut out = self.clone();
        for (i, j, v) in rhs.iter() {
            out.add_to_entry(i, j, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.shape_check(rhs, "sub", true)?;
        let mut out = self.clone();
        for (i, j, v) in rhs.iter() {
            out.add_to_entry(i, j, -v);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nrows, self.ncols);
        for (i, j, v) in self.iter() {
            out.entries.insert((i, j), -v);
        }
        out
    }

    pub fn scale(&self, factor: &GaussianRational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.nrows, self.ncols);
        }
        let mut out = Self::zero(self.nrows, self.ncols);
        for (i, j, v) in self.iter() {
            out.entries.insert((i, j), factor * v);
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        self.shape_check(rhs, "matmul", false)?;
        let mut out = Self::zero(self.nrows, rhs.ncols);
        for (i, k, a) in self.iter() {
            for (j, b) in rhs.row_iter(k) {
                out.add_to_entry(i, j, a * b);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.ncols, self.nrows);
        for (i, j, v) in self.iter() {
            out.entries.insert((j, i), v.clone());
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.nrows, self.ncols);
        for (i, j, v) in self.iter() {
            out.entries.insert((i, j), v.conj());
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero(self.ncols, self.nrows);
        for (i, j, v) in self.iter() {
            out.entries.insert((j, i), v.conj());
        }
        out
    }

    pub fn trace(&self) -> Result<GaussianRational, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                op: "trace",
                rows: self.nrows,
                cols: self.ncols,
            });
        }
        let mut t = GaussianRational::zero();
        for k in 0..self.nrows {
            if let Some(v) = self.entries.get(&(k, k)) {
                t += v;
            }
        }
        Ok(t)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.dagger()
    }

    pub fn is_skew_hermitian(&self) -> bool {
        self.is_square() && self.dagger() == self.neg()
    }

    pub fn is_diagonal(&self) -> bool {
        self.iter().all(|(i, j, _)| i == j)
    }

    /// Kronecker product. Entry `((i*b.nrows+k), (j*b.ncols+l))` equals
    /// `a[i,j] * b[k,l]`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.nrows * rhs.nrows, self.ncols * rhs.ncols);
        for (i, j, a) in self.iter() {
            for (k, l, b) in rhs.iter() {
                out.entries
                    .insert((i * rhs.nrows + k, j * rhs.ncols + l), a * b);
            }
        }
        out
    }

    /// Column-major vectorization: entry `(i, j)` lands at position
    /// `j * nrows + i`, so that `vec(A S B) = (Bᵗ ⊗ A) vec(S)`.
    pub fn vec_columns(&self) -> Self {
        let mut out = Self::zero(self.nrows * self.ncols, 1);
        for (i, j, v) in self.iter() {
            out.entries.insert((j * self.nrows + i, 0), v.clone());
        }
        out
    }

    /// Inverse of [`vec_columns`]: reshape a length `nrows*ncols` column
    /// vector back into a matrix.
    pub fn from_vec_columns(nrows: usize, ncols: usize, v: &Self) -> Result<Self, MatrixError> {
        if v.ncols != 1 || v.nrows != nrows * ncols {
            return Err(MatrixError::DimensionMismatch {
                op: "from_vec_columns",
                lhs_rows: nrows,
                lhs_cols: ncols,
                rhs_rows: v.nrows,
                rhs_cols: v.ncols,
            });
        }
        let mut out = Self::zero(nrows, ncols);
        for (k, _, val) in v.iter() {
            out.entries.insert((k % nrows, k / nrows), val.clone());
        }
        Ok(out)
    }

    /// `[a, b] = ab - ba` for square matrices of equal size.
    pub fn commutator(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if !self.is_square() || !rhs.is_square() || self.nrows != rhs.nrows {
            return Err(MatrixError::DimensionMismatch {
                op: "commutator",
                lhs_rows: self.nrows,
                lhs_cols: self.ncols,
                rhs_rows: rhs.nrows,
                rhs_cols: rhs.ncols,
            });
        }
        self.matmul(rhs)?.sub(&rhs.matmul(self)?)
    }

    /// Hilbert-Schmidt inner product `Tr(a† b) = Σ conj(a[i,j]) b[i,j]`.
    pub fn hs_inner(&self, rhs: &Self) -> Result<GaussianRational, MatrixError> {
        self.shape_check(rhs, "hs_inner", true)?;
        let mut acc = GaussianRational::zero();
        for (i, j, a) in self.iter() {
            if let Some(b) = rhs.entries.get(&(i, j)) {
                acc += &(a.conj() * b);
            }
        }
        Ok(acc)
    }

    /// The swap (commutation) matrix `K` of size `d²`, with
    /// `K (u ⊗ v) = v ⊗ u`.
    pub fn swap_matrix(d: usize) -> Self {
        let mut out = Self::zero(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                out.entries
                    .insert((i * d + j, j * d + i), GaussianRational::one());
            }
        }
        out
    }

    /// Rescales a nonzero matrix so that all entries are Gaussian integers
    /// with no common factor, and the first nonzero entry has positive real
    /// part (or positive imaginary part when the real part is zero). Returns
    /// the matrix unchanged when zero.
    pub fn primitive_scaled(&self) -> Self {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::Signed;

        if self.entries.is_empty() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::from(1);
        for (_, _, v) in self.iter() {
            denom_lcm = denom_lcm.lcm(v.re().denom());
            denom_lcm = denom_lcm.lcm(v.im().denom());
        }
        let mut numer_gcd = BigInt::from(0);
        let scale = Rational::from_integer(denom_lcm);
        for (_, _, v) in self.iter() {
            numer_gcd = numer_gcd.gcd((v.re() * &scale).numer());
            numer_gcd = numer_gcd.gcd((v.im() * &scale).numer());
        }
        let mut factor = scale / Rational::from_integer(numer_gcd);
        let first = self.entries.values().next().unwrap();
        let lead = if !first.re().is_zero() {
            first.re().clone()
        } else {
            first.im().clone()
        };
        if (lead * &factor).is_negative() {
            factor = -factor;
        }
        self.scale(&GaussianRational::from_rational(factor))
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows.min(16) {
            write!(f, "  [")?;
            for j in 0..self.ncols.min(16) {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}
