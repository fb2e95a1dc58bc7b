//! Exact sparse Gaussian elimination over the Gaussian rationals.
//!
//! The forward pass picks pivots with a Markowitz-style heuristic (shortest
//! row first, then least-populated column, preferring unit-like pivot values;
//! ties broken by lowest index). A back-substitution pass then produces the
//! reduced row echelon form, which is unique regardless of pivot order, so
//! nullspace bases derived from it are canonical and deterministic.

use num_traits::Zero;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::scalar::GaussianRational;
use crate::sparse::SparseMatrix;

/// Sparse vector: entries sorted by index, no zeros stored.
pub type SparseVec = Vec<(usize, GaussianRational)>;

/// `dst - factor * src`, merged by index.
pub fn axpy(dst: &SparseVec, factor: &GaussianRational, src: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let mut a = dst.iter().peekable();
    let mut b = src.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some((ia, va)), Some((ib, vb))) => {
                if ia < ib {
                    out.push((*ia, va.clone()));
                    a.next();
                } else if ib < ia {
                    out.push((*ib, -&(factor * vb)));
                    b.next();
                } else {
                    let v = va.clone() - &(factor * vb);
                    if !v.is_zero() {
                        out.push((*ia, v));
                    }
                    a.next();
                    b.next();
                }
            }
            (Some((ia, va)), None) => {
                out.push((*ia, va.clone()));
                a.next();
            }
            (None, Some((ib, vb))) => {
                out.push((*ib, -&(factor * vb)));
                b.next();
            }
            (None, None) => break,
        }
    }
    out
}

fn scale_vec(v: &SparseVec, factor: &GaussianRational) -> SparseVec {
    v.iter().map(|(i, x)| (*i, factor * x)).collect()
}

fn vec_get(v: &SparseVec, idx: usize) -> Option<&GaussianRational> {
    v.binary_search_by_key(&idx, |(i, _)| *i)
        .ok()
        .map(|k| &v[k].1)
}

/// Reduced row echelon form. `rows[k]` is monic with leading entry in column
/// `pivots[k]`, pivot columns strictly increasing, and every pivot column is
/// zero in all other rows.
pub struct Rref {
    pub ncols: usize,
    pub pivots: Vec<usize>,
    pub rows: Vec<SparseVec>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Forward elimination with Markowitz-style pivoting. Returns an
/// independent set of rows spanning the input row space; their count is the
/// rank. Pivot choice here is a performance heuristic only — callers that
/// need canonical output go through [`rref`].
pub fn eliminate(input_rows: Vec<SparseVec>, ncols: usize) -> Vec<SparseVec> {
    let mut rows: Vec<Option<SparseVec>> = Vec::with_capacity(input_rows.len());
    let mut col_count = vec![0usize; ncols];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();

    for row in input_rows {
        if row.is_empty() {
            continue;
        }
        let id = rows.len();
        for (c, _) in &row {
            col_count[*c] += 1;
            col_rows[*c].push(id);
        }
        heap.push(Reverse((row.len(), id)));
        rows.push(Some(row));
    }

    let mut finished: Vec<(usize, SparseVec)> = Vec::new();

    while let Some(Reverse((nnz, id))) = heap.pop() {
        let Some(row) = rows[id].as_ref() else {
            continue;
        };
        if row.len() != nnz {
            continue; // stale heap entry
        }

        // Choose the pivot column within this row.
        let mut best: Option<(usize, bool, usize)> = None; // (count, !unit_like, col)
        for (c, v) in row {
            let key = (col_count[*c], !v.is_unit_like(), *c);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let pivot_col = best.unwrap().2;

        // Detach and normalize the pivot row.
        let mut pivot_row = rows[id].take().unwrap();
        for (c, _) in &pivot_row {
            col_count[*c] -= 1;
        }
        let lead = vec_get(&pivot_row, pivot_col).unwrap().clone();
        if lead != GaussianRational::one() {
            pivot_row = scale_vec(&pivot_row, &lead.inv());
        }

        // Eliminate the pivot column from every other live row.
        let candidates = std::mem::take(&mut col_rows[pivot_col]);
        for other_id in candidates {
            let Some(other) = rows[other_id].as_ref() else {
                continue;
            };
            let Some(factor) = vec_get(other, pivot_col).cloned() else {
                continue;
            };
            let updated = axpy(other, &factor, &pivot_row);
            for (c, _) in rows[other_id].as_ref().unwrap() {
                col_count[*c] -= 1;
            }
            if updated.is_empty() {
                rows[other_id] = None;
            } else {
                for (c, _) in &updated {
                    col_count[*c] += 1;
                    col_rows[*c].push(other_id);
                }
                heap.push(Reverse((updated.len(), other_id)));
                rows[other_id] = Some(updated);
            }
        }

        finished.push((pivot_col, pivot_row));
    }

    finished.into_iter().map(|(_, row)| row).collect()
}

/// Rank over the complex rationals of a stack of sparse rows.
pub fn rank_of_rows(rows: Vec<SparseVec>, ncols: usize) -> usize {
    eliminate(rows, ncols).len()
}

/// Computes the reduced row echelon form: pivots are the leading columns,
/// each pivot column vanishes in every other row, rows are monic and sorted
/// by pivot. The result is unique for a given row space.
pub fn rref(input_rows: Vec<SparseVec>, ncols: usize) -> Rref {
    let independent = eliminate(input_rows, ncols);

    // Strict leading-column echelon. The inputs are independent, so each
    // lands on a fresh pivot column.
    let mut by_pivot: std::collections::BTreeMap<usize, SparseVec> =
        std::collections::BTreeMap::new();
    for mut v in independent {
        while let Some((lead, coeff)) = v.first().map(|(i, x)| (*i, x.clone())) {
            match by_pivot.get(&lead) {
                Some(row) => v = axpy(&v, &coeff, row),
                None => {
                    if coeff != GaussianRational::one() {
                        v = scale_vec(&v, &coeff.inv());
                    }
                    by_pivot.insert(lead, v);
                    break;
                }
            }
        }
    }

    // Full reduction: clear every pivot column from all other rows,
    // descending so cleared rows stay cleared.
    let pivot_cols: Vec<usize> = by_pivot.keys().copied().collect();
    for &pc in pivot_cols.iter().rev() {
        let row = by_pivot.get(&pc).unwrap().clone();
        for (&other_pc, other) in by_pivot.iter_mut() {
            if other_pc == pc {
                continue;
            }
            if let Some(factor) = vec_get(other, pc).cloned() {
                *other = axpy(other, &factor, &row);
            }
        }
    }

    let (pivots, rows) = by_pivot.into_iter().unzip();
    Rref {
        ncols,
        pivots,
        rows,
    }
}

/// Canonical basis of the right nullspace, one vector per free column in
/// ascending column order. `rank + basis.len() == ncols` always holds.
pub fn nullspace_from_rref(r: &Rref) -> Vec<SparseVec> {
    let mut is_pivot = vec![false; r.ncols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::with_capacity(r.ncols - r.pivots.len());
    for free in 0..r.ncols {
        if is_pivot[free] {
            continue;
        }
        let mut v: SparseVec = Vec::new();
        for (k, &pc) in r.pivots.iter().enumerate() {
            if let Some(coeff) = vec_get(&r.rows[k], free) {
                v.push((pc, -coeff));
            }
        }
        v.push((free, GaussianRational::one()));
        v.sort_by_key(|(i, _)| *i);
        basis.push(v);
    }
    basis
}

fn matrix_rows(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut rows: Vec<SparseVec> = vec![Vec::new(); m.nrows()];
    for (i, j, v) in m.iter() {
        rows[i].push((j, v.clone()));
    }
    rows
}

fn column_from_sparse_vec(len: usize, v: &SparseVec) -> SparseMatrix {
    SparseMatrix::from_entries(len, 1, v.iter().map(|(i, x)| (*i, 0, x.clone())))
        .expect("nullspace vector within bounds")
}

/// Exact rank over the complex rationals.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    rank_of_rows(matrix_rows(m), m.ncols())
}

/// Exact canonical nullspace basis of `m`, returned as column vectors.
pub fn nullspace_basis(m: &SparseMatrix) -> Vec<SparseMatrix> {
    let r = rref(matrix_rows(m), m.ncols());
    nullspace_from_rref(&r)
        .iter()
        .map(|v| column_from_sparse_vec(m.ncols(), v))
        .collect()
}

/// Canonicalizes the span of the given column vectors: the result is the
/// unique reduced-echelon basis of their span, so any two spanning sets of
/// the same space map to identical output.
pub fn canonical_span_basis(vectors: &[SparseMatrix]) -> Vec<SparseMatrix> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let len = vectors[0].nrows();
    let rows: Vec<SparseVec> = vectors
        .iter()
        .map(|v| v.iter().map(|(i, _, x)| (i, x.clone())).collect())
        .collect();
    let r = rref(rows, len);
    r.rows
        .iter()
        .map(|v| column_from_sparse_vec(len, v))
        .collect()
}

/// Online echelon over the rationals (imaginary parts must be zero), used
/// for real-linear independence decisions. Rows are monic and only leading
/// terms are eliminated, which is all membership tests need.
pub struct RationalEchelon {
    rows: std::collections::BTreeMap<usize, SparseVec>,
}

impl Default for RationalEchelon {
    fn default() -> Self {
        Self::new()
    }
}

impl RationalEchelon {
    pub fn new() -> Self {
        Self {
            rows: std::collections::BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the echelon; the result is empty iff `v` lies in
    /// the current span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, coeff)) = v.first().map(|(i, x)| (*i, x.clone())) {
            match self.rows.get(&lead) {
                Some(row) => v = axpy(&v, &coeff, row),
                None => break,
            }
        }
        v
    }

    /// Inserts `v` if independent; returns true when the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let reduced = self.reduce(v);
        match reduced.first().map(|(i, _)| *i) {
            None => false,
            Some(lead) => {
                let inv = reduced[0].1.inv();
                let monic = scale_vec(&reduced, &inv);
                self.rows.insert(lead, monic);
                true
            }
        }
    }
}

/// Flattens a matrix into real coordinates: entry `(i, j) = a + b·i` becomes
/// the pair of coordinates `(2k, 2k+1) = (a, b)` with `k = i * ncols + j`.
pub fn flatten_real(m: &SparseMatrix) -> SparseVec {
    let mut v: SparseVec = Vec::with_capacity(2 * m.nnz());
    for (i, j, x) in m.iter() {
        let k = 2 * (i * m.ncols() + j);
        if !x.re().is_zero() {
            v.push((k, GaussianRational::from_rational(x.re().clone())));
        }
        if !x.im().is_zero() {
            v.push((k + 1, GaussianRational::from_rational(x.im().clone())));
        }
    }
    v
}

/// Dimension of the real-linear span of the given matrices, computed exactly
/// over the rationals on flattened (re, im) coordinates.
pub fn real_span_rank(mats: &[SparseMatrix]) -> Result<usize, crate::sparse::MatrixError> {
    let mut echelon = RationalEchelon::new();
    let mut shape: Option<(usize, usize)> = None;
    for m in mats {
        match shape {
            None => shape = Some((m.nrows(), m.ncols())),
            Some((r, c)) => {
                if m.nrows() != r || m.ncols() != c {
                    return Err(crate::sparse::MatrixError::DimensionMismatch {
                        op: "real_span_rank",
                        lhs_rows: r,
                        lhs_cols: c,
                        rhs_rows: m.nrows(),
                        rhs_cols: m.ncols(),
                    });
                }
            }
        }
        echelon.insert(flatten_real(m));
    }
    Ok(echelon.rank())
}
