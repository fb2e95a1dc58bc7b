//! Linear and quadratic symmetries of generator sets.
//!
//! Linear symmetries of a set M are its commutant: all S with [S, m] = 0 for
//! every m in M, found as the joint nullspace of the stacked operators
//! (1 ⊗ m - mᵗ ⊗ 1) acting on vec(S). Quadratic symmetries are the commutant
//! of the tensor-square lifts m ⊗ 1 + 1 ⊗ m.
//!
//! Because every lift commutes with the swap matrix K, the quadratic
//! commutant splits into four independent intertwiner blocks along the
//! symmetric/antisymmetric decomposition of the doubled space. The engine
//! solves the blocks separately; this cuts the largest linear system from
//! d⁴ unknowns to roughly d⁴/4 and is transparent to callers: dimensions
//! add up and bases are re-canonicalized over the full space.

use num_traits::Zero;

use crate::elim::{self, nullspace_from_rref, rref, SparseVec};
use crate::modular::{Fp, ModRow};
use crate::rank::{modular_rank_with, RankMethod, RankOptions, RankResult};
use crate::scalar::{ratio, GaussianRational};
use crate::sparse::{MatrixError, SparseMatrix};

/// Which commutation problem a basis solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    Linear,
    Quadratic,
}

/// Canonical basis of a symmetry space. `dim == basis.len()` and the basis
/// is in reduced echelon form over vectorized coordinates, so equal spaces
/// produce identical bases.
#[derive(Debug, Clone)]
pub struct SymmetryBasis {
    pub dim: usize,
    pub basis: Vec<SparseMatrix>,
    pub kind: SymmetryKind,
}

fn check_generators(gens: &[SparseMatrix], dim: usize) -> Result<(), MatrixError> {
    for g in gens {
        if g.nrows() != dim || g.ncols() != dim {
            return Err(MatrixError::DimensionMismatch {
                op: "symmetry generators",
                lhs_rows: dim,
                lhs_cols: dim,
                rhs_rows: g.nrows(),
                rhs_cols: g.ncols(),
            });
        }
    }
    Ok(())
}

/// The tensor-square lift `m ⊗ 1 + 1 ⊗ m`.
pub fn tensor_square_lift(m: &SparseMatrix) -> SparseMatrix {
    let id = SparseMatrix::identity(m.nrows());
    m.kron(&id).add(&id.kron(m)).expect("shapes agree")
}

/// The d⁴×d⁴ operator whose kernel (jointly over generators) is the
/// vectorized quadratic commutant:
/// `1 ⊗ (m⊗1 + 1⊗m) - (m⊗1 + 1⊗m)ᵗ ⊗ 1`.
pub fn constraint_operator(m: &SparseMatrix) -> SparseMatrix {
    let l = tensor_square_lift(m);
    let id = SparseMatrix::identity(l.nrows());
    id.kron(&l)
        .sub(&l.transpose().kron(&id))
        .expect("shapes agree")
}

/// Constraint rows of `[S, m] = 0` over vec(S) in column-major layout:
/// row (i,j) encodes entry (i,j) of mS - Sm.
fn commutator_constraint_rows(m: &SparseMatrix, out: &mut Vec<SparseVec>) {
    let d = m.nrows();
    let mut rows_of: Vec<Vec<(usize, GaussianRational)>> = vec![Vec::new(); d];
    let mut cols_of: Vec<Vec<(usize, GaussianRational)>> = vec![Vec::new(); d];
    for (i, j, v) in m.iter() {
        rows_of[i].push((j, v.clone()));
        cols_of[j].push((i, v.clone()));
    }
    for i in 0..d {
        for j in 0..d {
            // (mS)[i,j] = Σ_k m[i,k] S[k,j]; (Sm)[i,j] = Σ_k S[i,k] m[k,j].
            let mut row: SparseVec = Vec::new();
            for (k, v) in &rows_of[i] {
                row.push((j * d + k, v.clone()));
            }
            for (k, v) in &cols_of[j] {
                row.push((k * d + i, -v));
            }
            row.sort_by_key(|(c, _)| *c);
            // Merge duplicates (the (i,j) unknown can appear from both sums).
            let mut merged: SparseVec = Vec::with_capacity(row.len());
            for (c, v) in row {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => {
                        *lv += &v;
                        if lv.is_zero() {
                            merged.pop();
                        }
                    }
                    _ => merged.push((c, v)),
                }
            }
            if !merged.is_empty() {
                out.push(merged);
            }
        }
    }
}

fn unvec_square(d: usize, v: &SparseVec) -> SparseMatrix {
    let mut m = SparseMatrix::zero(d, d);
    for (k, val) in v {
        m.set(k % d, k / d, val.clone());
    }
    m
}

/// Canonical basis of the commutant `{S : [S,m]=0 for all m}`. The ambient
/// dimension must be given so the empty generator set is meaningful (its
/// commutant is everything).
pub fn commutant(gens: &[SparseMatrix], dim: usize) -> Result<SymmetryBasis, MatrixError> {
    check_generators(gens, dim)?;
    let mut rows = Vec::new();
    for g in gens {
        commutator_constraint_rows(g, &mut rows);
    }
    let r = rref(rows, dim * dim);
    let basis: Vec<SparseMatrix> = nullspace_from_rref(&r)
        .iter()
        .map(|v| unvec_square(dim, v))
        .collect();
    Ok(SymmetryBasis {
        dim: basis.len(),
        basis,
        kind: SymmetryKind::Linear,
    })
}

/// Canonical basis of the center of the commutant: all C commuting with the
/// generators and with every element of their commutant.
pub fn center_of_commutant(
    gens: &[SparseMatrix],
    dim: usize,
) -> Result<Vec<SparseMatrix>, MatrixError> {
    let linear = commutant(gens, dim)?;
    Ok(center_from_commutant(gens, &linear, dim))
}

/// Center computation when the commutant basis is already known.
pub fn center_from_commutant(
    gens: &[SparseMatrix],
    linear: &SymmetryBasis,
    dim: usize,
) -> Vec<SparseMatrix> {
    let mut rows = Vec::new();
    for g in gens {
        commutator_constraint_rows(g, &mut rows);
    }
    for s in &linear.basis {
        commutator_constraint_rows(s, &mut rows);
    }
    let r = rref(rows, dim * dim);
    nullspace_from_rref(&r)
        .iter()
        .map(|v| unvec_square(dim, v))
        .collect()
}

/// Change-of-basis data for the swap-symmetric/antisymmetric splitting of
/// the doubled space.
struct TensorSplit {
    d: usize,
    dim_sym: usize,
    dim_anti: usize,
    /// d² × dim_sym, columns are e_u⊗e_v + e_v⊗e_u (u<v) or e_u⊗e_u.
    iota_sym: SparseMatrix,
    /// dim_sym × d², left inverse of iota_sym vanishing on the antisymmetric part.
    pi_sym: SparseMatrix,
    iota_anti: SparseMatrix,
    pi_anti: SparseMatrix,
}

impl TensorSplit {
    fn new(d: usize) -> Self {
        let dim_sym = d * (d + 1) / 2;
        let dim_anti = d * (d - 1) / 2;
        let half = GaussianRational::from_rational(ratio(1, 2));
        let one = GaussianRational::one();

        let mut iota_sym = SparseMatrix::zero(d * d, dim_sym);
        let mut pi_sym = SparseMatrix::zero(dim_sym, d * d);
        let mut iota_anti = SparseMatrix::zero(d * d, dim_anti);
        let mut pi_anti = SparseMatrix::zero(dim_anti, d * d);

        let mut s = 0;
        for u in 0..d {
            for v in u..d {
                iota_sym.set(u * d + v, s, one.clone());
                if u == v {
                    pi_sym.set(s, u * d + v, one.clone());
                } else {
                    iota_sym.set(v * d + u, s, one.clone());
                    pi_sym.set(s, u * d + v, half.clone());
                    pi_sym.set(s, v * d + u, half.clone());
                }
                s += 1;
            }
        }
        let mut a = 0;
        for u in 0..d {
            for v in u + 1..d {
                iota_anti.set(u * d + v, a, one.clone());
                iota_anti.set(v * d + u, a, -&one);
                pi_anti.set(a, u * d + v, half.clone());
                pi_anti.set(a, v * d + u, -&half);
                a += 1;
            }
        }
        Self {
            d,
            dim_sym,
            dim_anti,
            iota_sym,
            pi_sym,
            iota_anti,
            pi_anti,
        }
    }

    /// Restriction of a tensor-square lift to the two invariant subspaces.
    fn restrict_lift(&self, m: &SparseMatrix) -> (SparseMatrix, SparseMatrix) {
        let l = tensor_square_lift(m);
        let l_sym = self
            .pi_sym
            .matmul(&l.matmul(&self.iota_sym).unwrap())
            .unwrap();
        let l_anti = self
            .pi_anti
            .matmul(&l.matmul(&self.iota_anti).unwrap())
            .unwrap();
        (l_sym, l_anti)
    }
}

/// Adjacency form of a block operator for fast constraint-row generation.
struct BlockOp {
    dim: usize,
    rows_of: Vec<Vec<(usize, GaussianRational)>>,
    cols_of: Vec<Vec<(usize, GaussianRational)>>,
}

impl BlockOp {
    fn new(m: &SparseMatrix) -> Self {
        let dim = m.nrows();
        let mut rows_of: Vec<Vec<(usize, GaussianRational)>> = vec![Vec::new(); dim];
        let mut cols_of: Vec<Vec<(usize, GaussianRational)>> = vec![Vec::new(); dim];
        for (i, j, v) in m.iter() {
            rows_of[i].push((j, v.clone()));
            cols_of[j].push((i, v.clone()));
        }
        Self {
            dim,
            rows_of,
            cols_of,
        }
    }
}

/// Rows of `X L_b - L_a X = 0` over vec(X) in row-major layout
/// (`X[r,c]` at column `r * dim_b + c`).
fn intertwiner_rows_exact(la: &BlockOp, lb: &BlockOp, out: &mut Vec<SparseVec>) {
    let (da, db) = (la.dim, lb.dim);
    for i in 0..da {
        for j in 0..db {
            // (X L_b)[i,j] = Σ_k X[i,k] L_b[k,j]; (L_a X)[i,j] = Σ_k L_a[i,k] X[k,j].
            let mut row: SparseVec = Vec::new();
            for (k, v) in &lb.cols_of[j] {
                row.push((i * db + k, v.clone()));
            }
            for (k, v) in &la.rows_of[i] {
                row.push((k * db + j, -v));
            }
            row.sort_by_key(|(c, _)| *c);
            let mut merged: SparseVec = Vec::with_capacity(row.len());
            for (c, v) in row {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => {
                        *lv += &v;
                        if lv.is_zero() {
                            merged.pop();
                        }
                    }
                    _ => merged.push((c, v)),
                }
            }
            if !merged.is_empty() {
                out.push(merged);
            }
        }
    }
}

struct BlockOpMod {
    dim: usize,
    rows_of: Vec<Vec<(usize, u64)>>,
    cols_of: Vec<Vec<(usize, u64)>>,
}

impl BlockOpMod {
    fn new(m: &SparseMatrix, fp: &Fp) -> Option<Self> {
        let dim = m.nrows();
        let mut rows_of: Vec<Vec<(usize, u64)>> = vec![Vec::new(); dim];
        let mut cols_of: Vec<Vec<(usize, u64)>> = vec![Vec::new(); dim];
        for (i, j, v) in m.iter() {
            let mapped = fp.from_gaussian(v)?;
            if mapped != 0 {
                rows_of[i].push((j, mapped));
                cols_of[j].push((i, mapped));
            }
        }
        Some(Self {
            dim,
            rows_of,
            cols_of,
        })
    }
}

fn intertwiner_rows_mod(la: &BlockOpMod, lb: &BlockOpMod, fp: &Fp, out: &mut Vec<ModRow>) {
    let (da, db) = (la.dim, lb.dim);
    for i in 0..da {
        for j in 0..db {
            let mut row: Vec<(u32, u64)> = Vec::new();
            for (k, v) in &lb.cols_of[j] {
                row.push(((i * db + k) as u32, *v));
            }
            for (k, v) in &la.rows_of[i] {
                row.push(((k * db + j) as u32, fp.neg(*v)));
            }
            row.sort_by_key(|(c, _)| *c);
            let mut merged: ModRow = Vec::with_capacity(row.len());
            for (c, v) in row {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => {
                        *lv = fp.add(*lv, v);
                        if *lv == 0 {
                            merged.pop();
                        }
                    }
                    _ => merged.push((c, v)),
                }
            }
            if !merged.is_empty() {
                out.push(merged);
            }
        }
    }
}

/// Searches low-depth nested commutators of the generators for diagonal
/// elements of the generated algebra. Diagonal elements contribute
/// single-unknown constraint rows to the quadratic systems, which the
/// elimination consumes for free, so finding a few up front shrinks the
/// expensive part of the computation. Soundness: every returned matrix lies
/// in the generated Lie algebra, and a set and its closure share the same
/// quadratic symmetries.
fn diagonal_enrichment(gens: &[SparseMatrix], dim: usize) -> Vec<SparseMatrix> {
    const MAX_ELEMENTS: usize = 40;
    const MAX_DEPTH: usize = 3;

    if gens.is_empty() {
        return Vec::new();
    }
    let mut echelon = elim::RationalEchelon::new();
    let mut elements: Vec<SparseMatrix> = Vec::new();
    for g in gens {
        let p = g.primitive_scaled();
        if echelon.insert(elim::flatten_real(&p)) {
            elements.push(p);
        }
    }
    let mut wave_start = 0;
    for _ in 0..MAX_DEPTH {
        let wave_end = elements.len();
        if wave_start == wave_end || elements.len() >= MAX_ELEMENTS {
            break;
        }
        for gi in 0..gens.len().min(wave_end) {
            for ej in wave_start..wave_end {
                if elements.len() >= MAX_ELEMENTS {
                    break;
                }
                let c = elements[gi]
                    .commutator(&elements[ej])
                    .expect("square generators")
                    .primitive_scaled();
                if c.is_zero() {
                    continue;
                }
                if echelon.insert(elim::flatten_real(&c)) {
                    elements.push(c);
                }
            }
        }
        wave_start = wave_end;
    }

    // Solve for real combinations with vanishing off-diagonal part.
    let mut coord_rows: std::collections::BTreeMap<usize, SparseVec> =
        std::collections::BTreeMap::new();
    for (col, m) in elements.iter().enumerate() {
        for (i, j, v) in m.iter() {
            if i == j {
                continue;
            }
            let base = 2 * (i * dim + j);
            if !v.re().is_zero() {
                coord_rows.entry(base).or_default().push((
                    col,
                    GaussianRational::from_rational(v.re().clone()),
                ));
            }
            if !v.im().is_zero() {
                coord_rows.entry(base + 1).or_default().push((
                    col,
                    GaussianRational::from_rational(v.im().clone()),
                ));
            }
        }
    }
    let r = rref(coord_rows.into_values().collect(), elements.len());
    nullspace_from_rref(&r)
        .iter()
        .filter_map(|combo| {
            let mut acc = SparseMatrix::zero(dim, dim);
            for (idx, coeff) in combo {
                acc = acc.add(&elements[*idx].scale(coeff)).unwrap();
            }
            let acc = acc.primitive_scaled();
            if acc.is_zero() {
                None
            } else {
                debug_assert!(acc.is_diagonal());
                Some(acc)
            }
        })
        .collect()
}

/// Per-block rank metadata from a quadratic-commutant computation.
#[derive(Debug, Clone)]
pub struct QuadraticDims {
    pub dim: usize,
    pub block_ranks: Vec<RankResult>,
}

impl QuadraticDims {
    pub fn used_modular(&self) -> bool {
        self.block_ranks
            .iter()
            .any(|r| r.method == RankMethod::Modular)
    }

    pub fn primes(&self) -> Vec<u64> {
        self.block_ranks.iter().filter_map(|r| r.prime).collect()
    }
}

/// Dimension of the quadratic commutant (joint kernel of the constraint
/// operators over all generators), computed block-wise without materializing
/// a basis. Rank arithmetic follows `opts`.
pub fn quadratic_commutant_dims(
    gens: &[SparseMatrix],
    dim: usize,
    opts: &RankOptions,
) -> Result<QuadraticDims, MatrixError> {
    check_generators(gens, dim)?;
    let split = TensorSplit::new(dim);
    let mut constraint_gens = gens.to_vec();
    constraint_gens.extend(diagonal_enrichment(gens, dim));
    let lifts: Vec<(SparseMatrix, SparseMatrix)> = constraint_gens
        .iter()
        .map(|g| split.restrict_lift(g))
        .collect();

    let mut total = 0usize;
    let mut block_ranks = Vec::with_capacity(4);
    for (da, db, pick_a, pick_b) in [
        (split.dim_sym, split.dim_sym, true, true),
        (split.dim_sym, split.dim_anti, true, false),
        (split.dim_anti, split.dim_sym, false, true),
        (split.dim_anti, split.dim_anti, false, false),
    ] {
        let ncols = da * db;
        let nrows = constraint_gens.len() * ncols;
        let result = match opts.method_for(nrows, ncols) {
            RankMethod::Exact => {
                let mut rows = Vec::new();
                for (ls, la) in &lifts {
                    let a = BlockOp::new(if pick_a { ls } else { la });
                    let b = BlockOp::new(if pick_b { ls } else { la });
                    intertwiner_rows_exact(&a, &b, &mut rows);
                }
                RankResult::exact(elim::rank_of_rows(rows, ncols))
            }
            RankMethod::Modular => modular_rank_with(ncols, opts, |fp| {
                let mut rows = Vec::new();
                for (ls, la) in &lifts {
                    let a = BlockOpMod::new(if pick_a { ls } else { la }, fp)?;
                    let b = BlockOpMod::new(if pick_b { ls } else { la }, fp)?;
                    intertwiner_rows_mod(&a, &b, fp, &mut rows);
                }
                Some(rows)
            }),
        };
        total += ncols - result.rank;
        block_ranks.push(result);
    }
    Ok(QuadraticDims {
        dim: total,
        block_ranks,
    })
}

/// Exact canonical basis of the quadratic commutant, as d²×d² matrices.
///
/// Solved block-wise and re-canonicalized over the full doubled space; the
/// result is the reduced-echelon basis of the joint kernel, identical to
/// what direct elimination of the stacked constraint operators produces.
pub fn quadratic_commutant(
    gens: &[SparseMatrix],
    dim: usize,
) -> Result<SymmetryBasis, MatrixError> {
    check_generators(gens, dim)?;
    let split = TensorSplit::new(dim);
    let mut constraint_gens = gens.to_vec();
    constraint_gens.extend(diagonal_enrichment(gens, dim));
    let lifts: Vec<(SparseMatrix, SparseMatrix)> = constraint_gens
        .iter()
        .map(|g| split.restrict_lift(g))
        .collect();

    let mut embedded: Vec<SparseMatrix> = Vec::new();
    for (da, db, pick_a, pick_b) in [
        (split.dim_sym, split.dim_sym, true, true),
        (split.dim_sym, split.dim_anti, true, false),
        (split.dim_anti, split.dim_sym, false, true),
        (split.dim_anti, split.dim_anti, false, false),
    ] {
        let ncols = da * db;
        let mut rows = Vec::new();
        for (ls, la) in &lifts {
            let a = BlockOp::new(if pick_a { ls } else { la });
            let b = BlockOp::new(if pick_b { ls } else { la });
            intertwiner_rows_exact(&a, &b, &mut rows);
        }
        let r = rref(rows, ncols);
        for v in nullspace_from_rref(&r) {
            // Unpack vec(X) (row-major) into the block map X: W_b -> W_a.
            let mut x = SparseMatrix::zero(da, db);
            for (k, val) in &v {
                x.set(k / db, k % db, val.clone());
            }
            let iota = if pick_a { &split.iota_sym } else { &split.iota_anti };
            let pi = if pick_b { &split.pi_sym } else { &split.pi_anti };
            let s_full = iota.matmul(&x.matmul(pi).unwrap()).unwrap();
            embedded.push(s_full);
        }
    }

    let vecs: Vec<SparseMatrix> = embedded.iter().map(|s| s.vec_columns()).collect();
    let canonical = elim::canonical_span_basis(&vecs);
    let d2 = split.d * split.d;
    let basis: Vec<SparseMatrix> = canonical
        .iter()
        .map(|v| SparseMatrix::from_vec_columns(d2, d2, v).unwrap())
        .collect();
    debug_assert_eq!(basis.len(), embedded.len());
    Ok(SymmetryBasis {
        dim: basis.len(),
        basis,
        kind: SymmetryKind::Quadratic,
    })
}
