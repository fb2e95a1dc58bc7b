//! Prime-field linear algebra for the fast rank path.
//!
//! Ranks of very large stacked constraint systems are computed modulo a
//! random 62-bit prime `p ≡ 1 (mod 4)`, embedding the imaginary unit as a
//! square root of -1. The rank over `F_p` is a lower bound on the rational
//! rank; it matches with overwhelming probability, and the test suite
//! cross-checks it against exact ranks wherever both are affordable.
//!
//! Small systems are eliminated directly; large ones go through a
//! Wiedemann/Berlekamp-Massey minimal-polynomial rank with random diagonal
//! preconditioners, after a singleton-propagation pass that strips
//! constraints touching just one unknown (diagonal operators produce many).

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

use crate::scalar::{GaussianRational, Rational};

/// Montgomery-form arithmetic modulo a 62-bit prime.
///
/// All element values handled by this struct are in Montgomery form
/// (`x·2^64 mod p`); zero is zero in both forms, which is all the
/// elimination code needs to test.
#[derive(Clone, Debug)]
pub struct Fp {
    p: u64,
    neg_inv_p: u64, // -p⁻¹ mod 2^64
    r1: u64,        // 2^64 mod p, the Montgomery form of 1
    r2: u64,        // 2^128 mod p
    i_unit: u64,    // Montgomery form of a square root of -1
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p > (1 << 30) && p % 4 == 1 && is_prime_u64(p));
        // Newton iteration for p⁻¹ mod 2^64.
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let neg_inv_p = inv.wrapping_neg();
        let r1 = (u64::MAX % p + 1) % p;
        let r2 = ((r1 as u128 * r1 as u128) % p as u128) as u64;
        let mut fp = Self {
            p,
            neg_inv_p,
            r1,
            r2,
            i_unit: 0,
        };
        fp.i_unit = fp.from_u64(sqrt_minus_one(p));
        fp
    }

    /// Samples a random prime in `(2^61, 2^62)` congruent to 1 mod 4.
    pub fn random(rng: &mut impl Rng) -> Self {
        loop {
            let mut cand: u64 = rng.random_range((1u64 << 61) + 1..1u64 << 62);
            cand -= cand % 4;
            cand += 1;
            if is_prime_u64(cand) {
                return Self::new(cand);
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn one(&self) -> u64 {
        self.r1
    }

    // Montgomery reduction; valid for t < p·2^64, which every product of
    // reduced values satisfies since p < 2^62.
    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv_p);
        let mut r = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.r1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// Montgomery form of a plain residue.
    pub fn from_u64(&self, x: u64) -> u64 {
        self.redc(x as u128 * self.r2 as u128)
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = x.mod_floor(&p);
        let (_, digits) = r.to_u64_digits();
        self.from_u64(digits.first().copied().unwrap_or(0))
    }

    /// Maps a rational into the field; `None` when the denominator vanishes
    /// mod p (resample the prime in that case).
    pub fn from_rational(&self, x: &Rational) -> Option<u64> {
        let den = self.from_bigint(x.denom());
        if den == 0 {
            return None;
        }
        Some(self.mul(self.from_bigint(x.numer()), self.inv(den)))
    }

    /// Embeds `re + im·i` as `re + im·w` with `w² = -1`.
    pub fn from_gaussian(&self, x: &GaussianRational) -> Option<u64> {
        let re = self.from_rational(x.re())?;
        let im = self.from_rational(x.im())?;
        Some(self.add(re, self.mul(im, self.i_unit)))
    }
}

fn mulmod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u128(acc, base, m);
        }
        base = mulmod_u128(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn sqrt_minus_one(p: u64) -> u64 {
    // p ≡ 1 mod 4, so a quadratic non-residue g gives w = g^((p-1)/4).
    for g in 2u64.. {
        if powmod(g, (p - 1) / 2, p) == p - 1 {
            let w = powmod(g, (p - 1) / 4, p);
            debug_assert_eq!(mulmod_u128(w, w, p), p - 1);
            return w;
        }
    }
    unreachable!()
}

/// Sparse row over `F_p`: sorted by column, values nonzero Montgomery forms.
pub type ModRow = Vec<(u32, u64)>;

/// Result of the singleton pre-pass: `rank_from_singletons` pivots were
/// consumed; `rows` is the remaining system with columns renumbered densely
/// to `0..ncols_remaining`.
struct SingletonReduced {
    rank_from_singletons: usize,
    rows: Vec<ModRow>,
    ncols_remaining: usize,
}

/// Eliminates rows with exactly one nonzero entry. Such a pivot removes its
/// column from every other row without creating fill, so this is both exact
/// and cheap; constraints induced by diagonal operators reduce entirely here.
fn singleton_reduce(mut rows: Vec<ModRow>, ncols: usize) -> SingletonReduced {
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (id, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].push(id as u32);
        }
    }
    let mut killed = vec![false; ncols];
    let mut queue: Vec<u32> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.len() == 1)
        .map(|(id, _)| id as u32)
        .collect();
    let mut rank = 0usize;

    while let Some(id) = queue.pop() {
        let row = &rows[id as usize];
        if row.len() != 1 {
            continue; // became empty or was already consumed
        }
        let col = row[0].0 as usize;
        if killed[col] {
            rows[id as usize].clear();
            continue;
        }
        killed[col] = true;
        rank += 1;
        rows[id as usize].clear();
        for other in std::mem::take(&mut col_rows[col]) {
            if other == id {
                continue;
            }
            let r = &mut rows[other as usize];
            if let Ok(k) = r.binary_search_by_key(&(col as u32), |(c, _)| *c) {
                r.remove(k);
                if r.len() == 1 {
                    queue.push(other);
                }
            }
        }
    }

    // Renumber the surviving columns densely.
    let mut remap = vec![u32::MAX; ncols];
    let mut next = 0u32;
    for (c, k) in killed.iter().enumerate() {
        if !k {
            remap[c] = next;
            next += 1;
        }
    }
    let rows: Vec<ModRow> = rows
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.into_iter()
                .map(|(c, v)| (remap[c as usize], v))
                .collect()
        })
        .collect();
    SingletonReduced {
        rank_from_singletons: rank,
        rows,
        ncols_remaining: next as usize,
    }
}

/// Streaming echelon rank over `F_p` with a dense work vector.
fn echelon_rank(rows: &[ModRow], ncols: usize, fp: &Fp) -> usize {
    // pivot_of[c] = index into stored for the row with pivot column c.
    let mut pivot_of: Vec<u32> = vec![u32::MAX; ncols];
    let mut pivot_cols: Vec<u32> = Vec::new();
    let mut stored: Vec<ModRow> = Vec::new();
    let mut acc: Vec<u64> = vec![0; ncols];
    let mut touched: Vec<u32> = Vec::new();

    for row in rows {
        for &(c, v) in row {
            if acc[c as usize] == 0 && v != 0 {
                touched.push(c);
            }
            acc[c as usize] = fp.add(acc[c as usize], v);
        }
        // Reduce against existing pivots in ascending column order.
        let mut k = 0;
        while k < pivot_cols.len() {
            let pc = pivot_cols[k];
            k += 1;
            let f = acc[pc as usize];
            if f == 0 {
                continue;
            }
            let prow = &stored[pivot_of[pc as usize] as usize];
            for &(c, v) in prow {
                let old = acc[c as usize];
                if old == 0 {
                    touched.push(c);
                }
                acc[c as usize] = fp.sub(old, fp.mul(f, v));
            }
        }
        // Find the smallest surviving column.
        touched.sort_unstable();
        touched.dedup();
        let mut new_pivot: Option<u32> = None;
        for &c in touched.iter() {
            if acc[c as usize] != 0 {
                new_pivot = Some(c);
                break;
            }
        }
        if let Some(pc) = new_pivot {
            let inv = fp.inv(acc[pc as usize]);
            let mut monic: ModRow = Vec::new();
            for &c in touched.iter() {
                let v = acc[c as usize];
                if v != 0 {
                    monic.push((c, fp.mul(v, inv)));
                }
            }
            pivot_of[pc as usize] = stored.len() as u32;
            stored.push(monic);
            // Keep pivot columns sorted so reduction passes stay ordered.
            let pos = pivot_cols.partition_point(|&x| x < pc);
            pivot_cols.insert(pos, pc);
        }
        for &c in &touched {
            acc[c as usize] = 0;
        }
        touched.clear();
        if stored.len() == ncols {
            break; // full column rank reached
        }
    }
    stored.len()
}

/// Compressed sparse rows over `F_p`.
struct Csr {
    nrows: usize,
    ncols: usize,
    ptr: Vec<usize>,
    idx: Vec<u32>,
    val: Vec<u64>,
}

impl Csr {
    fn from_rows(rows: &[ModRow], ncols: usize) -> Self {
        let nnz = rows.iter().map(|r| r.len()).sum();
        let mut ptr = Vec::with_capacity(rows.len() + 1);
        let mut idx = Vec::with_capacity(nnz);
        let mut val = Vec::with_capacity(nnz);
        ptr.push(0);
        for row in rows {
            for &(c, v) in row {
                idx.push(c);
                val.push(v);
            }
            ptr.push(idx.len());
        }
        Self {
            nrows: rows.len(),
            ncols,
            ptr,
            idx,
            val,
        }
    }

    fn mul(&self, x: &[u64], out: &mut [u64], fp: &Fp) {
        for i in 0..self.nrows {
            let mut acc = 0u64;
            for k in self.ptr[i]..self.ptr[i + 1] {
                acc = fp.add(acc, fp.mul(self.val[k], x[self.idx[k] as usize]));
            }
            out[i] = acc;
        }
    }

    fn mul_transpose(&self, x: &[u64], out: &mut [u64], fp: &Fp) {
        out.fill(0);
        for i in 0..self.nrows {
            let xi = x[i];
            if xi == 0 {
                continue;
            }
            for k in self.ptr[i]..self.ptr[i + 1] {
                let j = self.idx[k] as usize;
                out[j] = fp.add(out[j], fp.mul(self.val[k], xi));
            }
        }
    }
}

/// Berlekamp-Massey: length of the shortest linear recurrence generating
/// `seq`, together with its trailing coefficient (zero iff x divides the
/// minimal polynomial).
fn berlekamp_massey(seq: &[u64], fp: &Fp) -> (usize, u64) {
    let n = seq.len();
    let mut c = vec![0u64; n + 1];
    let mut b = vec![0u64; n + 1];
    c[0] = fp.one();
    b[0] = fp.one();
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bb = fp.one();
    for i in 0..n {
        let mut d = seq[i];
        for k in 1..=l {
            d = fp.add(d, fp.mul(c[k], seq[i - k]));
        }
        if d == 0 {
            m += 1;
        } else if 2 * l <= i {
            let t = c.clone();
            let coef = fp.mul(d, fp.inv(bb));
            for k in 0..n + 1 - m {
                c[k + m] = fp.sub(c[k + m], fp.mul(coef, b[k]));
            }
            l = i + 1 - l;
            b = t;
            bb = d;
            m = 1;
        } else {
            let coef = fp.mul(d, fp.inv(bb));
            for k in 0..n + 1 - m {
                c[k + m] = fp.sub(c[k + m], fp.mul(coef, b[k]));
            }
            m += 1;
        }
    }
    (l, c[l])
}

/// Wiedemann rank of a sparse matrix over `F_p` with random diagonal
/// preconditioners: rank = deg(minpoly(D₁AᵗD₂AD₁)) minus one when x divides
/// the minimal polynomial. Monte Carlo; may only ever underestimate.
fn wiedemann_rank<R: Rng>(rows: &[ModRow], ncols: usize, fp: &Fp, rng: &mut R) -> usize {
    let csr = Csr::from_rows(rows, ncols);
    let n = csr.ncols;
    let m = csr.nrows;
    if n == 0 || m == 0 {
        return 0;
    }
    fn rand_el<R: Rng>(fp: &Fp, rng: &mut R, nonzero: bool) -> u64 {
        loop {
            let x = fp.from_u64(rng.random_range(0..fp.prime()));
            if !nonzero || x != 0 {
                return x;
            }
        }
    }
    let d1: Vec<u64> = (0..n).map(|_| rand_el(fp, rng, true)).collect();
    let d2: Vec<u64> = (0..m).map(|_| rand_el(fp, rng, true)).collect();
    let u: Vec<u64> = (0..n).map(|_| rand_el(fp, rng, false)).collect();
    let mut x: Vec<u64> = (0..n).map(|_| rand_el(fp, rng, false)).collect();

    let steps = 2 * n + 2;
    let mut seq = Vec::with_capacity(steps);
    let mut tn = vec![0u64; n];
    let mut tm = vec![0u64; m];
    for _ in 0..steps {
        let mut dot = 0u64;
        for j in 0..n {
            dot = fp.add(dot, fp.mul(u[j], x[j]));
        }
        seq.push(dot);
        // x <- D1 Aᵗ D2 A D1 x
        for j in 0..n {
            tn[j] = fp.mul(d1[j], x[j]);
        }
        csr.mul(&tn, &mut tm, fp);
        for i in 0..m {
            tm[i] = fp.mul(d2[i], tm[i]);
        }
        csr.mul_transpose(&tm, &mut tn, fp);
        for j in 0..n {
            x[j] = fp.mul(d1[j], tn[j]);
        }
    }
    let (deg, trailing) = berlekamp_massey(&seq, fp);
    let rank = if trailing == 0 { deg.saturating_sub(1) } else { deg };
    rank.min(n).min(m)
}

/// Columns above which the rank path switches from direct elimination to
/// Wiedemann iteration.
const WIEDEMANN_CUTOFF: usize = 900;

/// Rank of a sparse system over `F_p`. Rows must already be mapped into the
/// field (Montgomery form, sorted, zero-free).
pub fn rank_mod(rows: Vec<ModRow>, ncols: usize, fp: &Fp, rng: &mut impl Rng) -> usize {
    let reduced = singleton_reduce(rows, ncols);
    let extra = if reduced.rows.is_empty() || reduced.ncols_remaining == 0 {
        0
    } else if reduced.ncols_remaining <= WIEDEMANN_CUTOFF {
        echelon_rank(&reduced.rows, reduced.ncols_remaining, fp)
    } else {
        wiedemann_rank(&reduced.rows, reduced.ncols_remaining, fp, rng)
    };
    reduced.rank_from_singletons + extra
}
