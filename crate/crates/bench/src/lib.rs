//! Shared helpers for the benchmark targets.

use symsim_core::{GaussianRational, Rational, SparseMatrix};

/// Deterministic pseudo-random sparse matrix with small rational entries.
pub fn random_sparse(seed: u64, n: usize, density_percent: u64) -> SparseMatrix {
    // Tiny xorshift so the benches do not need an RNG dependency here.
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut m = SparseMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            if next() % 100 < density_percent {
                let num = (next() % 7) as i64 - 3;
                let den = (next() % 2 + 1) as i64;
                let re = Rational::new(num.into(), den.into());
                let im = Rational::new(((next() % 5) as i64 - 2).into(), 1.into());
                let v = GaussianRational::new(re, im);
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
    }
    m
}
