//! Rank computation with exact and modular backends.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::elim;
use crate::modular::{rank_mod, Fp, ModRow};
use crate::sparse::SparseMatrix;

/// How a rank value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    Exact,
    Modular,
}

/// A computed rank. Modular ranks are Monte-Carlo lower bounds on the
/// rational rank (they can only ever be too small, with vanishing
/// probability for a random 62-bit prime); the test suite certifies them by
/// re-checking against exact ranks on every input where both are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub method: RankMethod,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prime: Option<u64>,
}

impl RankResult {
    pub fn exact(rank: usize) -> Self {
        Self {
            rank,
            method: RankMethod::Exact,
            prime: None,
        }
    }
}

/// Arithmetic selection for rank computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMode {
    Exact,
    Modular,
    /// Exact below the cell-count threshold, modular above it.
    #[default]
    Auto,
}

#[derive(Debug, Clone)]
pub struct RankOptions {
    pub mode: RankMode,
    /// `auto` switches to modular arithmetic when `nrows * ncols` of the
    /// constraint matrix exceeds this.
    pub auto_threshold_cells: usize,
    /// Seed for the modular path's randomness (prime and preconditioners);
    /// fresh entropy when absent.
    pub seed: Option<u64>,
}

pub const DEFAULT_AUTO_THRESHOLD_CELLS: usize = 50_000_000;

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            mode: RankMode::Auto,
            auto_threshold_cells: DEFAULT_AUTO_THRESHOLD_CELLS,
            seed: None,
        }
    }
}

impl RankOptions {
    pub fn exact() -> Self {
        Self {
            mode: RankMode::Exact,
            ..Self::default()
        }
    }

    pub fn method_for(&self, nrows: usize, ncols: usize) -> RankMethod {
        match self.mode {
            RankMode::Exact => RankMethod::Exact,
            RankMode::Modular => RankMethod::Modular,
            RankMode::Auto => {
                if nrows.saturating_mul(ncols) > self.auto_threshold_cells {
                    RankMethod::Modular
                } else {
                    RankMethod::Exact
                }
            }
        }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        match self.seed {
            Some(s) => ChaCha12Rng::seed_from_u64(s),
            None => ChaCha12Rng::from_rng(&mut rand::rng()),
        }
    }
}

/// Runs the modular rank over a freshly sampled prime. The row builder maps
/// exact data into the field and may fail when a denominator vanishes mod p,
/// in which case a new prime is drawn.
pub fn modular_rank_with<F>(ncols: usize, opts: &RankOptions, build: F) -> RankResult
where
    F: Fn(&Fp) -> Option<Vec<ModRow>>,
{
    let mut rng = opts.rng();
    loop {
        let fp = Fp::random(&mut rng);
        if let Some(rows) = build(&fp) {
            let rank = rank_mod(rows, ncols, &fp, &mut rng);
            return RankResult {
                rank,
                method: RankMethod::Modular,
                prime: Some(fp.prime()),
            };
        }
    }
}

fn matrix_mod_rows(m: &SparseMatrix, fp: &Fp) -> Option<Vec<ModRow>> {
    let mut rows: Vec<ModRow> = vec![Vec::new(); m.nrows()];
    for (i, j, v) in m.iter() {
        let mapped = fp.from_gaussian(v)?;
        if mapped != 0 {
            rows[i].push((j as u32, mapped));
        }
    }
    Some(rows)
}

/// Rank of a sparse matrix under the selected mode.
pub fn rank(m: &SparseMatrix, opts: &RankOptions) -> RankResult {
    match opts.method_for(m.nrows(), m.ncols()) {
        RankMethod::Exact => RankResult::exact(elim::rank_exact(m)),
        RankMethod::Modular => {
            modular_rank_with(m.ncols(), opts, |fp| matrix_mod_rows(m, fp))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, GaussianRational};

    fn seeded(mode: RankMode) -> RankOptions {
        RankOptions {
            mode,
            seed: Some(12345),
            ..Default::default()
        }
    }

    #[test]
    fn identity_rank_both_methods() {
        let id = SparseMatrix::identity(6);
        let exact = rank(&id, &seeded(RankMode::Exact));
        let modular = rank(&id, &seeded(RankMode::Modular));
        assert_eq!(exact.rank, 6);
        assert_eq!(modular.rank, 6);
        assert_eq!(exact.method, RankMethod::Exact);
        assert_eq!(modular.method, RankMethod::Modular);
        assert!(modular.prime.unwrap() > 1 << 30);
    }

    #[test]
    fn modular_matches_exact_on_rational_matrices() {
        // Three independent rows, then two linear combinations of them:
        // the rank is 3 by construction.
        let mut m = SparseMatrix::zero(5, 7);
        let mut v = 1i64;
        for i in 0..3 {
            for j in 0..7 {
                if (i + j) % 3 != 0 {
                    m.set(
                        i,
                        j,
                        GaussianRational::new(ratio(v, 1 + (j as i64)), ratio(-v, 5)),
                    );
                    v += 3;
                }
            }
        }
        for j in 0..7 {
            let two_a = m.get(0, j) * GaussianRational::new(rat(2), rat(1));
            m.set(3, j, two_a);
            let b_plus_c = m.get(1, j) + &m.get(2, j);
            m.set(4, j, b_plus_c);
        }
        let exact = rank(&m, &seeded(RankMode::Exact));
        let modular = rank(&m, &seeded(RankMode::Modular));
        assert_eq!(exact.rank, modular.rank);
        assert_eq!(exact.rank, 3);
    }

    #[test]
    fn auto_mode_respects_threshold() {
        let opts = RankOptions {
            mode: RankMode::Auto,
            auto_threshold_cells: 10,
            seed: Some(1),
        };
        assert_eq!(opts.method_for(3, 3), RankMethod::Exact);
        assert_eq!(opts.method_for(4, 3), RankMethod::Modular);
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let z = SparseMatrix::zero(0, 0);
        assert_eq!(rank(&z, &seeded(RankMode::Exact)).rank, 0);
        let z2 = SparseMatrix::zero(3, 4);
        assert_eq!(rank(&z2, &seeded(RankMode::Modular)).rank, 0);
    }
}
