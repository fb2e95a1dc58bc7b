//! The simulability decision procedure.
//!
//! Condition (A): the quadratic symmetry spaces of P and of P ∪ Q have equal
//! dimension. Condition (B): pairing a basis of the center of the commutant
//! of P ∪ Q against the generators via the Hilbert-Schmidt product gives two
//! matrices (all generators vs. P only) of equal rank. The targets are
//! simulable exactly when both hold.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::instance::{InstanceError, ProblemInstance};
use crate::rank::{self, RankOptions, RankResult};
use crate::sparse::{MatrixError, SparseMatrix};
use crate::symmetry::{self, center_from_commutant, commutant};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Simulable,
    NotSimulable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Holds,
    Fails,
    Skipped,
}

/// Options steering one `decide` run.
#[derive(Debug, Clone, Default)]
pub struct EngineOptions {
    pub rank: RankOptions,
    /// Evaluate condition (B) even when condition (A) already failed.
    pub force_condition_b: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionAReport {
    pub status: ConditionStatus,
    pub dim_ts_p: usize,
    pub dim_ts_union: usize,
    pub block_ranks_p: Vec<RankResult>,
    pub block_ranks_union: Vec<RankResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionBReport {
    pub status: ConditionStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub center_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank_full: Option<RankResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank_restricted: Option<RankResult>,
}

/// Everything a `decide` run determined, including the intermediate
/// dimensions the verdict is built from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulabilityReport {
    pub verdict: Verdict,
    pub condition_a: ConditionAReport,
    pub condition_b: ConditionBReport,
    pub linear_dim_p: usize,
    pub linear_dim_union: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure_witness: Option<String>,
    /// True when any rank came from the Monte-Carlo modular path; the
    /// verdict is then probabilistic (rerun with exact mode to certify).
    pub used_modular: bool,
    pub modular_primes: Vec<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Central projections of the generators onto a basis of the center of the
/// commutant: entry (α, β) is Tr(C_α† g_β).
#[derive(Debug, Clone)]
pub struct CentralProjectionData {
    pub center_basis: Vec<SparseMatrix>,
    /// dim(C) × (|P| + |Q|), columns over P then Q.
    pub t_full: SparseMatrix,
    /// dim(C) × |P|, the first |P| columns of `t_full`.
    pub t_restricted: SparseMatrix,
    pub rank_full: RankResult,
    pub rank_restricted: RankResult,
}

/// Builds the pairing matrices T (all generators) and T̃ (controls only)
/// against the given center basis and computes their ranks.
pub fn central_projections(
    center_basis: &[SparseMatrix],
    p_set: &[SparseMatrix],
    q_set: &[SparseMatrix],
    opts: &RankOptions,
) -> Result<CentralProjectionData, MatrixError> {
    let rows = center_basis.len();
    let mut t_full = SparseMatrix::zero(rows, p_set.len() + q_set.len());
    let mut t_restricted = SparseMatrix::zero(rows, p_set.len());
    for (alpha, c) in center_basis.iter().enumerate() {
        for (beta, g) in p_set.iter().chain(q_set.iter()).enumerate() {
            let v = c.hs_inner(g)?;
            if beta < p_set.len() {
                t_restricted.set(alpha, beta, v.clone());
            }
            t_full.set(alpha, beta, v);
        }
    }
    let rank_full = rank::rank(&t_full, opts);
    let rank_restricted = rank::rank(&t_restricted, opts);
    Ok(CentralProjectionData {
        center_basis: center_basis.to_vec(),
        t_full,
        t_restricted,
        rank_full,
        rank_restricted,
    })
}

/// Decides whether the targets of the instance can be simulated by its
/// controls. Records every intermediate dimension and rank in the report.
pub fn decide(
    instance: &ProblemInstance,
    opts: &EngineOptions,
) -> Result<SimulabilityReport, MatrixError> {
    let start = Instant::now();
    let d = instance.dim();
    let union = instance.union();

    let linear_p = commutant(instance.p_set(), d)?;
    let linear_union = commutant(&union, d)?;

    let quad_p = symmetry::quadratic_commutant_dims(instance.p_set(), d, &opts.rank)?;
    let quad_union = symmetry::quadratic_commutant_dims(&union, d, &opts.rank)?;
    let a_holds = quad_p.dim == quad_union.dim;

    let condition_a = ConditionAReport {
        status: if a_holds {
            ConditionStatus::Holds
        } else {
            ConditionStatus::Fails
        },
        dim_ts_p: quad_p.dim,
        dim_ts_union: quad_union.dim,
        block_ranks_p: quad_p.block_ranks.clone(),
        block_ranks_union: quad_union.block_ranks.clone(),
    };

    let mut used_modular = quad_p.used_modular() || quad_union.used_modular();
    let mut primes: Vec<u64> = quad_p.primes();
    primes.extend(quad_union.primes());

    let (condition_b, b_holds) = if a_holds || opts.force_condition_b {
        let center = center_from_commutant(&union, &linear_union, d);
        let proj = central_projections(&center, instance.p_set(), instance.q_set(), &opts.rank)?;
        used_modular |= proj.rank_full.method == rank::RankMethod::Modular
            || proj.rank_restricted.method == rank::RankMethod::Modular;
        primes.extend(proj.rank_full.prime.iter().copied());
        primes.extend(proj.rank_restricted.prime.iter().copied());
        let holds = proj.rank_full.rank == proj.rank_restricted.rank;
        (
            ConditionBReport {
                status: if holds {
                    ConditionStatus::Holds
                } else {
                    ConditionStatus::Fails
                },
                center_dim: Some(center.len()),
                rank_full: Some(proj.rank_full),
                rank_restricted: Some(proj.rank_restricted),
            },
            holds,
        )
    } else {
        (
            ConditionBReport {
                status: ConditionStatus::Skipped,
                center_dim: None,
                rank_full: None,
                rank_restricted: None,
            },
            false,
        )
    };

    let simulable = a_holds && b_holds;
    let failure_witness = if simulable {
        None
    } else if !a_holds {
        Some(format!(
            "condition (A) fails: quadratic symmetry dimensions differ, dim ts(P) = {} vs dim ts(P ∪ Q) = {}",
            quad_p.dim, quad_union.dim
        ))
    } else {
        Some(format!(
            "condition (B) fails: central projection ranks differ, rank(T̃) = {} vs rank(T) = {}",
            condition_b
                .rank_restricted
                .map(|r| r.rank)
                .unwrap_or_default(),
            condition_b.rank_full.map(|r| r.rank).unwrap_or_default()
        ))
    };

    primes.sort_unstable();
    primes.dedup();
    Ok(SimulabilityReport {
        verdict: if simulable {
            Verdict::Simulable
        } else {
            Verdict::NotSimulable
        },
        condition_a,
        condition_b,
        linear_dim_p: linear_p.dim,
        linear_dim_union: linear_union.dim,
        failure_witness,
        used_modular,
        modular_primes: primes,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutualVerdict {
    /// Both directions simulable: the generated algebras coincide.
    Equal,
    /// P simulates Q but not conversely: P generates strictly more.
    PStrictlyLarger,
    /// Q simulates P but not conversely.
    QStrictlyLarger,
    /// Neither side simulates the other.
    Incomparable,
}

#[derive(Debug, Clone)]
pub struct MutualReport {
    pub verdict: MutualVerdict,
    pub forward: SimulabilityReport,
    pub backward: SimulabilityReport,
}

/// Runs the decision in both directions and classifies the relation between
/// the two generated algebras.
pub fn decide_mutual(
    p_set: &[SparseMatrix],
    q_set: &[SparseMatrix],
    opts: &EngineOptions,
) -> Result<MutualReport, EngineError> {
    let forward_inst = ProblemInstance::new(p_set.to_vec(), q_set.to_vec(), None)?;
    let backward_inst = ProblemInstance::new(q_set.to_vec(), p_set.to_vec(), None)?;
    let forward = decide(&forward_inst, opts)?;
    let backward = decide(&backward_inst, opts)?;
    let verdict = match (forward.verdict, backward.verdict) {
        (Verdict::Simulable, Verdict::Simulable) => MutualVerdict::Equal,
        (Verdict::Simulable, Verdict::NotSimulable) => MutualVerdict::PStrictlyLarger,
        (Verdict::NotSimulable, Verdict::Simulable) => MutualVerdict::QStrictlyLarger,
        (Verdict::NotSimulable, Verdict::NotSimulable) => MutualVerdict::Incomparable,
    };
    Ok(MutualReport {
        verdict,
        forward,
        backward,
    })
}
