//! Saturation analysis for `rank(M^Γ) ≤ Sr(M)·rank(M)`.
//!
//! Every positive verdict carries a local-equivalence witness (or a
//! certificate) that has been re-applied and checked before it is returned.

mod full_schmidt;
mod sr2;
mod two_by_two;
mod vector;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bipartite::{BipartiteMatrix, BipartiteShape, LocalEquivWitness, System};
use crate::error::{Error, Result};

pub use full_schmidt::{analyze_full_schmidt, full_schmidt_target, FullSchmidtAnalysis};
pub use sr2::{
    eigen_sum_spectrum, reduce_sr2, sr2_normalize, sr2_rank_via_pencil, NormalizeVariant, SideRanks,
    Sr2Normalized, Sr2Reduction,
};
pub use two_by_two::{analyze_2x2_sr2, analyze_sr3_order4, PencilKind, Sr2Case, TwoByTwoAnalysis};
pub use vector::{
    analyze_vector_case, analyze_vector_matrix, meets_vector_dimension_condition, VectorCaseAnalysis,
    VectorCaseCertificate,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    VectorCase,
    TwoByTwoSr2,
    Sr3Order4,
    FullSchmidt,
    SchmidtRank2General,
    Unclassified,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub rank: usize,
    pub schmidt_rank: usize,
    pub rank_gamma: usize,
    /// `schmidt_rank · rank`.
    pub bound: usize,
    pub saturated: bool,
    /// `bound − rank_gamma`; never negative.
    pub gap: i64,
    pub case_tag: CaseTag,
    pub system: System,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<LocalEquivWitness>,
    /// `Some(true)` once the witness has been re-applied successfully.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_verified: Option<bool>,
}

impl EqualityReport {
    fn from_ranks(rank: usize, schmidt_rank: usize, rank_gamma: usize, system: System) -> Self {
        let bound = schmidt_rank * rank;
        let gap = bound as i64 - rank_gamma as i64;
        Self {
            rank,
            schmidt_rank,
            rank_gamma,
            bound,
            saturated: gap == 0,
            gap,
            case_tag: CaseTag::Unclassified,
            system,
            witness: None,
            witness_verified: None,
        }
    }

    pub fn tagged(mut self, tag: CaseTag) -> Self {
        self.case_tag = tag;
        self
    }

    pub(crate) fn with_witness(mut self, witness: LocalEquivWitness) -> Self {
        self.witness = Some(witness);
        self.witness_verified = Some(true);
        self
    }

    /// One-line human summary, e.g.
    /// `saturated, Sr=4, rank=1, rankΓ=4, bound=4, gap=0`.
    pub fn summary(&self) -> String {
        format!(
            "{}, Sr={}, rank={}, rankΓ={}, bound={}, gap={}",
            if self.saturated { "saturated" } else { "not saturated" },
            self.schmidt_rank,
            self.rank,
            self.rank_gamma,
            self.bound,
            self.gap
        )
    }
}

/// Rank, Schmidt rank and the partial-transpose rank with respect to Γ_B.
pub fn check_inequality(m: &BipartiteMatrix) -> Result<EqualityReport> {
    check_inequality_with(m, System::B)
}

pub fn check_inequality_with(m: &BipartiteMatrix, system: System) -> Result<EqualityReport> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let report = EqualityReport::from_ranks(
        m.rank(),
        m.schmidt_rank(),
        m.partial_transpose(system).rank(),
        system,
    );
    if report.gap < 0 {
        return Err(Error::VerificationFailed(format!(
            "partial transpose rank {} exceeds bound {}",
            report.rank_gamma, report.bound
        )));
    }
    Ok(report)
}

/// `min(m1·n2, m2·n1)`: no matrix of larger Schmidt rank can saturate.
pub fn kmax_bound(shape: BipartiteShape) -> usize {
    (shape.m1 * shape.n2).min(shape.m2 * shape.n1)
}

/// Applies `w` to `m` and compares with `target`.
pub(crate) fn verify_witness(m: &BipartiteMatrix, w: &LocalEquivWitness, target: &BipartiteMatrix) -> Result<()> {
    if &m.apply_local(w)? == target {
        Ok(())
    } else {
        Err(Error::VerificationFailed("witness does not map input to the claimed form".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ExactMatrix;
    use crate::mat;

    fn shape(m1: usize, n1: usize, m2: usize, n2: usize) -> BipartiteShape {
        BipartiteShape::new(m1, n1, m2, n2).unwrap()
    }

    #[test]
    fn product_saturates() {
        let m = BipartiteMatrix::from_terms(&[(mat![[1, 2], [3, 5]], mat![[1, 1, 0], [0, 0, 1]])]).unwrap();
        let rep = check_inequality(&m).unwrap();
        assert_eq!(rep.schmidt_rank, 1);
        assert_eq!(rep.rank_gamma, rep.rank);
        assert!(rep.saturated);
    }

    #[test]
    fn identity_is_a_product() {
        let m = BipartiteMatrix::new(shape(2, 2, 2, 2), ExactMatrix::identity(4)).unwrap();
        let rep = check_inequality(&m).unwrap();
        assert_eq!((rep.schmidt_rank, rep.rank, rep.rank_gamma, rep.gap), (1, 4, 4, 0));
    }

    #[test]
    fn two_diagonal_blocks_have_gap_four() {
        let m = BipartiteMatrix::new(shape(2, 2, 2, 2), ExactMatrix::diag_ints(&[1, 1, 1, 2])).unwrap();
        let rep = check_inequality(&m).unwrap();
        assert_eq!((rep.schmidt_rank, rep.rank, rep.rank_gamma, rep.gap), (2, 4, 4, 4));
        assert!(!rep.saturated);
        assert_eq!(rep.summary(), "not saturated, Sr=2, rank=4, rankΓ=4, bound=8, gap=4");
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(check_inequality(&BipartiteMatrix::zeros(shape(1, 1, 1, 1))), Err(Error::ZeroMatrix));
    }

    #[test]
    fn both_systems_agree() {
        let m = BipartiteMatrix::new(shape(2, 2, 2, 2), mat![[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]])
            .unwrap();
        let a = check_inequality_with(&m, System::A).unwrap();
        let b = check_inequality_with(&m, System::B).unwrap();
        assert_eq!(a.rank_gamma, 4);
        assert_eq!(b.rank_gamma, 4);
        assert!(a.saturated && b.saturated);
    }

    #[test]
    fn kmax_examples() {
        assert_eq!(kmax_bound(shape(2, 1, 2, 2)), 2);
        assert_eq!(kmax_bound(shape(1, 1, 1, 1)), 1);
        assert_eq!(kmax_bound(shape(2, 3, 4, 5)), 10);
    }
}
