//! `M = Σ_j R_j ⊗ S_j` with column vectors `R_j` (`n1 = 1`).
//!
//! After moving the `R_j` to unit vectors, `M` is the stack `[S_1; …; S_K]`
//! and `M^Γ_B` has the rank of `[S_1 … S_K]`. Saturation is therefore
//! `rank[S_1 … S_K] = K · rank[S_1; …; S_K]`.

use serde::{Deserialize, Serialize};

use super::{check_inequality, verify_witness, CaseTag, EqualityReport};
use crate::bipartite::{family_rank, BipartiteMatrix, LocalEquivWitness};
use crate::error::{Error, Result};
use crate::linalg::{complete_columns, inverse, rank, rref_with_witness, ExactMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorCaseCertificate {
    /// Common rank of the stack `[S_1; …; S_K]`.
    pub d: usize,
    /// Column transform: `[S_1; …; S_K]·Q` is zero outside its first `d`
    /// columns.
    pub q: ExactMatrix,
    /// `u_{jl}` = column `l < d` of `S_j·Q`, listed `j`-major. Linearly
    /// independent exactly when the case saturates.
    pub column_vectors: Vec<ExactMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorCaseAnalysis {
    pub report: EqualityReport,
    pub certificate: Option<VectorCaseCertificate>,
    /// `rank[S_1; …; S_K]`.
    pub stacked_rank: usize,
    /// `rank[S_1 … S_K]`.
    pub side_by_side_rank: usize,
    /// Whether `m1·n2 ≥ m2`. Informational only: saturation does not
    /// require it.
    pub dimension_condition: bool,
}

pub fn meets_vector_dimension_condition(m1: usize, n2: usize, m2: usize) -> bool {
    m1 * n2 >= m2
}

/// Analyzes `Σ_j R_j ⊗ S_j` for `m1×1` columns `R_j` and `m2×n2` blocks
/// `S_j`, both families linearly independent.
pub fn analyze_vector_case(r: &[ExactMatrix], s: &[ExactMatrix]) -> Result<VectorCaseAnalysis> {
    let k = r.len();
    if k != s.len() {
        return Err(Error::ShapeMismatch(format!("{k} vectors but {} blocks", s.len())));
    }
    if k < 2 {
        return Err(Error::WrongSchmidtRank {
            expected: "at least 2".into(),
            found: k,
        });
    }
    let m1 = r[0].rows();
    if r.iter().any(|v| v.shape() != (m1, 1)) {
        return Err(Error::ShapeMismatch("R_j must be column vectors of one length".into()));
    }
    let (m2, n2) = s[0].shape();
    if s.iter().any(|b| b.shape() != (m2, n2)) {
        return Err(Error::ShapeMismatch("S_j must share one shape".into()));
    }
    let r_refs: Vec<&ExactMatrix> = r.iter().collect();
    let r_mat = ExactMatrix::hstack(&r_refs)?;
    if rank(&r_mat) != k {
        return Err(Error::DependentFamilies("vectors R_j".into()));
    }
    if family_rank(s) != k {
        return Err(Error::DependentFamilies("blocks S_j".into()));
    }

    let s_refs: Vec<&ExactMatrix> = s.iter().collect();
    let stacked = ExactMatrix::vstack(&s_refs)?;
    let side = ExactMatrix::hstack(&s_refs)?;
    let stacked_rank = rank(&stacked);
    let side_by_side_rank = rank(&side);
    let predicted = side_by_side_rank == k * stacked_rank;

    let pairs: Vec<(ExactMatrix, ExactMatrix)> = r.iter().cloned().zip(s.iter().cloned()).collect();
    let m = BipartiteMatrix::from_terms(&pairs)?;
    let mut report = check_inequality(&m)?.tagged(CaseTag::VectorCase);
    if report.saturated != predicted {
        return Err(Error::VerificationFailed(format!(
            "stack/side-by-side ranks ({stacked_rank}, {side_by_side_rank}) disagree with direct ranks"
        )));
    }

    let mut certificate = None;
    if report.saturated {
        let d = stacked_rank;
        // Column reduction of the stack: rref(stackᵀ) = P·stackᵀ, so
        // stack·Pᵀ has its nonzero columns first.
        let q = rref_with_witness(&stacked.transpose()).transform.transpose();
        let column_vectors: Vec<ExactMatrix> = s
            .iter()
            .flat_map(|sj| {
                let sq = sj * &q;
                (0..d).map(move |l| sq.submatrix(0, l, m2, 1))
            })
            .collect();
        let u_refs: Vec<&ExactMatrix> = column_vectors.iter().collect();
        if rank(&ExactMatrix::hstack(&u_refs)?) != k * d {
            return Err(Error::VerificationFailed("certificate vectors are dependent".into()));
        }

        let p1 = inverse(&complete_columns(&r_mat)?)?;
        let witness = LocalEquivWitness {
            p1,
            p2: ExactMatrix::identity(m2),
            q1: ExactMatrix::identity(1),
            q2: q.clone(),
        };
        let target_pairs: Vec<(ExactMatrix, ExactMatrix)> = s
            .iter()
            .enumerate()
            .map(|(j, sj)| (ExactMatrix::unit(m1, 1, j, 0), sj * &q))
            .collect();
        verify_witness(&m, &witness, &BipartiteMatrix::from_terms(&target_pairs)?)?;
        report = report.with_witness(witness);
        certificate = Some(VectorCaseCertificate { d, q, column_vectors });
    }

    Ok(VectorCaseAnalysis {
        report,
        certificate,
        stacked_rank,
        side_by_side_rank,
        dimension_condition: meets_vector_dimension_condition(m1, n2, m2),
    })
}

/// Runs [`analyze_vector_case`] on a matrix with `n1 = 1`, or with `m1 = 1`
/// by way of its transpose. The witness is mapped back to `m` itself.
pub fn analyze_vector_matrix(m: &BipartiteMatrix) -> Result<VectorCaseAnalysis> {
    let shape = m.shape();
    if shape.n1 != 1 && shape.m1 != 1 {
        return Err(Error::WrongShape(format!("vector case needs n1 = 1 or m1 = 1, got {shape}")));
    }
    let transposed = shape.n1 != 1;
    let work = if transposed { m.transpose() } else { m.clone() };
    let decomposition = work.schmidt_decompose()?;
    let (r, s): (Vec<_>, Vec<_>) = decomposition.pairs.into_iter().unzip();
    let mut analysis = analyze_vector_case(&r, &s)?;
    if transposed {
        if let Some(w) = analysis.report.witness.take() {
            let back = LocalEquivWitness {
                p1: w.q1.transpose(),
                p2: w.q2.transpose(),
                q1: w.p1.transpose(),
                q2: w.p2.transpose(),
            };
            m.apply_local(&back)?;
            analysis.report.witness = Some(back);
        }
    }
    Ok(analysis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::BipartiteShape;
    use crate::mat;

    fn col(v: &[i64]) -> ExactMatrix {
        ExactMatrix::from_fn(v.len(), 1, |i, _| crate::linalg::rat(v[i]))
    }

    #[test]
    fn two_unit_columns_saturate() {
        let a = analyze_vector_case(&[col(&[1, 0]), col(&[0, 1])], &[col(&[1, 0]), col(&[0, 1])]).unwrap();
        assert!(a.report.saturated);
        assert_eq!((a.report.rank, a.report.rank_gamma), (1, 2));
        let cert = a.certificate.unwrap();
        assert_eq!(cert.d, 1);
        assert_eq!(cert.column_vectors.len(), 2);
        assert_eq!(a.report.witness_verified, Some(true));
    }

    #[test]
    fn diagonal_blocks_do_not_saturate() {
        // any two independent columns saturate: the stack has rank 1
        let a = analyze_vector_case(&[col(&[1, 0]), col(&[0, 1])], &[col(&[1, 0]), col(&[1, 1])]).unwrap();
        assert!(a.report.saturated);
        let b = analyze_vector_case(
            &[col(&[1, 0]), col(&[0, 1])],
            &[mat![[1, 0], [0, 0]], mat![[0, 0], [0, 1]]],
        )
        .unwrap();
        assert_eq!((b.stacked_rank, b.side_by_side_rank), (2, 2));
        assert!(!b.report.saturated);
        assert!(b.certificate.is_none());
    }

    #[test]
    fn dimension_condition_is_not_necessary() {
        // m1 = 2, n2 = 1, m2 = 3: m1·n2 < m2, yet the ranks are 1 and 2.
        let a = analyze_vector_case(&[col(&[1, 0]), col(&[0, 1])], &[col(&[1, 0, 0]), col(&[0, 1, 0])]).unwrap();
        assert!(!a.dimension_condition);
        assert!(a.report.saturated);
    }

    #[test]
    fn single_term_is_rejected() {
        assert!(matches!(
            analyze_vector_case(&[col(&[1])], &[col(&[1])]),
            Err(Error::WrongSchmidtRank { found: 1, .. })
        ));
    }

    #[test]
    fn dependent_families_are_rejected() {
        let err = analyze_vector_case(&[col(&[1, 0]), col(&[2, 0])], &[col(&[1, 0]), col(&[0, 1])]);
        assert!(matches!(err, Err(Error::DependentFamilies(_))));
        let err = analyze_vector_case(&[col(&[1, 0]), col(&[0, 1])], &[col(&[1, 2]), col(&[2, 4])]);
        assert!(matches!(err, Err(Error::DependentFamilies(_))));
    }

    #[test]
    fn non_unit_vectors_get_a_witness() {
        let s = vec![col(&[1, 0, 0, 0]), col(&[0, 1, 0, 0]), col(&[0, 0, 2, 1])];
        let a = analyze_vector_case(&[col(&[1, 1, 0]), col(&[0, 2, 1]), col(&[1, 0, 3])], &s).unwrap();
        assert!(a.report.saturated);
        assert_eq!(a.report.rank_gamma, 3);
    }

    #[test]
    fn row_vector_case_via_transpose() {
        let s = BipartiteShape::new(1, 2, 1, 2).unwrap();
        // blocks (1,0) and (0,1): M = e1ᵀ⊗e1ᵀ + e2ᵀ⊗e2ᵀ
        let m = BipartiteMatrix::new(s, mat![[1, 0, 0, 1]]).unwrap();
        let a = analyze_vector_matrix(&m).unwrap();
        assert!(a.report.saturated);
        let w = a.report.witness.unwrap();
        assert!(m.apply_local(&w).is_ok());
    }
}
