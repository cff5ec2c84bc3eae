//! Matrices with a 2×2 outer factor: Schmidt rank 2 and Schmidt rank 3.
//!
//! For `M = R_1⊗S_1 + R_2⊗S_2` everything is governed by the pencil
//! `span{R_1, R_2}`. A singular pencil of 2×2 matrices has either a common
//! row (`R_j = v_j·wᵀ`, locally `E11, E21`) or a common column
//! (`R_j = u·v_jᵀ`, locally `E11, E12`); only these two patterns can
//! saturate. Regular pencils, with two distinct roots or a double root,
//! never do.

use serde::{Deserialize, Serialize};

use super::{check_inequality, verify_witness, CaseTag, EqualityReport};
use crate::bipartite::{BipartiteMatrix, LocalEquivWitness};
use crate::error::{Error, Result};
use crate::linalg::{
    complete_columns, complete_rows, inverse, pencil_singular_directions, rank, rref_with_witness, ExactMatrix,
};

/// The two saturating patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sr2Case {
    /// `E11⊗S_1 + E21⊗S_2`; saturates iff `rank[S_1 S_2] = 2·rank[S_1; S_2]`.
    ColumnPattern,
    /// `E11⊗S_1 + E12⊗S_2`; saturates iff `rank[S_1; S_2] = 2·rank[S_1 S_2]`.
    RowPattern,
}

impl Sr2Case {
    pub fn label(self) -> &'static str {
        match self {
            Sr2Case::ColumnPattern => "i",
            Sr2Case::RowPattern => "ii",
        }
    }
}

/// Local type of the outer pencil `span{R_1, R_2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PencilKind {
    ColumnPattern,
    RowPattern,
    /// Regular with two distinct (possibly irrational) singular directions.
    DistinctRoots,
    /// Regular with one double singular direction: locally `I` and a
    /// nonsymmetric Jordan block.
    DoubleRoot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoByTwoAnalysis {
    pub report: EqualityReport,
    pub pencil: PencilKind,
    /// Set exactly when the matrix saturates.
    pub case: Option<Sr2Case>,
    /// `M` after applying the witness, when one exists.
    pub reduced: Option<BipartiteMatrix>,
}

fn require_two_by_two(m: &BipartiteMatrix) -> Result<()> {
    let s = m.shape();
    if s.m1 != 2 || s.n1 != 2 {
        return Err(Error::WrongShape(format!("outer factor must be 2x2, got {s}")));
    }
    Ok(())
}

fn stacked(parts: &[&ExactMatrix]) -> ExactMatrix {
    ExactMatrix::vstack(parts).expect("equal widths")
}

fn side_by_side(parts: &[&ExactMatrix]) -> ExactMatrix {
    ExactMatrix::hstack(parts).expect("equal heights")
}

pub fn analyze_2x2_sr2(m: &BipartiteMatrix) -> Result<TwoByTwoAnalysis> {
    require_two_by_two(m)?;
    let sr = m.schmidt_rank();
    if sr != 2 {
        return Err(Error::WrongSchmidtRank {
            expected: "2".into(),
            found: sr,
        });
    }
    let shape = m.shape();
    let pairs = m.schmidt_decompose()?.pairs;
    let (r1, s1) = &pairs[0];
    let (r2, s2) = &pairs[1];

    let pencil = if rank(&stacked(&[r1, r2])) == 1 {
        PencilKind::ColumnPattern
    } else if rank(&side_by_side(&[r1, r2])) == 1 {
        PencilKind::RowPattern
    } else {
        let roots = pencil_singular_directions(r1, r2)?;
        debug_assert!(roots.regular);
        if roots.directions.len() == 1 && roots.directions[0].multiplicity == 2 {
            PencilKind::DoubleRoot
        } else {
            PencilKind::DistinctRoots
        }
    };

    let mut report = check_inequality(m)?.tagged(CaseTag::TwoByTwoSr2);
    let mut case = None;
    let mut reduced = None;
    if report.saturated {
        let (c, witness) = match pencil {
            PencilKind::ColumnPattern => (Sr2Case::ColumnPattern, column_pattern_witness(r1, r2, s1, s2)?),
            PencilKind::RowPattern => (Sr2Case::RowPattern, row_pattern_witness(r1, r2, s1, s2)?),
            other => {
                return Err(Error::VerificationFailed(format!(
                    "direct ranks report saturation for a {other:?} pencil"
                )))
            }
        };
        let n = m.apply_local(&witness)?;
        let (e_first, e_second) = match c {
            Sr2Case::ColumnPattern => ((0, 0), (1, 0)),
            Sr2Case::RowPattern => ((0, 0), (0, 1)),
        };
        let (b1, b2) = (n.block(e_first.0, e_first.1), n.block(e_second.0, e_second.1));
        let target = BipartiteMatrix::from_terms(&[
            (ExactMatrix::unit(2, 2, e_first.0, e_first.1), b1),
            (ExactMatrix::unit(2, 2, e_second.0, e_second.1), b2),
        ])?;
        verify_witness(m, &witness, &target)?;
        debug_assert_eq!(target.shape(), shape);
        report = report.with_witness(witness);
        case = Some(c);
        reduced = Some(target);
    }
    Ok(TwoByTwoAnalysis {
        report,
        pencil,
        case,
        reduced,
    })
}

/// `R_j = v_j·wᵀ`: send `wᵀ` to `e_1ᵀ` and `v_j` to `e_j`, then
/// column-reduce the stack `[S_1; S_2]`.
fn column_pattern_witness(
    r1: &ExactMatrix,
    r2: &ExactMatrix,
    s1: &ExactMatrix,
    s2: &ExactMatrix,
) -> Result<LocalEquivWitness> {
    let common = rref_with_witness(&stacked(&[r1, r2])).reduced.submatrix(0, 0, 1, 2);
    let q1 = inverse(&complete_rows(&common)?)?;
    let v1 = (r1 * &q1).submatrix(0, 0, 2, 1);
    let v2 = (r2 * &q1).submatrix(0, 0, 2, 1);
    let p1 = inverse(&side_by_side(&[&v1, &v2]))?;
    let q2 = rref_with_witness(&stacked(&[s1, s2]).transpose()).transform.transpose();
    Ok(LocalEquivWitness {
        p1,
        p2: ExactMatrix::identity(s1.rows()),
        q1,
        q2,
    })
}

/// `R_j = u·v_jᵀ`: send `u` to `e_1` and `v_jᵀ` to `e_jᵀ`, then row-reduce
/// `[S_1 S_2]`.
fn row_pattern_witness(
    r1: &ExactMatrix,
    r2: &ExactMatrix,
    s1: &ExactMatrix,
    s2: &ExactMatrix,
) -> Result<LocalEquivWitness> {
    let common = rref_with_witness(&side_by_side(&[r1, r2]).transpose())
        .reduced
        .submatrix(0, 0, 1, 2)
        .transpose();
    let p1 = inverse(&complete_columns(&common)?)?;
    let v1 = (&p1 * r1).submatrix(0, 0, 1, 2);
    let v2 = (&p1 * r2).submatrix(0, 0, 1, 2);
    let q1 = inverse(&stacked(&[&v1, &v2]))?;
    let p2 = rref_with_witness(&side_by_side(&[s1, s2])).transform;
    Ok(LocalEquivWitness {
        p1,
        p2,
        q1,
        q2: ExactMatrix::identity(s1.cols()),
    })
}

/// Schmidt rank 3 with a 2×2 outer factor: never saturated. The report
/// carries the actual gap.
pub fn analyze_sr3_order4(m: &BipartiteMatrix) -> Result<EqualityReport> {
    require_two_by_two(m)?;
    let sr = m.schmidt_rank();
    if sr != 3 {
        return Err(Error::WrongSchmidtRank {
            expected: "3".into(),
            found: sr,
        });
    }
    Ok(check_inequality(m)?.tagged(CaseTag::Sr3Order4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::BipartiteShape;
    use crate::mat;

    fn terms(r1: ExactMatrix, s1: ExactMatrix, r2: ExactMatrix, s2: ExactMatrix) -> BipartiteMatrix {
        BipartiteMatrix::from_terms(&[(r1, s1), (r2, s2)]).unwrap()
    }

    #[test]
    fn row_pattern_saturates() {
        // R2 = E12, rank[S1 S2] = 1, rank[S1; S2] = 2
        let m = terms(mat![[1, 0], [0, 0]], mat![[1, 0], [0, 0]], mat![[0, 1], [0, 0]], mat![[0, 1], [0, 0]]);
        let a = analyze_2x2_sr2(&m).unwrap();
        assert!(a.report.saturated);
        assert_eq!(a.pencil, PencilKind::RowPattern);
        assert_eq!(a.case, Some(Sr2Case::RowPattern));
        assert_eq!(a.report.witness_verified, Some(true));
    }

    #[test]
    fn column_pattern_saturates() {
        // R2 = E21, rank[S1 S2] = 2, rank[S1; S2] = 1
        let m = terms(mat![[1, 0], [0, 0]], mat![[1, 0], [0, 0]], mat![[0, 0], [1, 0]], mat![[0, 0], [1, 0]]);
        let a = analyze_2x2_sr2(&m).unwrap();
        assert!(a.report.saturated);
        assert_eq!(a.case, Some(Sr2Case::ColumnPattern));
        let n = a.reduced.unwrap();
        assert!(n.block(0, 1).is_zero() && n.block(1, 1).is_zero());
    }

    #[test]
    fn disguised_column_pattern() {
        // R_j = v_j wᵀ with non-unit v_j and w
        let w = mat![[1, 2]];
        let r1 = &mat![[1], [1]] * &w;
        let r2 = &mat![[0], [3]] * &w;
        let m = terms(r1, mat![[1], [0], [0]], r2, mat![[0], [1], [1]]);
        let a = analyze_2x2_sr2(&m).unwrap();
        assert!(a.report.saturated);
        assert_eq!(a.case, Some(Sr2Case::ColumnPattern));
    }

    #[test]
    fn diagonal_pencil_never_saturates() {
        let m = terms(mat![[1, 0], [0, 0]], mat![[1, 0], [0, 0]], mat![[0, 0], [0, 1]], mat![[0, 1], [0, 0]]);
        let a = analyze_2x2_sr2(&m).unwrap();
        assert_eq!(a.pencil, PencilKind::DistinctRoots);
        assert!(!a.report.saturated);
        assert!(a.case.is_none() && a.report.witness.is_none());
    }

    #[test]
    fn jordan_pencil_is_double_root() {
        let m = terms(ExactMatrix::identity(2), mat![[1, 0], [0, 0]], mat![[0, 1], [0, 0]], mat![[0, 0], [0, 1]]);
        let a = analyze_2x2_sr2(&m).unwrap();
        assert_eq!(a.pencil, PencilKind::DoubleRoot);
        assert!(!a.report.saturated);
    }

    #[test]
    fn column_pattern_with_dependent_stack_fails() {
        // stack rank 2, side-by-side rank 2 < 4
        let m = terms(mat![[1, 0], [0, 0]], mat![[1, 0], [0, 0]], mat![[0, 0], [1, 0]], mat![[0, 0], [0, 1]]);
        let a = analyze_2x2_sr2(&m).unwrap();
        assert_eq!(a.pencil, PencilKind::ColumnPattern);
        assert!(!a.report.saturated);
    }

    #[test]
    fn shape_and_rank_preconditions() {
        let m4 = BipartiteMatrix::new(BipartiteShape::new(2, 2, 2, 2).unwrap(), ExactMatrix::diag_ints(&[1, 1, 1, 2])).unwrap();
        assert!(analyze_2x2_sr2(&m4).is_ok());
        let m1 = BipartiteMatrix::new(BipartiteShape::new(2, 2, 1, 1).unwrap(), mat![[1, 1], [1, 1]]).unwrap();
        assert!(matches!(analyze_2x2_sr2(&m1), Err(Error::WrongSchmidtRank { found: 1, .. })));
        let m3 = BipartiteMatrix::new(BipartiteShape::new(1, 2, 2, 2).unwrap(), ExactMatrix::zeros(2, 4)).unwrap();
        assert!(matches!(analyze_2x2_sr2(&m3), Err(Error::WrongShape(_))));
    }

    #[test]
    fn sr3_examples_are_strict() {
        let s = BipartiteShape::new(2, 2, 2, 2).unwrap();
        // [S1 S2; S3 0] with independent S1, S2, S3
        let x2 = BipartiteMatrix::from_blocks(
            s,
            &[
                vec![mat![[1, 0], [0, 0]], mat![[0, 1], [0, 0]]],
                vec![mat![[0, 0], [1, 0]], ExactMatrix::zeros(2, 2)],
            ],
        )
        .unwrap();
        let rep = analyze_sr3_order4(&x2).unwrap();
        assert!(!rep.saturated && rep.gap > 0);
        // symmetric pattern [S1 S2; S2 S3]
        let x1 = BipartiteMatrix::from_blocks(
            s,
            &[
                vec![mat![[1, 0], [0, 0]], mat![[0, 1], [1, 0]]],
                vec![mat![[0, 1], [1, 0]], mat![[0, 0], [0, 1]]],
            ],
        )
        .unwrap();
        let rep = analyze_sr3_order4(&x1).unwrap();
        assert_eq!(rep.schmidt_rank, 3);
        assert!(!rep.saturated);
    }
}
