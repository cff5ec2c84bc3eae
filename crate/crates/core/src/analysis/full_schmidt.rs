//! Full Schmidt rank `Sr(M) = m1·n1 ≤ m2·n2`.
//!
//! Such an `M` saturates exactly when it is locally equivalent to the grid
//! whose block `(i, j)` carries `I_r` at inner position `(i·r, j·r)`, with
//! `r = rank(M)`. The witness comes from a full-rank factorization
//! `M = C·F`: block `(i, j)` is `U_i·V_j`, and saturation forces
//! `[U_1 … U_{m1}]` and `[V_1; …; V_{n1}]` to have full rank `m1·r` and
//! `n1·r`.

use super::{check_inequality, verify_witness, CaseTag, EqualityReport};
use crate::bipartite::{BipartiteMatrix, BipartiteShape, LocalEquivWitness};
use crate::error::{Error, Result};
use crate::linalg::{complete_columns, complete_rows, full_rank_factorization, inverse, rank, ExactMatrix};
use crate::Rational;
use num_traits::One;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullSchmidtAnalysis {
    pub report: EqualityReport,
    /// Whether every block has rank `rank(M)`.
    pub uniform_block_rank: bool,
}

/// `m2×n2` blocks with `I_r` at rows `i·r`, columns `j·r` of block `(i, j)`,
/// truncated where the identity would overrun the block.
pub fn full_schmidt_target(m1: usize, n1: usize, r: usize, m2: usize, n2: usize) -> Result<BipartiteMatrix> {
    let shape = BipartiteShape::new(m1, n1, m2, n2)?;
    let mut data = ExactMatrix::zeros(shape.rows(), shape.cols());
    for i in 0..m1 {
        for j in 0..n1 {
            for l in 0..r {
                let (a, b) = (i * r + l, j * r + l);
                if a < m2 && b < n2 {
                    data.set(i * m2 + a, j * n2 + b, Rational::one());
                }
            }
        }
    }
    BipartiteMatrix::new(shape, data)
}

pub fn analyze_full_schmidt(m: &BipartiteMatrix) -> Result<FullSchmidtAnalysis> {
    let s = m.shape();
    let (outer, inner) = (s.m1 * s.n1, s.m2 * s.n2);
    if outer > inner {
        return Err(Error::ShapeTooSmall { outer, inner });
    }
    let sr = m.schmidt_rank();
    if sr != outer {
        return Err(Error::WrongSchmidtRank {
            expected: outer.to_string(),
            found: sr,
        });
    }
    let mut report = check_inequality(m)?.tagged(CaseTag::FullSchmidt);
    let r = report.rank;
    let uniform_block_rank = (0..s.m1).all(|i| (0..s.n1).all(|j| rank(&m.block(i, j)) == r));
    if report.saturated {
        if !uniform_block_rank {
            return Err(Error::VerificationFailed("saturated full-Schmidt matrix has a block of lower rank".into()));
        }
        let witness = full_schmidt_witness(m, r)?;
        verify_witness(m, &witness, &full_schmidt_target(s.m1, s.n1, r, s.m2, s.n2)?)?;
        report = report.with_witness(witness);
    }
    Ok(FullSchmidtAnalysis {
        report,
        uniform_block_rank,
    })
}

fn full_schmidt_witness(m: &BipartiteMatrix, r: usize) -> Result<LocalEquivWitness> {
    let s = m.shape();
    let target = full_schmidt_target(s.m1, s.n1, r, s.m2, s.n2)?;
    if m == &target {
        return Ok(LocalEquivWitness::identity(s));
    }
    let (c, f) = full_rank_factorization(m.matrix())?;
    let u: Vec<ExactMatrix> = (0..s.m1).map(|i| c.submatrix(i * s.m2, 0, s.m2, r)).collect();
    let v: Vec<ExactMatrix> = (0..s.n1).map(|j| f.submatrix(0, j * s.n2, r, s.n2)).collect();
    let g = ExactMatrix::hstack(&u.iter().collect::<Vec<_>>())?;
    let h = ExactMatrix::vstack(&v.iter().collect::<Vec<_>>())?;
    if rank(&g) != s.m1 * r || rank(&h) != s.n1 * r {
        return Err(Error::VerificationFailed(
            "factor blocks of a saturated full-Schmidt matrix are not independent".into(),
        ));
    }
    Ok(LocalEquivWitness {
        p1: ExactMatrix::identity(s.m1),
        p2: inverse(&complete_columns(&g)?)?,
        q1: ExactMatrix::identity(s.n1),
        q2: inverse(&complete_rows(&h)?)?,
    })
}
