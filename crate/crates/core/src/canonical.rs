//! Generators for the known saturating families.

use serde::{Deserialize, Serialize};

use crate::analysis::{full_schmidt_target, Sr2Case};
use crate::bipartite::BipartiteMatrix;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalSpec {
    pub m1: usize,
    pub n1: usize,
    pub r: usize,
}

impl CanonicalSpec {
    pub fn k(&self) -> usize {
        self.m1.max(self.n1)
    }

    pub fn inner_order(&self) -> usize {
        self.k() * self.r
    }
}

/// The `m1×n1` grid whose block `(i, j)` is the `kr×kr` matrix with `I_r`
/// at block position `(i, j)`, `k = max(m1, n1)`.
///
/// Rank `r`, Schmidt rank `m1·n1`, partial-transpose rank `m1·n1·r`.
pub fn gen_full_schmidt_canonical(m1: usize, n1: usize, r: usize) -> Result<BipartiteMatrix> {
    if m1 == 0 || n1 == 0 || r == 0 {
        return Err(Error::InfeasibleParameters(format!("m1, n1, r must be positive, got ({m1},{n1},{r})")));
    }
    let spec = CanonicalSpec { m1, n1, r };
    let order = spec.inner_order();
    full_schmidt_target(m1, n1, r, order, order)
}

/// `R_j = e_j ∈ ℚ^K` and `S_j` with `e_{(j-1)d + l}` in column `l < d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorFamily {
    pub r: Vec<ExactMatrix>,
    pub s: Vec<ExactMatrix>,
}

impl VectorFamily {
    pub fn assemble(&self) -> Result<BipartiteMatrix> {
        let pairs: Vec<_> = self.r.iter().cloned().zip(self.s.iter().cloned()).collect();
        BipartiteMatrix::from_terms(&pairs)
    }
}

/// Stack `[S_1; …; S_K]` of rank `d`, side-by-side `[S_1 … S_K]` of rank
/// `K·d`.
pub fn gen_vector_case(k: usize, m2: usize, n2: usize, d: usize) -> Result<VectorFamily> {
    if k < 2 || d == 0 || m2 == 0 || n2 == 0 {
        return Err(Error::InfeasibleParameters(format!(
            "need K >= 2 and positive m2, n2, d; got K={k}, m2={m2}, n2={n2}, d={d}"
        )));
    }
    if k * d > m2 {
        return Err(Error::InfeasibleParameters(format!("K·d = {} exceeds m2 = {m2}", k * d)));
    }
    if d > n2 {
        return Err(Error::InfeasibleParameters(format!("d = {d} exceeds n2 = {n2}")));
    }
    let r = (0..k).map(|j| ExactMatrix::unit(k, 1, j, 0)).collect();
    let s = (0..k)
        .map(|j| {
            let mut sj = ExactMatrix::zeros(m2, n2);
            for l in 0..d {
                sj = &sj + &ExactMatrix::unit(m2, n2, j * d + l, l);
            }
            sj
        })
        .collect();
    Ok(VectorFamily { r, s })
}

/// Saturating Schmidt-rank-2 matrix of shape `(2, 2, m2, n2)`: the column
/// pattern `E11⊗S_1 + E21⊗S_2` for case (i), its transposed twin for (ii).
pub fn gen_sr2_case(case: Sr2Case, m2: usize, n2: usize, d: usize) -> Result<BipartiteMatrix> {
    match case {
        Sr2Case::ColumnPattern => {
            let fam = gen_vector_case(2, m2, n2, d)?;
            let e = |i| ExactMatrix::unit(2, 2, i, 0);
            BipartiteMatrix::from_terms(&[(e(0), fam.s[0].clone()), (e(1), fam.s[1].clone())])
        }
        Sr2Case::RowPattern => Ok(gen_sr2_case(Sr2Case::ColumnPattern, n2, m2, d)?.transpose()),
    }
}
