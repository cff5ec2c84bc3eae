//! Exact elimination: rank and determinant by fraction-free (Bareiss)
//! elimination over the integers, reduced row echelon form with a recorded
//! transformation, and everything built on top of it.
//!
//! Pivots are always the first nonzero entry scanning down the current
//! column, so identical inputs give identical outputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ExactMatrix;
use crate::error::{Error, Result};
use crate::Rational;

/// Clears denominators row by row. Row scaling by a nonzero integer keeps the
/// row space and the rank; the returned factors undo it for determinants.
fn integer_rows(m: &ExactMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows());
    let mut scales = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let row = m.row(i);
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        scales.push(lcm);
    }
    (rows, scales)
}

/// In-place Bareiss elimination. Returns the pivot count and the number of
/// row swaps performed.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, usize) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut swaps = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            swaps += 1;
        }
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        rank += 1;
    }
    (rank, swaps)
}

/// Exact rank.
pub fn rank(m: &ExactMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    let (mut a, _) = integer_rows(m);
    bareiss(&mut a, m.cols()).0
}

/// Exact determinant of a square matrix. The empty matrix has determinant 1.
pub fn determinant(m: &ExactMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut a, scales) = integer_rows(m);
    let (r, swaps) = bareiss(&mut a, n);
    if r < n {
        return Ok(Rational::zero());
    }
    let mut det = a[n - 1][n - 1].clone();
    if swaps % 2 == 1 {
        det = -det;
    }
    let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Ok(Rational::new(det, denom))
}

/// Reduced row echelon form together with the invertible `P` with `P·M = R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    pub reduced: ExactMatrix,
    pub transform: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss–Jordan elimination on `[M | I]`.
pub fn rref_with_witness(m: &ExactMatrix) -> RowEchelon {
    let (rows, cols) = m.shape();
    let mut r = m.row_vecs();
    let mut p = ExactMatrix::identity(rows).row_vecs();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..cols {
        if lead == rows {
            break;
        }
        let Some(k) = (lead..rows).find(|&i| !r[i][c].is_zero()) else {
            continue;
        };
        r.swap(k, lead);
        p.swap(k, lead);
        let inv = r[lead][c].recip();
        if !inv.is_one() {
            for x in r[lead].iter_mut().chain(p[lead].iter_mut()) {
                *x *= &inv;
            }
        }
        let (r_lead, p_lead) = (r[lead].clone(), p[lead].clone());
        for i in 0..rows {
            if i == lead || r[i][c].is_zero() {
                continue;
            }
            let f = r[i][c].clone();
            for (x, l) in r[i].iter_mut().zip(&r_lead).chain(p[i].iter_mut().zip(&p_lead)) {
                if !l.is_zero() {
                    *x -= &f * l;
                }
            }
        }
        pivots.push(c);
        lead += 1;
    }
    let reduced = ExactMatrix::from_fn(rows, cols, |i, j| r[i][j].clone());
    let transform = ExactMatrix::from_fn(rows, rows, |i, j| p[i][j].clone());
    RowEchelon {
        reduced,
        transform,
        pivots,
    }
}

/// `M = C·F` with `C` the pivot columns of `M` and `F` the nonzero rows of its
/// reduced row echelon form.
///
/// Empty inputs return empty factors. A nonempty zero matrix has no
/// factorization and yields [`Error::ZeroMatrix`].
pub fn full_rank_factorization(m: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix)> {
    if m.is_empty() {
        return Ok((ExactMatrix::zeros(m.rows(), 0), ExactMatrix::zeros(0, m.cols())));
    }
    let ech = rref_with_witness(m);
    let r = ech.rank();
    if r == 0 {
        return Err(Error::ZeroMatrix);
    }
    let c = m.select_columns(&ech.pivots);
    let f = ech.reduced.submatrix(0, 0, r, m.cols());
    Ok((c, f))
}

pub fn inverse(m: &ExactMatrix) -> Result<ExactMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let ech = rref_with_witness(m);
    if ech.rank() < m.rows() {
        return Err(Error::NotInvertible(format!("{}x{} matrix has rank {}", m.rows(), m.cols(), ech.rank())));
    }
    Ok(ech.transform)
}

pub fn is_invertible(m: &ExactMatrix) -> bool {
    m.is_square() && rank(m) == m.rows()
}

/// Basis of the right kernel `{x : M·x = 0}`, as columns of the result.
pub fn nullspace(m: &ExactMatrix) -> ExactMatrix {
    let n = m.cols();
    let ech = rref_with_witness(m);
    let free: Vec<usize> = (0..n).filter(|c| !ech.pivots.contains(c)).collect();
    let mut basis = ExactMatrix::zeros(n, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis.set(f, k, Rational::one());
        for (row, &pc) in ech.pivots.iter().enumerate() {
            basis.set(pc, k, -ech.reduced.get(row, f).clone());
        }
    }
    basis
}

/// Extends a full-row-rank `k×n` matrix to an invertible `n×n` matrix whose
/// first `k` rows are the input, appending standard unit rows greedily.
pub fn complete_rows(h: &ExactMatrix) -> Result<ExactMatrix> {
    let (k, n) = h.shape();
    if rank(h) != k {
        return Err(Error::NotInvertible("rows to complete are linearly dependent".into()));
    }
    let mut acc = h.clone();
    for e in 0..n {
        if acc.rows() == n {
            break;
        }
        let candidate = ExactMatrix::vstack(&[&acc, &ExactMatrix::unit(1, n, 0, e)])?;
        if rank(&candidate) == candidate.rows() {
            acc = candidate;
        }
    }
    debug_assert_eq!(acc.rows(), n);
    Ok(acc)
}

/// Column analogue of [`complete_rows`].
pub fn complete_columns(g: &ExactMatrix) -> Result<ExactMatrix> {
    Ok(complete_rows(&g.transpose())?.transpose())
}

/// Invertible `P`, `Q` with `P·M·Q = diag(I_r, 0)`.
pub fn rank_normal_form(m: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix, usize)> {
    let ech = rref_with_witness(m);
    let r = ech.rank();
    let lead = ech.reduced.submatrix(0, 0, r, m.cols());
    let q = inverse(&complete_rows(&lead)?)?;
    Ok((ech.transform, q, r))
}

/// Smallest `|x|`-first integer probe sequence `0, 1, -1, 2, -2, ...`.
pub fn integer_probes() -> impl Iterator<Item = i64> {
    (0i64..).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
}
