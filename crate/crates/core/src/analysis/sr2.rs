//! Schmidt rank 2: `M = A_1⊗B_1 + A_2⊗B_2`.

use num_traits::Zero;

use crate::bipartite::{BipartiteMatrix, LocalEquivWitness};
use crate::error::{Error, Result};
use crate::linalg::{determinant, integer_probes, inverse, is_invertible, rank, rank_normal_form, rat, rref_with_witness, ExactMatrix};
use crate::Rational;

/// Ranks read off one side of the quasi-diagonal form.
///
/// With `(X_1, X_2)` the reduced pair on this side, `X_1 = diag(I_r, 0)` and
///
/// ```text
///        ┌ X21  0    X22 ┐
/// X_2 =  │ 0    I_t  0   │
///        └ X23  0    0   ┘
/// ```
///
/// where `X23` is in reduced row echelon form of rank `s` and `X22` in
/// reduced column echelon form of rank `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideRanks {
    pub r: usize,
    pub t: usize,
    pub s: usize,
    pub g: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sr2Reduction {
    pub reduced: BipartiteMatrix,
    pub witness: LocalEquivWitness,
    /// The two Kronecker terms of `reduced`.
    pub pairs: [(ExactMatrix, ExactMatrix); 2],
    pub a_side: SideRanks,
    pub b_side: SideRanks,
}

/// Brings a Schmidt-rank-2 matrix to quasi-diagonal form on both tensor
/// factors; see [`SideRanks`] for the shape of each side.
pub fn reduce_sr2(m: &BipartiteMatrix) -> Result<Sr2Reduction> {
    let sr = m.schmidt_rank();
    if sr != 2 {
        return Err(Error::WrongSchmidtRank {
            expected: "2".into(),
            found: sr,
        });
    }
    let pairs = m.schmidt_decompose()?.pairs;
    let (a1, b1) = &pairs[0];
    let (a2, b2) = &pairs[1];
    let a = reduce_side(a1, a2)?;
    let b = reduce_side(b1, b2)?;
    let witness = LocalEquivWitness {
        p1: a.p,
        p2: b.p,
        q1: a.q,
        q2: b.q,
    };
    let reduced = m.apply_local(&witness)?;
    let reduced_pairs = [(a.x1, b.x1), (a.x2, b.x2)];
    if BipartiteMatrix::from_terms(&reduced_pairs)? != reduced {
        return Err(Error::VerificationFailed("reduced terms do not reassemble".into()));
    }
    Ok(Sr2Reduction {
        reduced,
        witness,
        pairs: reduced_pairs,
        a_side: a.ranks,
        b_side: b.ranks,
    })
}

struct Side {
    p: ExactMatrix,
    q: ExactMatrix,
    x1: ExactMatrix,
    x2: ExactMatrix,
    ranks: SideRanks,
}

fn reduce_side(x1: &ExactMatrix, x2: &ExactMatrix) -> Result<Side> {
    let (m, n) = x1.shape();
    let (p0, q0, r) = rank_normal_form(x1)?;
    let y = &(&p0 * x2) * &q0;

    let corner = y.submatrix(r, r, m - r, n - r);
    let (f, g, t) = rank_normal_form(&corner)?;
    let mut p = &ExactMatrix::block_diag(&[&ExactMatrix::identity(r), &f]) * &p0;
    let mut q = &q0 * &ExactMatrix::block_diag(&[&ExactMatrix::identity(r), &g]);
    let y = &(&p * x2) * &q;

    // Row operations clear the top rows above I_t; column operations clear
    // the left columns beside it. Both leave diag(I_r, 0) untouched.
    let y1 = y.submatrix(0, r, r, t);
    let mut rows_op = ExactMatrix::identity(m);
    rows_op.set_block(0, r, &-&y1);
    let z1 = y.submatrix(r, 0, t, r);
    let mut cols_op = ExactMatrix::identity(n);
    cols_op.set_block(r, 0, &-&z1);
    p = &rows_op * &p;
    q = &q * &cols_op;
    let y = &(&p * x2) * &q;

    let (lo, right) = (r + t, r + t);
    let bottom = y.submatrix(lo, 0, m - lo, r);
    let w = rref_with_witness(&bottom);
    let top = y.submatrix(0, right, r, n - right);
    let v = rref_with_witness(&top.transpose());
    p = &ExactMatrix::block_diag(&[&ExactMatrix::identity(lo), &w.transform]) * &p;
    q = &q * &ExactMatrix::block_diag(&[&ExactMatrix::identity(right), &v.transform.transpose()]);

    let x1r = &(&p * x1) * &q;
    let x2r = &(&p * x2) * &q;
    debug_assert_eq!(x1r, ExactMatrix::identity(r).pad_to(m, n));
    Ok(Side {
        p,
        q,
        x1: x1r,
        x2: x2r,
        ranks: SideRanks {
            r,
            t,
            s: w.rank(),
            g: v.rank(),
        },
    })
}

/// Which factors [`sr2_normalize`] should turn into identities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NormalizeVariant {
    /// `A` only.
    #[default]
    First,
    /// `A` and `D`; needs a full-rank member of `span{B, D}`.
    FirstAndLast,
    /// `A` and `B`; needs a full-rank member of `span{B, D}`.
    FirstAndSecond,
}

/// `A⊗B + C⊗D` rewritten as `a⊗b + c⊗d` with
/// `a⊗b + c⊗d = (left⊗I)·(A⊗B + C⊗D)·(I⊗right)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sr2Normalized {
    /// Shift with `A + x·C` invertible.
    pub x: i64,
    /// Second shift, for the two-sided variants.
    pub y: Option<i64>,
    pub a: ExactMatrix,
    pub b: ExactMatrix,
    pub c: ExactMatrix,
    pub d: ExactMatrix,
    pub left: ExactMatrix,
    pub right: ExactMatrix,
    pub transcript: Vec<String>,
}

fn first_probe(limit: usize, mut ok: impl FnMut(i64) -> bool) -> Option<i64> {
    integer_probes().take(limit + 1).find(|&x| ok(x))
}

fn shifted(base: &ExactMatrix, dir: &ExactMatrix, x: i64) -> ExactMatrix {
    base + &dir.scale(&rat(x))
}

pub fn sr2_normalize(
    a: &ExactMatrix,
    b: &ExactMatrix,
    c: &ExactMatrix,
    d: &ExactMatrix,
    variant: NormalizeVariant,
) -> Result<Sr2Normalized> {
    for m in [a, b, c, d] {
        if !m.is_square() {
            return Err(Error::NotSquare(m.rows(), m.cols()));
        }
    }
    if a.rows() != c.rows() || b.rows() != d.rows() {
        return Err(Error::ShapeMismatch("A, C and B, D must pair up in order".into()));
    }
    let (order_d, order_f) = (a.rows(), b.rows());
    let mut transcript = Vec::new();

    // det(A + xC) has degree ≤ d, so d + 1 probes decide regularity.
    let x = first_probe(order_d, |x| is_invertible(&shifted(a, c, x)))
        .ok_or_else(|| Error::NoFullRankInSpan("span{A, C}".into()))?;
    let p1 = inverse(&shifted(a, c, x))?;
    let c1 = &p1 * c;
    let d1 = shifted(d, b, -x);
    transcript.push(format!("x = {x}: (A + xC)⊗B + C⊗(D − xB)"));
    transcript.push("left-multiply first factor by (A + xC)⁻¹".into());
    let id_d = ExactMatrix::identity(order_d);
    let id_f = ExactMatrix::identity(order_f);

    let out = match variant {
        NormalizeVariant::First => Sr2Normalized {
            x,
            y: None,
            a: id_d,
            b: b.clone(),
            c: c1,
            d: d1,
            left: p1,
            right: id_f,
            transcript,
        },
        NormalizeVariant::FirstAndLast => {
            let y = first_probe(order_d + order_f, |y| {
                is_invertible(&shifted(&d1, b, y)) && is_invertible(&shifted(&id_d, &c1, -y))
            })
            .ok_or_else(|| Error::NoFullRankInSpan("span{B, D}".into()))?;
            let l = inverse(&shifted(&id_d, &c1, -y))?;
            let q2 = inverse(&shifted(&d1, b, y))?;
            transcript.push(format!("y = {y}: (I − yC')⊗B + C'⊗(D' + yB)"));
            transcript.push("left-multiply first factor by (I − yC')⁻¹, right-multiply second by (D' + yB)⁻¹".into());
            Sr2Normalized {
                x,
                y: Some(y),
                a: id_d,
                b: b * &q2,
                c: &l * &c1,
                d: id_f,
                left: &l * &p1,
                right: q2,
                transcript,
            }
        }
        NormalizeVariant::FirstAndSecond => {
            let y = first_probe(order_f, |y| is_invertible(&shifted(b, &d1, y)))
                .ok_or_else(|| Error::NoFullRankInSpan("span{B, D}".into()))?;
            let q2 = inverse(&shifted(b, &d1, y))?;
            transcript.push(format!("y = {y}: I⊗(B + yD') + (C' − yI)⊗D'"));
            transcript.push("right-multiply second factor by (B + yD')⁻¹".into());
            Sr2Normalized {
                x,
                y: Some(y),
                a: id_d.clone(),
                b: id_f,
                c: shifted(&c1, &id_d, -y),
                d: &d1 * &q2,
                left: p1,
                right: q2,
                transcript,
            }
        }
    };
    Ok(out)
}

fn square_pad(m: &ExactMatrix) -> ExactMatrix {
    let n = m.rows().max(m.cols());
    m.pad_to(n, n)
}

/// `rank(A⊗B + C⊗D) = Σ_j rank(a_j·B + c_j·D)` for diagonal `A = diag(a_j)`,
/// `C = diag(c_j)`. Rectangular inputs are padded with zero rows or columns
/// to square first.
pub fn sr2_rank_via_pencil(a: &ExactMatrix, c: &ExactMatrix, b: &ExactMatrix, d: &ExactMatrix) -> Result<usize> {
    if a.shape() != c.shape() || b.shape() != d.shape() {
        return Err(Error::ShapeMismatch("A, C and B, D must share shapes".into()));
    }
    let (ap, cp, bp, dp) = (square_pad(a), square_pad(c), square_pad(b), square_pad(d));
    if !ap.is_diagonal() || !cp.is_diagonal() {
        return Err(Error::NotDiagonal("A and C must be diagonal".into()));
    }
    let total: usize = (0..ap.rows())
        .map(|j| {
            let (aj, cj) = (ap.get(j, j), cp.get(j, j));
            rank(&(&bp.scale(aj) + &dp.scale(cj)))
        })
        .sum();
    let direct = rank(&(&a.kron(b) + &c.kron(d)));
    if total != direct {
        return Err(Error::VerificationFailed(format!("pencil sum {total} differs from direct rank {direct}")));
    }
    Ok(total)
}

/// Spectrum `{α_j + β_k}` of `(A⁻¹⊗I)·(A⊗B + C⊗D)·(I⊗D⁻¹)` for diagonal
/// inputs, where `α_j = C_jj/A_jj` and `β_k = B_kk/D_kk`, listed `j`-major.
/// Each value is checked to be a root of the characteristic polynomial.
pub fn eigen_sum_spectrum(a: &ExactMatrix, c: &ExactMatrix, b: &ExactMatrix, d: &ExactMatrix) -> Result<Vec<Rational>> {
    for (name, m) in [("A", a), ("B", b), ("C", c), ("D", d)] {
        if !m.is_square() || !m.is_diagonal() {
            return Err(Error::NotDiagonal(name.into()));
        }
    }
    if a.rows() != c.rows() || b.rows() != d.rows() {
        return Err(Error::ShapeMismatch("A, C and B, D must pair up in order".into()));
    }
    let (ai, di) = (inverse(a).map_err(|_| Error::NotInvertible("A".into()))?, inverse(d).map_err(|_| Error::NotInvertible("D".into()))?);
    let (nd, nf) = (a.rows(), b.rows());
    let alpha: Vec<Rational> = (0..nd).map(|j| c.get(j, j) / a.get(j, j)).collect();
    let beta: Vec<Rational> = (0..nf).map(|k| b.get(k, k) / d.get(k, k)).collect();
    let spectrum: Vec<Rational> = alpha.iter().flat_map(|x| beta.iter().map(move |y| x + y)).collect();

    let x = &ExactMatrix::identity(nd).kron(&(b * &di)) + &(&ai * c).kron(&ExactMatrix::identity(nf));
    let id = ExactMatrix::identity(nd * nf);
    let mut checked: Vec<&Rational> = Vec::new();
    for lambda in &spectrum {
        if checked.contains(&lambda) {
            continue;
        }
        if !determinant(&(&x - &id.scale(lambda)))?.is_zero() {
            return Err(Error::VerificationFailed(format!("{lambda} is not an eigenvalue")));
        }
        checked.push(lambda);
    }
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::BipartiteShape;
    use crate::linalg::ratio;
    use crate::mat;

    fn assemble(a: &ExactMatrix, b: &ExactMatrix, c: &ExactMatrix, d: &ExactMatrix) -> ExactMatrix {
        &a.kron(b) + &c.kron(d)
    }

    #[test]
    fn diagonal_pencil_is_already_reduced() {
        let m = BipartiteMatrix::from_terms(&[
            (mat![[1, 0], [0, 0]], mat![[1, 0], [0, 0]]),
            (mat![[0, 0], [0, 1]], mat![[0, 0], [0, 1]]),
        ])
        .unwrap();
        let red = reduce_sr2(&m).unwrap();
        assert_eq!(m.apply_local(&red.witness).unwrap(), red.reduced);
        assert_eq!(red.reduced.rank(), 2);
        assert_eq!(red.a_side.r, 1);
        assert_eq!(red.pairs[0].0, mat![[1, 0], [0, 0]]);
    }

    #[test]
    fn reduction_preserves_invariants() {
        let s = BipartiteShape::new(2, 3, 3, 2).unwrap();
        let m = BipartiteMatrix::from_terms(&[
            (mat![[1, 2, 0], [0, 1, 1]], mat![[1, 0], [2, 1], [0, 3]]),
            (mat![[0, 1, 1], [1, 0, 2]], mat![[0, 1], [1, 1], [1, 0]]),
        ])
        .unwrap();
        assert_eq!(m.shape(), s);
        let red = reduce_sr2(&m).unwrap();
        assert_eq!(m.apply_local(&red.witness).unwrap(), red.reduced);
        assert_eq!(red.reduced.rank(), m.rank());
        assert_eq!(red.reduced.schmidt_rank(), 2);
        assert_eq!(
            red.reduced.partial_transpose(crate::System::B).rank(),
            m.partial_transpose(crate::System::B).rank()
        );
        assert_eq!(red.pairs[0].0, ExactMatrix::identity(red.a_side.r).pad_to(2, 3));
    }

    #[test]
    fn full_rank_first_factor_becomes_identity() {
        let m = BipartiteMatrix::from_terms(&[
            (mat![[2, 1], [1, 1]], mat![[1, 0, 0]]),
            (mat![[0, 1], [0, 0]], mat![[0, 1, 0]]),
        ])
        .unwrap();
        let red = reduce_sr2(&m).unwrap();
        // the Schmidt basis may mix the terms; either way one side has full rank
        assert!(red.a_side.r >= 1);
        assert_eq!(m.apply_local(&red.witness).unwrap(), red.reduced);
    }

    #[test]
    fn reduce_rejects_other_ranks() {
        let m = BipartiteMatrix::new(BipartiteShape::new(2, 2, 2, 2).unwrap(), full_rank_grid()).unwrap();
        assert!(matches!(reduce_sr2(&m), Err(Error::WrongSchmidtRank { found: 4, .. })));
    }

    fn full_rank_grid() -> ExactMatrix {
        mat![[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]]
    }

    #[test]
    fn normalize_identity_is_trivial() {
        let (b, c, d) = (mat![[1, 2], [0, 1]], mat![[0, 1], [1, 0]], mat![[3, 0], [0, 1]]);
        let n = sr2_normalize(&ExactMatrix::identity(2), &b, &c, &d, NormalizeVariant::First).unwrap();
        assert_eq!(n.x, 0);
        assert_eq!((n.c, n.d), (c, d));
    }

    #[test]
    fn normalize_finds_shift() {
        let (a, c) = (mat![[1, 0], [0, 0]], mat![[0, 0], [0, 1]]);
        let (b, d) = (mat![[1, 1], [0, 1]], mat![[2, 0], [1, 1]]);
        let n = sr2_normalize(&a, &b, &c, &d, NormalizeVariant::First).unwrap();
        assert_eq!(n.x, 1);
        assert_eq!(n.a, ExactMatrix::identity(2));
        let lhs = assemble(&n.a, &n.b, &n.c, &n.d);
        let rhs = &(&n.left.kron(&ExactMatrix::identity(2)) * &assemble(&a, &b, &c, &d))
            * &ExactMatrix::identity(2).kron(&n.right);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalize_both_variants() {
        let (a, c) = (mat![[1, 0], [0, 0]], mat![[0, 0], [0, 1]]);
        let (b, d) = (mat![[1, 0, 0], [0, 0, 0], [0, 0, 1]], mat![[0, 0, 1], [0, 1, 0], [0, 0, 0]]);
        let x = assemble(&a, &b, &c, &d);
        for variant in [NormalizeVariant::FirstAndLast, NormalizeVariant::FirstAndSecond] {
            let n = sr2_normalize(&a, &b, &c, &d, variant).unwrap();
            assert_eq!(n.a, ExactMatrix::identity(2));
            match variant {
                NormalizeVariant::FirstAndLast => assert_eq!(n.d, ExactMatrix::identity(3)),
                _ => assert_eq!(n.b, ExactMatrix::identity(3)),
            }
            let rhs = &(&n.left.kron(&ExactMatrix::identity(3)) * &x) * &ExactMatrix::identity(2).kron(&n.right);
            assert_eq!(assemble(&n.a, &n.b, &n.c, &n.d), rhs);
        }
    }

    #[test]
    fn normalize_rejects_singular_pencil() {
        let err = sr2_normalize(
            &mat![[1, 0], [0, 0]],
            &ExactMatrix::identity(1),
            &mat![[2, 0], [0, 0]],
            &ExactMatrix::identity(1),
            NormalizeVariant::First,
        );
        assert!(matches!(err, Err(Error::NoFullRankInSpan(_))));
        let err = sr2_normalize(
            &ExactMatrix::identity(2),
            &mat![[1, 0], [0, 0]],
            &mat![[1, 1], [0, 1]],
            &mat![[1, 0], [0, 0]],
            NormalizeVariant::FirstAndLast,
        );
        assert!(matches!(err, Err(Error::NoFullRankInSpan(_))));
    }

    #[test]
    fn pencil_rank_examples() {
        let (b, d) = (mat![[1, 2], [2, 4]], mat![[1, 0], [0, 1]]);
        let r = sr2_rank_via_pencil(&mat![[1, 0], [0, 0]], &mat![[0, 0], [0, 1]], &b, &d).unwrap();
        assert_eq!(r, 3);
        let r = sr2_rank_via_pencil(&ExactMatrix::identity(2), &ExactMatrix::zeros(2, 2), &b, &d).unwrap();
        assert_eq!(r, 2);
        let r = sr2_rank_via_pencil(&mat![[1, 0], [0, 2]], &ExactMatrix::identity(2), &b, &mat![[-1, -2], [-2, -4]]).unwrap();
        // a_j·B + c_j·D = (a_j − 1)·B: ranks 0 and 1
        assert_eq!(r, 1);
    }

    #[test]
    fn pencil_rank_pads_rectangular() {
        let r = sr2_rank_via_pencil(
            &mat![[1, 0, 0], [0, 1, 0]],
            &mat![[0, 0, 0], [0, 2, 0]],
            &mat![[1], [0]],
            &mat![[0], [1]],
        )
        .unwrap();
        assert_eq!(r, 2);
        assert!(matches!(
            sr2_rank_via_pencil(&mat![[1, 1], [0, 1]], &ExactMatrix::identity(2), &mat![[1]], &mat![[1]]),
            Err(Error::NotDiagonal(_))
        ));
    }

    #[test]
    fn spectrum_examples() {
        let id = ExactMatrix::identity(2);
        let s = eigen_sum_spectrum(&id, &ExactMatrix::diag_ints(&[1, 2]), &ExactMatrix::diag_ints(&[3, 4]), &id).unwrap();
        assert_eq!(s, [4, 5, 5, 6].map(rat));
        let s = eigen_sum_spectrum(
            &ExactMatrix::diag_ints(&[1, 2]),
            &ExactMatrix::diag_ints(&[2, 2]),
            &ExactMatrix::diag_ints(&[1, 0]),
            &id,
        )
        .unwrap();
        assert_eq!(s, [3, 2, 2, 1].map(rat));
        let s = eigen_sum_spectrum(&id, &ExactMatrix::zeros(2, 2), &ExactMatrix::diag_ints(&[1, 3]), &ExactMatrix::diag_ints(&[2, 3]))
            .unwrap();
        assert_eq!(s, vec![ratio(1, 2), rat(1), ratio(1, 2), rat(1)]);
    }

    #[test]
    fn spectrum_errors() {
        let id = ExactMatrix::identity(2);
        let sing = ExactMatrix::diag_ints(&[1, 0]);
        assert!(matches!(eigen_sum_spectrum(&sing, &id, &id, &id), Err(Error::NotInvertible(_))));
        assert!(matches!(eigen_sum_spectrum(&id, &id, &id, &sing), Err(Error::NotInvertible(_))));
        assert!(matches!(eigen_sum_spectrum(&id, &mat![[0, 1], [0, 0]], &id, &id), Err(Error::NotDiagonal(_))));
    }
}
