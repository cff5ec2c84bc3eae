//! Random instances drawn from small rational entry sets.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bipartite::{BipartiteMatrix, BipartiteShape, LocalEquivWitness};
use crate::linalg::{rat, ratio, ExactMatrix};
use crate::Rational;

/// `{-2, -1, 0, 1, 2}`.
pub fn small_integers() -> Vec<Rational> {
    (-2..=2).map(rat).collect()
}

/// Small integers together with a few proper fractions.
pub fn small_rationals() -> Vec<Rational> {
    vec![rat(-2), rat(-1), ratio(-1, 2), rat(0), rat(0), ratio(1, 3), rat(1), ratio(3, 2), rat(2)]
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, entries: &[Rational]) -> ExactMatrix {
    ExactMatrix::from_fn(rows, cols, |_, _| entries.choose(rng).expect("nonempty entry set").clone())
}

/// A product `X·Y` through an inner dimension of `rank`; its rank is at
/// most `rank`.
pub fn low_rank<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, rank: usize, entries: &[Rational]) -> ExactMatrix {
    &matrix(rng, rows, rank, entries) * &matrix(rng, rank, cols, entries)
}

/// `P·L·U` with unit-triangular `L`, `U` and a random permutation `P`:
/// always invertible.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, entries: &[Rational]) -> ExactMatrix {
    let l = ExactMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => rat(1),
        std::cmp::Ordering::Greater => entries.choose(rng).unwrap().clone(),
        std::cmp::Ordering::Less => rat(0),
    });
    let u = ExactMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => rat(1),
        std::cmp::Ordering::Less => entries.choose(rng).unwrap().clone(),
        std::cmp::Ordering::Greater => rat(0),
    });
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = ExactMatrix::identity(n).select_rows(&perm);
    &(&p * &l) * &u
}

pub fn witness<R: Rng + ?Sized>(rng: &mut R, shape: BipartiteShape, entries: &[Rational]) -> LocalEquivWitness {
    LocalEquivWitness {
        p1: invertible(rng, shape.m1, entries),
        p2: invertible(rng, shape.m2, entries),
        q1: invertible(rng, shape.n1, entries),
        q2: invertible(rng, shape.n2, entries),
    }
}

pub fn bipartite<R: Rng + ?Sized>(rng: &mut R, shape: BipartiteShape, entries: &[Rational]) -> BipartiteMatrix {
    BipartiteMatrix::new(shape, matrix(rng, shape.rows(), shape.cols(), entries)).expect("shape fits")
}

/// `Σ_{k<terms} A_k ⊗ B_k` with random factors; Schmidt rank at most
/// `terms`.
pub fn schmidt_sum<R: Rng + ?Sized>(rng: &mut R, shape: BipartiteShape, terms: usize, entries: &[Rational]) -> BipartiteMatrix {
    if terms == 0 {
        return BipartiteMatrix::zeros(shape);
    }
    let pairs: Vec<_> = (0..terms)
        .map(|_| {
            (
                matrix(rng, shape.m1, shape.n1, entries),
                matrix(rng, shape.m2, shape.n2, entries),
            )
        })
        .collect();
    BipartiteMatrix::from_terms(&pairs).expect("uniform shapes")
}

/// Like [`schmidt_sum`] but with low-rank inner factors, which makes
/// saturation far more likely than uniform sampling does.
pub fn sparse_schmidt_sum<R: Rng + ?Sized>(
    rng: &mut R,
    shape: BipartiteShape,
    terms: usize,
    entries: &[Rational],
) -> BipartiteMatrix {
    let pairs: Vec<_> = (0..terms)
        .map(|_| {
            let ra = rng.gen_range(1..=shape.m1.min(shape.n1));
            let rb = rng.gen_range(1..=shape.m2.min(shape.n2));
            (
                low_rank(rng, shape.m1, shape.n1, ra, entries),
                low_rank(rng, shape.m2, shape.n2, rb, entries),
            )
        })
        .collect();
    BipartiteMatrix::from_terms(&pairs).expect("uniform shapes")
}

pub fn shape_up_to<R: Rng + ?Sized>(rng: &mut R, max: usize) -> BipartiteShape {
    let mut d = || rng.gen_range(1..=max);
    BipartiteShape::new(d(), d(), d(), d()).expect("positive dims")
}
