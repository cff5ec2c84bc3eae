//! Determinant pencils `det(a·A + b·B)` for square `A`, `B` of equal order.
//!
//! The determinant is a homogeneous form of degree `n` in `(a, b)`. We
//! recover its coefficients by exact interpolation of `t ↦ det(A + t·B)` at
//! `t = 0..=n`, then split off every rational projective root. Roots that are
//! not rational are reported only through their total degree.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::{determinant, nullspace, ExactMatrix};
use crate::error::{Error, Result};
use crate::linalg::rat;
use crate::Rational;

/// A projective direction `(a : b)` as a primitive integer pair whose first
/// nonzero coordinate is positive.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Direction {
    #[serde_as(as = "DisplayFromStr")]
    pub a: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub b: BigInt,
    pub multiplicity: usize,
}

impl Direction {
    fn from_slope(t: &Rational, multiplicity: usize) -> Self {
        // (1 : p/q) ~ (q : p), with q > 0 already.
        Self {
            a: t.denom().clone(),
            b: t.numer().clone(),
            multiplicity,
        }
    }

    fn at_infinity(multiplicity: usize) -> Self {
        Self {
            a: BigInt::zero(),
            b: BigInt::one(),
            multiplicity,
        }
    }

    /// `a·A + b·B`.
    pub fn evaluate(&self, a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
        let ca = Rational::from_integer(self.a.clone());
        let cb = Rational::from_integer(self.b.clone());
        &a.scale(&ca) + &b.scale(&cb)
    }

    pub fn matches(&self, a: &BigInt, b: &BigInt) -> bool {
        // cross-ratio test, so non-primitive pairs also match
        &self.a * b == &self.b * a && !(a.is_zero() && b.is_zero())
    }
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilRoots {
    /// `det(a·A + b·B)` is not identically zero.
    pub regular: bool,
    /// Rational singular directions, ordered by slope `b/a` ascending with
    /// `(0 : 1)` last.
    pub directions: Vec<Direction>,
    /// Number of roots (with multiplicity) that are not rational.
    pub irrational_degree: usize,
    pub count_with_multiplicity: usize,
    /// Coefficients `c_k` of `a^(n-k) b^k`, `k = 0..=n`.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub coefficients: Vec<Rational>,
}

/// Singular directions of the pencil spanned by `a` and `b`.
pub fn pencil_singular_directions(a: &ExactMatrix, b: &ExactMatrix) -> Result<PencilRoots> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "pencil members differ in shape: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let n = a.rows();
    let coefficients = homogeneous_coefficients(a, b)?;
    if coefficients.iter().all(Zero::is_zero) {
        return Ok(PencilRoots {
            regular: false,
            directions: Vec::new(),
            irrational_degree: 0,
            count_with_multiplicity: 0,
            coefficients,
        });
    }

    // q(t) = det(A + tB) = Σ c_k t^k; the form has degree n, so a drop in
    // the degree of q is a root at (0 : 1).
    let degree = coefficients.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let mut directions = Vec::new();
    let (roots, leftover) = rational_roots(&coefficients[..=degree]);
    for (t, mult) in roots {
        directions.push(Direction::from_slope(&t, mult));
    }
    directions.sort_by(slope_order);
    if degree < n {
        directions.push(Direction::at_infinity(n - degree));
    }
    let rational: usize = directions.iter().map(|d| d.multiplicity).sum();
    Ok(PencilRoots {
        regular: true,
        directions,
        irrational_degree: leftover,
        count_with_multiplicity: rational + leftover,
        coefficients,
    })
}

fn slope_order(x: &Direction, y: &Direction) -> Ordering {
    // a > 0 on both sides, so compare b_x/a_x against b_y/a_y by cross-multiplying
    (&x.b * &y.a).cmp(&(&y.b * &x.a))
}

/// Coefficients of `det(A + tB)` by Newton interpolation at `t = 0..=n`.
fn homogeneous_coefficients(a: &ExactMatrix, b: &ExactMatrix) -> Result<Vec<Rational>> {
    let n = a.rows();
    let mut values = Vec::with_capacity(n + 1);
    for t in 0..=n as i64 {
        let m = a + &b.scale(&rat(t));
        values.push(determinant(&m)?);
    }
    // divided differences on nodes 0, 1, ..., n
    let mut dd = values;
    for level in 1..=n {
        for i in (level..=n).rev() {
            let diff = &dd[i] - &dd[i - 1];
            dd[i] = diff / rat(level as i64);
        }
    }
    // expand Σ dd[k] Π_{j<k} (t - j) into monomials
    let mut coeffs = vec![Rational::zero(); n + 1];
    let mut basis = vec![Rational::one()];
    for (k, d) in dd.iter().enumerate() {
        for (i, c) in basis.iter().enumerate() {
            coeffs[i] += d * c;
        }
        let mut next = vec![Rational::zero(); basis.len() + 1];
        for (i, c) in basis.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * rat(k as i64);
        }
        basis = next;
    }
    Ok(coeffs)
}

/// Rational roots of `Σ c_k t^k` with multiplicities, plus the degree of the
/// part with no rational root.
pub(crate) fn rational_roots(coeffs: &[Rational]) -> (Vec<(Rational, usize)>, usize) {
    let mut poly = trim(coeffs.to_vec());
    let mut roots = Vec::new();
    if poly.len() <= 1 {
        return (roots, 0);
    }
    let zero_mult = poly.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
        poly.drain(..zero_mult);
    }
    let ints = primitive_integer_coeffs(&poly);
    let lead = ints.last().cloned().unwrap_or_else(BigInt::one);
    let constant = ints.first().cloned().unwrap_or_else(BigInt::one);
    let mut candidates = Vec::new();
    for p in divisors(&constant) {
        for q in divisors(&lead) {
            let t = Rational::new(p.clone(), q.clone());
            candidates.push(t.clone());
            candidates.push(-t);
        }
    }
    candidates.sort();
    candidates.dedup();
    for t in candidates {
        let mut mult = 0;
        while poly.len() > 1 && horner(&poly, &t).is_zero() {
            poly = deflate(&poly, &t);
            mult += 1;
        }
        if mult > 0 {
            roots.push((t, mult));
        }
    }
    (roots, poly.len() - 1)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn horner(p: &[Rational], t: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

/// Synthetic division by `(x - t)`; assumes `t` is a root.
fn deflate(p: &[Rational], t: &Rational) -> Vec<Rational> {
    let n = p.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (0..n).rev() {
        carry = &carry * t + &p[k + 1];
        q[k] = carry.clone();
    }
    q
}

fn primitive_integer_coeffs(p: &[Rational]) -> Vec<BigInt> {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|c| c / &g).collect()
    }
}

/// Positive divisors of `|n|` by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Coefficients `x_0, …, x_ε` (as `n×1` columns) of a polynomial vector
/// `x(t) = Σ x_i tⁱ` of least degree with `(A + t·B)·x(t) = 0`, or `None`
/// when `A + t·B` has full column rank over `ℚ(t)`.
pub fn minimal_kernel_polynomial(a: &ExactMatrix, b: &ExactMatrix) -> Result<Option<Vec<ExactMatrix>>> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "pencil members are {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let (m, n) = a.shape();
    for eps in 0..n.max(1) {
        // Coefficient of t^i in (A + tB)·x(t) is A·x_i + B·x_{i-1}.
        let mut t = ExactMatrix::zeros(m * (eps + 2), n * (eps + 1));
        for i in 0..=eps {
            t.set_block(i * m, i * n, a);
            t.set_block((i + 1) * m, i * n, b);
        }
        let kernel = nullspace(&t);
        if kernel.cols() > 0 {
            let x = kernel.submatrix(0, 0, kernel.rows(), 1);
            return Ok(Some((0..=eps).map(|i| x.submatrix(i * n, 0, n, 1)).collect()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank, ratio};
    use crate::mat;

    fn dir(a: i64, b: i64, m: usize) -> Direction {
        Direction {
            a: BigInt::from(a),
            b: BigInt::from(b),
            multiplicity: m,
        }
    }

    #[test]
    fn distinct_rational_roots() {
        let roots = pencil_singular_directions(&ExactMatrix::identity(2), &ExactMatrix::diag_ints(&[1, 2])).unwrap();
        assert!(roots.regular);
        // (a + b)(a + 2b)
        assert_eq!(roots.directions, vec![dir(1, -1, 1), dir(2, -1, 1)]);
        assert_eq!(roots.count_with_multiplicity, 2);
        assert_eq!(roots.coefficients, vec![rat(1), rat(3), rat(2)]);
    }

    #[test]
    fn double_root() {
        let i = ExactMatrix::identity(2);
        let roots = pencil_singular_directions(&i, &i).unwrap();
        assert_eq!(roots.directions, vec![dir(1, -1, 2)]);
        assert_eq!(roots.count_with_multiplicity, 2);
    }

    #[test]
    fn identically_singular() {
        let roots = pencil_singular_directions(&ExactMatrix::diag_ints(&[1, 0]), &ExactMatrix::zeros(2, 2)).unwrap();
        assert!(!roots.regular);
        assert!(roots.directions.is_empty());
        assert_eq!(roots.count_with_multiplicity, 0);
    }

    #[test]
    fn root_at_infinity() {
        // det(aI + b·0) = a², so b-axis (0 : 1) is a double root
        let roots = pencil_singular_directions(&ExactMatrix::identity(2), &ExactMatrix::zeros(2, 2)).unwrap();
        assert_eq!(roots.directions, vec![dir(0, 1, 2)]);
    }

    #[test]
    fn irrational_roots_reported_by_degree() {
        // det(aI + bJ) with J a quarter turn is a² + b²
        let j = mat![[0, -1], [1, 0]];
        let roots = pencil_singular_directions(&ExactMatrix::identity(2), &j).unwrap();
        assert!(roots.directions.is_empty());
        assert_eq!(roots.irrational_degree, 2);
        assert_eq!(roots.count_with_multiplicity, 2);
    }

    #[test]
    fn fractional_slopes() {
        // det(a·diag(2,3) + b·I) = (2a + b)(3a + b)
        let roots = pencil_singular_directions(&ExactMatrix::diag_ints(&[2, 3]), &ExactMatrix::identity(2)).unwrap();
        assert_eq!(roots.directions, vec![dir(1, -3, 1), dir(1, -2, 1)]);
        for d in &roots.directions {
            assert!(rank(&d.evaluate(&ExactMatrix::diag_ints(&[2, 3]), &ExactMatrix::identity(2))) < 2);
        }
        let q = ExactMatrix::diag(&[ratio(1, 2), ratio(1, 3)]);
        let roots = pencil_singular_directions(&ExactMatrix::identity(2), &q).unwrap();
        // (a + b/2)(a + b/3): roots b/a = -2, -3
        assert_eq!(roots.directions, vec![dir(1, -3, 1), dir(1, -2, 1)]);
    }

    #[test]
    fn rational_root_finder_on_cubic() {
        // (2t - 1)(t + 3)^2 = 2t³ + 11t² + 12t - 9
        let (roots, rest) = rational_roots(&[rat(-9), rat(12), rat(11), rat(2)]);
        assert_eq!(roots, vec![(rat(-3), 2), (ratio(1, 2), 1)]);
        assert_eq!(rest, 0);
    }

    #[test]
    fn order_zero_pencil() {
        let e = ExactMatrix::zeros(0, 0);
        let roots = pencil_singular_directions(&e, &e).unwrap();
        assert!(roots.regular);
        assert_eq!(roots.count_with_multiplicity, 0);
    }

    #[test]
    fn kernel_polynomial_of_a_jordan_free_block() {
        // [1 0] + t[0 1] has the degree-one kernel vector (-t, 1)ᵀ
        let (a, b) = (mat![[1, 0]], mat![[0, 1]]);
        let x = minimal_kernel_polynomial(&a, &b).unwrap().unwrap();
        assert_eq!(x.len(), 2);
        assert!((&a * &x[0]).is_zero());
        assert_eq!(&a * &x[1], -&(&b * &x[0]));
        assert!((&b * &x[1]).is_zero());
        assert_eq!(rank(&ExactMatrix::hstack(&[&x[0], &x[1]]).unwrap()), 2);
    }

    #[test]
    fn kernel_polynomial_common_kernel_is_constant() {
        let x = minimal_kernel_polynomial(&mat![[1, 1], [2, 2]], &mat![[3, 3], [0, 0]]).unwrap().unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(&mat![[1, 1]] * &x[0], ExactMatrix::zeros(1, 1));
    }

    #[test]
    fn kernel_polynomial_absent_for_full_column_rank() {
        assert_eq!(minimal_kernel_polynomial(&ExactMatrix::identity(2), &mat![[0, 1], [0, 0]]).unwrap(), None);
        assert_eq!(minimal_kernel_polynomial(&mat![[1], [0]], &mat![[0], [0]]).unwrap(), None);
    }
}
