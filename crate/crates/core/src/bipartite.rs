//! Matrices in `M_{m1,n1} ⊗ M_{m2,n2}` viewed as an `m1×n1` grid of `m2×n2`
//! blocks. Row `(i, a)` of the full matrix is `i·m2 + a`, column `(j, b)` is
//! `j·n2 + b`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{full_rank_factorization, is_invertible, rank, ExactMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteShape {
    pub m1: usize,
    pub n1: usize,
    pub m2: usize,
    pub n2: usize,
}

impl BipartiteShape {
    pub fn new(m1: usize, n1: usize, m2: usize, n2: usize) -> Result<Self> {
        if m1 == 0 || n1 == 0 || m2 == 0 || n2 == 0 {
            return Err(Error::WrongShape(format!(
                "all dimensions must be positive, got ({m1},{n1},{m2},{n2})"
            )));
        }
        Ok(Self { m1, n1, m2, n2 })
    }

    pub fn rows(&self) -> usize {
        self.m1 * self.m2
    }

    pub fn cols(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn entry_count(&self) -> usize {
        self.rows() * self.cols()
    }

    /// Shape after transposing the outer (block position) indices.
    pub fn gamma_a(&self) -> Self {
        Self { m1: self.n1, n1: self.m1, ..*self }
    }

    /// Shape after transposing every inner block.
    pub fn gamma_b(&self) -> Self {
        Self { m2: self.n2, n2: self.m2, ..*self }
    }

    pub fn transposed(&self) -> Self {
        Self {
            m1: self.n1,
            n1: self.m1,
            m2: self.n2,
            n2: self.m2,
        }
    }
}

impl fmt::Display for BipartiteShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.m1, self.n1, self.m2, self.n2)
    }
}

/// Which tensor factor a partial transpose acts on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum System {
    A,
    #[default]
    B,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::A => "A",
            System::B => "B",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipartiteMatrix {
    shape: BipartiteShape,
    data: ExactMatrix,
}

impl BipartiteMatrix {
    pub fn new(shape: BipartiteShape, data: ExactMatrix) -> Result<Self> {
        if data.shape() != (shape.rows(), shape.cols()) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix does not fit bipartite shape {shape}",
                data.rows(),
                data.cols()
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: BipartiteShape) -> Self {
        Self {
            shape,
            data: ExactMatrix::zeros(shape.rows(), shape.cols()),
        }
    }

    /// Assembles the matrix from an `m1×n1` grid of `m2×n2` blocks.
    pub fn from_blocks(shape: BipartiteShape, blocks: &[Vec<ExactMatrix>]) -> Result<Self> {
        if blocks.len() != shape.m1 || blocks.iter().any(|row| row.len() != shape.n1) {
            return Err(Error::ShapeMismatch(format!(
                "block grid must be {}x{}",
                shape.m1, shape.n1
            )));
        }
        let mut data = ExactMatrix::zeros(shape.rows(), shape.cols());
        for (i, row) in blocks.iter().enumerate() {
            for (j, block) in row.iter().enumerate() {
                if block.shape() != (shape.m2, shape.n2) {
                    return Err(Error::ShapeMismatch(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        block.rows(),
                        block.cols(),
                        shape.m2,
                        shape.n2
                    )));
                }
                data.set_block(i * shape.m2, j * shape.n2, block);
            }
        }
        Ok(Self { shape, data })
    }

    /// `Σ_k A_k ⊗ B_k` for pairs of equal outer and inner shapes.
    pub fn from_terms(pairs: &[(ExactMatrix, ExactMatrix)]) -> Result<Self> {
        let Some((a0, b0)) = pairs.first() else {
            return Err(Error::ShapeMismatch("no Kronecker terms supplied".into()));
        };
        let shape = BipartiteShape::new(a0.rows(), a0.cols(), b0.rows(), b0.cols())?;
        let mut acc = ExactMatrix::zeros(shape.rows(), shape.cols());
        for (a, b) in pairs {
            if a.shape() != a0.shape() || b.shape() != b0.shape() {
                return Err(Error::ShapeMismatch("Kronecker terms differ in shape".into()));
            }
            acc = &acc + &a.kron(b);
        }
        Ok(Self { shape, data: acc })
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> ExactMatrix {
        self.data
    }

    pub fn block(&self, i: usize, j: usize) -> ExactMatrix {
        let s = self.shape;
        self.data.submatrix(i * s.m2, j * s.n2, s.m2, s.n2)
    }

    pub fn blocks(&self) -> Vec<Vec<ExactMatrix>> {
        (0..self.shape.m1)
            .map(|i| (0..self.shape.n1).map(|j| self.block(i, j)).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_zero()
    }

    /// The `(m1·n1)×(m2·n2)` matrix whose row `i·n1 + j` is the row-major
    /// vectorization of block `(i, j)`.
    pub fn realign(&self) -> ExactMatrix {
        let s = self.shape;
        ExactMatrix::from_fn(s.m1 * s.n1, s.m2 * s.n2, |row, col| {
            let (i, j) = (row / s.n1, row % s.n1);
            let (a, b) = (col / s.n2, col % s.n2);
            self.data.get(i * s.m2 + a, j * s.n2 + b).clone()
        })
    }

    /// Number of linearly independent blocks.
    pub fn schmidt_rank(&self) -> usize {
        rank(&self.realign())
    }

    /// Splits the matrix into `Sr(M)` Kronecker terms.
    ///
    /// Factoring the realignment as `C·F`, the `B_k` are the reduced
    /// echelon rows of the realignment folded back into `m2×n2` blocks and
    /// the `A_k` are the matching columns of `C` folded into `m1×n1`.
    pub fn schmidt_decompose(&self) -> Result<SchmidtDecomposition> {
        if self.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        let s = self.shape;
        let (c, f) = full_rank_factorization(&self.realign())?;
        let pairs = (0..c.cols())
            .map(|k| {
                let a = ExactMatrix::from_fn(s.m1, s.n1, |i, j| c.get(i * s.n1 + j, k).clone());
                let b = ExactMatrix::from_fn(s.m2, s.n2, |x, y| f.get(k, x * s.n2 + y).clone());
                (a, b)
            })
            .collect();
        Ok(SchmidtDecomposition { pairs })
    }

    pub fn partial_transpose(&self, system: System) -> Self {
        let s = self.shape;
        match system {
            System::A => {
                let t = s.gamma_a();
                let data = ExactMatrix::from_fn(t.rows(), t.cols(), |row, col| {
                    let (j, a) = (row / s.m2, row % s.m2);
                    let (i, b) = (col / s.n2, col % s.n2);
                    self.data.get(i * s.m2 + a, j * s.n2 + b).clone()
                });
                Self { shape: t, data }
            }
            System::B => {
                let t = s.gamma_b();
                let data = ExactMatrix::from_fn(t.rows(), t.cols(), |row, col| {
                    let (i, b) = (row / s.n2, row % s.n2);
                    let (j, a) = (col / s.m2, col % s.m2);
                    self.data.get(i * s.m2 + a, j * s.n2 + b).clone()
                });
                Self { shape: t, data }
            }
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            shape: self.shape.transposed(),
            data: self.data.transpose(),
        }
    }

    /// `(P1 ⊗ P2) · M · (Q1 ⊗ Q2)`.
    pub fn apply_local(&self, w: &LocalEquivWitness) -> Result<Self> {
        w.check_against(self.shape)?;
        let left = w.p1.kron(&w.p2);
        let right = w.q1.kron(&w.q2);
        Ok(Self {
            shape: self.shape,
            data: &(&left * &self.data) * &right,
        })
    }
}

impl fmt::Debug for BipartiteMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BipartiteMatrix{}{}", self.shape, self.data)
    }
}

/// `M = Σ_k A_k ⊗ B_k` with both factor families linearly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchmidtDecomposition {
    pub pairs: Vec<(ExactMatrix, ExactMatrix)>,
}

impl SchmidtDecomposition {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn reconstruct(&self) -> Result<BipartiteMatrix> {
        BipartiteMatrix::from_terms(&self.pairs)
    }

    /// Dimension of `span{A_k}`.
    pub fn a_family_rank(&self) -> usize {
        family_rank(self.pairs.iter().map(|(a, _)| a))
    }

    /// Dimension of `span{B_k}`.
    pub fn b_family_rank(&self) -> usize {
        family_rank(self.pairs.iter().map(|(_, b)| b))
    }
}

/// Rank of the matrix whose rows are the vectorized members.
pub fn family_rank<'a>(members: impl IntoIterator<Item = &'a ExactMatrix>) -> usize {
    let rows: Vec<ExactMatrix> = members.into_iter().map(ExactMatrix::vec_row).collect();
    if rows.is_empty() {
        return 0;
    }
    let refs: Vec<&ExactMatrix> = rows.iter().collect();
    ExactMatrix::vstack(&refs).map(|m| rank(&m)).unwrap_or(0)
}

/// The invertible factors of a local equivalence `(P1⊗P2)·M·(Q1⊗Q2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalEquivWitness {
    pub p1: ExactMatrix,
    pub p2: ExactMatrix,
    pub q1: ExactMatrix,
    pub q2: ExactMatrix,
}

impl LocalEquivWitness {
    pub fn identity(shape: BipartiteShape) -> Self {
        Self {
            p1: ExactMatrix::identity(shape.m1),
            p2: ExactMatrix::identity(shape.m2),
            q1: ExactMatrix::identity(shape.n1),
            q2: ExactMatrix::identity(shape.n2),
        }
    }

    pub fn is_identity(&self) -> bool {
        [&self.p1, &self.p2, &self.q1, &self.q2]
            .iter()
            .all(|m| **m == ExactMatrix::identity(m.rows()))
    }

    /// Checks sizes against `shape` and invertibility of all four factors.
    pub fn check_against(&self, shape: BipartiteShape) -> Result<()> {
        let expected = [
            ("P1", &self.p1, shape.m1),
            ("P2", &self.p2, shape.m2),
            ("Q1", &self.q1, shape.n1),
            ("Q2", &self.q2, shape.n2),
        ];
        for (name, m, n) in expected {
            if m.shape() != (n, n) {
                return Err(Error::ShapeMismatch(format!(
                    "{name} is {}x{}, expected {n}x{n} for shape {shape}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (name, m, _) in expected {
            if !is_invertible(m) {
                return Err(Error::NotInvertible(format!("witness factor {name}")));
            }
        }
        Ok(())
    }

    /// The witness equivalent to applying `self` first and then `next`.
    pub fn then(&self, next: &Self) -> Self {
        Self {
            p1: &next.p1 * &self.p1,
            p2: &next.p2 * &self.p2,
            q1: &self.q1 * &next.q1,
            q2: &self.q2 * &next.q2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::mat;

    fn shape(m1: usize, n1: usize, m2: usize, n2: usize) -> BipartiteShape {
        BipartiteShape::new(m1, n1, m2, n2).unwrap()
    }

    #[test]
    fn single_block_is_itself() {
        let b = mat![[1, 2, 3], [4, 5, 6]];
        let m = BipartiteMatrix::from_blocks(shape(1, 1, 2, 3), &[vec![b.clone()]]).unwrap();
        assert_eq!(m.matrix(), &b);
        assert_eq!(m.block(0, 0), b);
    }

    #[test]
    fn diagonal_grid_is_kron_with_identity() {
        let b = mat![[1, 2], [3, 4]];
        let z = ExactMatrix::zeros(2, 2);
        let m = BipartiteMatrix::from_blocks(shape(2, 2, 2, 2), &[vec![b.clone(), z.clone()], vec![z, b.clone()]])
            .unwrap();
        assert_eq!(m.matrix(), &ExactMatrix::identity(2).kron(&b));
    }

    #[test]
    fn canonical_rank_one_grid_assembles() {
        let e = |i, j| ExactMatrix::unit(2, 2, i, j);
        let m = BipartiteMatrix::from_blocks(shape(2, 2, 2, 2), &[vec![e(0, 0), e(0, 1)], vec![e(1, 0), e(1, 1)]])
            .unwrap();
        let want = mat![[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]];
        assert_eq!(m.matrix(), &want);
    }

    #[test]
    fn wrong_block_size_is_rejected() {
        let err = BipartiteMatrix::from_blocks(shape(1, 2, 2, 2), &[vec![ExactMatrix::zeros(2, 2), ExactMatrix::zeros(2, 3)]]);
        assert!(matches!(err, Err(Error::ShapeMismatch(msg)) if msg.contains("block (0,1)")));
    }

    #[test]
    fn blocks_round_trip() {
        let s = shape(2, 3, 2, 1);
        let data = ExactMatrix::from_fn(4, 3, |i, j| rat((i * 3 + j) as i64));
        let m = BipartiteMatrix::new(s, data).unwrap();
        assert_eq!(BipartiteMatrix::from_blocks(s, &m.blocks()).unwrap(), m);
    }

    #[test]
    fn product_has_schmidt_rank_one() {
        let m = BipartiteMatrix::from_terms(&[(mat![[1, 2], [0, 1]], mat![[3, 0, 1]])]).unwrap();
        assert_eq!(m.schmidt_rank(), 1);
        let d = m.schmidt_decompose().unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.reconstruct().unwrap(), m);
    }

    #[test]
    fn zero_matrix_has_schmidt_rank_zero() {
        let m = BipartiteMatrix::zeros(shape(2, 2, 2, 2));
        assert_eq!(m.schmidt_rank(), 0);
        assert!(matches!(m.schmidt_decompose(), Err(Error::ZeroMatrix)));
    }

    #[test]
    fn identity_is_a_single_product() {
        let m = BipartiteMatrix::new(shape(2, 2, 2, 2), ExactMatrix::identity(4)).unwrap();
        assert_eq!(m.schmidt_rank(), 1);
    }

    #[test]
    fn distinct_diagonal_blocks_split_into_two_terms() {
        let m = BipartiteMatrix::new(shape(2, 2, 2, 2), ExactMatrix::diag_ints(&[1, 1, 1, 2])).unwrap();
        let d = m.schmidt_decompose().unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.reconstruct().unwrap(), m);
        assert_eq!(d.a_family_rank(), 2);
        assert_eq!(d.b_family_rank(), 2);
    }

    #[test]
    fn gamma_b_of_product_transposes_second_factor() {
        let a = mat![[1, 2], [3, 4]];
        let b = mat![[1, 0, 2], [0, 1, 1]];
        let m = BipartiteMatrix::from_terms(&[(a.clone(), b.clone())]).unwrap();
        let g = m.partial_transpose(System::B);
        assert_eq!(g.matrix(), &a.kron(&b.transpose()));
        assert_eq!(g.shape(), shape(2, 2, 3, 2));
        assert_eq!(g.rank(), m.rank());
    }

    #[test]
    fn gamma_a_fixes_block_diagonal() {
        let s = shape(2, 2, 2, 2);
        let z = ExactMatrix::zeros(2, 2);
        let m = BipartiteMatrix::from_blocks(s, &[vec![mat![[1, 2], [3, 4]], z.clone()], vec![z, mat![[0, 1], [1, 1]]]])
            .unwrap();
        assert_eq!(m.partial_transpose(System::A), m);
    }

    #[test]
    fn gamma_a_moves_blocks() {
        let s = shape(1, 2, 1, 1);
        let m = BipartiteMatrix::new(s, mat![[1, 2]]).unwrap();
        let g = m.partial_transpose(System::A);
        assert_eq!(g.shape(), shape(2, 1, 1, 1));
        assert_eq!(g.matrix(), &mat![[1], [2]]);
    }

    #[test]
    fn gamma_of_canonical_rank_one_has_rank_four() {
        let m = BipartiteMatrix::new(shape(2, 2, 2, 2), mat![[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]])
            .unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.partial_transpose(System::A).rank(), 4);
        assert_eq!(m.partial_transpose(System::B).rank(), 4);
    }

    #[test]
    fn local_identity_is_noop() {
        let s = shape(2, 1, 2, 3);
        let m = BipartiteMatrix::new(s, ExactMatrix::from_fn(4, 3, |i, j| rat((i + 2 * j) as i64 % 3))).unwrap();
        assert_eq!(m.apply_local(&LocalEquivWitness::identity(s)).unwrap(), m);
    }

    #[test]
    fn outer_swap_permutes_block_rows() {
        let s = shape(2, 2, 2, 2);
        let m = BipartiteMatrix::new(s, ExactMatrix::from_fn(4, 4, |i, j| rat((i * 4 + j) as i64))).unwrap();
        let mut w = LocalEquivWitness::identity(s);
        w.p1 = mat![[0, 1], [1, 0]];
        let n = m.apply_local(&w).unwrap();
        assert_eq!(n.block(0, 0), m.block(1, 0));
        assert_eq!(n.block(1, 1), m.block(0, 1));
        assert_eq!(n.schmidt_rank(), m.schmidt_rank());
    }

    #[test]
    fn local_witness_errors() {
        let s = shape(2, 2, 2, 2);
        let m = BipartiteMatrix::zeros(s);
        let mut w = LocalEquivWitness::identity(s);
        w.q2 = mat![[1, 1], [1, 1]];
        assert!(matches!(m.apply_local(&w), Err(Error::NotInvertible(_))));
        w.q2 = ExactMatrix::identity(3);
        assert!(matches!(m.apply_local(&w), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn witness_composition() {
        let s = shape(2, 2, 1, 2);
        let m = BipartiteMatrix::new(s, ExactMatrix::from_fn(2, 4, |i, j| rat((i * 7 + j * 3) as i64 % 5))).unwrap();
        let mut w1 = LocalEquivWitness::identity(s);
        w1.p1 = mat![[1, 1], [0, 1]];
        w1.q2 = mat![[2, 0], [1, 1]];
        let mut w2 = LocalEquivWitness::identity(s);
        w2.q1 = mat![[0, 1], [1, 0]];
        w2.q2 = mat![[1, 3], [0, 1]];
        let stepwise = m.apply_local(&w1).unwrap().apply_local(&w2).unwrap();
        assert_eq!(m.apply_local(&w1.then(&w2)).unwrap(), stepwise);
    }
}
