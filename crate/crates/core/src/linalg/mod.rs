//! Exact dense linear algebra over the rationals.

mod elimination;
mod matrix;
mod pencil;

pub use elimination::{
    complete_columns, complete_rows, determinant, full_rank_factorization, integer_probes, inverse,
    is_invertible, nullspace, rank, rank_normal_form, rref_with_witness, RowEchelon,
};
pub use matrix::{rat, ratio, ExactMatrix};
pub use pencil::{minimal_kernel_polynomial, pencil_singular_directions, Direction, PencilRoots};

impl ExactMatrix {
    pub fn rank(&self) -> usize {
        rank(self)
    }
}
