//! Hecke-group elements as exact matrices over `Z[lambda]/(p)`.

mod matrix;
mod ring;
mod symbolic;

pub use matrix::{apply_lft, determinant, word_matrix, HeckeMatrix};
pub use ring::{HeckeContext, ResidueElement};
pub use symbolic::{
    evaluate_symbolic, symbolic_matrix, symbolic_matrix_with, MultilinearPoly, SymbolicMatrix,
    SymbolicOptions, DEFAULT_MAX_TERMS,
};

pub fn context_new(k: i64) -> crate::Result<HeckeContext> {
    HeckeContext::new(k)
}
