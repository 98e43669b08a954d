//! Integer matrices, Smith normal forms and finitely generated abelian groups.

mod dense_smith;
mod group;
mod matrix;
mod modp;
mod sparse_smith;

pub use dense_smith::{identity, in_image, kernel_basis, matmul, smith_diagonal, smith_normal_form, DenseMatrix, SmithDecomposition};
pub use group::{homology_from_invariants, HomologyGroup};
pub use matrix::IntMatrix;
pub use modp::rank_mod_p;
pub use sparse_smith::{invariant_factors, smith_invariants, smith_invariants_dense, SmithInvariants};

/// Dense Smith form of a sparse matrix with transforms.
pub fn smith_with_transforms(m: &IntMatrix) -> SmithDecomposition {
    smith_normal_form(&m.to_big_dense(), m.nrows(), m.ncols())
}
