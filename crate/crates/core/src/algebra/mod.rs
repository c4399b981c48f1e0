//! Graded linear algebra over the rationals: dg Frobenius algebras, abstract
//! Hodge decompositions, the heat kernel `K_t` and the closed edge form.
//!
//! Sign convention: moving an odd symbol past an odd symbol costs `-1`.
//! Operators are square matrices acting on column vectors, so
//! `d(x_j) = sum_i d[i][j] x_i` and composition is matrix product.
//! A two-legged tensor `sum c[i][j] x_i (x) x_j` is stored as the matrix `c`.

mod frobenius;
mod heat;
mod hodge;
mod tensor;

pub use frobenius::{vertex_tensor_disk, DgFrobeniusAlgebra};
pub use heat::{alpha_form, heat_kernel, EdgeForm, FormComponents, HeatKernel};
pub use hodge::{construct_hodge, hodge_candidates, validate_hodge, HodgeDecomposition};
pub use tensor::{koszul_sign, GradedTensor};
