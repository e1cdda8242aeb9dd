//! Exact integer linear algebra: Smith normal form, kernels, cokernels.

mod abelian;
mod intmat;
mod snf;

pub use abelian::{cokernel_invariants, AbelianInvariants};
pub use intmat::IntMatrix;
pub use snf::{integer_kernel, rational_rank, smith_normal_form, SmithForm};
