//! Exact rational and quaternion arithmetic and canonical-form linear algebra.

pub mod matrix;
pub mod quaternion;
pub mod rational;
pub mod sparse;
pub mod subspace;

pub use matrix::{rref, RatMatrix};
pub use quaternion::{basis_product, Quaternion};
pub use rational::{ParseRationalError, Rational};
pub use sparse::{kernel_of_equation_iter, kernel_of_equations, Accumulator, Reducer, SparseVec};
pub use subspace::{image, intersect, kernel, quotient_basis, sum, LinalgError, Subspace};
