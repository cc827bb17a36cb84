//! Dense linear algebra over F2.

mod bitvec;
mod circuit;
mod elim;
mod matrix;
mod perm;

pub use bitvec::BitVec;
pub use circuit::{decompose, replay, InvertibleCircuit, Step};
pub use elim::{Reducer, Rref};
pub use matrix::BitMatrix;
pub use perm::Permutation;
