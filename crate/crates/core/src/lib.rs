//! Exact Satake-level calculus for automorphic induction and base change of
//! unramified representations of GL(n) along cyclic unramified algebras.

pub mod arith;
pub mod error;
pub mod global;
pub mod hecke;
pub mod json;
pub mod reps;
pub mod satake;
pub mod verify;

pub use arith::{Coordinate, Cyclo, QCyclo, RootOfUnity};
pub use error::{Error, Result};
pub use json::{DocError, FromJson};
pub use hecke::{SymLaurent, Tensor};
pub use reps::{CuspidalAtom, Factor, Product, RepDocument, Side};
pub use satake::{CyclicAlgebra, SatakeParam, SphericalRepE};
