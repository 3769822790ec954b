//! Exact-arithmetic lattice and integer-programming toolkit.
//!
//! Solves the shortest-vector problem for integral lattices of bounded
//! determinant via a normal-form dynamic program, and integer linear
//! programs whose constraint matrices have no singular rank submatrices
//! via reduction to a group-minimization problem. Every solver is paired
//! with an independent brute-force oracle.

pub mod bounds;
pub mod error;
pub mod gen;
pub mod hnf;
pub mod ilp;
pub mod io;
pub mod matrix;
pub mod snf;
pub mod svp;

pub use error::{Error, Result};
