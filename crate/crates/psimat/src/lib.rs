//! Finite matroids, the orthogonality axioms, trees of matroids, and the
//! circuit games that decide which sets of ends induce a matroid.

pub mod axioms;
pub mod corpus;
pub mod error;
pub mod games;
pub mod gf;
pub mod graphs;
pub mod matroid;
pub mod selftest;
pub mod sets;
pub mod text;
pub mod tom;

pub use error::{Error, Result};
