//! Liberation sets for the inverse eigenvalue problem of a graph.

pub mod catalog;
pub mod error;
pub mod exact;
pub mod graph;
pub mod liberation;
pub mod matrix;
pub mod numeric;
pub mod par;
pub mod patterns;
pub mod report;
pub mod reproduce;
pub mod strong;
pub mod zeroforcing;

pub use error::{Error, Result};
pub use graph::{EdgeSet, Graph, Pair};
pub use matrix::{DenseMatrix, RatMatrix};
