//! Exact and sampled computations around asymptotic dimension growth:
//! lambda-clusters and (lambda, D)-colorings of finite metric spaces, hypercube
//! expansion, word metrics on wreath products and Thompson's group F, lattice
//! point counts of cross-polytopes, and Kolmogorov-Ostrand colorings.

pub mod cluster;
pub mod crosspoly;
pub mod error;
pub mod groups;
pub mod hypercube;
pub mod ko;
pub mod lattice;
pub mod metric;
pub mod thompson;
pub mod wreath;

pub use error::{Error, Result};
pub use metric::{FiniteMetricSpace, Rational};
