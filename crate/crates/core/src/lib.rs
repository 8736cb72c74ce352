//! Exact symbolic engine for the differential complexes attached to the
//! Heisenberg, Engel, Grushin and Martinet distributions.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactalg`]: rationals, multivariate polynomials, exact linear algebra.
//! - [`weyl`]: normal-ordered differential operators with polynomial
//!   coefficients and matrices of them.
//! - [`frames`]: the registered vector-field frames, their bracket tables and
//!   (where they exist) dual coframes with structure equations.
//! - [`deriv`]: exterior forms over a coframe, the de Rham complex in the
//!   coframe basis and cancellation of isomorphic components.
//! - [`complexes`]: the registered complexes, complex/homogeneity checks and
//!   symmetry reduction.
//! - [`homology`]: graded polynomial cohomology, representative cocycles and
//!   the potential solvers built on top of them.
//! - [`serial`]: the JSON record formats shared by the command-line tool.

pub mod complexes;
pub mod deriv;
pub mod error;
pub mod exactalg;
pub mod frames;
pub mod homology;
pub mod serial;
pub mod weyl;

pub use complexes::{complex_registry, ComplexSpec, Component, COMPLEX_NAMES};
pub use error::{Error, Result};
pub use exactalg::{Monomial, Polynomial, Rational, RationalMatrix, WeightedDegree};
pub use frames::{frame_registry, Frame, Space, FRAME_NAMES};
pub use homology::{cohomology, CohomologyReport};
pub use weyl::{DiffOp, OpMatrix, OpWeight};
