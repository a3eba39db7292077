//! Eigenvectors of graph-localized matrices by preconditioned gradient descent.
//!
//! A matrix whose nonzero entries only couple vertices within a few hops of
//! each other (small geodesic-width) can have its null-space vectors found by
//! an iteration that every vertex runs on locally stored rows and columns,
//! exchanging scalars with nearby vertices only.
//!
//! The crate is organized as:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`graph`] | [`Graph`], hop distances, balls, random geometric graphs |
//! | [`matrix`] | [`GeoMatrix`], [`DiagonalMatrix`], geodesic-width |
//! | [`precond`] | diagonal preconditioners and the Schur norm |
//! | [`filters`] | Laplacian, spline, hyperlink matrices and [`PolyFilter`] |
//! | [`sim`] | synchronous message-passing simulator and the vertex-level programs |
//! | [`solvers`] | centralized iterations, power iteration, eigenvalue shifts |
//! | [`eig`] | dense Hermitian Jacobi eigensolver used as a test oracle |
//! | [`limit`] | predicted limits and rate bounds of the iterations |
//! | [`metrics`] | convergence-error and normalized-residue series |
//! | [`experiment`] | seeded multi-trial experiment runner and property suites |

pub mod eig;
pub mod error;
pub mod experiment;
pub mod filters;
pub mod graph;
pub mod instances;
pub mod limit;
pub mod matrix;
pub mod metrics;
pub mod precond;
pub mod rng;
pub mod sim;
pub mod solvers;

pub use error::{Error, Result};
pub use filters::PolyFilter;
pub use graph::Graph;
pub use matrix::{DiagonalMatrix, GeoMatrix, GeoMatrixBuilder};
pub use num_complex::Complex64;
pub use solvers::Trajectory;

/// Complex scalar used for every matrix entry and vector component.
pub type C64 = Complex64;
