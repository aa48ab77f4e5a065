//! Numerics for weighted pluripotential theory with θ-incomplete polynomials.
//!
//! * [`index`]: exact θ, graded multi-indices and the index sets of π_{N,θ}
//! * [`poly`]: sparse multivariate polynomials, safe `log|p|`, text format
//! * [`geometry`]: domains, meshes, quadrature, weights and admissibility
//! * [`ortho`]: weighted Vandermonde matrices, orthonormal bases, Bergman diagonals
//! * [`extremal`]: closed forms, approximations of V, the interval LP, reports
//! * [`cli`], [`config`], [`report`]: the `ppot` binary and its file formats
//!
//! Runnable examples live in `examples/`:
//! `index_sets`, `polynomials`, `quadrature_and_weights`, `circle_bergman`,
//! `chebyshev_lp`, `gaussian_extremal`, `bergman_density`,
//! `monge_ampere_mass`, `supnorm_equivalence`.

pub mod cli;
pub mod config;
pub mod error;
pub mod extremal;
pub mod geometry;
pub mod index;
pub mod ortho;
pub mod poly;
pub mod report;

pub use error::{Error, Result};
pub use index::{dim, enumerate_index_set, IncompleteIndexSet, MultiIndex, Theta};
pub use poly::{MultiPolynomial, Point, C64};
