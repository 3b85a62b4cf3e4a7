//! Spectral approximation on the unit disk and ball.
//!
//! The crate provides classical and generalized Jacobi polynomials, real
//! spherical harmonics, an exact function algebra for radial-harmonic
//! polynomials `q(||x||^2) Y(x)`, the classical ball bases `P^{mu,n}_{j,l}`
//! (any real `mu`), the Sobolev-orthogonal bases `Q^{-s,n}_{j,l}`, product
//! quadrature grids, projection operators with smooth cut-offs, and
//! spectral-Galerkin solvers for Helmholtz and biharmonic problems with
//! diagonal-plus-banded per-harmonic blocks.
//!
//! All inner products are normalized so that `<1,1> = 1` on both the ball
//! and the sphere.

pub mod ballbasis;
pub mod ballfun;
pub mod chebseries;
pub mod cli;
pub mod harmonics;
pub mod jacobi;
pub mod quadrature;
pub mod sobolev;
pub mod solvers;
pub mod transforms;
pub mod util;

mod dd;
mod linalg;
mod monomial;
mod special;
mod svg;

pub use linalg::SymBand;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension d={0}, expected 2 or 3")]
    UnsupportedDimension(usize),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
    #[error("root search did not converge: {0}")]
    Convergence(String),
    #[error("matrix block not positive definite: {0}")]
    NotSpd(String),
    #[error("quadrature grid too coarse: need n >= {need}, got {got}")]
    GridTooCoarse { need: usize, got: usize },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
