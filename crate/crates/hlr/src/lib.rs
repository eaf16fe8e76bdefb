//! Hierarchical low-rank matrix toolkit.
//!
//! Two storage formats are provided for matrices whose off-diagonal blocks
//! admit low-rank factorizations:
//!
//! * [`HodlrMatrix`] — a recursive 2x2 block partition where every
//!   off-diagonal block stores its own low-rank factors.
//! * [`HssMatrix`] — the nested variant in which bases are shared across
//!   levels through translation operators, removing the logarithmic factor
//!   in storage.
//!
//! Both formats are indexed by a binary [`ClusterTree`] over consecutive
//! indices. On top of the formats the crate implements fast arithmetic
//! (matrix-vector products, sums, products, Hadamard products), matrix
//! factorizations (block LU, Cholesky, QR, implicit ULV), recompression,
//! conversions between formats, and three application drivers: a superfast
//! Toeplitz solver, a matrix exponential, and a low-rank Lyapunov solver
//! ([`apps`]).
//!
//! Dense kernels are backed by `nalgebra`; real (`f64`) and complex
//! (`Complex<f64>`) entries are supported throughout via the [`HlrScalar`]
//! trait.

pub mod apps;
pub mod cluster;
pub mod compressors;
pub mod convert;
pub(crate) mod dense;
pub mod hodlr;
pub mod hss;
pub mod io;
pub mod lowrank;
pub mod operator;
pub mod options;
pub mod scalar;
pub mod sparse;
pub mod structure;

pub use cluster::ClusterTree;
pub use convert::{hodlr_to_hss, hss_to_hodlr, result_format, FormatKind};
pub use hodlr::HodlrMatrix;
pub use hss::HssMatrix;
pub use lowrank::LowRankFactor;
pub use operator::{FnOperator, Operator};
pub use options::{Compression, Options};
pub use scalar::HlrScalar;
pub use sparse::SparseMatrix;
pub use structure::{BandedSpec, Structure};

use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cluster trees are not compatible: {0}")]
    TreeMismatch(String),
    #[error("invalid cluster specification: {0}")]
    InvalidCluster(String),
    #[error("matrix is singular: {0}")]
    Singular(String),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("iteration did not converge: {0}")]
    NotConverged(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
