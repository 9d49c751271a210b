//! Exact-arithmetic toolkit for highest-weight modules of classical Chevalley
//! groups and the finite point-line geometries they embed.
//!
//! The crate builds minimal admissible lattices inside tensor products of
//! exterior powers of the natural module, computes the contravariant bilinear
//! form and its Smith invariants, reduces modulo primes to obtain irreducible
//! dimensions and radicals, and checks on finite shadow spaces that the
//! resulting projective embeddings are polarized with polar radical equal to
//! the radical of the form.
//!
//! Modules:
//! - [`exact_linalg`]: Hermite/Smith normal forms and prime-field kernels.
//! - [`root_data`]: root systems, Weyl words, opposition involutions.
//! - [`chevalley_ops`]: concrete Chevalley generators and divided powers.
//! - [`weyl_module`]: lattice generation, Gram matrices, modular radicals.
//! - [`schur`]: Young tableaux, straightening, the type-A cross-check.
//! - [`geometry`]: finite flag geometries, singular hyperplanes, embeddings.

// Dense matrix arithmetic throughout this crate indexes rows and columns
// directly; iterator rewrites obscure the algebra.
#![allow(clippy::needless_range_loop)]

pub mod chevalley_ops;
pub mod exact_linalg;
pub mod geometry;
pub mod root_data;
pub mod schur;
pub mod weyl_module;

use thiserror::Error;

/// Crate-wide error type. Caps and bad arguments are recoverable; internal
/// consistency violations (non-integral divided powers, closure failures)
/// panic instead, since they signal bugs rather than bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported diagram: type {dtype} rank {rank}")]
    UnsupportedDiagram { dtype: char, rank: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("empty node subset")]
    EmptySubset,
    #[error("node {node} out of range for rank {rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("weight is not dominant: {0:?}")]
    NotDominant(Vec<i64>),
    #[error("degree set {kset:?} invalid for type {dtype}{rank}: {reason}")]
    InvalidDegrees {
        dtype: char,
        rank: usize,
        kset: Vec<usize>,
        reason: String,
    },
    #[error("{what} cap exceeded: needed {needed}, cap {cap}")]
    CapExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate Gram matrix (determinant zero)")]
    DegenerateGram,
    #[error("flag type mismatch: expected type {expected:?}, got {got:?}")]
    FlagTypeMismatch {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Size caps for lattice and geometry construction, overridable from the CLI.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Maximum ambient dimension for lattice generation.
    pub max_ambient: usize,
    /// Maximum lattice rank.
    pub max_lattice: usize,
    /// Maximum number of boxes for Young-diagram group-ring computations.
    pub max_boxes: usize,
    /// Maximum number of points in a shadow space.
    pub max_points: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_ambient: 4096,
            max_lattice: 1024,
            max_boxes: 8,
            max_points: 200_000,
        }
    }
}
