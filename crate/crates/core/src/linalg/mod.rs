//! Dense complex linear algebra used by the rest of the crate: matrices,
//! thresholded rank and span computations, minimal polynomials, congruence
//! factorizations of symmetric and skew-symmetric matrices, and the
//! intertwiner solve for inner automorphisms.

mod intertwiner;
mod matrix;
mod poly;
mod rank;
mod takagi;
mod tolerance;

pub use intertwiner::{find_intertwiner, unit_normalize};
pub use matrix::{standard_skew_form, ComplexMatrix};
pub use poly::{minimal_polynomial, Polynomial};
pub use rank::{rank_and_basis, RankBasis};
pub use takagi::{takagi_skew, takagi_symmetric};
pub use tolerance::Tolerance;

pub(crate) use matrix::{ONE, ZERO};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("expected {expected} entries, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("matrix is numerically singular")]
    Singular,
    #[error("matrix is not symmetric (relative asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not skew-symmetric (relative deviation {0:.3e})")]
    NotSkew(f64),
    #[error("an invertible skew-symmetric matrix must have even size, got {0}")]
    OddDimension(usize),
    #[error("map is not an inner automorphism: intertwining system has only the zero solution")]
    NotInner,
    #[error("intertwining system has a {0}-dimensional solution space, expected 1")]
    AmbiguousSolution(usize),
    #[error("polynomials are not coprime (relative Sylvester margin {0:.3e})")]
    NotCoprime(f64),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}
