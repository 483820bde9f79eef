//! Semisimple algebras in Wedderburn block form, their elements, and
//! involutive anti-automorphisms on them.

mod element;
mod involution;
mod pairing;
mod verify;

pub use element::{AlgebraElement, AlgebraShape};
pub use involution::{Involution, InvolutionSpec, OrbitSpec};
pub use pairing::{orbit_pairing, Orbit, OrbitPairing};
pub use verify::{verify_involution, verify_prepared, VerificationReport, DEFAULT_TRIALS};

use thiserror::Error;

use crate::linalg::{KernelError, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("an algebra needs at least one block")]
    EmptyShape,
    #[error("block {0} has size zero")]
    ZeroBlock(usize),
    #[error("element shape does not match the algebra")]
    ShapeMismatch,
    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),
    #[error("{0} is singular")]
    SingularSpec(String),
    #[error("blocks {i} and {j} are exchanged but have different sizes")]
    SizeMismatch { i: usize, j: usize },
    #[error("image of the central projection of block {0} is not a central projection")]
    NotAPermutation(usize),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// `S(a)` for a spec given without a prepared [`Involution`].
pub fn apply_involution(
    spec: &InvolutionSpec,
    a: &AlgebraElement,
    tol: &Tolerance,
) -> Result<AlgebraElement, AlgebraError> {
    Involution::new(&a.shape(), spec.clone(), tol)?.apply(a)
}
