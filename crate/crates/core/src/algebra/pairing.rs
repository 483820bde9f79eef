use serde::Serialize;

use super::{AlgebraElement, AlgebraError, Involution, InvolutionSpec, OrbitSpec};
use crate::linalg::Tolerance;

/// A block fixed by `S` or a pair of blocks exchanged by `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orbit {
    Fixed(usize),
    Pair(usize, usize),
}

impl Orbit {
    pub fn blocks(&self) -> Vec<usize> {
        match *self {
            Orbit::Fixed(b) => vec![b],
            Orbit::Pair(i, j) => vec![i, j],
        }
    }
}

/// The action of `S` on minimal central projections, as orbits sorted by
/// their smallest block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitPairing {
    pub orbits: Vec<Orbit>,
}

impl OrbitPairing {
    /// The permutation of blocks induced by `S`.
    pub fn permutation(&self) -> Vec<usize> {
        let n = self.orbits.iter().map(|o| o.blocks().len()).sum();
        let mut perm = vec![0; n];
        for o in &self.orbits {
            match *o {
                Orbit::Fixed(b) => perm[b] = b,
                Orbit::Pair(i, j) => {
                    perm[i] = j;
                    perm[j] = i;
                }
            }
        }
        perm
    }

    fn from_permutation(perm: &[usize]) -> Self {
        let mut orbits = Vec::new();
        for (i, &j) in perm.iter().enumerate() {
            if j == i {
                orbits.push(Orbit::Fixed(i));
            } else if i < j {
                orbits.push(Orbit::Pair(i, j));
            }
        }
        Self { orbits }
    }
}

/// Reads the orbit structure off a structured spec, or, for dense specs,
/// matches the image of each minimal central projection against the
/// central projections.
pub fn orbit_pairing(s: &Involution, tol: &Tolerance) -> Result<OrbitPairing, AlgebraError> {
    let shape = s.shape();
    let nb = shape.num_blocks();
    let mut perm = vec![usize::MAX; nb];
    match s.spec() {
        InvolutionSpec::Structured(orbits) => {
            for o in orbits {
                match o {
                    OrbitSpec::Fixed { block, .. } => perm[*block] = *block,
                    OrbitSpec::Swap { i, j, .. } => {
                        perm[*i] = *j;
                        perm[*j] = *i;
                    }
                }
            }
        }
        InvolutionSpec::Dense(_) => {
            let projections: Vec<AlgebraElement> = (0..nb)
                .map(|b| AlgebraElement::central_projection(shape, b))
                .collect();
            for (b, e) in projections.iter().enumerate() {
                let image = s.apply(e)?;
                let matched = projections.iter().position(|f| {
                    image.distance(f).expect("same shape") <= tol.residual_rel * f.norm()
                });
                let Some(target) = matched else {
                    return Err(AlgebraError::NotAPermutation(b));
                };
                if shape.block_size(target) != shape.block_size(b) {
                    let (i, j) = (b.min(target), b.max(target));
                    return Err(AlgebraError::SizeMismatch { i, j });
                }
                perm[b] = target;
            }
            for b in 0..nb {
                if perm[perm[b]] != b {
                    return Err(AlgebraError::NotAPermutation(b));
                }
            }
        }
    }
    Ok(OrbitPairing::from_permutation(&perm))
}
