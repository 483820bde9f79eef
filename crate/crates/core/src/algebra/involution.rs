use num_complex::Complex64;

use super::{AlgebraElement, AlgebraError, AlgebraShape};
use crate::linalg::{ComplexMatrix, Tolerance};

/// One orbit of a structured involution.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitSpec {
    /// `S(x) = (u·x·u⁻¹)ᵀ` on `block`.
    Fixed { block: usize, u: ComplexMatrix },
    /// `S(x ⊕ y) = (g·yᵀ·g⁻¹) ⊕ (h·xᵀ·h⁻¹)` with `x` in block `i` and `y`
    /// in block `j`.
    Swap {
        i: usize,
        j: usize,
        g: ComplexMatrix,
        h: ComplexMatrix,
    },
}

impl OrbitSpec {
    pub fn blocks(&self) -> Vec<usize> {
        match self {
            OrbitSpec::Fixed { block, .. } => vec![*block],
            OrbitSpec::Swap { i, j, .. } => vec![*i, *j],
        }
    }
}

/// An anti-automorphism `S`, either per orbit or as a dense matrix on the
/// flat vectorization of the algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum InvolutionSpec {
    Structured(Vec<OrbitSpec>),
    Dense(ComplexMatrix),
}

impl InvolutionSpec {
    /// The transpose map on every block.
    pub fn transpose(shape: &AlgebraShape) -> Self {
        InvolutionSpec::Structured(
            shape
                .blocks()
                .iter()
                .enumerate()
                .map(|(block, &d)| OrbitSpec::Fixed {
                    block,
                    u: ComplexMatrix::identity(d),
                })
                .collect(),
        )
    }

    /// `x ⊕ y ↦ yᵀ ⊕ xᵀ` on `M_n ⊕ M_n`.
    pub fn canonical_swap(n: usize) -> Self {
        InvolutionSpec::Structured(vec![OrbitSpec::Swap {
            i: 0,
            j: 1,
            g: ComplexMatrix::identity(n),
            h: ComplexMatrix::identity(n),
        }])
    }
}

#[derive(Debug, Clone)]
enum Prepared {
    Fixed {
        block: usize,
        u: ComplexMatrix,
        u_inv: ComplexMatrix,
    },
    Swap {
        i: usize,
        j: usize,
        g: ComplexMatrix,
        g_inv: ComplexMatrix,
        h: ComplexMatrix,
        h_inv: ComplexMatrix,
    },
}

#[derive(Debug, Clone)]
enum Repr {
    Structured(Vec<Prepared>),
    Dense(ComplexMatrix),
}

/// A validated involution spec bound to its shape, with the inverses it
/// needs precomputed.
#[derive(Debug, Clone)]
pub struct Involution {
    shape: AlgebraShape,
    spec: InvolutionSpec,
    repr: Repr,
}

impl Involution {
    /// Checks the structural invariants (orbits partition the blocks, swap
    /// partners have equal size, matrices have the right sizes and are
    /// invertible, dense matrices are square of side `total_dim` and
    /// invertible). The anti-automorphism axioms themselves are checked by
    /// [`super::verify_involution`].
    pub fn new(shape: &AlgebraShape, spec: InvolutionSpec, tol: &Tolerance) -> Result<Self, AlgebraError> {
        let repr = match &spec {
            InvolutionSpec::Structured(orbits) => {
                let mut seen = vec![false; shape.num_blocks()];
                let mut prepared = Vec::with_capacity(orbits.len());
                for (k, orbit) in orbits.iter().enumerate() {
                    for b in orbit.blocks() {
                        if b >= shape.num_blocks() {
                            return Err(AlgebraError::InvalidOrbit(format!(
                                "orbit {k} references block {b}, but there are {} blocks",
                                shape.num_blocks()
                            )));
                        }
                        if std::mem::replace(&mut seen[b], true) {
                            return Err(AlgebraError::InvalidOrbit(format!(
                                "block {b} appears in more than one orbit"
                            )));
                        }
                    }
                    prepared.push(prepare_orbit(shape, orbit, k, tol)?);
                }
                if let Some(b) = seen.iter().position(|s| !s) {
                    return Err(AlgebraError::InvalidOrbit(format!(
                        "block {b} is not covered by any orbit"
                    )));
                }
                Repr::Structured(prepared)
            }
            InvolutionSpec::Dense(m) => {
                if m.size() != shape.total_dim() {
                    return Err(AlgebraError::InvalidOrbit(format!(
                        "dense matrix has side {}, algebra dimension is {}",
                        m.size(),
                        shape.total_dim()
                    )));
                }
                m.inverse(tol.rank_rel)
                    .map_err(|_| AlgebraError::SingularSpec("dense matrix".into()))?;
                Repr::Dense(m.clone())
            }
        };
        Ok(Self {
            shape: shape.clone(),
            spec,
            repr,
        })
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn spec(&self) -> &InvolutionSpec {
        &self.spec
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        a.check_shape(&self.shape)?;
        match &self.repr {
            Repr::Structured(orbits) => {
                let mut out = AlgebraElement::zeros(&self.shape);
                for orbit in orbits {
                    match orbit {
                        Prepared::Fixed { block, u, u_inv } => {
                            *out.part_mut(*block) = u.conjugate_by(a.part(*block), u_inv).transpose();
                        }
                        Prepared::Swap {
                            i,
                            j,
                            g,
                            g_inv,
                            h,
                            h_inv,
                        } => {
                            *out.part_mut(*i) = g.conjugate_by(&a.part(*j).transpose(), g_inv);
                            *out.part_mut(*j) = h.conjugate_by(&a.part(*i).transpose(), h_inv);
                        }
                    }
                }
                Ok(out)
            }
            Repr::Dense(m) => {
                let x = a.to_flat();
                let n = x.len();
                let data = m.as_slice();
                let y: Vec<Complex64> = (0..n)
                    .map(|r| data[r * n..(r + 1) * n].iter().zip(&x).map(|(p, q)| p * q).sum())
                    .collect();
                AlgebraElement::from_flat(&self.shape, &y)
            }
        }
    }

    /// `S` applied to `x` placed in block `block` (zero elsewhere).
    pub fn apply_to_block(&self, block: usize, x: &ComplexMatrix) -> Result<AlgebraElement, AlgebraError> {
        self.apply(&AlgebraElement::embed(&self.shape, block, x.clone())?)
    }

    /// Dense matrix of `S` on the flat vectorization.
    pub fn to_dense(&self) -> ComplexMatrix {
        let dim = self.shape.total_dim();
        let mut m = ComplexMatrix::zeros(dim);
        let mut unit = vec![Complex64::new(0.0, 0.0); dim];
        for c in 0..dim {
            unit[c] = Complex64::new(1.0, 0.0);
            let e = AlgebraElement::from_flat(&self.shape, &unit).expect("length is total_dim");
            let image = self.apply(&e).expect("shape matches").to_flat();
            for (r, z) in image.into_iter().enumerate() {
                m[(r, c)] = z;
            }
            unit[c] = Complex64::new(0.0, 0.0);
        }
        m
    }
}

fn prepare_orbit(
    shape: &AlgebraShape,
    orbit: &OrbitSpec,
    k: usize,
    tol: &Tolerance,
) -> Result<Prepared, AlgebraError> {
    let invert = |m: &ComplexMatrix, name: &str| {
        m.inverse(tol.rank_rel)
            .map_err(|_| AlgebraError::SingularSpec(format!("{name} of orbit {k}")))
    };
    let check_size = |m: &ComplexMatrix, d: usize, name: &str| {
        if m.size() != d {
            Err(AlgebraError::InvalidOrbit(format!(
                "{name} of orbit {k} has side {}, block has side {d}",
                m.size()
            )))
        } else {
            Ok(())
        }
    };
    match orbit {
        OrbitSpec::Fixed { block, u } => {
            check_size(u, shape.block_size(*block), "u")?;
            Ok(Prepared::Fixed {
                block: *block,
                u: u.clone(),
                u_inv: invert(u, "u")?,
            })
        }
        OrbitSpec::Swap { i, j, g, h } => {
            if i == j {
                return Err(AlgebraError::InvalidOrbit(format!(
                    "swap orbit {k} pairs block {i} with itself"
                )));
            }
            let (di, dj) = (shape.block_size(*i), shape.block_size(*j));
            if di != dj {
                return Err(AlgebraError::SizeMismatch { i: *i, j: *j });
            }
            check_size(g, di, "g")?;
            check_size(h, di, "h")?;
            Ok(Prepared::Swap {
                i: *i,
                j: *j,
                g: g.clone(),
                g_inv: invert(g, "g")?,
                h: h.clone(),
                h_inv: invert(h, "h")?,
            })
        }
    }
}
