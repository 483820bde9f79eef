//! Reduction of an involutive anti-automorphism to canonical form, orbit by
//! orbit: `x ↦ xᵀ` (orthogonal), `x ↦ J·xᵀ·J⁻¹` (symplectic), or
//! `x ⊕ y ↦ yᵀ ⊕ xᵀ` (swap pair).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    orbit_pairing, verify_prepared, AlgebraElement, AlgebraError, AlgebraShape, Involution,
    InvolutionSpec, Orbit, OrbitSpec, DEFAULT_TRIALS,
};
use crate::linalg::{
    find_intertwiner, standard_skew_form, takagi_skew, takagi_symmetric, ComplexMatrix,
    KernelError, Tolerance, ONE,
};
use crate::par::{map_indexed, Execution};

/// Random elements used to check each transported form.
pub const TRANSPORT_TRIALS: usize = 20;

/// Classification threshold on `min(‖u − uᵀ‖, ‖u + uᵀ‖) / ‖u‖`.
pub const CLASSIFY_REL: f64 = 1e-6;

/// Required ratio between the larger and the smaller symmetry defect.
pub const CLASSIFY_GAP: f64 = 10.0;

const TRANSPORT_SEED: u64 = 0x7A45_5000_0000_0000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BlockInvolutionType {
    Orthogonal,
    Symplectic,
    SwapPair,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormalizeError {
    #[error("involution failed verification: {0}")]
    NotVerified(String),
    #[error("intertwiner is neither symmetric nor skew-symmetric (defects {sym:.3e} and {skew:.3e})")]
    NeitherSymmetricNorSkew { sym: f64, skew: f64 },
    #[error("second intertwiner is not a multiple of the transpose of the first (defect {0:.3e})")]
    NotProportional(f64),
    #[error("transported involution is {0:.3e} away from canonical form")]
    TransportResidual(f64),
    #[error("orbit {index}: {source}")]
    Orbit {
        index: usize,
        source: Box<NormalizeError>,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<KernelError> for NormalizeError {
    fn from(e: KernelError) -> Self {
        NormalizeError::Algebra(AlgebraError::Kernel(e))
    }
}

/// Normal form of one orbit.
///
/// For a fixed block the canonical coordinates are `x_c = v·x·v⁻¹`; for a
/// pair `(i, j)` they are `x_c ⊕ y_c = u⁻¹·x·u ⊕ y`. `basis_change` is `v`
/// or `u` respectively.
#[derive(Debug, Clone)]
pub struct OrbitNormalization {
    pub orbit: Orbit,
    pub kind: BlockInvolutionType,
    pub basis_change: ComplexMatrix,
    pub basis_change_inv: ComplexMatrix,
    /// Intertwiner found for the block (`u` with `S(x) = (u·x·u⁻¹)ᵀ`), or
    /// for a pair the intertwiner of the second block.
    pub intertwiner: ComplexMatrix,
    /// `‖u − vᵀv‖ / ‖u‖` or `‖u − vᵀJv‖ / ‖u‖`; for pairs the defect of
    /// proportionality between the two intertwiners.
    pub factor_residual: f64,
    /// Worst relative deviation of the transported `S` from canonical form.
    pub residual: f64,
}

impl OrbitNormalization {
    /// The canonical orbit spec this orbit is transported to.
    pub fn canonical_orbit(&self) -> OrbitSpec {
        let n = self.basis_change.size();
        match (self.kind, self.orbit) {
            (BlockInvolutionType::Orthogonal, Orbit::Fixed(block)) => OrbitSpec::Fixed {
                block,
                u: ComplexMatrix::identity(n),
            },
            (BlockInvolutionType::Symplectic, Orbit::Fixed(block)) => OrbitSpec::Fixed {
                block,
                u: standard_skew_form(n / 2),
            },
            (_, Orbit::Pair(i, j)) => OrbitSpec::Swap {
                i,
                j,
                g: ComplexMatrix::identity(n),
                h: ComplexMatrix::identity(n),
            },
            (BlockInvolutionType::SwapPair, Orbit::Fixed(_)) => unreachable!("swap type on a fixed block"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormalizationReport {
    pub orbits: Vec<OrbitNormalization>,
}

impl NormalizationReport {
    pub fn types(&self) -> Vec<BlockInvolutionType> {
        self.orbits.iter().map(|o| o.kind).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.orbits.iter().map(|o| o.residual).fold(0.0, f64::max)
    }

    /// The structured spec of the canonical involution.
    pub fn canonical_spec(&self) -> InvolutionSpec {
        InvolutionSpec::Structured(self.orbits.iter().map(|o| o.canonical_orbit()).collect())
    }

    /// Original coordinates to canonical ones.
    pub fn to_canonical(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = a.clone();
        for o in &self.orbits {
            let (w, w_inv) = (&o.basis_change, &o.basis_change_inv);
            match o.orbit {
                Orbit::Fixed(b) => *out.part_mut(b) = w.conjugate_by(a.part(b), w_inv),
                Orbit::Pair(i, _) => *out.part_mut(i) = w_inv.conjugate_by(a.part(i), w),
            }
        }
        out
    }

    /// Canonical coordinates back to the original ones.
    pub fn to_original(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut out = a.clone();
        for o in &self.orbits {
            let (w, w_inv) = (&o.basis_change, &o.basis_change_inv);
            match o.orbit {
                Orbit::Fixed(b) => *out.part_mut(b) = w_inv.conjugate_by(a.part(b), w),
                Orbit::Pair(i, _) => *out.part_mut(i) = w.conjugate_by(a.part(i), w_inv),
            }
        }
        out
    }
}

/// Verifies the axioms, then normalizes every orbit.
pub fn normalize_all(
    shape: &AlgebraShape,
    spec: &InvolutionSpec,
    tol: &Tolerance,
) -> Result<NormalizationReport, NormalizeError> {
    let s = Involution::new(shape, spec.clone(), tol)?;
    let exec = Execution::default();
    let report = verify_prepared(&s, tol, DEFAULT_TRIALS, exec);
    if !report.passed {
        let worst = report
            .involutive_residual
            .max(report.anti_multiplicative_residual)
            .max(report.linearity_residual);
        return Err(NormalizeError::NotVerified(format!("worst axiom residual {worst:.3e}")));
    }
    normalize_prepared(&s, tol, exec)
}

/// Normalizes every orbit of an already verified involution.
pub fn normalize_prepared(
    s: &Involution,
    tol: &Tolerance,
    exec: Execution,
) -> Result<NormalizationReport, NormalizeError> {
    let pairing = orbit_pairing(s, tol)?;
    let results = map_indexed(exec, pairing.orbits.len(), |k| match pairing.orbits[k] {
        Orbit::Fixed(b) => normalize_simple_block(s, b, tol),
        Orbit::Pair(i, j) => normalize_swap_pair(s, i, j, tol),
    });
    let orbits = results
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| NormalizeError::Orbit {
                index,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NormalizationReport { orbits })
}

/// Normal form of `S` on a block it maps to itself.
///
/// `x ↦ S(x)ᵀ` is an automorphism, hence `Ad(u)`; `u` is symmetric or
/// skew-symmetric up to scale, and a congruence factor of `u` gives `v`.
pub fn normalize_simple_block(
    s: &Involution,
    block: usize,
    tol: &Tolerance,
) -> Result<OrbitNormalization, NormalizeError> {
    let n = s.shape().block_size(block);
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let image = s.apply_to_block(block, &ComplexMatrix::unit(n, i, j))?;
            images.push(image.part(block).transpose());
        }
    }
    let u = find_intertwiner(&images, tol)?;
    let norm = u.frobenius_norm();
    let sym = u.distance(&u.transpose()) / norm;
    let skew = (&u + &u.transpose()).frobenius_norm() / norm;
    let (kind, u) = if sym <= CLASSIFY_REL && skew >= CLASSIFY_GAP * sym {
        (BlockInvolutionType::Orthogonal, (&u + &u.transpose()).scale(ONE * 0.5))
    } else if skew <= CLASSIFY_REL && sym >= CLASSIFY_GAP * skew {
        (BlockInvolutionType::Symplectic, (&u - &u.transpose()).scale(ONE * 0.5))
    } else {
        return Err(NormalizeError::NeitherSymmetricNorSkew { sym, skew });
    };
    let (v, factor_residual) = match kind {
        BlockInvolutionType::Orthogonal => {
            let v = takagi_symmetric(&u, tol)?;
            let r = v.transpose().matmul(&v).distance(&u) / norm;
            (v, r)
        }
        _ => {
            let v = takagi_skew(&u, tol)?;
            let j = standard_skew_form(n / 2);
            let r = v.transpose().matmul(&j).matmul(&v).distance(&u) / norm;
            (v, r)
        }
    };
    let v_inv = v.inverse(tol.rank_rel)?;
    let canon = match kind {
        BlockInvolutionType::Orthogonal => None,
        _ => Some(standard_skew_form(n / 2)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(TRANSPORT_SEED ^ block as u64);
    let mut residual = 0.0_f64;
    for _ in 0..TRANSPORT_TRIALS {
        let y = ComplexMatrix::random_gaussian(n, &mut rng);
        let sx = s.apply_to_block(block, &v_inv.conjugate_by(&y, &v))?;
        let transported = v.conjugate_by(sx.part(block), &v_inv);
        let expected = match &canon {
            None => y.transpose(),
            Some(j) => j.conjugate_by(&y.transpose(), &j.scale(-ONE)),
        };
        residual = residual.max(transported.distance(&expected) / y.frobenius_norm());
    }
    if !(residual <= tol.residual_rel) {
        return Err(NormalizeError::TransportResidual(residual));
    }
    Ok(OrbitNormalization {
        orbit: Orbit::Fixed(block),
        kind,
        basis_change: v,
        basis_change_inv: v_inv,
        intertwiner: u,
        factor_residual,
        residual,
    })
}

/// Normal form of `S` on a pair of exchanged blocks `(i, j)`.
///
/// `S(x ⊕ y) = u·yᵀ·u⁻¹ ⊕ v′·xᵀ·v′⁻¹` with `u`, `v′` read off as the
/// intertwiners of the automorphism `x ⊕ y ↦ S(yᵀ ⊕ xᵀ)`; involutivity
/// forces `v′ = c·uᵀ`. The returned basis change is `√c·u`.
pub fn normalize_swap_pair(
    s: &Involution,
    i: usize,
    j: usize,
    tol: &Tolerance,
) -> Result<OrbitNormalization, NormalizeError> {
    let shape = s.shape();
    let n = shape.block_size(i);
    if shape.block_size(j) != n {
        return Err(AlgebraError::SizeMismatch { i, j }.into());
    }
    let mut first = Vec::with_capacity(n * n);
    let mut second = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            let e = ComplexMatrix::unit(n, l, k);
            first.push(s.apply_to_block(j, &e)?.part(i).clone());
            second.push(s.apply_to_block(i, &e)?.part(j).clone());
        }
    }
    let u = find_intertwiner(&first, tol)?;
    let v = find_intertwiner(&second, tol)?;

    let ut = u.transpose();
    let num: num_complex::Complex64 = ut
        .as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let c = num / ut.frobenius_norm().powi(2);
    let defect = v.distance(&ut.scale(c)) / v.frobenius_norm();
    if !(defect <= CLASSIFY_REL) {
        return Err(NormalizeError::NotProportional(defect));
    }
    let u = u.scale(c.sqrt());
    let u_inv = u.inverse(tol.rank_rel)?;

    let mut rng = ChaCha8Rng::seed_from_u64(TRANSPORT_SEED ^ ((i as u64) << 32 | j as u64));
    let mut residual = 0.0_f64;
    for _ in 0..TRANSPORT_TRIALS {
        let x = ComplexMatrix::random_gaussian(n, &mut rng);
        let y = ComplexMatrix::random_gaussian(n, &mut rng);
        let mut a = AlgebraElement::zeros(shape);
        *a.part_mut(i) = u.conjugate_by(&x, &u_inv);
        *a.part_mut(j) = y.clone();
        let sa = s.apply(&a)?;
        let tx = u_inv.conjugate_by(sa.part(i), &u);
        let scale = (x.frobenius_norm().powi(2) + y.frobenius_norm().powi(2)).sqrt();
        let dev = (tx.distance(&y.transpose()).powi(2) + sa.part(j).distance(&x.transpose()).powi(2)).sqrt();
        residual = residual.max(dev / scale);
    }
    if !(residual <= tol.residual_rel) {
        return Err(NormalizeError::TransportResidual(residual));
    }
    Ok(OrbitNormalization {
        orbit: Orbit::Pair(i, j),
        kind: BlockInvolutionType::SwapPair,
        basis_change: u,
        basis_change_inv: u_inv,
        intertwiner: v,
        factor_residual: defect,
        residual,
    })
}
