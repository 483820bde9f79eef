use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ComplexMatrix, KernelError, Tolerance, ONE, ZERO};

/// Solves for `u` with `phi(x) = u·x·u⁻¹`, given `phi` by its images of the
/// matrix units: `images[i*n + j] = phi(E_ij)`.
///
/// Assembles the `n⁴ × n²` system `phi(E_ij)·u − u·E_ij = 0`, and reads the
/// solution off the right singular vector of the smallest singular value.
/// The returned `u` is unit-normalized (see [`unit_normalize`]).
pub fn find_intertwiner(
    images: &[ComplexMatrix],
    tol: &Tolerance,
) -> Result<ComplexMatrix, KernelError> {
    let n = (images.len() as f64).sqrt().round() as usize;
    if n * n != images.len() || n == 0 {
        return Err(KernelError::DimensionMismatch {
            expected: n.max(1) * n.max(1),
            actual: images.len(),
        });
    }
    if let Some(bad) = images.iter().find(|m| m.size() != n) {
        return Err(KernelError::DimensionMismatch {
            expected: n,
            actual: bad.size(),
        });
    }
    let unknowns = n * n;
    let mut sys = DMatrix::<Complex64>::zeros(unknowns * unknowns, unknowns);
    for i in 0..n {
        for j in 0..n {
            let p = &images[i * n + j];
            let block = (i * n + j) * unknowns;
            for r in 0..n {
                for c in 0..n {
                    let row = block + r * n + c;
                    for k in 0..n {
                        sys[(row, k * n + c)] += p[(r, k)];
                    }
                    if c == j {
                        sys[(row, r * n + i)] -= ONE;
                    }
                }
            }
        }
    }
    if sys.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(KernelError::NonFinite);
    }
    let svd = sys.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sv = &svd.singular_values;
    let top = sv.max();
    // The `u·E_ij` part alone has unit operator norm, so the threshold is
    // floored at `rank_rel`; for n = 1 and phi ≈ id the system is ≈ 0.
    let threshold = tol.rank_rel * top.max(1.0);
    let nullity = sv.iter().filter(|&&s| s <= threshold).count();
    match nullity {
        0 => return Err(KernelError::NotInner),
        1 => {}
        k => return Err(KernelError::AmbiguousSolution(k)),
    }
    let u = if n == 1 {
        ComplexMatrix::identity(1)
    } else {
        let smallest = sv.imin();
        // Rows of Vᴴ are conjugated right singular vectors.
        unit_normalize(&ComplexMatrix::from_fn(n, |r, c| {
            v_t[(smallest, r * n + c)].conj()
        }))
    };

    if u.inverse(tol.rank_rel).is_err() {
        return Err(KernelError::NotInner);
    }
    let unorm = u.frobenius_norm();
    for i in 0..n {
        for j in 0..n {
            let p = &images[i * n + j];
            let lhs = p.matmul(&u);
            let rhs = u.matmul(&ComplexMatrix::unit(n, i, j));
            let scale = unorm * p.frobenius_norm().max(1.0);
            if lhs.distance(&rhs) > tol.residual_rel * scale {
                return Err(KernelError::NotInner);
            }
        }
    }
    Ok(u)
}

/// Rescales `u` so that its first largest-magnitude entry (row-major order)
/// becomes exactly 1. Ties within a relative `1e-12` are broken by position,
/// which keeps outputs reproducible across runs.
pub fn unit_normalize(u: &ComplexMatrix) -> ComplexMatrix {
    let max = u.max_abs();
    if max == 0.0 {
        return u.clone();
    }
    let pivot = u
        .as_slice()
        .iter()
        .copied()
        .find(|z| z.norm() >= (1.0 - 1e-12) * max)
        .unwrap_or(ONE);
    let mut out = u.scale(ONE / pivot);
    // Canonicalize signed zeros so serialized output is stable.
    for z in out.as_mut_slice() {
        *z += ZERO;
    }
    out
}
