//! Congruence normal forms: `u = vᵀv` for invertible symmetric `u` and
//! `u = vᵀJv` for invertible skew-symmetric `u`.
//!
//! Both are computed by pivoted Gram–Schmidt on the bilinear form
//! `B(x, y) = xᵀuy`: build a basis `P` with `PᵀuP = I` (resp. `J`), then
//! `v = P⁻¹`. The factor is not unique; callers certify it by the
//! reconstruction residual only.

use num_complex::Complex64;

use super::{standard_skew_form, ComplexMatrix, KernelError, Tolerance, ONE};

/// Finds invertible `v` with `vᵀv = u`.
pub fn takagi_symmetric(u: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix, KernelError> {
    let n = u.size();
    let norm = u.frobenius_norm();
    let asym = u.distance(&u.transpose()) / norm.max(f64::MIN_POSITIVE);
    if asym > tol.residual_rel {
        return Err(KernelError::NotSymmetric(asym));
    }
    check_invertible(u, tol)?;

    let mut basis = ComplexMatrix::identity(n);
    for t in 0..n {
        let form = congruence(u, &basis);
        // Largest remaining diagonal entry versus largest off-diagonal one.
        let (mut di, mut dmax) = (t, 0.0);
        for i in t..n {
            let m = form[(i, i)].norm();
            if m > dmax {
                di = i;
                dmax = m;
            }
        }
        let (mut oi, mut oj, mut omax) = (t, t, 0.0);
        for i in t..n {
            for j in i + 1..n {
                let m = form[(i, j)].norm();
                if m > omax {
                    oi = i;
                    oj = j;
                    omax = m;
                }
            }
        }
        if dmax.max(omax) <= tol.rank_rel * norm {
            return Err(KernelError::Singular);
        }
        let pivot = if dmax >= 0.5 * omax {
            di
        } else {
            // Replace p_i by p_i + σp_j with the sign chosen so that
            // |B(p_i, p_i)| ≥ |B(p_i,p_j)|: the new diagonal is
            // B_ii + 2σB_ij + B_jj, and both diagonals are < B_ij / 2.
            let sigma = if (form[(oi, oi)] + form[(oj, oj)]).re * form[(oi, oj)].re
                + (form[(oi, oi)] + form[(oj, oj)]).im * form[(oi, oj)].im
                >= 0.0
            {
                ONE
            } else {
                -ONE
            };
            for r in 0..n {
                let add = basis[(r, oj)] * sigma;
                basis[(r, oi)] += add;
            }
            oi
        };
        swap_columns(&mut basis, t, pivot);
        let form = congruence(u, &basis);
        let d = form[(t, t)].sqrt();
        for r in 0..n {
            basis[(r, t)] /= d;
        }
        let form = congruence(u, &basis);
        // p_k ← p_k − B(p_t, p_k) p_t, so B(p_t, p_k) = 0 for k > t.
        for k in t + 1..n {
            let coef = form[(t, k)];
            for r in 0..n {
                let sub = coef * basis[(r, t)];
                basis[(r, k)] -= sub;
            }
        }
    }
    basis.inverse(tol.rank_rel)
}

/// Finds invertible `v` with `vᵀJv = u`, where `J = [[0, I_k], [−I_k, 0]]`
/// and `n = 2k`.
pub fn takagi_skew(u: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix, KernelError> {
    let n = u.size();
    let norm = u.frobenius_norm();
    let dev = (u + &u.transpose()).frobenius_norm() / norm.max(f64::MIN_POSITIVE);
    if dev > tol.residual_rel {
        return Err(KernelError::NotSkew(dev));
    }
    if n % 2 == 1 {
        return Err(KernelError::OddDimension(n));
    }
    check_invertible(u, tol)?;

    // Symplectic pairs occupy columns (2t, 2t+1) with B(e, f) = 1.
    let mut basis = ComplexMatrix::identity(n);
    for t in 0..n / 2 {
        let lo = 2 * t;
        let form = congruence(u, &basis);
        let (mut pi, mut pj, mut pmax) = (lo, lo + 1, 0.0);
        for i in lo..n {
            for j in i + 1..n {
                let m = form[(i, j)].norm();
                if m > pmax {
                    pi = i;
                    pj = j;
                    pmax = m;
                }
            }
        }
        if pmax <= tol.rank_rel * norm {
            return Err(KernelError::Singular);
        }
        // pi < pj, so the first swap never moves column pj.
        swap_columns(&mut basis, lo, pi);
        swap_columns(&mut basis, lo + 1, pj);
        let form = congruence(u, &basis);
        let a = form[(lo, lo + 1)];
        for r in 0..n {
            basis[(r, lo + 1)] /= a;
        }
        let form = congruence(u, &basis);
        // p_k ← p_k − B(p_k, f)·e + B(p_k, e)·f kills both pairings.
        for k in lo + 2..n {
            let with_f = form[(k, lo + 1)];
            let with_e = form[(k, lo)];
            for r in 0..n {
                let e = basis[(r, lo)];
                let f = basis[(r, lo + 1)];
                basis[(r, k)] += -with_f * e + with_e * f;
            }
        }
    }
    // Reorder to (e_1, …, e_k, f_1, …, f_k) so that PᵀuP = J.
    let k = n / 2;
    let order: Vec<usize> = (0..k).map(|i| 2 * i).chain((0..k).map(|i| 2 * i + 1)).collect();
    let reordered = ComplexMatrix::from_fn(n, |r, c| basis[(r, order[c])]);
    debug_assert!({
        let j = standard_skew_form(k);
        congruence(u, &reordered).distance(&j) <= 1e-6 * (1.0 + norm)
    });
    reordered.inverse(tol.rank_rel)
}

fn check_invertible(u: &ComplexMatrix, tol: &Tolerance) -> Result<(), KernelError> {
    let s = u.singular_values();
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > tol.rank_rel * hi => Ok(()),
        (None, None) => Ok(()),
        _ => Err(KernelError::Singular),
    }
}

/// `Pᵀ u P`
fn congruence(u: &ComplexMatrix, p: &ComplexMatrix) -> ComplexMatrix {
    p.transpose().matmul(u).matmul(p)
}

fn swap_columns(m: &mut ComplexMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..m.size() {
        let tmp: Complex64 = m[(r, a)];
        m[(r, a)] = m[(r, b)];
        m[(r, b)] = tmp;
    }
}
