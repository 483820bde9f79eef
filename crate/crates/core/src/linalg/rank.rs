use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{KernelError, Tolerance};

/// Numerical rank of a family of vectors together with an orthonormal basis
/// of their span.
#[derive(Debug, Clone)]
pub struct RankBasis {
    pub rank: usize,
    /// Orthonormal vectors spanning the same subspace, ordered by decreasing
    /// singular value.
    pub basis: Vec<Vec<Complex64>>,
    /// All singular values, descending.
    pub singular_values: Vec<f64>,
}

/// Rank and orthonormal basis via the SVD of the matrix whose columns are
/// the input vectors. A singular value counts iff it exceeds
/// `tol.rank_rel × σ_max`.
pub fn rank_and_basis<V: AsRef<[Complex64]>>(
    vectors: &[V],
    tol: &Tolerance,
) -> Result<RankBasis, KernelError> {
    let Some(first) = vectors.first() else {
        return Ok(RankBasis {
            rank: 0,
            basis: Vec::new(),
            singular_values: Vec::new(),
        });
    };
    let len = first.as_ref().len();
    for v in vectors {
        if v.as_ref().len() != len {
            return Err(KernelError::DimensionMismatch {
                expected: len,
                actual: v.as_ref().len(),
            });
        }
    }
    if len == 0 {
        return Ok(RankBasis {
            rank: 0,
            basis: Vec::new(),
            singular_values: vec![0.0; vectors.len()],
        });
    }
    let m = DMatrix::from_fn(len, vectors.len(), |i, j| vectors[j].as_ref()[i]);
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(KernelError::NonFinite);
    }
    let svd = m.svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let top = singular_values.first().copied().unwrap_or(0.0);
    let threshold = tol.rank_rel * top;
    let rank = if top > 0.0 {
        singular_values.iter().filter(|&&s| s > threshold).count()
    } else {
        0
    };
    let basis = order[..rank]
        .iter()
        .map(|&k| u.column(k).iter().copied().collect())
        .collect();
    Ok(RankBasis {
        rank,
        basis,
        singular_values,
    })
}
