use serde::{Deserialize, Serialize};

use super::KernelError;

/// Numerical thresholds shared by every rank decision and residual check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Singular values at or below `rank_rel × σ_max` count as zero.
    pub rank_rel: f64,
    /// Relative residual accepted by post-condition checks.
    pub residual_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rel: 1e-9,
            residual_rel: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, residual_rel: f64) -> Result<Self, KernelError> {
        let tol = Self {
            rank_rel,
            residual_rel,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        for (name, v) in [("rank_rel", self.rank_rel), ("residual_rel", self.residual_rel)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(KernelError::InvalidTolerance(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(())
    }
}
