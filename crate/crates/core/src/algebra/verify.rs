use num_complex::Complex64;
use serde::Serialize;

use super::{AlgebraElement, AlgebraShape, Involution, InvolutionSpec};
use crate::linalg::Tolerance;
use crate::par::{map_indexed, Execution};

/// Default number of random element pairs used by [`verify_involution`].
pub const DEFAULT_TRIALS: usize = 32;

const TRIAL_SEED: u64 = 0x5EED_1DE7_0000_0000;

/// Worst relative residuals of the anti-automorphism axioms over the trials.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub trials: usize,
    /// `max ‖S(S(a)) − a‖ / ‖a‖`
    pub involutive_residual: f64,
    /// `max ‖S(ab) − S(b)S(a)‖ / (‖S(a)‖‖S(b)‖)`
    pub anti_multiplicative_residual: f64,
    /// `max ‖S(αa + b) − αS(a) − S(b)‖ / (|α|‖S(a)‖ + ‖S(b)‖)`
    pub linearity_residual: f64,
    /// Structural problem that prevented the numerical checks, if any.
    pub issue: Option<String>,
}

/// Checks `S² = id`, `S(ab) = S(b)S(a)` and complex linearity on `trials`
/// seeded random element pairs. Never fails; problems are reported.
pub fn verify_involution(
    spec: &InvolutionSpec,
    shape: &AlgebraShape,
    tol: &Tolerance,
    trials: usize,
) -> VerificationReport {
    match Involution::new(shape, spec.clone(), tol) {
        Ok(s) => verify_prepared(&s, tol, trials, Execution::default()),
        Err(e) => VerificationReport {
            passed: false,
            trials: 0,
            involutive_residual: f64::INFINITY,
            anti_multiplicative_residual: f64::INFINITY,
            linearity_residual: f64::INFINITY,
            issue: Some(e.to_string()),
        },
    }
}

pub fn verify_prepared(
    s: &Involution,
    tol: &Tolerance,
    trials: usize,
    exec: Execution,
) -> VerificationReport {
    let shape = s.shape();
    let residuals = map_indexed(exec, trials, |k| {
        let seed = TRIAL_SEED.wrapping_add(3 * k as u64);
        let a = AlgebraElement::random(shape, seed);
        let b = AlgebraElement::random(shape, seed + 1);
        let alpha = {
            let c = AlgebraElement::random(&AlgebraShape::new(vec![1]).expect("nonempty"), seed + 2);
            c.part(0)[(0, 0)]
        };
        trial_residuals(s, &a, &b, alpha)
    });
    let fold = |f: fn(&(f64, f64, f64)) -> f64| residuals.iter().map(f).fold(0.0, f64::max);
    let involutive_residual = fold(|r| r.0);
    let anti_multiplicative_residual = fold(|r| r.1);
    let linearity_residual = fold(|r| r.2);
    let worst = involutive_residual
        .max(anti_multiplicative_residual)
        .max(linearity_residual);
    VerificationReport {
        // NaN compares false, so non-finite residuals fail.
        passed: worst <= tol.residual_rel,
        trials,
        involutive_residual,
        anti_multiplicative_residual,
        linearity_residual,
        issue: None,
    }
}

fn trial_residuals(
    s: &Involution,
    a: &AlgebraElement,
    b: &AlgebraElement,
    alpha: Complex64,
) -> (f64, f64, f64) {
    let apply = |x: &AlgebraElement| s.apply(x).expect("shape matches");
    let sa = apply(a);
    let sb = apply(b);
    let ssa = apply(&sa);
    let involutive = ssa.distance(a).expect("same shape") / a.norm();

    let sab = apply(&a.multiply(b).expect("same shape"));
    let sbsa = sb.multiply(&sa).expect("same shape");
    let anti = sab.distance(&sbsa).expect("same shape") / (sa.norm() * sb.norm());

    let combo = a.scale(alpha).add(b).expect("same shape");
    let expected = sa.scale(alpha).add(&sb).expect("same shape");
    let linear = apply(&combo).distance(&expected).expect("same shape")
        / (alpha.norm() * sa.norm() + sb.norm());
    (involutive, anti, linear)
}
