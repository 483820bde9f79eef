//! Construction of generators: explicit pairs for `M_n`, the scalar `λ`
//! separating two minimal polynomials, the polynomial splitting `a ⊕ λb`,
//! and the orbit-by-orbit assembly of a single generator `a` with `a` and
//! `S(a)` generating the algebra.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    verify_prepared, AlgebraElement, AlgebraError, AlgebraShape, Involution, InvolutionSpec,
    Orbit, OrbitSpec, DEFAULT_TRIALS,
};
use crate::certify::{certify_generation_with, span_closure, GenerationCertificate};
use crate::linalg::{
    minimal_polynomial, standard_skew_form, ComplexMatrix, KernelError, Polynomial, Tolerance,
    ONE, ZERO,
};
use crate::normalize::{normalize_prepared, BlockInvolutionType, NormalizationReport, NormalizeError};
use crate::par::{map_indexed, Execution};

/// Absolute tolerance on polynomial roots (after balancing).
pub const ROOT_TOL: f64 = 1e-8;

/// Minimum per-root-pair geometric mean of `|ρ − λσ| / max(|ρ|, |λσ|)`
/// implied by the resultant.
pub const RESULTANT_MIN: f64 = 1e-6;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_RETRY_BUDGET: usize = 8;
const ANNULUS_SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("coefficient {0} is zero")]
    ZeroEntry(usize),
    #[error("size {0} is odd")]
    OddDimension(usize),
    #[error("no admissible scalar among {0} candidates")]
    Exhausted(usize),
    #[error("generator block is singular")]
    Singular,
    #[error(
        "orbit {orbit} is a symplectic 2x2 block {block}: S(x) = tr(x)I - x there, so no pair {{x, S(x)}} generates it"
    )]
    SymplecticRank2Obstruction { orbit: usize, block: usize },
    #[error("retry budget exhausted: {0}")]
    RetryExhausted(String),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<KernelError> for SynthesisError {
    fn from(e: KernelError) -> Self {
        SynthesisError::Algebra(AlgebraError::Kernel(e))
    }
}

#[derive(Debug, Clone)]
pub struct SynthesisConfig {
    pub seed: u64,
    pub retry_budget: usize,
    pub lambda_scan: Vec<Complex64>,
    pub tol: Tolerance,
}

impl SynthesisConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            retry_budget: DEFAULT_RETRY_BUDGET,
            lambda_scan: default_scan(seed),
            tol: Tolerance::default(),
        }
    }

    pub fn with_retries(mut self, retry_budget: usize) -> Self {
        self.retry_budget = retry_budget;
        self
    }

    fn validate(&self) -> Result<(), SynthesisError> {
        if self.retry_budget == 0 {
            return Err(SynthesisError::InvalidArgument("retry budget must be at least 1".into()));
        }
        self.tol.validate()?;
        Ok(())
    }

    fn rng(&self, purpose: u64, index: usize, attempt: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(purpose << 56 | (index as u64) << 24 | attempt as u64);
        rng
    }
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self::new(DEFAULT_SEED)
    }
}

/// Primes up to 97, then samples from the annulus `1.5 ≤ |λ| ≤ 3`.
pub fn default_scan(seed: u64) -> Vec<Complex64> {
    let mut scan: Vec<Complex64> = (2u32..=97)
        .filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0))
        .map(|k| Complex64::new(k as f64, 0.0))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0xA4);
    for _ in 0..ANNULUS_SAMPLES {
        let r: f64 = rng.random_range(1.5..=3.0);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        scan.push(Complex64::from_polar(r, theta));
    }
    scan
}

/// `x` with `alphas` on the superdiagonal, `y` with `betas` on the
/// subdiagonal. For `n = 1` both are `[1]`.
pub fn explicit_transpose_pair(
    n: usize,
    alphas: &[Complex64],
    betas: &[Complex64],
) -> Result<(ComplexMatrix, ComplexMatrix), SynthesisError> {
    if n == 0 {
        return Err(SynthesisError::InvalidArgument("n must be at least 1".into()));
    }
    if n == 1 {
        return Ok((ComplexMatrix::identity(1), ComplexMatrix::identity(1)));
    }
    if alphas.len() != n - 1 || betas.len() != n - 1 {
        return Err(SynthesisError::InvalidArgument(format!(
            "expected {} coefficients, got {} and {}",
            n - 1,
            alphas.len(),
            betas.len()
        )));
    }
    if let Some(k) = alphas.iter().chain(betas).position(|z| *z == ZERO) {
        return Err(SynthesisError::ZeroEntry(k % (n - 1)));
    }
    let x = ComplexMatrix::from_fn(n, |i, j| if j == i + 1 { alphas[i] } else { ZERO });
    let y = ComplexMatrix::from_fn(n, |i, j| if i == j + 1 { betas[j] } else { ZERO });
    Ok((x, y))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimCheck {
    pub generated: bool,
    pub closure_dim: usize,
    /// `‖J·xᵀ·J⁻¹ − y‖`
    pub forward_residual: f64,
    /// `‖J·yᵀ·J⁻¹ − x‖`
    pub backward_residual: f64,
}

/// All-ones superdiagonal `x` and subdiagonal `y` except `y[k][k−1] = −1`
/// for `n = 2k`, with a report on generation and on the `J`-conjugate
/// transpose relation between them.
pub fn explicit_symplectic_pair(
    n: usize,
    tol: &Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix, ClaimCheck), SynthesisError> {
    if n == 0 || n % 2 == 1 {
        return Err(SynthesisError::OddDimension(n));
    }
    let k = n / 2;
    let ones = vec![ONE; n - 1];
    let mut betas = ones.clone();
    betas[k - 1] = -ONE;
    let (x, y) = explicit_transpose_pair(n, &ones, &betas)?;
    let j = standard_skew_form(k);
    let j_inv = j.scale(-ONE);
    let shape = AlgebraShape::new(vec![n])?;
    let gens = [
        AlgebraElement::from_parts(&shape, vec![x.clone()])?,
        AlgebraElement::from_parts(&shape, vec![y.clone()])?,
    ];
    let closure = span_closure(&shape, &gens, tol)?;
    let claim = ClaimCheck {
        generated: closure.generated,
        closure_dim: closure.final_dim,
        forward_residual: j.conjugate_by(&x.transpose(), &j_inv).distance(&y),
        backward_residual: j.conjugate_by(&y.transpose(), &j_inv).distance(&x),
    };
    Ok((x, y, claim))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaChoice {
    pub lambda: Complex64,
    /// Distinct quotients `ρ/σ` of a root of `p` by a root of `q`.
    pub excluded_quotients: Vec<Complex64>,
    /// `(|Res(p, q_λ)| / Π max(|ρ|, |λσ|))^(1/(deg p · deg q))`.
    pub certificate: f64,
    /// `|Res(p, q_λ)|` with `q_λ(X) = λ^k q(X/λ)` monic.
    pub resultant: f64,
    /// `min |λ − ρ/σ| / max(1, |ρ/σ|)`.
    pub margin: f64,
}

/// First `λ` of the scan with `p(X)` and `q(X/λ)` coprime, judged both by
/// distance to the root quotients and by the resultant.
pub fn select_lambda(
    p: &Polynomial,
    q: &Polynomial,
    cfg: &SynthesisConfig,
) -> Result<LambdaChoice, SynthesisError> {
    select_lambda_factored(std::slice::from_ref(p), std::slice::from_ref(q), &cfg.lambda_scan)
}

/// As [`select_lambda`] with `p` and `q` given as products of factors.
/// The resultant is multiplicative, so it is evaluated factor by factor.
pub fn select_lambda_factored(
    ps: &[Polynomial],
    qs: &[Polynomial],
    scan: &[Complex64],
) -> Result<LambdaChoice, SynthesisError> {
    let check = |f: &Polynomial| -> Result<Polynomial, SynthesisError> {
        match f.degree() {
            Some(d) if d >= 1 => {
                let f = f.monic();
                if f.coeffs()[0].norm() <= ROOT_TOL * f.norm() {
                    Err(SynthesisError::InvalidArgument("polynomial has 0 as a root".into()))
                } else {
                    Ok(f)
                }
            }
            _ => Err(SynthesisError::InvalidArgument("polynomial must have positive degree".into())),
        }
    };
    let ps = ps.iter().map(check).collect::<Result<Vec<_>, _>>()?;
    let qs = qs.iter().map(check).collect::<Result<Vec<_>, _>>()?;
    if ps.is_empty() || qs.is_empty() {
        return Err(SynthesisError::InvalidArgument("no polynomials given".into()));
    }
    let p_roots: Vec<Vec<Complex64>> = ps.iter().map(|p| p.roots()).collect();
    let q_roots: Vec<Vec<Complex64>> = qs.iter().map(|q| q.roots()).collect();
    let mut quotients: Vec<Complex64> = Vec::new();
    for rho in p_roots.iter().flatten() {
        for sigma in q_roots.iter().flatten() {
            let z = rho / sigma;
            if !quotients.iter().any(|w| (w - z).norm() <= ROOT_TOL * w.norm().max(1.0)) {
                quotients.push(z);
            }
        }
    }
    for &lambda in scan {
        if lambda == ZERO || !lambda.re.is_finite() || !lambda.im.is_finite() {
            continue;
        }
        let margin = quotients
            .iter()
            .map(|z| (lambda - z).norm() / z.norm().max(1.0))
            .fold(f64::INFINITY, f64::min);
        if !(margin > 10.0 * ROOT_TOL) {
            continue;
        }
        let mut log_res = 0.0;
        let mut log_rel = 0.0;
        let mut pairs = 0usize;
        for (p, pr) in ps.iter().zip(&p_roots) {
            for (q, qr) in qs.iter().zip(&q_roots) {
                let ql = q.dilate(lambda);
                let r = pr
                    .iter()
                    .chain(qr.iter().map(|s| s * lambda).collect::<Vec<_>>().iter())
                    .map(|z| z.norm())
                    .fold(f64::MIN_POSITIVE, f64::max);
                let (m, k) = (pr.len(), qr.len());
                let det = scaled(p, r).resultant(&scaled(&ql, r)).magnitude;
                let lr = det.ln() + (m * k) as f64 * r.ln();
                let norm: f64 = pr
                    .iter()
                    .flat_map(|rho| qr.iter().map(move |s| rho.norm().max((s * lambda).norm()).ln()))
                    .sum();
                log_res += lr;
                log_rel += lr - norm;
                pairs += m * k;
            }
        }
        let certificate = (log_rel / pairs as f64).exp();
        if certificate > RESULTANT_MIN {
            return Ok(LambdaChoice {
                lambda,
                excluded_quotients: quotients,
                certificate,
                resultant: log_res.exp(),
                margin,
            });
        }
    }
    Err(SynthesisError::Exhausted(scan.len()))
}

/// `f(r·X) / r^m` for monic `f` of degree `m`: roots divided by `r`.
fn scaled(f: &Polynomial, r: f64) -> Polynomial {
    let m = f.degree().unwrap_or(0) as i32;
    Polynomial::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * r.powi(i as i32 - m))
            .collect(),
    )
}

/// `s = X·r` where `r ≡ 1 mod p` and `q_λ | r`, so that
/// `s(a ⊕ λb) = a ⊕ 0` whenever `p`, `q` are the minimal polynomials of
/// `a`, `b`.
pub fn splitting_polynomial(
    p: &Polynomial,
    q: &Polynomial,
    lambda: Complex64,
    tol: &Tolerance,
) -> Result<Polynomial, SynthesisError> {
    let ql = q.dilate(lambda);
    let (_, t) = p.monic().bezout(&ql, tol)?;
    Ok(Polynomial::x().mul(&t.mul(&ql)))
}

/// `x ⊕ λx` on `M_n ⊕ M_n`.
pub fn swap_pair_generator(
    n: usize,
    x: &ComplexMatrix,
    lambda: Complex64,
    tol: &Tolerance,
) -> Result<AlgebraElement, SynthesisError> {
    if x.size() != n {
        return Err(SynthesisError::InvalidArgument(format!("expected a {n}x{n} matrix")));
    }
    if lambda == ZERO || x.inverse(tol.rank_rel).is_err() {
        return Err(SynthesisError::Singular);
    }
    let shape = AlgebraShape::new(vec![n, n])?;
    Ok(AlgebraElement::from_parts(&shape, vec![x.clone(), x.scale(lambda)])?)
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub element: AlgebraElement,
    pub certificate: GenerationCertificate,
    pub normalization: NormalizationReport,
    /// Scalars used: one per swap orbit, then one per combination step.
    pub lambdas: Vec<Complex64>,
    /// Attempts used per orbit generator, then per combination step.
    pub attempts: Vec<usize>,
}

pub fn synthesize_generator(
    shape: &AlgebraShape,
    spec: &InvolutionSpec,
    cfg: &SynthesisConfig,
) -> Result<Synthesis, SynthesisError> {
    synthesize_with(shape, spec, cfg, Execution::default())
}

/// Normalize, build one generator per orbit in canonical coordinates,
/// combine them orbit by orbit, transport back and certify.
pub fn synthesize_with(
    shape: &AlgebraShape,
    spec: &InvolutionSpec,
    cfg: &SynthesisConfig,
    exec: Execution,
) -> Result<Synthesis, SynthesisError> {
    cfg.validate()?;
    let tol = &cfg.tol;
    let s = Involution::new(shape, spec.clone(), tol)?;
    let report = verify_prepared(&s, tol, DEFAULT_TRIALS, exec);
    if !report.passed {
        let msg = report.issue.unwrap_or_else(|| {
            format!(
                "worst axiom residual {:.3e}",
                report
                    .involutive_residual
                    .max(report.anti_multiplicative_residual)
                    .max(report.linearity_residual)
            )
        });
        return Err(NormalizeError::NotVerified(msg).into());
    }
    let normalization = normalize_prepared(&s, tol, exec)?;
    for (k, o) in normalization.orbits.iter().enumerate() {
        if let (BlockInvolutionType::Symplectic, Orbit::Fixed(b)) = (o.kind, o.orbit) {
            if shape.block_size(b) == 2 {
                return Err(SynthesisError::SymplecticRank2Obstruction { orbit: k, block: b });
            }
        }
    }

    let pieces = map_indexed(exec, normalization.orbits.len(), |k| {
        orbit_generator(shape, &normalization, k, cfg, exec)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let mut lambdas: Vec<Complex64> = pieces.iter().filter_map(|p| p.lambda).collect();
    let mut attempts: Vec<usize> = pieces.iter().map(|p| p.attempts).collect();
    let mut acc = pieces[0].element.clone();
    let mut support = normalization.orbits[0].orbit.blocks();
    for (k, piece) in pieces.iter().enumerate().skip(1) {
        let mut next_support = support.clone();
        next_support.extend(piece.blocks.iter().copied());
        let sub = CanonicalRestriction::new(shape, &normalization, &next_support)?;
        let ps = block_polys(&acc, &support, tol);
        let qs = block_polys(&piece.element, &piece.blocks, tol);
        let first = select_lambda_factored(&ps, &qs, &cfg.lambda_scan).ok().map(|c| c.lambda);
        let mut rng = cfg.rng(2, k, 0);
        let mut done = None;
        for attempt in 0..cfg.retry_budget {
            let mu = match (attempt, first) {
                (0, Some(l)) => l,
                _ => Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)),
            };
            let c = acc.add(&piece.element.scale(mu))?;
            if sub.certify(&c, tol, exec)?.passed() {
                done = Some((c, mu, attempt + 1));
                break;
            }
        }
        let Some((c, mu, used)) = done else {
            return Err(SynthesisError::RetryExhausted(format!("combination step {k}")));
        };
        acc = c;
        support = next_support;
        lambdas.push(mu);
        attempts.push(used);
    }

    let element = normalization.to_original(&acc);
    let certificate = certify_generation_with(&s, &element, tol, exec)?;
    if !certificate.passed() {
        return Err(SynthesisError::RetryExhausted(format!(
            "final certificate reached dimension {} of {}",
            certificate.closure.final_dim, certificate.closure.total_dim
        )));
    }
    Ok(Synthesis {
        element,
        certificate,
        normalization,
        lambdas,
        attempts,
    })
}

struct OrbitPiece {
    /// Zero outside `blocks`; canonical coordinates.
    element: AlgebraElement,
    blocks: Vec<usize>,
    lambda: Option<Complex64>,
    attempts: usize,
}

/// Nilpotent shift plus `diag(1, …, n)`.
fn structured_fallback(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex64::new((i + 1) as f64, 0.0)
        } else if j == i + 1 {
            ONE
        } else {
            ZERO
        }
    })
}

fn orbit_generator(
    shape: &AlgebraShape,
    report: &NormalizationReport,
    k: usize,
    cfg: &SynthesisConfig,
    exec: Execution,
) -> Result<OrbitPiece, SynthesisError> {
    let tol = &cfg.tol;
    let orbit = report.orbits[k].orbit;
    let blocks = orbit.blocks();
    let n = shape.block_size(blocks[0]);
    let sub = CanonicalRestriction::new(shape, report, &blocks)?;
    let mut rng = cfg.rng(1, k, 0);
    let candidates = (0..cfg.retry_budget)
        .map(|_| {
            if n == 1 {
                ComplexMatrix::identity(1)
            } else {
                ComplexMatrix::random_gaussian(n, &mut rng)
            }
        })
        .chain(std::iter::once(structured_fallback(n)));
    for (attempt, x) in candidates.enumerate() {
        if x.inverse(tol.rank_rel).is_err() {
            continue;
        }
        let (local, lambda) = match orbit {
            Orbit::Fixed(_) => (AlgebraElement::from_parts(&sub.shape, vec![x])?, None),
            Orbit::Pair(..) => {
                let single = AlgebraShape::new(vec![n])?;
                let t = Involution::new(&single, InvolutionSpec::transpose(&single), tol)?;
                let xe = AlgebraElement::from_parts(&single, vec![x.clone()])?;
                if !certify_generation_with(&t, &xe, tol, exec)?.passed() {
                    continue;
                }
                let p = minimal_polynomial(&x, tol);
                let Ok(choice) = select_lambda_factored(std::slice::from_ref(&p), std::slice::from_ref(&p), &cfg.lambda_scan) else {
                    continue;
                };
                (swap_pair_generator(n, &x, choice.lambda, tol)?, Some(choice.lambda))
            }
        };
        if sub.certify_local(&local, tol, exec)?.passed() {
            return Ok(OrbitPiece {
                element: sub.embed(shape, &local)?,
                blocks,
                lambda,
                attempts: attempt + 1,
            });
        }
    }
    Err(SynthesisError::RetryExhausted(format!("orbit {k} generator")))
}

fn block_polys(a: &AlgebraElement, blocks: &[usize], tol: &Tolerance) -> Vec<Polynomial> {
    blocks.iter().map(|&b| minimal_polynomial(a.part(b), tol)).collect()
}

/// The canonical involution restricted to a union of orbits, with blocks
/// renumbered in the order given.
struct CanonicalRestriction {
    blocks: Vec<usize>,
    shape: AlgebraShape,
    involution: Involution,
}

impl CanonicalRestriction {
    fn new(
        shape: &AlgebraShape,
        report: &NormalizationReport,
        blocks: &[usize],
    ) -> Result<Self, SynthesisError> {
        let index = |b: usize| blocks.iter().position(|&c| c == b).expect("orbit inside support");
        let orbits = report
            .orbits
            .iter()
            .filter(|o| o.orbit.blocks().iter().all(|b| blocks.contains(b)))
            .map(|o| match o.canonical_orbit() {
                OrbitSpec::Fixed { block, u } => OrbitSpec::Fixed { block: index(block), u },
                OrbitSpec::Swap { i, j, g, h } => OrbitSpec::Swap {
                    i: index(i),
                    j: index(j),
                    g,
                    h,
                },
            })
            .collect();
        let sub = shape.restrict(blocks)?;
        let involution = Involution::new(&sub, InvolutionSpec::Structured(orbits), &Tolerance::default())?;
        Ok(Self {
            blocks: blocks.to_vec(),
            shape: sub,
            involution,
        })
    }

    fn restrict(&self, a: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        AlgebraElement::from_parts(&self.shape, self.blocks.iter().map(|&b| a.part(b).clone()).collect())
    }

    fn embed(&self, shape: &AlgebraShape, local: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        let mut out = AlgebraElement::zeros(shape);
        for (k, &b) in self.blocks.iter().enumerate() {
            *out.part_mut(b) = local.part(k).clone();
        }
        Ok(out)
    }

    /// Certifies a full-shape element on the restricted blocks.
    fn certify(
        &self,
        a: &AlgebraElement,
        tol: &Tolerance,
        exec: Execution,
    ) -> Result<GenerationCertificate, AlgebraError> {
        self.certify_local(&self.restrict(a)?, tol, exec)
    }

    fn certify_local(
        &self,
        local: &AlgebraElement,
        tol: &Tolerance,
        exec: Execution,
    ) -> Result<GenerationCertificate, AlgebraError> {
        certify_generation_with(&self.involution, local, tol, exec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::contains;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn closure_dim(shape: &AlgebraShape, gens: &[ComplexMatrix]) -> usize {
        let gens: Vec<_> = gens
            .iter()
            .map(|g| AlgebraElement::from_parts(shape, vec![g.clone()]).unwrap())
            .collect();
        span_closure(shape, &gens, &Tolerance::default()).unwrap().final_dim
    }

    #[test]
    fn transpose_pair_small_cases() {
        let (x, y) = explicit_transpose_pair(2, &[ONE], &[ONE]).unwrap();
        assert_eq!(x, ComplexMatrix::unit(2, 0, 1));
        assert_eq!(y, x.transpose());
        assert_eq!(closure_dim(&AlgebraShape::new(vec![2]).unwrap(), &[x, y]), 4);
        let (x, y) = explicit_transpose_pair(1, &[], &[]).unwrap();
        assert_eq!(x, ComplexMatrix::identity(1));
        assert_eq!(y, x);
        assert_eq!(
            explicit_transpose_pair(3, &[ONE, ZERO], &[ONE, ONE]),
            Err(SynthesisError::ZeroEntry(1))
        );
        assert!(explicit_transpose_pair(3, &[ONE], &[ONE, ONE]).is_err());
    }

    #[test]
    fn symplectic_pair_at_two() {
        let tol = Tolerance::default();
        let (x, y, claim) = explicit_symplectic_pair(2, &tol).unwrap();
        assert_eq!(x, ComplexMatrix::unit(2, 0, 1));
        assert_eq!(y, ComplexMatrix::unit(2, 1, 0).scale(-ONE));
        assert!(claim.generated);
        // J·xᵀ·J⁻¹ = −x, so the distance to y is ‖−E₁₂ + E₂₁‖ = √2.
        assert!((claim.forward_residual - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(explicit_symplectic_pair(3, &tol), Err(SynthesisError::OddDimension(3))));
    }

    #[test]
    fn lambda_examples() {
        let cfg = SynthesisConfig::default();
        let scan = [c(1.0), c(2.0)];
        let p = Polynomial::from_real(&[-1.0, 1.0]);
        let ch = select_lambda_factored(std::slice::from_ref(&p), std::slice::from_ref(&p), &scan).unwrap();
        assert_eq!(ch.lambda, c(2.0));
        assert_eq!(ch.excluded_quotients.len(), 1);

        let q = Polynomial::from_real(&[1.0, 1.0]);
        let ch = select_lambda_factored(std::slice::from_ref(&p), &[q], &[c(-1.0), c(2.0)]).unwrap();
        assert_eq!(ch.lambda, c(2.0));

        let p2 = Polynomial::from_real(&[2.0, -3.0, 1.0]);
        let q2 = Polynomial::from_real(&[3.0, -4.0, 1.0]);
        let ch = select_lambda(&p2, &q2, &cfg).unwrap();
        let mut quot: Vec<f64> = ch.excluded_quotients.iter().map(|z| z.re).collect();
        quot.sort_by(f64::total_cmp);
        let expected = [1.0 / 3.0, 2.0 / 3.0, 1.0, 2.0];
        assert!(quot.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(ch.lambda != c(1.0) && ch.lambda != c(2.0));
        assert!(select_lambda_factored(&[p2], &[q2], &[c(5.0)]).is_ok());

        assert_eq!(
            select_lambda_factored(std::slice::from_ref(&p), std::slice::from_ref(&p), &[c(1.0)]),
            Err(SynthesisError::Exhausted(1))
        );
        let x = Polynomial::x();
        assert!(select_lambda(&x, &x, &cfg).is_err());
    }

    #[test]
    fn splitting_scalar_example() {
        let p = Polynomial::from_real(&[-1.0, 1.0]);
        let s = splitting_polynomial(&p, &p, c(2.0), &Tolerance::default()).unwrap();
        // s = X·(2 − X)
        let expected = [0.0, 2.0, -1.0];
        assert!(s.coeffs().iter().zip(expected).all(|(a, b)| (a - c(b)).norm() < 1e-12));
        assert!(s.coeffs().len() == 3);
        assert!((s.eval(c(1.0)) - ONE).norm() < 1e-12);
        assert!(s.eval(c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn splitting_on_random_blocks() {
        let tol = Tolerance::default();
        let cfg = SynthesisConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = ComplexMatrix::random_gaussian(3, &mut rng);
        let b = ComplexMatrix::random_gaussian(2, &mut rng);
        let p = minimal_polynomial(&a, &tol);
        let q = minimal_polynomial(&b, &tol);
        let lam = select_lambda(&p, &q, &cfg).unwrap().lambda;
        let s = splitting_polynomial(&p, &q, lam, &tol).unwrap();
        let sa = s.eval_matrix(&a);
        let sb = s.eval_matrix(&b.scale(lam));
        let scale: f64 = s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, z)| z.norm() * (a.frobenius_norm() + lam.norm() * b.frobenius_norm()).powi(i as i32))
            .sum();
        assert!(sa.distance(&a) <= 1e-8 * scale);
        assert!(sb.frobenius_norm() <= 1e-8 * scale);
    }

    #[test]
    fn scalar_swap_generator() {
        let tol = Tolerance::default();
        let a = swap_pair_generator(1, &ComplexMatrix::identity(1), c(2.0), &tol).unwrap();
        let shape = AlgebraShape::new(vec![1, 1]).unwrap();
        let s = Involution::new(&shape, InvolutionSpec::canonical_swap(1), &tol).unwrap();
        let sa = s.apply(&a).unwrap();
        assert_eq!(sa.part(0)[(0, 0)], c(2.0));
        let cert = certify_generation_with(&s, &a, &tol, Execution::Sequential).unwrap();
        assert_eq!(cert.closure.final_dim, 2);
        assert!(swap_pair_generator(2, &ComplexMatrix::zeros(2), c(2.0), &tol).is_err());
    }

    #[test]
    fn lambda_one_gives_diagonal_copy() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = ComplexMatrix::random_gaussian(2, &mut rng);
        let shape = AlgebraShape::new(vec![2, 2]).unwrap();
        let s = Involution::new(&shape, InvolutionSpec::canonical_swap(2), &tol).unwrap();
        let a = swap_pair_generator(2, &x, ONE, &tol).unwrap();
        assert_eq!(certify_generation_with(&s, &a, &tol, Execution::Sequential).unwrap().closure.final_dim, 4);
        let p = minimal_polynomial(&x, &tol);
        let lam = select_lambda(&p, &p, &SynthesisConfig::default()).unwrap().lambda;
        assert!(lam != ONE);
        let a = swap_pair_generator(2, &x, lam, &tol).unwrap();
        assert_eq!(certify_generation_with(&s, &a, &tol, Execution::Sequential).unwrap().closure.final_dim, 8);
    }

    #[test]
    fn synthesize_scalars_and_swap() {
        let cfg = SynthesisConfig::default();
        let m1 = AlgebraShape::new(vec![1]).unwrap();
        let out = synthesize_generator(&m1, &InvolutionSpec::transpose(&m1), &cfg).unwrap();
        assert_eq!(out.element.part(0)[(0, 0)], ONE);
        assert_eq!(out.certificate.closure.dims, vec![1]);

        let shape = AlgebraShape::new(vec![2, 2]).unwrap();
        let out = synthesize_generator(&shape, &InvolutionSpec::canonical_swap(2), &cfg).unwrap();
        assert_eq!(out.certificate.closure.final_dim, 8);
        assert!(out.certificate.passed());
    }

    #[test]
    fn symplectic_m2_is_an_obstruction() {
        let shape = AlgebraShape::new(vec![2]).unwrap();
        let spec = InvolutionSpec::Structured(vec![OrbitSpec::Fixed {
            block: 0,
            u: standard_skew_form(1),
        }]);
        assert!(matches!(
            synthesize_generator(&shape, &spec, &SynthesisConfig::default()),
            Err(SynthesisError::SymplecticRank2Obstruction { orbit: 0, block: 0 })
        ));
    }

    #[test]
    fn synthesize_mixed_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let shape = AlgebraShape::new(vec![3, 2, 4, 2, 1]).unwrap();
        let w = ComplexMatrix::random_gaussian(4, &mut rng);
        let g = ComplexMatrix::random_gaussian(2, &mut rng);
        let spec = InvolutionSpec::Structured(vec![
            OrbitSpec::Fixed {
                block: 0,
                u: ComplexMatrix::identity(3),
            },
            OrbitSpec::Swap {
                i: 1,
                j: 3,
                h: g.transpose(),
                g,
            },
            OrbitSpec::Fixed {
                block: 2,
                u: w.transpose().matmul(&standard_skew_form(2)).matmul(&w),
            },
            OrbitSpec::Fixed {
                block: 4,
                u: ComplexMatrix::identity(1),
            },
        ]);
        let cfg = SynthesisConfig::new(9);
        let a = synthesize_with(&shape, &spec, &cfg, Execution::Sequential).unwrap();
        let b = synthesize_with(&shape, &spec, &cfg, Execution::Parallel).unwrap();
        assert_eq!(a.element, b.element);
        assert_eq!(a.certificate.closure.final_dim, shape.total_dim());
        assert!(a.certificate.invertible());
        // Generation is invariant under the recorded basis change.
        let canon = Involution::new(&shape, a.normalization.canonical_spec(), &cfg.tol).unwrap();
        let ac = a.normalization.to_canonical(&a.element);
        let cert = certify_generation_with(&canon, &ac, &cfg.tol, Execution::Sequential).unwrap();
        assert_eq!(cert.closure.final_dim, shape.total_dim());
        let e = AlgebraElement::central_projection(&shape, 2);
        assert!(contains(&a.certificate.closure, &e).unwrap() < 1e-8);
    }
}
