use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use sgen_core::algebra::{
    verify_involution, AlgebraElement, AlgebraError, AlgebraShape, Involution, InvolutionSpec,
    OrbitSpec,
};
use sgen_core::certify::{certify_generation, span_closure, GenerationCertificate};
use sgen_core::linalg::{minimal_polynomial, unit_normalize, ComplexMatrix, Tolerance};
use sgen_core::normalize::{normalize_all, BlockInvolutionType, NormalizeError};
use sgen_core::synth::{synthesize_generator, SynthesisConfig, SynthesisError, DEFAULT_SEED};

use crate::doc::{
    AlgebraDocument, CertificateDocument, ElementDocument, ElementSource, Verdict,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Commutator residual bound for the single-element closure demo.
pub const COMMUTATOR_TOL: f64 = 1e-9;

/// Largest tensor factor dimension the tensor demo accepts.
pub const MAX_TENSOR_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Negative = 1,
    Obstruction = 2,
    InputFailure = 3,
    NumericFailure = 4,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub report: Value,
    pub certificate: Option<CertificateDocument>,
}

impl Outcome {
    fn new(status: Status, report: Value) -> Self {
        Self {
            status,
            report,
            certificate: None,
        }
    }

    fn error(status: Status, msg: impl std::fmt::Display) -> Self {
        Self::new(status, json!({ "error": msg.to_string() }))
    }
}

fn load(doc: &AlgebraDocument) -> Result<(AlgebraShape, InvolutionSpec), Outcome> {
    let shape = doc.shape().map_err(|e| Outcome::error(Status::InputFailure, e))?;
    let spec = doc.spec().map_err(|e| Outcome::error(Status::InputFailure, e))?;
    Ok((shape, spec))
}

fn algebra_status(e: &AlgebraError) -> Status {
    match e {
        AlgebraError::Kernel(_) => Status::NumericFailure,
        _ => Status::InputFailure,
    }
}

fn normalize_status(e: &NormalizeError) -> Status {
    match e {
        NormalizeError::NotVerified(_) => Status::InputFailure,
        NormalizeError::Algebra(a) => algebra_status(a),
        NormalizeError::Orbit { source, .. } => normalize_status(source),
        _ => Status::NumericFailure,
    }
}

fn synthesis_status(e: &SynthesisError) -> Status {
    match e {
        SynthesisError::SymplecticRank2Obstruction { .. } => Status::Obstruction,
        SynthesisError::InvalidArgument(_) => Status::InputFailure,
        SynthesisError::Normalize(n) => normalize_status(n),
        SynthesisError::Algebra(a) => algebra_status(a),
        _ => Status::NumericFailure,
    }
}

pub fn verify(doc: &AlgebraDocument, trials: usize) -> Outcome {
    let (shape, spec) = match load(doc) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let report = verify_involution(&spec, &shape, &Tolerance::default(), trials);
    let status = if report.passed {
        Status::Success
    } else {
        Status::InputFailure
    };
    Outcome::new(status, serde_json::to_value(&report).expect("report serializes"))
}

fn type_name(t: BlockInvolutionType) -> &'static str {
    match t {
        BlockInvolutionType::Orthogonal => "orthogonal",
        BlockInvolutionType::Symplectic => "symplectic",
        BlockInvolutionType::SwapPair => "swap-pair",
    }
}

pub fn normalize(doc: &AlgebraDocument) -> Outcome {
    let (shape, spec) = match load(doc) {
        Ok(v) => v,
        Err(o) => return o,
    };
    match normalize_all(&shape, &spec, &Tolerance::default()) {
        Ok(r) => {
            let orbits: Vec<Value> = r
                .orbits
                .iter()
                .map(|o| {
                    json!({
                        "blocks": o.orbit.blocks(),
                        "type": type_name(o.kind),
                        "basis_change": o.basis_change.to_rows(),
                        "factor_residual": o.factor_residual,
                        "residual": o.residual,
                    })
                })
                .collect();
            Outcome::new(Status::Success, json!({ "orbits": orbits }))
        }
        Err(e) => Outcome::error(normalize_status(&e), e),
    }
}

fn certificate_document(
    doc: &AlgebraDocument,
    seed: u64,
    cert: &GenerationCertificate,
) -> CertificateDocument {
    CertificateDocument {
        tool_version: TOOL_VERSION.to_string(),
        seed,
        input_digest: doc.digest(),
        element: ElementDocument::from_element(&cert.element),
        dims: cert.closure.dims.clone(),
        final_dim: cert.closure.final_dim,
        total_dim: cert.closure.total_dim,
        invertibility_margin: cert.invertibility_margin,
        invertibility_threshold: cert.invertibility_threshold,
        residuals: cert.residuals.clone(),
        verdict: if cert.passed() {
            Verdict::Generated
        } else {
            Verdict::NotGenerated
        },
    }
}

pub fn synthesize(doc: &AlgebraDocument, seed: Option<u64>, retries: Option<usize>) -> Outcome {
    let (shape, spec) = match load(doc) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let seed = seed.or(doc.seed).unwrap_or(DEFAULT_SEED);
    let mut cfg = SynthesisConfig::new(seed);
    if let Some(r) = retries {
        cfg = cfg.with_retries(r);
    }
    match synthesize_generator(&shape, &spec, &cfg) {
        Ok(out) => {
            let cert = certificate_document(doc, seed, &out.certificate);
            let report = json!({
                "seed": seed,
                "types": out.normalization.types().into_iter().map(type_name).collect::<Vec<_>>(),
                "lambdas": out.lambdas,
                "attempts": out.attempts,
                "dims": cert.dims,
                "verdict": cert.verdict,
            });
            Outcome {
                status: Status::Success,
                report,
                certificate: Some(cert),
            }
        }
        Err(e) => {
            let status = synthesis_status(&e);
            Outcome::new(status, json!({ "seed": seed, "error": e.to_string() }))
        }
    }
}

pub fn certify(doc: &AlgebraDocument, source: &ElementSource) -> Outcome {
    let (shape, spec) = match load(doc) {
        Ok(v) => v,
        Err(o) => return o,
    };
    if let ElementSource::Certificate(c) = source {
        if c.input_digest != doc.digest() {
            return Outcome::error(Status::InputFailure, "certificate digest does not match the algebra document");
        }
    }
    let a = match source.element().to_element() {
        Ok(a) => a,
        Err(e) => return Outcome::error(Status::InputFailure, e),
    };
    if a.shape() != shape {
        return Outcome::error(Status::InputFailure, AlgebraError::ShapeMismatch);
    }
    let tol = Tolerance::default();
    let check = verify_involution(&spec, &shape, &tol, sgen_core::algebra::DEFAULT_TRIALS);
    if !check.passed {
        return Outcome::new(
            Status::InputFailure,
            json!({ "error": "involution failed verification", "verification": check }),
        );
    }
    let s = match Involution::new(&shape, spec, &tol) {
        Ok(s) => s,
        Err(e) => return Outcome::error(algebra_status(&e), e),
    };
    let cert = match certify_generation(&s, &a, &tol) {
        Ok(c) => c,
        Err(e) => return Outcome::error(algebra_status(&e), e),
    };
    let fresh = certificate_document(doc, 0, &cert);
    let mut report = json!({
        "dims": fresh.dims,
        "final_dim": fresh.final_dim,
        "total_dim": fresh.total_dim,
        "invertibility_margin": fresh.invertibility_margin,
        "invertibility_threshold": fresh.invertibility_threshold,
        "residuals": fresh.residuals,
        "verdict": fresh.verdict,
    });
    if let ElementSource::Certificate(c) = source {
        report["replay_matches"] = json!(c.dims == fresh.dims && c.verdict == fresh.verdict);
    }
    let status = if cert.passed() {
        Status::Success
    } else {
        Status::Negative
    };
    Outcome::new(status, report)
}

/// Closure of a single element of `M_n`: it lies in the polynomial algebra
/// of the element, so it is commutative and at most `n`-dimensional.
pub fn demo_counterexample(n: usize, samples: usize, seed: u64, identity: bool) -> Outcome {
    if n < 2 {
        return Outcome::error(Status::InputFailure, "n must be at least 2");
    }
    let tol = Tolerance::default();
    let shape = AlgebraShape::new(vec![n]).expect("n > 0");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_ok = true;
    let mut rows = Vec::new();
    for _ in 0..samples.max(1) {
        let x = if identity {
            ComplexMatrix::identity(n)
        } else {
            ComplexMatrix::random_gaussian(n, &mut rng)
        };
        let a = AlgebraElement::from_parts(&shape, vec![x.clone()]).expect("shape matches");
        let closure = span_closure(&shape, std::slice::from_ref(&a), &tol).expect("shape matches");
        let unital = span_closure(&shape, &[AlgebraElement::identity(&shape), a], &tol)
            .expect("shape matches")
            .final_dim;
        let degree = minimal_polynomial(&x, &tol).degree().unwrap_or(0);
        let commutator = commutator_residual(&shape, &closure.basis);
        let ok = closure.final_dim <= n && closure.final_dim < n * n && commutator <= COMMUTATOR_TOL;
        all_ok &= ok;
        rows.push(json!({
            "closure_dim": closure.final_dim,
            "unital_dim": unital,
            "minimal_polynomial_degree": degree,
            "max_commutator_residual": commutator,
            "ok": ok,
        }));
    }
    let report = json!({
        "n": n,
        "algebra_dim": n * n,
        "seed": seed,
        "samples": rows,
        "assumption": "the algebra generated by a single 1-box is taken to be the polynomial algebra of one element of End(V); only this matrix-level statement is checked",
    });
    Outcome::new(if all_ok { Status::Success } else { Status::Negative }, report)
}

/// Largest `‖qᵢqⱼ − qⱼqᵢ‖` over pairs of (unit-norm) closure basis vectors.
pub fn commutator_residual(shape: &AlgebraShape, basis: &[Vec<Complex64>]) -> f64 {
    let elems: Vec<AlgebraElement> = basis
        .iter()
        .map(|v| AlgebraElement::from_flat(shape, v).expect("basis has total_dim entries"))
        .collect();
    let mut worst = 0.0_f64;
    for (i, p) in elems.iter().enumerate() {
        for q in &elems[i + 1..] {
            let pq = p.multiply(q).expect("same shape");
            let qp = q.multiply(p).expect("same shape");
            worst = worst.max(pq.distance(&qp).expect("same shape"));
        }
    }
    worst
}

/// The flip `e_i ⊗ e_j ↦ e_j ⊗ e_i` on `ℂ^d ⊗ ℂ^d`, index `i·d + j`.
pub fn tensor_flip(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, |r, c| {
        let (i, j) = (c / d, c % d);
        if r == j * d + i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `End(V ⊗ V)` with `S(x) = F·xᵀ·F`, `F` the tensor flip.
pub fn tensor_document(d: usize) -> AlgebraDocument {
    let shape = AlgebraShape::new(vec![d * d]).expect("d > 0");
    let spec = InvolutionSpec::Structured(vec![OrbitSpec::Fixed {
        block: 0,
        u: tensor_flip(d),
    }]);
    let mut doc = AlgebraDocument::from_spec(&shape, &spec);
    doc.name = Some(format!("End(V (x) V), dim V = {d}, flip-transpose"));
    doc
}

pub fn demo_tensor(d: usize, seed: u64) -> Outcome {
    if !(2..=MAX_TENSOR_DIM).contains(&d) {
        return Outcome::error(
            Status::InputFailure,
            format!("dimension must be between 2 and {MAX_TENSOR_DIM}"),
        );
    }
    let doc = tensor_document(d);
    let (shape, spec) = load(&doc).expect("constructed document is valid");
    let f = tensor_flip(d);
    let flip_symmetric = f == f.transpose();
    let flip_involutive = f.matmul(&f) == ComplexMatrix::identity(d * d);
    let cfg = SynthesisConfig::new(seed);
    match synthesize_generator(&shape, &spec, &cfg) {
        Ok(out) => {
            let kind = out.normalization.orbits[0].kind;
            let u = &out.normalization.orbits[0].intertwiner;
            let intertwiner_residual = unit_normalize(u).distance(&unit_normalize(&f));
            let cert = certificate_document(&doc, seed, &out.certificate);
            let ok = flip_symmetric
                && flip_involutive
                && kind == BlockInvolutionType::Orthogonal
                && cert.verdict == Verdict::Generated;
            let report = json!({
                "d": d,
                "algebra_dim": shape.total_dim(),
                "seed": seed,
                "flip_symmetric": flip_symmetric,
                "flip_involutive": flip_involutive,
                "involution_type": type_name(kind),
                "intertwiner_vs_flip": intertwiner_residual,
                "dims": cert.dims,
                "verdict": cert.verdict,
                "note": "S(x) = F x^T F is a stand-in involutive anti-automorphism; its axioms are verified, fidelity to a tangle-defined rotation is not claimed",
            });
            Outcome {
                status: if ok { Status::Success } else { Status::Negative },
                report,
                certificate: Some(cert),
            }
        }
        Err(e) => Outcome::error(synthesis_status(&e), e),
    }
}
