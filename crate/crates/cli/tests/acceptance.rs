//! Acceptance criteria. Prints one `[PASS]`/`[FAIL]` line per criterion
//! and exits nonzero if any criterion fails.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use sgen_cli::commands::{self, Status};
use sgen_cli::doc::{parse, to_pretty, AlgebraDocument};
use sgen_core::algebra::{
    verify_involution, AlgebraElement, AlgebraShape, Involution, InvolutionSpec, OrbitSpec,
};
use sgen_core::certify::{contains, span_closure};
use sgen_core::linalg::{
    minimal_polynomial, rank_and_basis, standard_skew_form, takagi_skew, takagi_symmetric,
    ComplexMatrix, Tolerance,
};
use sgen_core::normalize::{normalize_all, BlockInvolutionType};
use sgen_core::par::Execution;
use sgen_core::synth::{
    explicit_symplectic_pair, explicit_transpose_pair, select_lambda, splitting_polynomial,
    synthesize_generator, synthesize_with, SynthesisConfig, ROOT_TOL,
};

use common::{build, conditioned, congruent_form, random_plan, rng, OrbitPlan};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn c1_involution_axioms() -> Check {
    let tol = Tolerance::default();
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for seed in 0..100 {
        let mut r = rng(1000 + seed);
        let plan = random_plan(&mut r, 4, 6, 2);
        let (shape, spec) = build(&plan, 1e3, &mut r);
        let rep = verify_involution(&spec, &shape, &tol, 32);
        let m = rep
            .involutive_residual
            .max(rep.anti_multiplicative_residual)
            .max(rep.linearity_residual);
        worst = worst.max(m);
        ensure(rep.passed && m <= 1e-8, || format!("seed {seed}: residual {m:.3e}"))?;
    }
    within(start.elapsed(), 5.0)?;
    Ok(format!("100 specs, worst residual {worst:.2e}, {:.2}s", start.elapsed().as_secs_f64()))
}

fn c2_normalizer_recovery() -> Check {
    let tol = Tolerance::default();
    let mut worst = 0.0_f64;
    let mut worst_takagi = 0.0_f64;
    for (t, kind) in [
        BlockInvolutionType::Orthogonal,
        BlockInvolutionType::Symplectic,
        BlockInvolutionType::SwapPair,
    ]
    .into_iter()
    .enumerate()
    {
        for seed in 0..100u64 {
            let mut r = rng(2000 + 1000 * t as u64 + seed);
            let size = match kind {
                BlockInvolutionType::Orthogonal => r.random_range(1..=6),
                BlockInvolutionType::Symplectic => 2 * r.random_range(1..=3),
                BlockInvolutionType::SwapPair => r.random_range(1..=4),
            };
            let (shape, spec) = build(&[OrbitPlan { kind, size }], 1e3, &mut r);
            let report = normalize_all(&shape, &spec, &tol)
                .map_err(|e| format!("{kind:?} seed {seed}: {e}"))?;
            let o = &report.orbits[0];
            ensure(o.kind == kind, || format!("{kind:?} seed {seed}: recovered {:?}", o.kind))?;
            ensure(o.residual <= 1e-8, || format!("{kind:?} seed {seed}: residual {:.3e}", o.residual))?;
            worst = worst.max(o.residual);
            if kind != BlockInvolutionType::SwapPair {
                ensure(o.factor_residual <= 1e-8, || {
                    format!("{kind:?} seed {seed}: factor residual {:.3e}", o.factor_residual)
                })?;
                // Direct factorization of the constructed form.
                let w = conditioned(size, 1e3, &mut r);
                let u = congruent_form(kind, &w);
                let recon = if kind == BlockInvolutionType::Orthogonal {
                    let v = takagi_symmetric(&u, &tol).map_err(|e| e.to_string())?;
                    v.transpose().matmul(&v)
                } else {
                    let v = takagi_skew(&u, &tol).map_err(|e| e.to_string())?;
                    v.transpose().matmul(&standard_skew_form(size / 2)).matmul(&v)
                };
                let rel = recon.distance(&u) / u.frobenius_norm();
                worst_takagi = worst_takagi.max(rel);
                ensure(rel <= 1e-8, || format!("{kind:?} seed {seed}: takagi residual {rel:.3e}"))?;
            }
        }
    }
    Ok(format!(
        "300 instances, worst transport residual {worst:.2e}, worst factorization residual {worst_takagi:.2e}"
    ))
}

fn c3_explicit_pairs() -> Check {
    let tol = Tolerance::default();
    let start = Instant::now();
    let mut rounds = Vec::new();
    for n in 2..=8 {
        let ones = vec![Complex64::new(1.0, 0.0); n - 1];
        let (x, y) = explicit_transpose_pair(n, &ones, &ones).map_err(|e| e.to_string())?;
        let shape = AlgebraShape::new(vec![n]).unwrap();
        let gens = [
            AlgebraElement::from_parts(&shape, vec![x]).unwrap(),
            AlgebraElement::from_parts(&shape, vec![y]).unwrap(),
        ];
        let c = span_closure(&shape, &gens, &tol).map_err(|e| e.to_string())?;
        ensure(c.final_dim == n * n, || format!("n={n}: dimension {}", c.final_dim))?;
        ensure(c.rounds() <= n + 2, || format!("n={n}: {} rounds", c.rounds()))?;
        rounds.push(c.rounds());
        if n % 2 == 0 {
            let (_, _, claim) = explicit_symplectic_pair(n, &tol).map_err(|e| e.to_string())?;
            ensure(claim.generated && claim.closure_dim == n * n, || {
                format!("n={n}: symplectic variant reached {}", claim.closure_dim)
            })?;
        }
    }
    within(start.elapsed(), 2.0)?;
    Ok(format!("rounds for n=2..8: {rounds:?}, {:.2}s", start.elapsed().as_secs_f64()))
}

fn eigenvalues(m: &ComplexMatrix) -> Vec<Complex64> {
    m.to_nalgebra()
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

fn spectral_norm(m: &ComplexMatrix) -> f64 {
    m.singular_values()[0]
}

fn c4_lambda_and_splitting() -> Check {
    let tol = Tolerance::default();
    let cfg = SynthesisConfig::default();
    let mut worst_split = 0.0_f64;
    let mut worst_member = 0.0_f64;
    let mut min_margin = f64::INFINITY;
    for seed in 0..100u64 {
        let mut r = rng(4000 + seed);
        let (m, k) = (r.random_range(1..=5), r.random_range(1..=5));
        let a = conditioned(m, 1e3, &mut r);
        let b = conditioned(k, 1e3, &mut r);
        let p = minimal_polynomial(&a, &tol);
        let q = minimal_polynomial(&b, &tol);
        let choice = select_lambda(&p, &q, &cfg).map_err(|e| format!("seed {seed}: {e}"))?;
        let lambda = choice.lambda;
        for rho in eigenvalues(&a) {
            for sigma in eigenvalues(&b) {
                let d = (lambda - rho / sigma).norm();
                min_margin = min_margin.min(d);
                ensure(d > 10.0 * ROOT_TOL, || format!("seed {seed}: |λ − ρ/σ| = {d:.3e}"))?;
            }
        }
        let s = splitting_polynomial(&p, &q, lambda, &tol).map_err(|e| format!("seed {seed}: {e}"))?;
        let shape = AlgebraShape::new(vec![m, k]).unwrap();
        let c = AlgebraElement::from_parts(&shape, vec![a.clone(), b.scale(lambda)]).unwrap();
        let cn = spectral_norm(&c.part(0).clone()).max(spectral_norm(c.part(1)));
        let scale: f64 = s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, z)| z.norm() * cn.powi(i as i32))
            .sum();
        let sa = s.eval_matrix(c.part(0));
        let sb = s.eval_matrix(c.part(1));
        let dev = (sa.distance(&a).powi(2) + sb.frobenius_norm().powi(2)).sqrt();
        worst_split = worst_split.max(dev / scale);
        ensure(dev <= 1e-8 * scale, || format!("seed {seed}: split residual {:.3e}", dev / scale))?;

        let closure = span_closure(&shape, &[c], &tol).map_err(|e| e.to_string())?;
        let a0 = AlgebraElement::from_parts(&shape, vec![a, ComplexMatrix::zeros(k)]).unwrap();
        let b0 = AlgebraElement::from_parts(&shape, vec![ComplexMatrix::zeros(m), b]).unwrap();
        for e in [a0, b0] {
            let res = contains(&closure, &e).unwrap();
            worst_member = worst_member.max(res);
            ensure(res <= 1e-8, || format!("seed {seed}: membership residual {res:.3e}"))?;
        }
    }
    Ok(format!(
        "100 pairs, min |λ − ρ/σ| {min_margin:.2e}, worst split {worst_split:.2e}, worst membership {worst_member:.2e}"
    ))
}

fn c5_end_to_end() -> Check {
    let start = Instant::now();
    let mut max_attempts = 0;
    for seed in 0..100u64 {
        let mut r = rng(5000 + seed);
        let plan = random_plan(&mut r, 4, 4, 4);
        let (shape, spec) = build(&plan, 1e3, &mut r);
        let cfg = SynthesisConfig::new(seed).with_retries(8);
        let out = synthesize_generator(&shape, &spec, &cfg)
            .map_err(|e| format!("seed {seed} ({:?}): {e}", shape.blocks()))?;
        let cert = &out.certificate;
        ensure(cert.closure.final_dim == shape.total_dim(), || {
            format!("seed {seed}: dimension {} of {}", cert.closure.final_dim, shape.total_dim())
        })?;
        ensure(cert.invertibility_margin > cert.invertibility_threshold, || {
            format!("seed {seed}: invertibility margin {:.3e}", cert.invertibility_margin)
        })?;
        max_attempts = max_attempts.max(out.attempts.iter().copied().max().unwrap_or(0));
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "100 algebras, max attempts {max_attempts}, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn sgen() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sgen"))
}

fn c6_obstruction() -> Check {
    let out = sgen()
        .arg("synthesize")
        .arg(fixture("symplectic_m2.json"))
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(2), || format!("exit status {:?}", out.status.code()))?;

    let tol = Tolerance::default();
    let shape = AlgebraShape::new(vec![2]).unwrap();
    let spec = InvolutionSpec::Structured(vec![OrbitSpec::Fixed {
        block: 0,
        u: standard_skew_form(1),
    }]);
    let s = Involution::new(&shape, spec, &tol).unwrap();
    let mut worst_identity = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            let e = ComplexMatrix::unit(2, i, j);
            let se = s.apply_to_block(0, &e).unwrap();
            let expected = &ComplexMatrix::identity(2).scale(e.trace()) - &e;
            worst_identity = worst_identity.max(se.part(0).distance(&expected));
        }
    }
    ensure(worst_identity <= 1e-12, || format!("tr(x)I − x identity off by {worst_identity:.3e}"))?;
    let mut r = rng(6000);
    let mut largest = 0;
    for _ in 0..1000 {
        let x = AlgebraElement::from_parts(&shape, vec![ComplexMatrix::random_gaussian(2, &mut r)]).unwrap();
        let sx = s.apply(&x).unwrap();
        let c = span_closure(&shape, &[x, sx], &tol).unwrap();
        largest = largest.max(c.final_dim);
    }
    ensure(largest <= 2, || format!("a sampled pair reached dimension {largest}"))?;
    Ok(format!("exit 2; 1000 samples, largest closure {largest}; identity residual {worst_identity:.1e}"))
}

fn c7_single_element() -> Check {
    let tol = Tolerance::default();
    let mut worst = 0.0_f64;
    for n in 2..=5 {
        let shape = AlgebraShape::new(vec![n]).unwrap();
        let mut r = rng(7000 + n as u64);
        for k in 0..20 {
            let a = AlgebraElement::from_parts(&shape, vec![ComplexMatrix::random_gaussian(n, &mut r)]).unwrap();
            let c = span_closure(&shape, &[a], &tol).unwrap();
            ensure(c.final_dim <= n && c.final_dim < n * n, || {
                format!("n={n} sample {k}: dimension {}", c.final_dim)
            })?;
            let basis: Vec<ComplexMatrix> = c
                .basis
                .iter()
                .map(|v| ComplexMatrix::from_row_major(n, v.clone()).unwrap())
                .collect();
            for p in &basis {
                for q in &basis {
                    worst = worst.max(p.matmul(q).distance(&q.matmul(p)));
                }
            }
            ensure(worst <= 1e-9, || format!("n={n} sample {k}: commutator {worst:.3e}"))?;
        }
    }
    Ok(format!("80 samples, worst commutator {worst:.2e}"))
}

fn c8_tensor_demo() -> Check {
    let start = Instant::now();
    let mut ends = Vec::new();
    for (d, dim) in [(2, 16), (3, 81)] {
        let out = commands::demo_tensor(d, 1);
        ensure(out.status == Status::Success, || format!("d={d}: {}", out.report))?;
        ensure(out.report["involution_type"] == "orthogonal", || format!("d={d}: type {}", out.report["involution_type"]))?;
        let cert = out.certificate.ok_or("no certificate")?;
        ensure(cert.dims.last() == Some(&dim) && cert.total_dim == dim, || {
            format!("d={d}: trace {:?}", cert.dims)
        })?;
        ends.push(dim);
    }
    within(start.elapsed(), 10.0)?;
    Ok(format!("traces end at {ends:?}, {:.2}s", start.elapsed().as_secs_f64()))
}

/// Rank of all words of length `1..=max_len` in `gens`, by SVD.
fn brute_force_dim(gens: &[AlgebraElement], max_len: usize, tol: &Tolerance) -> usize {
    let mut level: Vec<AlgebraElement> = gens.to_vec();
    let mut all: Vec<Vec<Complex64>> = Vec::new();
    for len in 1..=max_len {
        for w in &level {
            let v = w.to_flat();
            let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 0.0 {
                all.push(v.iter().map(|z| z / nrm).collect());
            }
        }
        if len < max_len {
            level = level
                .iter()
                .flat_map(|w| gens.iter().map(move |g| g.multiply(w).unwrap()))
                .collect();
        }
    }
    rank_and_basis(&all, tol).unwrap().rank
}

fn random_generating_set(seed: u64) -> (AlgebraShape, Vec<AlgebraElement>) {
    let shapes: [&[usize]; 10] = [
        &[1],
        &[2],
        &[1, 1],
        &[3],
        &[2, 1],
        &[2, 2],
        &[1, 1, 1],
        &[3, 1],
        &[2, 2, 1, 1],
        &[4],
    ];
    let mut r = rng(9000 + seed);
    let shape = AlgebraShape::new(shapes[(seed as usize) % shapes.len()].to_vec()).unwrap();
    let dim = shape.total_dim();
    let ngens = if dim <= 9 { r.random_range(1..=3) } else { r.random_range(1..=2) };
    let style = r.random_range(0..4);
    let gens = (0..ngens)
        .map(|_| {
            let parts: Vec<ComplexMatrix> = shape
                .blocks()
                .iter()
                .map(|&n| {
                    let x = ComplexMatrix::random_gaussian(n, &mut r);
                    match style {
                        // Upper triangular.
                        1 => ComplexMatrix::from_fn(n, |i, j| if i <= j { x[(i, j)] } else { Complex64::new(0.0, 0.0) }),
                        // Sparse: one matrix unit per block.
                        2 => ComplexMatrix::unit(n, r.random_range(0..n), r.random_range(0..n)),
                        _ => x,
                    }
                })
                .collect();
            let mut parts = parts;
            // Diagonal copy across equal-size blocks.
            if style == 3 {
                for b in 1..parts.len() {
                    if parts[b].size() == parts[0].size() {
                        parts[b] = parts[0].clone();
                    }
                }
            }
            AlgebraElement::from_parts(&shape, parts).unwrap()
        })
        .collect();
    (shape, gens)
}

fn c9_oracle() -> Check {
    let tol = Tolerance::default();
    let mut generated = 0;
    for seed in 0..50 {
        let (shape, gens) = random_generating_set(seed);
        let dim = shape.total_dim();
        let c = span_closure(&shape, &gens, &tol).map_err(|e| e.to_string())?;
        let oracle = brute_force_dim(&gens, dim, &tol);
        ensure(c.final_dim == oracle, || {
            format!("seed {seed} {:?}: closure {} vs words {oracle}", shape.blocks(), c.final_dim)
        })?;
        generated += c.generated as usize;
    }
    Ok(format!("50 sets agree ({generated} generating, {} not)", 50 - generated))
}

fn c10_determinism_and_replay() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut docs: Vec<(String, AlgebraDocument)> = ["scalar_m1.json", "swap_m2m2.json", "transpose_m3.json", "mixed.json", "dense_swap_m1m1.json"]
        .iter()
        .map(|f| {
            let text = std::fs::read_to_string(fixture(f)).unwrap();
            (f.to_string(), parse(&text, f).unwrap())
        })
        .collect();
    for seed in 0..5u64 {
        let mut r = rng(10_000 + seed);
        let plan = random_plan(&mut r, 3, 3, 4);
        let (shape, spec) = build(&plan, 1e3, &mut r);
        docs.push((format!("random-{seed}"), AlgebraDocument::from_spec(&shape, &spec)));
    }
    for (name, doc) in &docs {
        let first = commands::synthesize(doc, Some(42), None);
        let second = commands::synthesize(doc, Some(42), None);
        let (a, b) = match (&first.certificate, &second.certificate) {
            (Some(a), Some(b)) => (to_pretty(a), to_pretty(b)),
            _ => return Err(format!("{name}: synthesis failed: {}", first.report)),
        };
        ensure(a == b, || format!("{name}: certificates differ"))?;

        // Sequential and parallel runs agree bit for bit.
        let shape = doc.shape().unwrap();
        let spec = doc.spec().unwrap();
        let cfg = SynthesisConfig::new(42);
        let seq = synthesize_with(&shape, &spec, &cfg, Execution::Sequential).map_err(|e| e.to_string())?;
        let par = synthesize_with(&shape, &spec, &cfg, Execution::Parallel).map_err(|e| e.to_string())?;
        ensure(seq.element == par.element, || format!("{name}: sequential and parallel differ"))?;

        let alg = dir.path().join(format!("{name}.alg.json"));
        std::fs::write(&alg, to_pretty(doc)).unwrap();
        let mut outs = Vec::new();
        for k in 0..2 {
            let cert = dir.path().join(format!("{name}.{k}.cert.json"));
            let st = sgen()
                .args(["synthesize", "--seed", "42", "--out"])
                .arg(&cert)
                .arg(&alg)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(st.status.code() == Some(0), || format!("{name}: synthesize exit {:?}", st.status.code()))?;
            outs.push(std::fs::read(&cert).unwrap());
            let replay = sgen().arg("certify").arg(&alg).arg(&cert).output().map_err(|e| e.to_string())?;
            ensure(replay.status.code() == Some(0), || format!("{name}: certify exit {:?}", replay.status.code()))?;
        }
        ensure(outs[0] == outs[1], || format!("{name}: binary certificates differ"))?;
        ensure(outs[0] == a.as_bytes(), || format!("{name}: binary and library certificates differ"))?;
    }
    Ok(format!("{} algebras: identical certificates, replay exit 0", docs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("involution axioms", c1_involution_axioms),
        ("normalizer recovery", c2_normalizer_recovery),
        ("explicit pairs", c3_explicit_pairs),
        ("lambda selection and splitting", c4_lambda_and_splitting),
        ("end-to-end synthesis", c5_end_to_end),
        ("obstruction detection", c6_obstruction),
        ("single-element closure", c7_single_element),
        ("tensor demo", c8_tensor_demo),
        ("oracle equivalence", c9_oracle),
        ("determinism and replay", c10_determinism_and_replay),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} ({detail})", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
