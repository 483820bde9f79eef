//! Burnside-style generation test: the span of all positive-degree words in
//! a set of generators, grown round by round with an orthonormal basis.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{AlgebraElement, AlgebraError, AlgebraShape, Involution};
use crate::linalg::{Tolerance, ZERO};
use crate::par::{map_indexed, Execution};

/// Dimension trace of a span closure.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    /// Dimension after each round that grew the span; the first entry is
    /// the dimension of the span of the generators themselves.
    pub dims: Vec<usize>,
    pub final_dim: usize,
    pub total_dim: usize,
    pub generated: bool,
    /// Orthonormal basis of the closure (flat vectors).
    #[serde(skip)]
    pub basis: Vec<Vec<Complex64>>,
}

impl ClosureReport {
    pub fn rounds(&self) -> usize {
        self.dims.len()
    }
}

/// Which multiplications extend the span in each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sides {
    /// `g·w` only; enough to reach every positive word.
    Left,
    /// `g·w` and `w·g`.
    Both,
}

pub fn span_closure(
    shape: &AlgebraShape,
    gens: &[AlgebraElement],
    tol: &Tolerance,
) -> Result<ClosureReport, AlgebraError> {
    span_closure_with(shape, gens, tol, Sides::Left, Execution::default())
}

/// `W₁ = span(gens)`, then `W ← W + gens·W` until the dimension stops
/// growing. Only basis vectors added in the previous round are multiplied,
/// since products with older ones are already in `W`. Products are formed
/// in parallel; orthogonalization runs in a fixed order, so the result does
/// not depend on `exec`.
pub fn span_closure_with(
    shape: &AlgebraShape,
    gens: &[AlgebraElement],
    tol: &Tolerance,
    sides: Sides,
    exec: Execution,
) -> Result<ClosureReport, AlgebraError> {
    for g in gens {
        g.check_shape(shape)?;
    }
    let total_dim = shape.total_dim();
    let mut basis = OrthoBasis::new(tol.rank_rel);
    let mut frontier: Vec<usize> = gens
        .iter()
        .filter_map(|g| basis.try_add(&g.to_flat()))
        .collect();
    let mut dims = vec![basis.len()];
    let per_side = if sides == Sides::Both { 2 } else { 1 };

    while !frontier.is_empty() && basis.len() < total_dim {
        let tasks = gens.len() * frontier.len() * per_side;
        let products = map_indexed(exec, tasks, |k| {
            let side = k % per_side;
            let k = k / per_side;
            let g = &gens[k / frontier.len()];
            let w = AlgebraElement::from_flat(shape, &basis.vectors[frontier[k % frontier.len()]])
                .expect("basis vectors have total_dim entries");
            let p = if side == 0 { g.multiply(&w) } else { w.multiply(g) };
            p.expect("same shape").to_flat()
        });
        frontier = products.iter().filter_map(|p| basis.try_add(p)).collect();
        if !frontier.is_empty() {
            dims.push(basis.len());
        }
    }
    let final_dim = basis.len();
    Ok(ClosureReport {
        dims,
        final_dim,
        total_dim,
        generated: final_dim == total_dim,
        basis: basis.vectors,
    })
}

/// Relative residual of the orthogonal projection of `e` onto the closure:
/// `‖e − P e‖ / ‖e‖` (0 for `e = 0`).
pub fn contains(closure: &ClosureReport, e: &AlgebraElement) -> Result<f64, AlgebraError> {
    let v = e.to_flat();
    if v.len() != closure.total_dim {
        return Err(AlgebraError::ShapeMismatch);
    }
    let nrm = norm(&v);
    if nrm == 0.0 {
        return Ok(0.0);
    }
    Ok(norm(&project_out(&closure.basis, v)) / nrm)
}

/// Result of checking that `a` and `S(a)` generate the algebra.
#[derive(Debug, Clone)]
pub struct GenerationCertificate {
    pub element: AlgebraElement,
    pub closure: ClosureReport,
    /// Smallest singular value over all blocks of `a`.
    pub invertibility_margin: f64,
    /// `rank_rel` times the largest singular value over all blocks of `a`.
    pub invertibility_threshold: f64,
    pub residuals: BTreeMap<String, f64>,
}

impl GenerationCertificate {
    pub fn generated(&self) -> bool {
        self.closure.generated
    }

    pub fn invertible(&self) -> bool {
        self.invertibility_margin > self.invertibility_threshold
    }

    pub fn passed(&self) -> bool {
        self.generated() && self.invertible()
    }
}

/// Runs the closure of `{a, S(a)}` and records the invertibility margin of
/// `a` together with residual checks: the involution axioms evaluated at
/// `a`, and closure stability (every `g·q` for a generator `g` and closure
/// basis vector `q` lies in the closure).
pub fn certify_generation(
    s: &Involution,
    a: &AlgebraElement,
    tol: &Tolerance,
) -> Result<GenerationCertificate, AlgebraError> {
    certify_generation_with(s, a, tol, Execution::default())
}

pub fn certify_generation_with(
    s: &Involution,
    a: &AlgebraElement,
    tol: &Tolerance,
    exec: Execution,
) -> Result<GenerationCertificate, AlgebraError> {
    let shape = s.shape();
    a.check_shape(shape)?;
    let sa = s.apply(a)?;
    let gens = [a.clone(), sa.clone()];
    let closure = span_closure_with(shape, &gens, tol, Sides::Left, exec)?;

    let mut residuals = BTreeMap::new();
    let ssa = s.apply(&sa)?;
    residuals.insert(
        "involution_square".to_string(),
        ssa.distance(a)? / a.norm().max(f64::MIN_POSITIVE),
    );
    let lhs = s.apply(&a.multiply(&sa)?)?;
    let rhs = ssa.multiply(&sa)?;
    residuals.insert(
        "anti_multiplicativity".to_string(),
        lhs.distance(&rhs)? / (ssa.norm() * sa.norm()).max(f64::MIN_POSITIVE),
    );
    let n = closure.basis.len();
    let stability = map_indexed(exec, gens.len() * n, |k| {
        let q = AlgebraElement::from_flat(shape, &closure.basis[k % n]).expect("total_dim entries");
        let p = gens[k / n].multiply(&q).expect("same shape");
        contains(&closure, &p).expect("same shape")
    });
    residuals.insert(
        "closure_stability".to_string(),
        stability.into_iter().fold(0.0, f64::max),
    );

    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    for p in a.parts() {
        let sv = p.singular_values();
        lo = lo.min(*sv.last().unwrap_or(&0.0));
        hi = hi.max(*sv.first().unwrap_or(&0.0));
    }
    Ok(GenerationCertificate {
        element: a.clone(),
        closure,
        invertibility_margin: lo,
        invertibility_threshold: tol.rank_rel * hi,
        residuals,
    })
}

struct OrthoBasis {
    vectors: Vec<Vec<Complex64>>,
    rank_rel: f64,
}

impl OrthoBasis {
    fn new(rank_rel: f64) -> Self {
        Self {
            vectors: Vec::new(),
            rank_rel,
        }
    }

    fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Adds the component of `v` orthogonal to the span when it exceeds
    /// `rank_rel × ‖v‖`; returns the index of the new basis vector.
    fn try_add(&mut self, v: &[Complex64]) -> Option<usize> {
        let nrm = norm(v);
        if nrm == 0.0 || !nrm.is_finite() {
            return None;
        }
        let w = project_out(&self.vectors, v.iter().map(|z| z / nrm).collect());
        let rest = norm(&w);
        if rest > self.rank_rel {
            self.vectors.push(w.into_iter().map(|z| z / rest).collect());
            Some(self.vectors.len() - 1)
        } else {
            None
        }
    }
}

/// Two passes of classical Gram–Schmidt against an orthonormal family.
fn project_out(basis: &[Vec<Complex64>], mut w: Vec<Complex64>) -> Vec<Complex64> {
    for _ in 0..2 {
        for q in basis {
            let c: Complex64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            if c != ZERO {
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
    }
    w
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
