#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sgen_core::algebra::{AlgebraShape, InvolutionSpec, OrbitSpec};
use sgen_core::linalg::{standard_skew_form, ComplexMatrix};
use sgen_core::normalize::BlockInvolutionType;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian matrix with condition number at most `max_cond`.
pub fn conditioned(n: usize, max_cond: f64, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let w = ComplexMatrix::random_gaussian(n, rng);
        if w.condition_number() <= max_cond {
            return w;
        }
    }
}

/// `u = wᵀw` or `u = wᵀJw`.
pub fn congruent_form(kind: BlockInvolutionType, w: &ComplexMatrix) -> ComplexMatrix {
    match kind {
        BlockInvolutionType::Symplectic => w
            .transpose()
            .matmul(&standard_skew_form(w.size() / 2))
            .matmul(w),
        _ => w.transpose().matmul(w),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OrbitPlan {
    pub kind: BlockInvolutionType,
    pub size: usize,
}

/// Random orbit structure: up to `max_orbits` orbits of mixed types with
/// blocks of size at most `max_size`. Symplectic orbits get even sizes of
/// at least `min_symplectic`.
pub fn random_plan(
    rng: &mut ChaCha8Rng,
    max_orbits: usize,
    max_size: usize,
    min_symplectic: usize,
) -> Vec<OrbitPlan> {
    let count = rng.random_range(1..=max_orbits);
    (0..count)
        .map(|_| {
            let even: Vec<usize> = (min_symplectic..=max_size).filter(|n| n % 2 == 0).collect();
            let pick = rng.random_range(0..3);
            match pick {
                1 if !even.is_empty() => OrbitPlan {
                    kind: BlockInvolutionType::Symplectic,
                    size: even[rng.random_range(0..even.len())],
                },
                2 => OrbitPlan {
                    kind: BlockInvolutionType::SwapPair,
                    size: rng.random_range(1..=max_size),
                },
                _ => OrbitPlan {
                    kind: BlockInvolutionType::Orthogonal,
                    size: rng.random_range(1..=max_size),
                },
            }
        })
        .collect()
}

/// Builds a structured involution realizing `plan` with blocks placed in a
/// random order and random basis changes of condition at most `max_cond`.
pub fn build(plan: &[OrbitPlan], max_cond: f64, rng: &mut ChaCha8Rng) -> (AlgebraShape, InvolutionSpec) {
    let nblocks: usize = plan
        .iter()
        .map(|o| if o.kind == BlockInvolutionType::SwapPair { 2 } else { 1 })
        .sum();
    let mut slots: Vec<usize> = (0..nblocks).collect();
    slots.shuffle(rng);
    let mut sizes = vec![0; nblocks];
    let mut next = 0;
    let mut orbits = Vec::new();
    for o in plan {
        let w = conditioned(o.size, max_cond, rng);
        match o.kind {
            BlockInvolutionType::SwapPair => {
                let (i, j) = (slots[next], slots[next + 1]);
                next += 2;
                sizes[i] = o.size;
                sizes[j] = o.size;
                orbits.push(OrbitSpec::Swap {
                    i,
                    j,
                    h: w.transpose(),
                    g: w,
                });
            }
            kind => {
                let b = slots[next];
                next += 1;
                sizes[b] = o.size;
                orbits.push(OrbitSpec::Fixed {
                    block: b,
                    u: congruent_form(kind, &w),
                });
            }
        }
    }
    (AlgebraShape::new(sizes).unwrap(), InvolutionSpec::Structured(orbits))
}
