use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AlgebraError;
use crate::linalg::ComplexMatrix;

/// Wedderburn block shape `M_{d_1} ⊕ … ⊕ M_{d_r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraShape {
    blocks: Vec<usize>,
}

impl AlgebraShape {
    pub fn new(blocks: Vec<usize>) -> Result<Self, AlgebraError> {
        if blocks.is_empty() {
            return Err(AlgebraError::EmptyShape);
        }
        if let Some(i) = blocks.iter().position(|&d| d == 0) {
            return Err(AlgebraError::ZeroBlock(i));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self, i: usize) -> usize {
        self.blocks[i]
    }

    /// `Σ d_i²`
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|d| d * d).sum()
    }

    /// Start of block `i` in the flat (block-concatenated, row-major)
    /// vectorization.
    pub fn offset(&self, i: usize) -> usize {
        self.blocks[..i].iter().map(|d| d * d).sum()
    }

    /// Sub-shape made of the listed blocks, in the listed order.
    pub fn restrict(&self, blocks: &[usize]) -> Result<Self, AlgebraError> {
        Self::new(blocks.iter().map(|&b| self.blocks[b]).collect())
    }
}

/// Element of a block algebra: one square matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    parts: Vec<ComplexMatrix>,
}

impl AlgebraElement {
    pub fn from_parts(shape: &AlgebraShape, parts: Vec<ComplexMatrix>) -> Result<Self, AlgebraError> {
        let element = Self { parts };
        element.check_shape(shape)?;
        Ok(element)
    }

    pub fn zeros(shape: &AlgebraShape) -> Self {
        Self {
            parts: shape.blocks.iter().map(|&d| ComplexMatrix::zeros(d)).collect(),
        }
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Self {
            parts: shape.blocks.iter().map(|&d| ComplexMatrix::identity(d)).collect(),
        }
    }

    /// Minimal central projection of block `i`.
    pub fn central_projection(shape: &AlgebraShape, i: usize) -> Self {
        let mut e = Self::zeros(shape);
        e.parts[i] = ComplexMatrix::identity(shape.blocks[i]);
        e
    }

    /// Element supported on block `i` only.
    pub fn embed(shape: &AlgebraShape, i: usize, x: ComplexMatrix) -> Result<Self, AlgebraError> {
        if x.size() != shape.blocks[i] {
            return Err(AlgebraError::ShapeMismatch);
        }
        let mut e = Self::zeros(shape);
        e.parts[i] = x;
        Ok(e)
    }

    /// Independent standard complex Gaussian entries, block by block, from
    /// a ChaCha8 stream seeded with `seed`.
    pub fn random(shape: &AlgebraShape, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            parts: shape
                .blocks
                .iter()
                .map(|&d| ComplexMatrix::random_gaussian(d, &mut rng))
                .collect(),
        }
    }

    pub fn shape(&self) -> AlgebraShape {
        AlgebraShape {
            blocks: self.parts.iter().map(|p| p.size()).collect(),
        }
    }

    pub fn check_shape(&self, shape: &AlgebraShape) -> Result<(), AlgebraError> {
        if self.parts.len() != shape.blocks.len()
            || self.parts.iter().zip(&shape.blocks).any(|(p, &d)| p.size() != d)
        {
            return Err(AlgebraError::ShapeMismatch);
        }
        Ok(())
    }

    pub fn parts(&self) -> &[ComplexMatrix] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &ComplexMatrix {
        &self.parts[i]
    }

    pub fn part_mut(&mut self, i: usize) -> &mut ComplexMatrix {
        &mut self.parts[i]
    }

    pub fn into_parts(self) -> Vec<ComplexMatrix> {
        self.parts
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Self, AlgebraError> {
        other.check_shape(&self.shape())?;
        Ok(Self {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip_with(other, |a, b| a.matmul(b))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            parts: self.parts.iter().map(|p| p.scale(s)).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.parts
            .iter()
            .map(|p| p.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    pub fn distance(&self, other: &Self) -> Result<f64, AlgebraError> {
        Ok(self.sub(other)?.norm())
    }

    /// Block-concatenated row-major vectorization.
    pub fn to_flat(&self) -> Vec<Complex64> {
        self.parts
            .iter()
            .flat_map(|p| p.as_slice().iter().copied())
            .collect()
    }

    pub fn from_flat(shape: &AlgebraShape, flat: &[Complex64]) -> Result<Self, AlgebraError> {
        if flat.len() != shape.total_dim() {
            return Err(AlgebraError::ShapeMismatch);
        }
        let mut parts = Vec::with_capacity(shape.num_blocks());
        let mut at = 0;
        for &d in &shape.blocks {
            let chunk = flat[at..at + d * d].to_vec();
            parts.push(ComplexMatrix::from_row_major(d, chunk)?);
            at += d * d;
        }
        Ok(Self { parts })
    }

    /// The element as one block-diagonal matrix.
    pub fn block_diagonal(&self) -> ComplexMatrix {
        let n: usize = self.parts.iter().map(|p| p.size()).sum();
        let mut m = ComplexMatrix::zeros(n);
        let mut at = 0;
        for p in &self.parts {
            let d = p.size();
            for i in 0..d {
                for j in 0..d {
                    m[(at + i, at + j)] = p[(i, j)];
                }
            }
            at += d;
        }
        m
    }
}
