//! JSON documents. Complex numbers are `[re, im]`, matrices are arrays of
//! rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sgen_core::algebra::{AlgebraElement, AlgebraShape, InvolutionSpec, OrbitSpec};
use sgen_core::linalg::ComplexMatrix;

pub type MatrixRows = Vec<Vec<Complex64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub blocks: Vec<usize>,
    pub involution: InvolutionDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InvolutionDoc {
    Structured { orbits: Vec<OrbitDoc> },
    Dense { matrix: MatrixRows },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum OrbitDoc {
    Fixed {
        block: usize,
        u: MatrixRows,
    },
    Swap {
        i: usize,
        j: usize,
        g: MatrixRows,
        h: MatrixRows,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDocument {
    pub blocks: Vec<usize>,
    pub parts: Vec<MatrixRows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub tool_version: String,
    pub seed: u64,
    /// SHA-256 of the compact serialization of the algebra document.
    pub input_digest: String,
    pub element: ElementDocument,
    pub dims: Vec<usize>,
    pub final_dim: usize,
    pub total_dim: usize,
    pub invertibility_margin: f64,
    pub invertibility_threshold: f64,
    pub residuals: std::collections::BTreeMap<String, f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Generated,
    NotGenerated,
}

/// Either a bare element or a certificate carrying one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSource {
    Certificate(Box<CertificateDocument>),
    Element(ElementDocument),
}

impl ElementSource {
    pub fn element(&self) -> &ElementDocument {
        match self {
            ElementSource::Certificate(c) => &c.element,
            ElementSource::Element(e) => e,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocError(pub String);

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for DocError {}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, DocError> {
    serde_json::from_str(text).map_err(|e| {
        DocError(format!(
            "{what}: {e} (line {}, column {})",
            e.line(),
            e.column()
        ))
    })
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn matrix_from_rows(rows: &MatrixRows, what: &str) -> Result<ComplexMatrix, DocError> {
    ComplexMatrix::from_rows(rows).map_err(|e| DocError(format!("{what}: {e}")))
}

pub fn matrix_to_rows(m: &ComplexMatrix) -> MatrixRows {
    m.to_rows()
}

impl AlgebraDocument {
    pub fn shape(&self) -> Result<AlgebraShape, DocError> {
        AlgebraShape::new(self.blocks.clone()).map_err(|e| DocError(format!("blocks: {e}")))
    }

    pub fn spec(&self) -> Result<InvolutionSpec, DocError> {
        match &self.involution {
            InvolutionDoc::Dense { matrix } => {
                Ok(InvolutionSpec::Dense(matrix_from_rows(matrix, "involution.matrix")?))
            }
            InvolutionDoc::Structured { orbits } => orbits
                .iter()
                .enumerate()
                .map(|(k, o)| {
                    Ok(match o {
                        OrbitDoc::Fixed { block, u } => OrbitSpec::Fixed {
                            block: *block,
                            u: matrix_from_rows(u, &format!("involution.orbits[{k}].fixed.u"))?,
                        },
                        OrbitDoc::Swap { i, j, g, h } => OrbitSpec::Swap {
                            i: *i,
                            j: *j,
                            g: matrix_from_rows(g, &format!("involution.orbits[{k}].swap.g"))?,
                            h: matrix_from_rows(h, &format!("involution.orbits[{k}].swap.h"))?,
                        },
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(InvolutionSpec::Structured),
        }
    }

    pub fn from_spec(shape: &AlgebraShape, spec: &InvolutionSpec) -> Self {
        let involution = match spec {
            InvolutionSpec::Dense(m) => InvolutionDoc::Dense {
                matrix: matrix_to_rows(m),
            },
            InvolutionSpec::Structured(orbits) => InvolutionDoc::Structured {
                orbits: orbits
                    .iter()
                    .map(|o| match o {
                        OrbitSpec::Fixed { block, u } => OrbitDoc::Fixed {
                            block: *block,
                            u: matrix_to_rows(u),
                        },
                        OrbitSpec::Swap { i, j, g, h } => OrbitDoc::Swap {
                            i: *i,
                            j: *j,
                            g: matrix_to_rows(g),
                            h: matrix_to_rows(h),
                        },
                    })
                    .collect(),
            },
        };
        Self {
            name: None,
            seed: None,
            blocks: shape.blocks().to_vec(),
            involution,
        }
    }

    /// Hex SHA-256 of the compact JSON serialization.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("documents serialize");
        hex::encode(Sha256::digest(&bytes))
    }
}

impl ElementDocument {
    pub fn from_element(a: &AlgebraElement) -> Self {
        Self {
            blocks: a.shape().blocks().to_vec(),
            parts: a.parts().iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn to_element(&self) -> Result<AlgebraElement, DocError> {
        let shape =
            AlgebraShape::new(self.blocks.clone()).map_err(|e| DocError(format!("element blocks: {e}")))?;
        let parts = self
            .parts
            .iter()
            .enumerate()
            .map(|(k, p)| matrix_from_rows(p, &format!("element.parts[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        AlgebraElement::from_parts(&shape, parts).map_err(|e| DocError(format!("element: {e}")))
    }
}
