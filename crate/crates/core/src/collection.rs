//! Finite collections of unit vectors in real or complex n-space.
//!
//! A [`UnitVectorCollection`] doubles as a discrete probability measure on the
//! sphere: every vector carries a weight and the weights sum to one.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `| ‖z‖ − 1 |` accepted without renormalization.
pub const UNIT_TOL: f64 = 1e-8;

/// Tolerance on `| Σ w − 1 |`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

/// Raw vector storage, one inner `Vec` per vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Vectors {
    Real(Vec<Vec<f64>>),
    Complex(Vec<Vec<Complex64>>),
}

impl Vectors {
    pub fn len(&self) -> usize {
        match self {
            Vectors::Real(v) => v.len(),
            Vectors::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn field(&self) -> Field {
        match self {
            Vectors::Real(_) => Field::Real,
            Vectors::Complex(_) => Field::Complex,
        }
    }

    fn dims(&self) -> Vec<usize> {
        match self {
            Vectors::Real(v) => v.iter().map(Vec::len).collect(),
            Vectors::Complex(v) => v.iter().map(Vec::len).collect(),
        }
    }

    fn norms(&self) -> Vec<f64> {
        match self {
            Vectors::Real(v) => v.iter().map(|x| norm(x)).collect(),
            Vectors::Complex(v) => v
                .iter()
                .map(|z| z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
                .collect(),
        }
    }

    fn all_finite(&self) -> bool {
        match self {
            Vectors::Real(v) => v.iter().flatten().all(|x| x.is_finite()),
            Vectors::Complex(v) => v
                .iter()
                .flatten()
                .all(|c| c.re.is_finite() && c.im.is_finite()),
        }
    }
}

/// Whether inputs that are off the unit sphere are rejected or rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    Strict,
    Renormalize,
}

/// `m ≥ 1` unit vectors of common dimension with a probability weight each.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVectorCollection {
    dim: usize,
    vectors: Vectors,
    weights: Vec<f64>,
}

impl UnitVectorCollection {
    /// Validates `vectors` and attaches `weights` (uniform when `None`).
    pub fn new(
        vectors: Vectors,
        weights: Option<Vec<f64>>,
        normalization: Normalization,
    ) -> Result<Self> {
        let m = vectors.len();
        if m == 0 {
            return Err(Error::invalid(
                "collection must contain at least one vector",
            ));
        }
        let dims = vectors.dims();
        let dim = dims[0];
        if dim == 0 {
            return Err(Error::invalid("vectors must have dimension at least 1"));
        }
        if let Some(i) = dims.iter().position(|&d| d != dim) {
            return Err(Error::Validation(format!(
                "vector {i} has dimension {}, expected {dim}",
                dims[i]
            )));
        }
        if !vectors.all_finite() {
            return Err(Error::Validation("non-finite vector entry".into()));
        }

        let norms = vectors.norms();
        let vectors = match normalization {
            Normalization::Strict => {
                if let Some((index, &norm)) = norms
                    .iter()
                    .enumerate()
                    .find(|(_, n)| (*n - 1.0).abs() > UNIT_TOL)
                {
                    return Err(Error::NotUnitNorm { index, norm });
                }
                vectors
            }
            Normalization::Renormalize => {
                if let Some(index) = norms.iter().position(|&n| n == 0.0) {
                    return Err(Error::Validation(format!(
                        "vector {index} is zero and cannot be renormalized"
                    )));
                }
                match vectors {
                    Vectors::Real(v) => Vectors::Real(
                        v.into_iter()
                            .zip(&norms)
                            .map(|(x, n)| x.into_iter().map(|c| c / n).collect())
                            .collect(),
                    ),
                    Vectors::Complex(v) => Vectors::Complex(
                        v.into_iter()
                            .zip(&norms)
                            .map(|(z, n)| z.into_iter().map(|c| c / *n).collect())
                            .collect(),
                    ),
                }
            }
        };

        let weights = match weights {
            None => vec![1.0 / m as f64; m],
            Some(w) => {
                validate_weights(&w, m)?;
                w
            }
        };
        Ok(Self {
            dim,
            vectors,
            weights,
        })
    }

    /// Uniformly weighted real collection; vectors must already be unit norm.
    pub fn real(vectors: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(Vectors::Real(vectors), None, Normalization::Strict)
    }

    /// Uniformly weighted complex collection; vectors must already be unit norm.
    pub fn complex(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::new(Vectors::Complex(vectors), None, Normalization::Strict)
    }

    /// The standard basis `e_1, …, e_n` of `R^n`, uniformly weighted.
    pub fn orthonormal_basis(n: usize) -> Result<Self> {
        let vectors = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        Self::real(vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors `m`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn field(&self) -> Field {
        self.vectors.field()
    }

    pub fn vectors(&self) -> &Vectors {
        &self.vectors
    }

    /// Real vectors, or `None` for a complex collection.
    pub fn real_vectors(&self) -> Option<&[Vec<f64>]> {
        match &self.vectors {
            Vectors::Real(v) => Some(v),
            Vectors::Complex(_) => None,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.len() as f64;
        self.weights.iter().all(|&w| w == u)
    }

    /// Pairwise inner products `⟨z_i, z_j⟩`.
    pub fn gram(&self) -> Gram {
        match &self.vectors {
            Vectors::Real(v) => {
                let m = v.len();
                let mut g = vec![0.0; m * m];
                for i in 0..m {
                    for j in i..m {
                        let d = dot(&v[i], &v[j]);
                        g[i * m + j] = d;
                        g[j * m + i] = d;
                    }
                }
                Gram::Real { m, entries: g }
            }
            Vectors::Complex(v) => {
                let m = v.len();
                let mut g = vec![Complex64::new(0.0, 0.0); m * m];
                for i in 0..m {
                    for j in i..m {
                        let d = cdot(&v[i], &v[j]);
                        g[i * m + j] = d;
                        g[j * m + i] = d.conj();
                    }
                }
                Gram::Complex { m, entries: g }
            }
        }
    }
}

fn validate_weights(w: &[f64], m: usize) -> Result<()> {
    if w.len() != m {
        return Err(Error::Validation(format!(
            "{} weights for {m} vectors",
            w.len()
        )));
    }
    if let Some(i) = w.iter().position(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::Validation(format!(
            "weight {i} is negative or non-finite"
        )));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::Validation(format!("weights sum to {s}, expected 1")));
    }
    Ok(())
}

/// Gram matrix, row-major.
#[derive(Debug, Clone)]
pub enum Gram {
    Real { m: usize, entries: Vec<f64> },
    Complex { m: usize, entries: Vec<Complex64> },
}

impl Gram {
    pub fn size(&self) -> usize {
        match self {
            Gram::Real { m, .. } | Gram::Complex { m, .. } => *m,
        }
    }

    /// `|⟨z_i, z_j⟩|`
    pub fn modulus(&self, i: usize, j: usize) -> f64 {
        match self {
            Gram::Real { m, entries } => entries[i * m + j].abs(),
            Gram::Complex { m, entries } => entries[i * m + j].norm(),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Hermitian inner product, linear in the first argument.
pub(crate) fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
