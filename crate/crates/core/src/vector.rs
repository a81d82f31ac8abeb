//! Finite-dimensional real vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `R^n`, `1 <= n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("vector must have at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("vector coordinates must be finite"));
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector scaled by `scale`.
    pub fn axis(dim: usize, i: usize, scale: f64) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = scale;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: f64) -> Vector {
        Vector(self.0.iter().map(|a| k * a).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Vector, b: f64) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Vector(coords)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Vector::new(coords)
    }
}

pub(crate) fn check_dim(expected: usize, v: &Vector) -> Result<()> {
    if v.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.dim(),
        });
    }
    Ok(())
}
