use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Quadratic form `||x||_N^2 = <x, N^{-1} x>` for a symmetric positive
/// definite `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticNorm {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    determinant: f64,
    diagonal: bool,
}

impl QuadraticNorm {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || matrix.ncols() != d {
            return Err(Error::InvalidNorm(format!("matrix must be square and nonempty, got {}x{}", d, matrix.ncols())));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidNorm("matrix has non-finite entries".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidNorm(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let chol = matrix
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidNorm("matrix is not positive definite".into()))?;
        let determinant = chol.l().diagonal().iter().map(|x| x * x).product();
        let inverse = chol.inverse();
        let diagonal = (0..d).all(|i| (0..d).all(|j| i == j || matrix[(i, j)] == 0.0));
        Ok(Self {
            matrix,
            inverse,
            determinant,
            diagonal,
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    /// Rows separated by `;`, entries by `,`: `"2,0;0,0.5"`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(d) = t.strip_prefix("identity:").or_else(|| t.strip_prefix("I:")) {
            let d: usize = d
                .trim()
                .parse()
                .map_err(|_| Error::InvalidNorm(format!("bad dimension in {text:?}")))?;
            return Self::identity(d);
        }
        let rows: Vec<Vec<f64>> = t
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidNorm(format!("bad entry {x:?} in {text:?}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidNorm(format!("{text:?} is not a square matrix")));
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn determinant(&self) -> f64 {
        self.determinant
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    /// `<x, N^{-1} x>`.
    pub fn quad(&self, x: &[i64]) -> f64 {
        let d = self.dim();
        let mut s = 0.0;
        for i in 0..d {
            let xi = x[i] as f64;
            s += self.inverse[(i, i)] * xi * xi;
            for (j, &xj) in x.iter().enumerate().take(i) {
                s += 2.0 * self.inverse[(i, j)] * xi * xj as f64;
            }
        }
        s
    }

    pub fn norm(&self, x: &[i64]) -> f64 {
        self.quad(x).sqrt()
    }

    /// Largest `|x_i|` on the ellipsoid `<x, N^{-1} x> <= r^2`, which is
    /// `r sqrt(N_ii)`.
    pub fn coordinate_extent(&self, i: usize, r: f64) -> f64 {
        r * self.matrix[(i, i)].sqrt()
    }
}

#[derive(Serialize, Deserialize)]
struct NormRepr {
    matrix: Vec<Vec<f64>>,
}

impl Serialize for QuadraticNorm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        NormRepr {
            matrix: (0..d).map(|i| (0..d).map(|j| self.matrix[(i, j)]).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticNorm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = NormRepr::deserialize(d)?;
        let n = repr.matrix.len();
        if repr.matrix.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("norm matrix is not square"));
        }
        QuadraticNorm::new(DMatrix::from_fn(n, n, |i, j| repr.matrix[i][j])).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_parse() {
        let n = QuadraticNorm::parse("1,0;0,1").unwrap();
        assert_eq!(n, QuadraticNorm::identity(2).unwrap());
        assert!(n.is_diagonal());
        assert_eq!(n.determinant(), 1.0);
        assert_eq!(n.quad(&[3, 4]), 25.0);
        assert_eq!(QuadraticNorm::parse("identity:4").unwrap().dim(), 4);
    }

    #[test]
    fn general_matrix() {
        let n = QuadraticNorm::parse("2,1;1,1").unwrap();
        assert!(!n.is_diagonal());
        assert!((n.determinant() - 1.0).abs() < 1e-14);
        // N^{-1} = [[1,-1],[-1,2]]
        assert!((n.quad(&[1, 0]) - 1.0).abs() < 1e-14);
        assert!((n.quad(&[1, 1]) - 1.0).abs() < 1e-14);
        assert!((n.quad(&[0, 1]) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(QuadraticNorm::parse("1,2;0,1").is_err());
        assert!(QuadraticNorm::parse("1,2;2,1").is_err());
        assert!(QuadraticNorm::parse("1,0").is_err());
        assert!(QuadraticNorm::parse("1,x;0,1").is_err());
    }

    #[test]
    fn serde_round_trip() {
        let n = QuadraticNorm::parse("2,1;1,3").unwrap();
        let s = serde_json::to_string(&n).unwrap();
        let back: QuadraticNorm = serde_json::from_str(&s).unwrap();
        assert_eq!(back.matrix(), n.matrix());
    }
}
