//! Small dense matrices over exact rationals.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// Square or rectangular row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QMatrix(#[serde(with = "crate::rational::matrix")] pub Vec<Vec<Q>>);

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix(vec![vec![Q::zero(); n]; n])
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMatrix(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_square(&self) -> bool {
        self.0.iter().all(|r| r.len() == self.0.len())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        self.is_square() && (0..n).all(|i| (0..i).all(|j| self.0[i][j] == self.0[j][i]))
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        self.0
            .iter()
            .map(|row| {
                if row.len() != v.len() {
                    return Err(Error::DimensionMismatch { expected: row.len(), found: v.len() });
                }
                Ok(row.iter().zip(v).map(|(a, b)| a * b).sum())
            })
            .collect()
    }

    /// Principal submatrix on the given index set.
    pub fn submatrix(&self, idx: &[usize]) -> QMatrix {
        QMatrix(idx.iter().map(|&i| idx.iter().map(|&j| self.0[i][j].clone()).collect()).collect())
    }

    /// Leading principal minors `m_1, ..., m_n`, by exact elimination without
    /// row exchanges. Once a pivot vanishes the remaining minors are computed
    /// from scratch.
    pub fn leading_minors(&self) -> Vec<Q> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n);
        let mut a = self.0.clone();
        let mut det = q(1);
        for k in 0..n {
            if a[k][k].is_zero() {
                // Fallback for the remaining sizes.
                for m in k..n {
                    let idx: Vec<usize> = (0..=m).collect();
                    out.push(self.submatrix(&idx).determinant());
                }
                return out;
            }
            det *= &a[k][k];
            out.push(det.clone());
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &a[k][k];
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
        out
    }

    pub fn determinant(&self) -> Q {
        let n = self.dim();
        let mut a = self.0.clone();
        let mut det = q(1);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Q::zero();
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det *= &a[k][k];
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &a[k][k];
                for j in k..n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
        det
    }

    /// Exact solution of `self * x = rhs` by Gaussian elimination with
    /// partial (first non-zero) pivoting.
    pub fn solve(&self, rhs: &[Q]) -> Result<Vec<Q>> {
        let n = self.dim();
        if !self.is_square() {
            return Err(Error::InvalidInput("solve needs a square matrix".into()));
        }
        if rhs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rhs.len() });
        }
        let mut a: Vec<Vec<Q>> = self
            .0
            .iter()
            .zip(rhs)
            .map(|(row, b)| {
                let mut r = row.clone();
                r.push(b.clone());
                r
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::Singular)?;
            a.swap(p, k);
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &a[k][k];
                for j in k..=n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
        Ok((0..n).map(|i| &a[i][n] / &a[i][i]).collect())
    }
}

/// Negative definiteness by Sylvester's criterion: the k-th leading principal
/// minor must have sign `(-1)^k`.
pub fn is_negative_definite(gram: &QMatrix) -> Result<bool> {
    if !gram.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(gram
        .leading_minors()
        .iter()
        .enumerate()
        .all(|(k, m)| if k % 2 == 0 { m.is_negative() } else { m.is_positive() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn negative_definite_examples() {
        assert!(is_negative_definite(&QMatrix::from_i64(&[&[-2]])).unwrap());
        assert!(is_negative_definite(&QMatrix::from_i64(&[&[-2, 1], &[1, -2]])).unwrap());
        assert!(!is_negative_definite(&QMatrix::from_i64(&[&[0]])).unwrap());
        assert!(!is_negative_definite(&QMatrix::from_i64(&[&[-1, 1], &[1, -1]])).unwrap());
        assert_eq!(
            is_negative_definite(&QMatrix::from_i64(&[&[-2, 1], &[0, -2]])),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn minors_of_a2() {
        let m = QMatrix::from_i64(&[&[-2, 1], &[1, -2]]);
        assert_eq!(m.leading_minors(), vec![q(-2), q(3)]);
    }

    #[test]
    fn minors_with_zero_pivot() {
        let m = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.leading_minors(), vec![q(0), q(-1)]);
    }

    #[test]
    fn solve_small() {
        let m = QMatrix::from_i64(&[&[-2, 1], &[1, -2]]);
        assert_eq!(m.solve(&[q(-1), q(0)]).unwrap(), vec![qf(2, 3), qf(1, 3)]);
        let s = QMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(s.solve(&[q(1), q(1)]), Err(Error::Singular));
    }
}
