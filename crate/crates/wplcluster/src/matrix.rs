//! Small dense integer matrices and exact rational inversion.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major integer matrix, serialized as `{"rows", "cols", "data"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![0; cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = 1;
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(data: Vec<Vec<i64>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix rows");
        IntMatrix { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i][j]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += a * other.data[k][j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self.data.iter().map(|row| dot(row, v)).collect())
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: i64) -> IntMatrix {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|x| c * x).collect())
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.data[i][j] == -self.data[j][i]))
    }

    /// Bilinear form `aᵗ M b`.
    pub fn bilinear(&self, a: &[i64], b: &[i64]) -> i64 {
        debug_assert_eq!(a.len(), self.rows);
        debug_assert_eq!(b.len(), self.cols);
        let mut s = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai != 0 {
                s += ai * dot(&self.data[i], b);
            }
        }
        s
    }

    /// Permutes rows and columns simultaneously: `out[i][j] = self[perm[i]][perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> IntMatrix {
        let n = perm.len();
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.data[i][j] = self.data[perm[i]][perm[j]];
            }
        }
        out
    }

    /// Exact inverse over the rationals, or `None` when singular.
    pub fn rational_inverse(&self) -> Option<Vec<Vec<Ratio<i128>>>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<Ratio<i128>>> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r: Vec<Ratio<i128>> = row
                    .iter()
                    .map(|&x| Ratio::from_integer(x as i128))
                    .collect();
                r.extend((0..n).map(|j| Ratio::from_integer((i == j) as i128)));
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r][col] != Ratio::from_integer(0))?;
            a.swap(col, pivot);
            let inv = Ratio::from_integer(1) / a[col][col];
            for x in a[col].iter_mut() {
                *x *= inv;
            }
            for r in 0..n {
                if r != col && a[r][col] != Ratio::from_integer(0) {
                    let f = a[r][col];
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
        Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Determinant by exact elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<Ratio<i128>>> = self
            .data
            .iter()
            .map(|r| r.iter().map(|&x| Ratio::from_integer(x as i128)).collect())
            .collect();
        let mut det = Ratio::from_integer(1i128);
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| a[r][col] != Ratio::from_integer(0)) else {
                return 0;
            };
            if pivot != col {
                a.swap(col, pivot);
                det = -det;
            }
            det *= a[col][col];
            for r in col + 1..n {
                let f = a[r][col] / a[col][col];
                if f != Ratio::from_integer(0) {
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
        debug_assert!(det.is_integer());
        det.to_integer()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scales a rational matrix by the least common multiple of its denominators.
/// Returns the integral matrix and the multiplier.
pub fn clear_denominators(m: &[Vec<Ratio<i128>>]) -> (IntMatrix, i64) {
    let lcm = m.iter().flatten().fold(1i128, |acc, x| acc.lcm(x.denom()));
    let data = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| (x * Ratio::from_integer(lcm)).to_integer() as i64)
                .collect()
        })
        .collect();
    (IntMatrix::from_rows(data), lcm as i64)
}

/// Exact integer inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let inv = m.rational_inverse().ok_or(Error::SingularMatrix)?;
    if inv.iter().flatten().any(|x| !x.is_integer()) {
        return Err(Error::SingularMatrix);
    }
    Ok(IntMatrix::from_rows(
        inv.iter()
            .map(|r| r.iter().map(|x| x.to_integer() as i64).collect())
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_kronecker_form() {
        let b = IntMatrix::from_rows(vec![vec![0, -2], vec![2, 0]]);
        let inv = b.rational_inverse().unwrap();
        assert_eq!(inv[0][1], Ratio::new(1, 2));
        assert_eq!(inv[1][0], Ratio::new(-1, 2));
        let (scaled, d) = clear_denominators(&inv);
        assert_eq!(d, 2);
        assert_eq!(scaled.data, vec![vec![0, 1], vec![-1, 0]]);
    }

    #[test]
    fn singular_has_no_inverse() {
        let b = IntMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert!(b.rational_inverse().is_none());
        assert_eq!(b.determinant(), 0);
    }

    #[test]
    fn determinant_and_product() {
        let a = IntMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(a.determinant(), 1);
        let inv = unimodular_inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), IntMatrix::identity(2));
    }
}
