//! Square nonnegative integer matrices used as transition matrices and
//! connecting operators.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry overflowed u64")]
    Overflow,
    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: i64 },
    #[error("matrix rows must all have length {expected}")]
    NotSquare { expected: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Dense square matrix of nonnegative integer counts, row-major.
///
/// Row and column `k` (zero-based) stand for the edge-color word whose
/// counting-function value is `k + 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TransferMatrix {
    dim: usize,
    data: Vec<u64>,
}

impl TransferMatrix {
    pub fn zeros(dim: usize) -> Self {
        TransferMatrix {
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self, MatrixError> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(MatrixError::NotSquare { expected: dim });
            }
            data.extend_from_slice(row);
        }
        Ok(TransferMatrix { dim, data })
    }

    /// Accepts signed input and rejects negative entries.
    pub fn from_signed_rows(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let mut unsigned = Vec::with_capacity(rows.len());
        for (row, values) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(values.len());
            for (col, &value) in values.iter().enumerate() {
                let entry = u64::try_from(value).map_err(|_| MatrixError::NegativeEntry {
                    row,
                    col,
                    value,
                })?;
                out.push(entry);
            }
            unsigned.push(out);
        }
        Self::from_rows(&unsigned)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Word length `w` when the dimension is `2^w`.
    pub fn width(&self) -> u32 {
        self.dim.trailing_zeros()
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data
            .chunks(self.dim.max(1))
            .map(<[u64]>::to_vec)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Sum of all entries, `|A|`.
    pub fn total(&self) -> u128 {
        self.data.iter().map(|&x| x as u128).sum()
    }

    fn check_dims(&self, other: &Self) -> Result<(), MatrixError> {
        if self.dim != other.dim {
            return Err(MatrixError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_add(*b).ok_or(MatrixError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(TransferMatrix {
            dim: self.dim,
            data,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dims(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.data[k * n + j];
                    if b == 0 {
                        continue;
                    }
                    let slot = &mut out.data[i * n + j];
                    *slot = a
                        .checked_mul(b)
                        .and_then(|p| slot.checked_add(p))
                        .ok_or(MatrixError::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other = [a_ij · other]`.
    pub fn checked_kron(&self, other: &Self) -> Result<Self, MatrixError> {
        let (n, p) = (self.dim, other.dim);
        let dim = n * p;
        let mut out = Self::zeros(dim);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == 0 {
                    continue;
                }
                for k in 0..p {
                    for l in 0..p {
                        let b = other.data[k * p + l];
                        if b != 0 {
                            out.data[(i * p + k) * dim + j * p + l] =
                                a.checked_mul(b).ok_or(MatrixError::Overflow)?;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entrywise `self <= other`.
    pub fn entrywise_le(&self, other: &Self) -> bool {
        self.dim == other.dim && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|&x| x as f64).collect()
    }
}

impl fmt::Debug for TransferMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TransferMatrix{:?}", self.rows())
    }
}

impl fmt::Display for TransferMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.dim {
            f.write_str("[")?;
            for j in 0..self.dim {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>width$}", self.get(i, j))?;
            }
            f.write_str("]")?;
            if i + 1 < self.dim {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> TransferMatrix {
        TransferMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn kron_matches_block_definition() {
        let a = m(&[&[1, 2], &[0, 3]]);
        let b = m(&[&[0, 1], &[1, 1]]);
        let k = a.checked_kron(&b).unwrap();
        assert_eq!(
            k.rows(),
            vec![
                vec![0, 1, 0, 2],
                vec![1, 1, 2, 2],
                vec![0, 0, 0, 3],
                vec![0, 0, 3, 3],
            ]
        );
    }

    #[test]
    fn multiplication_and_identity() {
        let a = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.checked_mul(&TransferMatrix::identity(2)).unwrap(), a);
        assert_eq!(a.checked_mul(&a).unwrap(), m(&[&[1, 2], &[0, 1]]));
    }

    #[test]
    fn overflow_is_reported() {
        let big = m(&[&[u64::MAX]]);
        assert_eq!(big.checked_add(&big), Err(MatrixError::Overflow));
        assert_eq!(big.checked_mul(&big), Err(MatrixError::Overflow));
    }

    #[test]
    fn negative_entries_rejected() {
        let err = TransferMatrix::from_signed_rows(&[vec![1, -1], vec![0, 1]]).unwrap_err();
        assert_eq!(
            err,
            MatrixError::NegativeEntry {
                row: 0,
                col: 1,
                value: -1
            }
        );
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(TransferMatrix::from_rows(&[vec![1, 2], vec![3]]).is_err());
    }
}
