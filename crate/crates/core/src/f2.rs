//! Dense bit-packed matrices over F2.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A row-major matrix over F2 with rows packed into `u64` words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

fn words_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = words_for(cols);
        F2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. Panics on ragged input; use
    /// [`F2Matrix::try_from_rows`] for untrusted data.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        Self::try_from_rows(rows).expect("ragged matrix")
    }

    pub fn try_from_rows(rows: &[Vec<u8>]) -> Result<Self, F2Error> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(F2Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            for (j, &v) in r.iter().enumerate() {
                if v & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] ^= 1 << (j % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for k in 0..self.words {
            let v = self.data[src * self.words + k];
            self.data[dst * self.words + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.data.swap(a * self.words + k, b * self.words + k);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.cols != other.rows {
            return Err(F2Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for w in 0..out.words {
                        out.data[i * out.words + w] ^= other.data[k * other.words + w];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(F2Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// `M v` for a 0/1 vector `v`.
    pub fn apply(&self, v: &[bool]) -> Result<Vec<bool>, F2Error> {
        if v.len() != self.cols {
            return Err(F2Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).filter(|&j| v[j] && self.get(i, j)).count() % 2 == 1)
            .collect())
    }

    pub fn column(&self, j: usize) -> Vec<bool> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// In-place row echelon form; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(p, r);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    /// Whether `v` lies in the column space.
    pub fn column_space_contains(&self, v: &[bool]) -> Result<bool, F2Error> {
        if v.len() != self.rows {
            return Err(F2Error::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    aug.set(i, j, true);
                }
            }
            if v[i] {
                aug.set(i, self.cols, true);
            }
        }
        Ok(aug.rank() == self.rank())
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|&w| w == 0)
    }
}

impl Serialize for F2Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for F2Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<u8>>::deserialize(d)?;
        if rows.iter().flatten().any(|&v| v > 1) {
            return Err(serde::de::Error::custom("matrix entries must be 0 or 1"));
        }
        F2Matrix::try_from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let m = F2Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(F2Matrix::identity(70).rank(), 70);
        assert_eq!(F2Matrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn column_space() {
        let m = F2Matrix::from_rows(&[vec![1, 0], vec![1, 0], vec![0, 1]]);
        assert!(m.column_space_contains(&[true, true, true]).unwrap());
        assert!(!m.column_space_contains(&[true, false, false]).unwrap());
        assert!(m.column_space_contains(&[true]).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = F2Matrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq, F2Matrix::identity(2));
        assert_eq!(a.transpose().to_rows(), vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn serde_round_trip() {
        let m = F2Matrix::from_rows(&[vec![0, 1], vec![1, 1]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[0,1],[1,1]]");
        let back: F2Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<F2Matrix>("[[2]]").is_err());
    }
}
