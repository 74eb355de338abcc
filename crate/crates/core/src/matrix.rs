//! Dense matrices: integer matrices for crossing data and residue matrices
//! over a fixed Z/p^r.

use crate::error::{Error, Result};
use crate::ring::RingParams;

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        Ok(IntMatrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy with row `i` and column `j` deleted.
    pub fn minor(&self, i: usize, j: usize) -> IntMatrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in 0..self.rows {
            if r == i {
                continue;
            }
            for c in 0..self.cols {
                if c == j {
                    continue;
                }
                data.push(self.get(r, c));
            }
        }
        IntMatrix { rows: self.rows - 1, cols: self.cols - 1, data }
    }
}

/// Row-major matrix over Z/p^r with canonical residue entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixZpr {
    ring: RingParams,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl MatrixZpr {
    pub fn zero(ring: RingParams, rows: usize, cols: usize) -> Self {
        MatrixZpr { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: RingParams, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(ring: RingParams, rows: Vec<Vec<u64>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        let data = rows.into_iter().flatten().map(|x| ring.reduce_u64(x)).collect();
        Ok(MatrixZpr { ring, rows: nrows, cols: ncols, data })
    }

    /// Reduce an integer matrix into Z/p^r.
    pub fn from_int(ring: RingParams, m: &IntMatrix) -> Self {
        MatrixZpr {
            ring,
            rows: m.rows(),
            cols: m.cols(),
            data: m.data.iter().map(|&x| ring.reduce_i64(x)).collect(),
        }
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.ring.reduce_u64(v);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Entry-wise projection to Z/p^s for s <= r.
    pub fn project(&self, target: RingParams) -> Result<MatrixZpr> {
        if target.p() != self.ring.p() || target.r() > self.ring.r() {
            return Err(Error::InvalidRing(
                "projection target must share p with a smaller exponent".into(),
            ));
        }
        Ok(MatrixZpr {
            ring: target,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| target.reduce_u64(x)).collect(),
        })
    }

    pub fn transpose(&self) -> MatrixZpr {
        let mut out = MatrixZpr::zero(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, other: &MatrixZpr) -> Result<MatrixZpr> {
        if self.cols != other.rows || self.ring != other.ring {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self.ring;
        let mut out = MatrixZpr::zero(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let t = ring.mul(a, other.get(k, j));
                    let cur = out.get(i, j);
                    out.set(i, j, ring.add(cur, t));
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MatrixZpr) -> Result<MatrixZpr> {
        if self.rows != other.rows || self.cols != other.cols || self.ring != other.ring {
            return Err(Error::DimensionMismatch("shape mismatch in subtraction".into()));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&other.data) {
            *o = self.ring.sub(*o, b);
        }
        Ok(out)
    }

    /// Matrix power by repeated squaring; exponent 0 gives the identity.
    pub fn pow(&self, mut e: u64) -> Result<MatrixZpr> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("pow needs a square matrix".into()));
        }
        let mut acc = MatrixZpr::identity(self.ring, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn apply_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix with {} columns applied to vector of length {}",
                self.cols,
                v.len()
            )));
        }
        let ring = self.ring;
        let mut out = vec![0u64; self.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (j, &x) in v.iter().enumerate() {
                acc = ring.add(acc, ring.mul(self.get(i, j), x));
            }
            *slot = acc;
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, r: u32) -> RingParams {
        RingParams::new(p, r).unwrap()
    }

    #[test]
    fn mul_and_pow() {
        let r = ring(2, 2);
        let t = MatrixZpr::from_rows(r, vec![vec![0, 1], vec![3, 1]]).unwrap(); // companion of t^2 - t + 1 mod 4
        let t3 = t.pow(3).unwrap();
        // T^3 = -E for this companion matrix
        let neg_e = MatrixZpr::from_rows(r, vec![vec![3, 0], vec![0, 3]]).unwrap();
        assert_eq!(t3, neg_e);
        assert!(t.pow(6).unwrap().is_identity());
        assert!(t.pow(0).unwrap().is_identity());
    }

    #[test]
    fn from_int_reduces_negatives() {
        let r = ring(3, 2);
        let m = IntMatrix::from_rows(vec![vec![-1, 10], vec![0, -9]]).unwrap();
        let mz = MatrixZpr::from_int(r, &m);
        assert_eq!(mz.row(0), &[8, 1]);
        assert_eq!(mz.row(1), &[0, 0]);
    }

    #[test]
    fn apply_and_project() {
        let r4 = ring(2, 2);
        let m = MatrixZpr::from_rows(r4, vec![vec![1, 2], vec![3, 0]]).unwrap();
        assert_eq!(m.apply_vec(&[1, 1]).unwrap(), vec![3, 3]);
        let r2 = r4.restrict(1).unwrap();
        let m2 = m.project(r2).unwrap();
        assert_eq!(m2.row(0), &[1, 0]);
        assert_eq!(m2.row(1), &[1, 0]);
    }

    #[test]
    fn minor_deletes_row_and_column() {
        let m = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).unwrap();
        let sub = m.minor(0, 0);
        assert_eq!(sub.row(0), &[5, 6]);
        assert_eq!(sub.row(1), &[8, 9]);
    }
}
