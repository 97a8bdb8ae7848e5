//! Sparse integer matrices with arbitrary-precision entries.
//!
//! Storage is column-major: each column is a sorted list of `(row, value)`
//! pairs with no explicit zeros. Columns are the natural unit here because
//! differentials are built column by column (one column per basis element)
//! and all elimination routines stream columns.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type SparseCol = Vec<(usize, BigInt)>;

#[derive(Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseCol>,
}

impl std::fmt::Debug for SparseIntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SparseIntMatrix({}x{}, nnz={})", self.rows, self.cols, self.nnz())
    }
}

/// Add `c * col` into the accumulator `acc` (sorted sparse representation).
pub fn axpy(acc: &mut SparseCol, c: &BigInt, col: &[(usize, BigInt)]) {
    if c.is_zero() || col.is_empty() {
        return;
    }
    let mut out: SparseCol = Vec::with_capacity(acc.len() + col.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < acc.len() || j < col.len() {
        if j >= col.len() || (i < acc.len() && acc[i].0 < col[j].0) {
            out.push(acc[i].clone());
            i += 1;
        } else if i >= acc.len() || col[j].0 < acc[i].0 {
            out.push((col[j].0, c * &col[j].1));
            j += 1;
        } else {
            let v = &acc[i].1 + c * &col[j].1;
            if !v.is_zero() {
                out.push((acc[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    *acc = out;
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.data[i].push((i, BigInt::one()));
        }
        m
    }

    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut m = Self::new(rows, cols);
        for (r, c, v) in triplets {
            if !v.is_zero() {
                m.add_entry(r, c, v);
            }
        }
        for col in &mut m.data {
            col.sort_by_key(|e| e.0);
            // merge duplicates
            let mut out: SparseCol = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                if let Some(last) = out.last_mut() {
                    if last.0 == r {
                        last.1 += v;
                        continue;
                    }
                }
                out.push((r, v));
            }
            out.retain(|e| !e.1.is_zero());
            *col = out;
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut trip = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = entries[r * cols + c];
                if v != 0 {
                    trip.push((r, c, BigInt::from(v)));
                }
            }
        }
        Self::from_triplets(rows, cols, trip)
    }

    fn add_entry(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.data[c].push((r, v));
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    pub fn col(&self, j: usize) -> &SparseCol {
        &self.data[j]
    }

    pub fn set_col(&mut self, j: usize, col: SparseCol) {
        debug_assert!(col.iter().all(|e| e.0 < self.rows && !e.1.is_zero()));
        debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
        self.data[j] = col;
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.data[c].binary_search_by_key(&r, |e| e.0) {
            Ok(i) => self.data[c][i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        let col = &mut self.data[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(i) => {
                if v.is_zero() {
                    col.remove(i);
                } else {
                    col[i].1 = v;
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    col.insert(i, (r, v));
                }
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::new(self.cols, self.rows);
        for (c, col) in self.data.iter().enumerate() {
            for (r, v) in col {
                m.data[*r].push((c, v.clone()));
            }
        }
        for col in &mut m.data {
            col.sort_by_key(|e| e.0);
        }
        m
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut m = Self::new(self.rows, other.cols);
        for j in 0..other.cols {
            let mut acc: SparseCol = Vec::new();
            for (k, v) in &other.data[j] {
                axpy(&mut acc, v, &self.data[*k]);
            }
            m.data[j] = acc;
        }
        m
    }

    /// `self * v` for a sparse column vector.
    pub fn mul_col(&self, v: &[(usize, BigInt)]) -> SparseCol {
        let mut acc: SparseCol = Vec::new();
        for (k, c) in v {
            axpy(&mut acc, c, &self.data[*k]);
        }
        acc
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        let minus_one = -BigInt::one();
        for j in 0..self.cols {
            let mut col = std::mem::take(&mut m.data[j]);
            axpy(&mut col, &minus_one, &other.data[j]);
            m.data[j] = col;
        }
        m
    }

    pub fn neg(&self) -> Self {
        let mut m = self.clone();
        for col in &mut m.data {
            for e in col.iter_mut() {
                e.1 = -&e.1;
            }
        }
        m
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::new(self.rows, self.cols);
        }
        let mut m = self.clone();
        for col in &mut m.data {
            for e in col.iter_mut() {
                e.1 = c * &e.1;
            }
        }
        m
    }

    /// Entries as sorted triplets, deterministic order (col, then row).
    pub fn triplets(&self) -> Vec<(usize, usize, BigInt)> {
        let mut t = Vec::with_capacity(self.nnz());
        for (c, col) in self.data.iter().enumerate() {
            for (r, v) in col {
                t.push((*r, c, v.clone()));
            }
        }
        t
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.data
            .iter()
            .enumerate()
            .all(|(c, col)| col.iter().all(|(r, _)| *r == c))
    }

    /// Reduce entries mod m into a u64 column representation (values in [0, m)).
    pub fn to_mod(&self, m: u64) -> Vec<Vec<(usize, u64)>> {
        let mm = BigInt::from(m);
        self.data
            .iter()
            .map(|col| {
                col.iter()
                    .filter_map(|(r, v)| {
                        let mut w = v % &mm;
                        if w.is_negative() {
                            w += &mm;
                        }
                        let w: u64 = w.try_into().expect("reduced residue fits u64");
                        if w == 0 {
                            None
                        } else {
                            Some((*r, w))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// |det| for small square matrices, by Bareiss elimination. Test support.
    pub fn abs_det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
        for (c, col) in self.data.iter().enumerate() {
            for (r, v) in col {
                a[*r][c] = v.clone();
            }
        }
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let swapted = (k + 1..n).find(|&i| !a[i][k].is_zero());
                match swapted {
                    Some(i) => a.swap(k, i),
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
            for i in k + 1..n {
                a[i][k] = BigInt::zero();
            }
        }
        a[n - 1][n - 1].abs()
    }
}

/// Serde view: triplets carry decimal strings so arbitrary-precision values
/// round-trip bit-exactly through JSON.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    triplets: Vec<(usize, usize, String)>,
}

impl Serialize for SparseIntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            triplets: self
                .triplets()
                .into_iter()
                .map(|(r, c, v)| (r, c, v.to_string()))
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseIntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let mut trip = Vec::with_capacity(repr.triplets.len());
        for (r, c, v) in repr.triplets {
            let v: BigInt = v
                .parse()
                .map_err(|e| serde::de::Error::custom(format!("bad integer: {e}")))?;
            if r >= repr.rows || c >= repr.cols {
                return Err(serde::de::Error::custom("triplet index out of range"));
            }
            trip.push((r, c, v));
        }
        Ok(SparseIntMatrix::from_triplets(repr.rows, repr.cols, trip))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_transpose() {
        let a = SparseIntMatrix::from_dense(2, 3, &[1, 2, 0, 0, -1, 3]);
        let b = SparseIntMatrix::from_dense(3, 2, &[1, 0, 2, 1, 0, -1]);
        let c = a.mul(&b);
        assert_eq!(c.get(0, 0), BigInt::from(5));
        assert_eq!(c.get(0, 1), BigInt::from(2));
        assert_eq!(c.get(1, 0), BigInt::from(-2));
        assert_eq!(c.get(1, 1), BigInt::from(-4));
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn det_small() {
        let m = SparseIntMatrix::from_dense(2, 2, &[2, 4, 6, 8]);
        assert_eq!(m.abs_det(), BigInt::from(8));
    }
}
