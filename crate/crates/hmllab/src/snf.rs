//! Smith normal form over the integers, behind a small backend registry.
//!
//! Two interchangeable elimination kernels live here: a dense fraction-free
//! routine for small matrices and a sparse min-norm-pivot routine for large
//! ones. Both produce `D = U * M * V` with `U`, `V` unimodular and the
//! diagonal of `D` in invariant-factor order. The registry lets the CLI (or
//! a caller) select a kernel by name; `auto` picks dense below 500x500 and
//! sparse above, which is where entry blow-up starts to dominate.
//!
//! `ZColEchelon` is a separate streaming structure for tall matrices where
//! only the column lattice (image, rank, membership) is needed and the `U`
//! transform would be prohibitively large.

use std::collections::BTreeMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Euclid, One, Signed, Zero};

use crate::matrix::{axpy, SparseCol, SparseIntMatrix};

pub struct SnfResult {
    /// Diagonal matrix with d1 | d2 | ..., same shape as the input.
    pub d: SparseIntMatrix,
    pub u: Option<SparseIntMatrix>,
    pub v: Option<SparseIntMatrix>,
    pub rank: usize,
}

impl SnfResult {
    pub fn invariants(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            out.push(self.d.get(i, i));
        }
        out
    }
}

pub trait SnfBackend: Send + Sync {
    fn name(&self) -> &'static str;
    fn snf(&self, m: &SparseIntMatrix, with_u: bool, with_v: bool) -> SnfResult;
}

/// Dense fraction-free elimination. Entries are kept exact; pivoting is on
/// the minimal-norm entry of the trailing submatrix.
pub struct DenseFractionFree;

/// Sparse elimination with the same pivot rule, on column maps plus a row
/// occupancy index.
pub struct SparseMinNorm;

static BACKENDS: &[&dyn SnfBackend] = &[&DenseFractionFree, &SparseMinNorm];
static DEFAULT_OVERRIDE: RwLock<Option<&'static str>> = RwLock::new(None);

pub fn snf_backends() -> &'static [&'static dyn SnfBackend] {
    BACKENDS
}

pub fn snf_backend(name: &str) -> Option<&'static dyn SnfBackend> {
    BACKENDS.iter().copied().find(|b| b.name() == name)
}

/// Set the process-wide backend ("dense", "sparse"); `None`/"auto" restores
/// the size heuristic.
pub fn set_default_snf_backend(name: Option<&str>) -> bool {
    let resolved = match name {
        None | Some("auto") => None,
        Some(n) => match snf_backend(n) {
            Some(b) => Some(b.name()),
            None => return false,
        },
    };
    *DEFAULT_OVERRIDE.write().unwrap() = resolved;
    true
}

const DENSE_LIMIT: usize = 500;

fn pick_backend(rows: usize, cols: usize) -> &'static dyn SnfBackend {
    if let Some(name) = *DEFAULT_OVERRIDE.read().unwrap() {
        return snf_backend(name).unwrap();
    }
    if rows < DENSE_LIMIT && cols < DENSE_LIMIT {
        &DenseFractionFree
    } else {
        &SparseMinNorm
    }
}

/// SNF through the registry default.
pub fn snf(m: &SparseIntMatrix, with_u: bool, with_v: bool) -> SnfResult {
    pick_backend(m.rows(), m.cols()).snf(m, with_u, with_v)
}

// ---------------------------------------------------------------------------
// dense backend

struct Dense {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    rows: usize,
    cols: usize,
}

impl Dense {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }
    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let d = q * &self.a[t][j];
            if !d.is_zero() {
                self.a[i][j] -= d;
            }
        }
        if let Some(u) = &mut self.u {
            for j in 0..u[0].len() {
                let d = q * &u[t][j];
                if !d.is_zero() {
                    u[i][j] -= d;
                }
            }
        }
    }
    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.a {
            let d = q * &row[t];
            if !d.is_zero() {
                row[j] -= d;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                let d = q * &row[t];
                if !d.is_zero() {
                    row[j] -= d;
                }
            }
        }
    }
    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -std::mem::take(x);
            }
        }
    }
}

impl SnfBackend for DenseFractionFree {
    fn name(&self) -> &'static str {
        "dense"
    }

    fn snf(&self, m: &SparseIntMatrix, with_u: bool, with_v: bool) -> SnfResult {
        let (rows, cols) = (m.rows(), m.cols());
        let mut st = Dense {
            a: vec![vec![BigInt::zero(); cols]; rows],
            u: with_u.then(|| {
                (0..rows)
                    .map(|i| {
                        let mut r = vec![BigInt::zero(); rows];
                        r[i] = BigInt::one();
                        r
                    })
                    .collect()
            }),
            v: with_v.then(|| {
                (0..cols)
                    .map(|i| {
                        let mut r = vec![BigInt::zero(); cols];
                        r[i] = BigInt::one();
                        r
                    })
                    .collect()
            }),
            rows,
            cols,
        };
        for (r, c, val) in m.triplets() {
            st.a[r][c] = val;
        }

        let mut t = 0usize;
        'pivot: while t < rows.min(cols) {
            // minimal |entry| in trailing submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !st.a[i][j].is_zero()
                        && best
                            .map(|(bi, bj)| st.a[i][j].abs() < st.a[bi][bj].abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);

            loop {
                // clear pivot column
                let mut dirty = false;
                for i in t + 1..rows {
                    if st.a[i][t].is_zero() {
                        continue;
                    }
                    let q = st.a[i][t].div_euclid(&st.a[t][t]);
                    st.row_sub(i, t, &q);
                    if !st.a[i][t].is_zero() {
                        // remainder strictly smaller than pivot; promote it
                        st.swap_rows(t, i);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                // clear pivot row
                for j in t + 1..cols {
                    if st.a[t][j].is_zero() {
                        continue;
                    }
                    let q = st.a[t][j].div_euclid(&st.a[t][t]);
                    st.col_sub(j, t, &q);
                    if !st.a[t][j].is_zero() {
                        st.swap_cols(t, j);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                // pivot must divide the rest of the submatrix
                let p = st.a[t][t].clone();
                let mut bad: Option<usize> = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&st.a[i][j] % &p).is_zero() {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        let minus_one = -BigInt::one();
                        st.row_sub(t, i, &minus_one); // row_t += row_i
                    }
                    None => break,
                }
            }
            if st.a[t][t].is_negative() {
                st.negate_row(t);
            }
            t += 1;
            if t >= rows.min(cols) {
                break 'pivot;
            }
        }

        let rank = t;
        let mut d = SparseIntMatrix::new(rows, cols);
        for i in 0..rank {
            d.set(i, i, st.a[i][i].clone());
        }
        let pack = |dense: Vec<Vec<BigInt>>, r: usize, c: usize| {
            let mut trip = Vec::new();
            for (i, row) in dense.into_iter().enumerate() {
                for (j, v) in row.into_iter().enumerate() {
                    if !v.is_zero() {
                        trip.push((i, j, v));
                    }
                }
            }
            SparseIntMatrix::from_triplets(r, c, trip)
        };
        SnfResult {
            d,
            u: st.u.map(|u| pack(u, rows, rows)),
            v: st.v.map(|v| pack(v, cols, cols)),
            rank,
        }
    }
}

// ---------------------------------------------------------------------------
// sparse backend

struct Sparse {
    cols: Vec<BTreeMap<usize, BigInt>>,
    rows_idx: Vec<BTreeMap<usize, ()>>,
    u: Option<Vec<BTreeMap<usize, BigInt>>>, // row-major rows of U
    v: Option<Vec<BTreeMap<usize, BigInt>>>, // col-major cols of V
}

impl Sparse {
    fn set(&mut self, r: usize, c: usize, val: BigInt) {
        if val.is_zero() {
            if self.cols[c].remove(&r).is_some() {
                self.rows_idx[r].remove(&c);
            }
        } else {
            self.cols[c].insert(r, val);
            self.rows_idx[r].insert(c, ());
        }
    }
    fn get(&self, r: usize, c: usize) -> BigInt {
        self.cols[c].get(&r).cloned().unwrap_or_else(BigInt::zero)
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols_a: Vec<usize> = self.rows_idx[a].keys().cloned().collect();
        let cols_b: Vec<usize> = self.rows_idx[b].keys().cloned().collect();
        let mut touched: Vec<usize> = cols_a;
        touched.extend(cols_b);
        touched.sort_unstable();
        touched.dedup();
        for c in touched {
            let va = self.cols[c].remove(&a);
            let vb = self.cols[c].remove(&b);
            self.rows_idx[a].remove(&c);
            self.rows_idx[b].remove(&c);
            if let Some(v) = va {
                self.cols[c].insert(b, v);
                self.rows_idx[b].insert(c, ());
            }
            if let Some(v) = vb {
                self.cols[c].insert(a, v);
                self.rows_idx[a].insert(c, ());
            }
        }
        if let Some(u) = &mut self.u {
            u.swap(a, b);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.cols.swap(a, b);
        let rows: Vec<usize> = self.cols[a]
            .keys()
            .chain(self.cols[b].keys())
            .cloned()
            .collect();
        for r in rows {
            let ia = self.cols[a].contains_key(&r);
            let ib = self.cols[b].contains_key(&r);
            if ia {
                self.rows_idx[r].insert(a, ());
            } else {
                self.rows_idx[r].remove(&a);
            }
            if ib {
                self.rows_idx[r].insert(b, ());
            } else {
                self.rows_idx[r].remove(&b);
            }
        }
        if let Some(v) = &mut self.v {
            v.swap(a, b);
        }
    }
    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let cols_t: Vec<usize> = self.rows_idx[t].keys().cloned().collect();
        for c in cols_t {
            let vt = self.get(t, c);
            let vi = self.get(i, c) - q * vt;
            self.set(i, c, vi);
        }
        if let Some(u) = &mut self.u {
            let row_t = u[t].clone();
            for (c, vt) in row_t {
                let cur = u[i].get(&c).cloned().unwrap_or_else(BigInt::zero) - q * vt;
                if cur.is_zero() {
                    u[i].remove(&c);
                } else {
                    u[i].insert(c, cur);
                }
            }
        }
    }
    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let rows_t: Vec<(usize, BigInt)> =
            self.cols[t].iter().map(|(r, v)| (*r, v.clone())).collect();
        for (r, vt) in rows_t {
            let vj = self.get(r, j) - q * vt;
            self.set(r, j, vj);
        }
        if let Some(v) = &mut self.v {
            let col_t = v[t].clone();
            for (r, vt) in col_t {
                let cur = v[j].get(&r).cloned().unwrap_or_else(BigInt::zero) - q * vt;
                if cur.is_zero() {
                    v[j].remove(&r);
                } else {
                    v[j].insert(r, cur);
                }
            }
        }
    }
    fn negate_row(&mut self, i: usize) {
        let cols: Vec<usize> = self.rows_idx[i].keys().cloned().collect();
        for c in cols {
            let v = -self.get(i, c);
            self.cols[c].insert(i, v);
        }
        if let Some(u) = &mut self.u {
            for (_, v) in u[i].iter_mut() {
                *v = -std::mem::take(v);
            }
        }
    }
}

impl SnfBackend for SparseMinNorm {
    fn name(&self) -> &'static str {
        "sparse"
    }

    fn snf(&self, m: &SparseIntMatrix, with_u: bool, with_v: bool) -> SnfResult {
        let (rows, cols) = (m.rows(), m.cols());
        let mut st = Sparse {
            cols: vec![BTreeMap::new(); cols],
            rows_idx: vec![BTreeMap::new(); rows],
            u: with_u.then(|| {
                (0..rows)
                    .map(|i| BTreeMap::from([(i, BigInt::one())]))
                    .collect()
            }),
            v: with_v.then(|| {
                (0..cols)
                    .map(|i| BTreeMap::from([(i, BigInt::one())]))
                    .collect()
            }),
        };
        for (r, c, val) in m.triplets() {
            st.set(r, c, val);
        }

        let mut t = 0usize;
        while t < rows.min(cols) {
            // min-norm pivot among active entries (rows/cols >= t)
            let mut best: Option<(usize, usize, BigInt)> = None;
            for c in t..cols {
                for (r, v) in &st.cols[c] {
                    if *r < t {
                        continue;
                    }
                    let a = v.abs();
                    match &best {
                        Some((_, _, b)) if *b <= a => {}
                        _ => best = Some((*r, c, a.clone())),
                    }
                    if a.is_one() {
                        break;
                    }
                }
                if matches!(&best, Some((_, _, b)) if b.is_one()) {
                    break;
                }
            }
            let Some((pi, pj, _)) = best else { break };
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);

            loop {
                let mut dirty = false;
                let col_rows: Vec<usize> = st.cols[t].keys().filter(|r| **r > t).cloned().collect();
                for i in col_rows {
                    let q = st.get(i, t).div_euclid(&st.get(t, t));
                    st.row_sub(i, t, &q);
                    if !st.get(i, t).is_zero() {
                        st.swap_rows(t, i);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                let row_cols: Vec<usize> =
                    st.rows_idx[t].keys().filter(|c| **c > t).cloned().collect();
                for j in row_cols {
                    let q = st.get(t, j).div_euclid(&st.get(t, t));
                    st.col_sub(j, t, &q);
                    if !st.get(t, j).is_zero() {
                        st.swap_cols(t, j);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                let p = st.get(t, t);
                let mut bad: Option<usize> = None;
                'scan: for c in t + 1..cols {
                    for (r, v) in &st.cols[c] {
                        if *r > t && !(v % &p).is_zero() {
                            bad = Some(*r);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        let minus_one = -BigInt::one();
                        st.row_sub(t, i, &minus_one);
                    }
                    None => break,
                }
            }
            if st.get(t, t).is_negative() {
                st.negate_row(t);
            }
            t += 1;
        }

        let rank = t;
        let mut d = SparseIntMatrix::new(rows, cols);
        for i in 0..rank {
            d.set(i, i, st.get(i, i));
        }
        let u = st.u.map(|u| {
            let mut trip = Vec::new();
            for (i, row) in u.into_iter().enumerate() {
                for (j, v) in row {
                    trip.push((i, j, v));
                }
            }
            SparseIntMatrix::from_triplets(rows, rows, trip)
        });
        let v = st.v.map(|v| {
            let mut trip = Vec::new();
            for (j, col) in v.into_iter().enumerate() {
                for (r, val) in col {
                    trip.push((r, j, val));
                }
            }
            SparseIntMatrix::from_triplets(cols, cols, trip)
        });
        SnfResult { d, u, v, rank }
    }
}

// ---------------------------------------------------------------------------
// derived solvers

/// Basis of the integer kernel of `m` (columns of V past the rank).
pub fn kernel_z(m: &SparseIntMatrix) -> Vec<SparseCol> {
    let res = snf(m, false, true);
    let v = res.v.unwrap();
    (res.rank..m.cols()).map(|j| v.col(j).clone()).collect()
}

/// One integer solution of `m x = b`, if any.
pub fn solve_z(m: &SparseIntMatrix, b: &SparseCol) -> Option<SparseCol> {
    let res = snf(m, true, true);
    let u = res.u.unwrap();
    let v = res.v.unwrap();
    let ub = u.mul_col(b);
    let mut y: SparseCol = Vec::new();
    for (r, val) in &ub {
        if *r >= res.rank {
            return None;
        }
        let d = res.d.get(*r, *r);
        let (q, rem) = val.div_rem(&d);
        if !rem.is_zero() {
            return None;
        }
        y.push((*r, q));
    }
    Some(v.mul_col(&y))
}

/// Streaming column echelon over Z. Holds the lattice generated by the
/// inserted columns; supports rank, membership and representation queries
/// without ever forming a U transform.
pub struct ZColEchelon {
    pivots: BTreeMap<usize, SparseCol>,
}

impl Default for ZColEchelon {
    fn default() -> Self {
        Self::new()
    }
}

impl ZColEchelon {
    pub fn new() -> Self {
        ZColEchelon {
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> Vec<SparseCol> {
        self.pivots.values().cloned().collect()
    }

    /// Insert a column into the lattice.
    pub fn insert(&mut self, mut v: SparseCol) {
        v.retain(|e| !e.1.is_zero());
        loop {
            let Some(&(lead, _)) = v.first() else { return };
            let lead_val = v[0].1.clone();
            match self.pivots.get(&lead) {
                None => {
                    if lead_val.is_negative() {
                        for e in v.iter_mut() {
                            e.1 = -std::mem::take(&mut e.1);
                        }
                    }
                    self.pivots.insert(lead, v);
                    return;
                }
                Some(p) => {
                    let p_lead = p[0].1.clone();
                    let (q, r) = lead_val.div_rem(&p_lead);
                    if r.is_zero() {
                        let p = p.clone();
                        axpy(&mut v, &(-q), &p);
                    } else {
                        // gcd combination becomes the new pivot
                        let e = p_lead.extended_gcd(&lead_val);
                        let (g, s, t) = (e.gcd, e.x, e.y);
                        let p = p.clone();
                        let mut newp: SparseCol = Vec::new();
                        axpy(&mut newp, &s, &p);
                        axpy(&mut newp, &t, &v);
                        let mut rest: SparseCol = Vec::new();
                        axpy(&mut rest, &(&lead_val / &g), &p);
                        axpy(&mut rest, &(-&p_lead / &g), &v);
                        debug_assert_eq!(newp.first().map(|e| e.0), Some(lead));
                        self.pivots.insert(lead, newp);
                        v = rest;
                    }
                }
            }
        }
    }

    /// Reduce `v` against the lattice; returns the residue (empty iff `v`
    /// lies in the lattice) together with the coefficients used.
    pub fn reduce(&self, mut v: SparseCol) -> (SparseCol, Vec<(usize, BigInt)>) {
        v.retain(|e| !e.1.is_zero());
        let mut coeffs = Vec::new();
        loop {
            let Some(&(lead, _)) = v.first() else {
                return (v, coeffs);
            };
            match self.pivots.get(&lead) {
                None => return (v, coeffs),
                Some(p) => {
                    let (q, r) = v[0].1.div_rem(&p[0].1);
                    if !r.is_zero() {
                        return (v, coeffs);
                    }
                    coeffs.push((lead, q.clone()));
                    let p = p.clone();
                    axpy(&mut v, &(-q), &p);
                }
            }
        }
    }

    pub fn contains(&self, v: &SparseCol) -> bool {
        self.reduce(v.clone()).0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Textbook row/column reduction oracle on dense i64 matrices, written
    /// independently of the backends above. Returns the invariant factors.
    fn snf_oracle(rows: usize, cols: usize, entries: &[i64]) -> Vec<i64> {
        let mut a: Vec<Vec<i64>> = (0..rows)
            .map(|i| entries[i * cols..(i + 1) * cols].to_vec())
            .collect();
        let mut t = 0;
        while t < rows.min(cols) {
            let mut piv = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 {
                        let v = a[i][j].abs();
                        if piv.map(|(_, _, b): (usize, usize, i64)| v < b).unwrap_or(true) {
                            piv = Some((i, j, v));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = piv else { break };
            a.swap(t, pi);
            for row in &mut a {
                row.swap(t, pj);
            }
            let mut stable = false;
            while !stable {
                stable = true;
                for i in 0..rows {
                    if i != t && a[i][t] != 0 {
                        let q = a[i][t].div_euclid(a[t][t]);
                        for j in 0..cols {
                            a[i][j] -= q * a[t][j];
                        }
                        if a[i][t] != 0 {
                            a.swap(t, i);
                            stable = false;
                        }
                    }
                }
                for j in 0..cols {
                    if j != t && a[t][j] != 0 {
                        let q = a[t][j].div_euclid(a[t][t]);
                        for row in a.iter_mut() {
                            let s = row[t];
                            row[j] -= q * s;
                        }
                        if a[t][j] != 0 {
                            for row in &mut a {
                                row.swap(t, j);
                            }
                            stable = false;
                        }
                    }
                }
                if stable {
                    let p = a[t][t];
                    'f: for i in t + 1..rows {
                        for j in t + 1..cols {
                            if a[i][j] % p != 0 {
                                for k in 0..cols {
                                    a[t][k] += a[i][k];
                                }
                                stable = false;
                                break 'f;
                            }
                        }
                    }
                }
            }
            if a[t][t] < 0 {
                for j in 0..cols {
                    a[t][j] = -a[t][j];
                }
            }
            t += 1;
        }
        (0..t).map(|i| a[i][i]).collect()
    }

    fn check_both(rows: usize, cols: usize, entries: &[i64]) {
        let expected = snf_oracle(rows, cols, entries);
        let m = SparseIntMatrix::from_dense(rows, cols, entries);
        for backend in snf_backends() {
            let res = backend.snf(&m, true, true);
            let got: Vec<i64> = res
                .invariants()
                .iter()
                .map(|v| i64::try_from(v).unwrap())
                .collect();
            assert_eq!(got, expected, "backend {}", backend.name());
            // D = U M V exactly
            let umv = res.u.as_ref().unwrap().mul(&m).mul(res.v.as_ref().unwrap());
            assert_eq!(umv, res.d, "backend {}", backend.name());
            // unimodular transforms
            assert_eq!(res.u.unwrap().abs_det(), BigInt::one());
            assert_eq!(res.v.unwrap().abs_det(), BigInt::one());
            // divisibility chain
            for w in got.windows(2) {
                assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn snf_2468() {
        // oracle-derived: diag(2, 4)
        assert_eq!(snf_oracle(2, 2, &[2, 4, 6, 8]), vec![2, 4]);
        check_both(2, 2, &[2, 4, 6, 8]);
    }

    #[test]
    fn snf_identity() {
        let m = SparseIntMatrix::identity(4);
        let res = snf(&m, false, false);
        assert_eq!(res.rank, 4);
        assert!(res.invariants().iter().all(|d| d.is_one()));
    }

    #[test]
    fn snf_zero() {
        let m = SparseIntMatrix::new(3, 2);
        let res = snf(&m, true, true);
        assert_eq!(res.rank, 0);
        assert!(res.d.is_zero());
    }

    #[test]
    fn snf_assorted() {
        check_both(3, 3, &[2, 0, 0, 0, 3, 0, 0, 0, 5]);
        check_both(3, 4, &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
        check_both(4, 4, &[-6, 111, -36, 6, 5, -672, 210, 74, 0, -255, 81, 24, -7, 255, -81, -10]);
        check_both(2, 2, &[0, 0, 0, 0]);
        check_both(3, 2, &[2, 4, 2, 4, 2, 4]);
    }

    #[test]
    fn kernel_and_solve() {
        let m = SparseIntMatrix::from_dense(2, 3, &[1, 2, 3, 2, 4, 6]);
        let ker = kernel_z(&m);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(m.mul_col(k).is_empty());
        }
        let b = vec![(0usize, BigInt::from(6)), (1usize, BigInt::from(12))];
        let x = solve_z(&m, &b).unwrap();
        assert_eq!(m.mul_col(&x), b);
        let b_bad = vec![(0usize, BigInt::from(1)), (1usize, BigInt::from(1))];
        assert!(solve_z(&m, &b_bad).is_none());
    }

    #[test]
    fn z_echelon_membership() {
        let mut e = ZColEchelon::new();
        e.insert(vec![(0, BigInt::from(2)), (1, BigInt::from(2))]);
        e.insert(vec![(1, BigInt::from(4))]);
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&vec![(0, BigInt::from(2)), (1, BigInt::from(6))]));
        assert!(!e.contains(&vec![(0, BigInt::from(1)), (1, BigInt::from(1))]));
        assert!(!e.contains(&vec![(1, BigInt::from(2))]));
        assert!(e.contains(&vec![(1, BigInt::from(4))]));
    }
}
