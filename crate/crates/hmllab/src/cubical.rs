//! The generalized cubical construction: chain complexes on functions
//! [n]^k -> A modulo slabs and diagonals, the comparison maps between cube
//! sizes, the lax monoidal product, and the cross-effect calculus for set
//! maps between finite abelian groups.
//!
//! Functions are stored as flat value vectors in row-major order (the first
//! cube coordinate has the largest stride). The differential is computed in
//! the free ambient (no quotient), then projected: the subgroup killed by
//! the quotient is spanned by slab and diagonal basis functions, so
//! projection just drops those terms.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::complex::{ChainComplex, Coefficient};
use crate::error::{HmlError, Result};
use crate::fgab::FGAbGroup;
use crate::guards;
use crate::matrix::{SparseCol, SparseIntMatrix};
use crate::ring::{AddGroup, FiniteRing};
use crate::snf::ZColEchelon;
use crate::subquot;

/// Materialized add/neg tables for a finite abelian group; every cubical
/// loop runs on these.
#[derive(Clone)]
pub struct GroupView {
    pub size: u64,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl GroupView {
    pub fn from_group(g: &impl AddGroup) -> Result<Self> {
        let size = g.size();
        guards::check("group operation table", size as u128 * size as u128, 1 << 24)?;
        let n = size as usize;
        let mut add = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for a in 0..size {
            neg[a as usize] = g.neg(a) as u32;
            for b in 0..size {
                add[(a * size + b) as usize] = g.add(a, b) as u32;
            }
        }
        Ok(GroupView { size, add, neg })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.size + b) as usize] as u64
    }
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        self.neg[a as usize] as u64
    }
    pub fn sum(&self, it: impl IntoIterator<Item = u64>) -> u64 {
        it.into_iter().fold(0, |acc, x| self.add(acc, x))
    }
}

/// A function [n]^k -> A as its flat value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubeFn {
    pub values: Vec<u64>,
}

impl CubeFn {
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        parts.join(".")
    }
}

#[inline]
fn pow_usize(base: usize, exp: usize) -> usize {
    base.pow(exp as u32)
}

/// Is some coordinate hyperplane x_i = j entirely zero? (k = 0: is f = 0?)
pub fn is_slab(values: &[u64], n: usize, k: usize) -> bool {
    if k == 0 {
        return values[0] == 0;
    }
    let side = n + 1;
    for i in 0..k {
        let stride = pow_usize(side, k - 1 - i);
        let outer = pow_usize(side, i);
        'j: for j in 0..side {
            // scan all positions with coordinate i equal to j
            for o in 0..outer {
                let base = o * stride * side + j * stride;
                for t in 0..stride {
                    if values[base + t] != 0 {
                        continue 'j;
                    }
                }
            }
            return true;
        }
    }
    false
}

/// Does f vanish off some locus x_i = x_{i+1}?
pub fn is_diagonal(values: &[u64], n: usize, k: usize) -> bool {
    if k < 2 {
        return false;
    }
    let side = n + 1;
    'i: for i in 0..k - 1 {
        let stride_i = pow_usize(side, k - 1 - i);
        let stride_i1 = pow_usize(side, k - 2 - i);
        for (pos, v) in values.iter().enumerate() {
            if *v != 0 {
                let xi = (pos / stride_i) % side;
                let xi1 = (pos / stride_i1) % side;
                if xi != xi1 {
                    continue 'i;
                }
            }
        }
        return true;
    }
    false
}

pub fn is_canonical(values: &[u64], n: usize, k: usize) -> bool {
    !is_slab(values, n, k) && !is_diagonal(values, n, k)
}

/// Visit every canonical basis function [n]^k -> A without storing them.
pub fn for_each_canonical(
    group_size: u64,
    n: usize,
    k: usize,
    mut f: impl FnMut(&[u64]),
) -> Result<()> {
    let len = pow_usize(n + 1, k);
    let raw = guards::checked_pow(group_size as u128, len as u32);
    guards::check("cubical basis enumeration", raw, guards::RAW_FUNCTION_BOUND)?;
    let mut values = vec![0u64; len];
    loop {
        if is_canonical(&values, n, k) {
            f(&values);
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == len {
                return Ok(());
            }
            values[pos] += 1;
            if values[pos] < group_size {
                break;
            }
            values[pos] = 0;
            pos += 1;
        }
    }
}

/// Linear combination of raw functions on a mixed-size grid.
type Lin = HashMap<Vec<u64>, i64>;

fn lin_add(acc: &mut Lin, key: Vec<u64>, coeff: i64) {
    let e = acc.entry(key).or_insert(0);
    *e += coeff;
    if *e == 0 {
        acc.remove(&key_placeholder());
    }
}

// HashMap entry API cannot remove in place without re-hashing; simplest is
// to clean up zeros lazily.
fn key_placeholder() -> Vec<u64> {
    Vec::new()
}

fn lin_cleanup(acc: &mut Lin) {
    acc.retain(|_, c| *c != 0);
}

/// One application of delta_j on a function with coordinate sizes `sizes`
/// (sizes[j] shrinks by one). Returns the three terms (gamma, -alpha, -beta)
/// with their signs.
fn delta_j_step(g: &GroupView, sizes: &[usize], j: usize, values: &[u64]) -> [(Vec<u64>, i64); 3] {
    let k = sizes.len();
    let old = sizes[j];
    debug_assert!(old >= 2);
    let new = old - 1;
    let mut new_sizes = sizes.to_vec();
    new_sizes[j] = new;
    let new_len: usize = new_sizes.iter().product();
    let stride_after: usize = sizes[j + 1..].iter().product();

    let mut alpha = vec![0u64; new_len];
    let mut beta = vec![0u64; new_len];
    let mut gamma = vec![0u64; new_len];
    for (pos, slot) in alpha.iter_mut().enumerate() {
        // decode coordinate j in the new grid
        let xj = (pos / stride_after) % new;
        let outer = pos / (stride_after * new);
        let inner = pos % stride_after;
        let src = |xj_old: usize| outer * stride_after * old + xj_old * stride_after + inner;
        if xj < new - 1 {
            let v = values[src(xj)];
            *slot = v;
            beta[pos] = v;
            gamma[pos] = v;
        } else {
            let a = values[src(old - 2)];
            let b = values[src(old - 1)];
            *slot = a;
            beta[pos] = b;
            gamma[pos] = g.add(a, b);
        }
    }
    [(gamma, 1), (alpha, -1), (beta, -1)]
}

/// delta_j iterated until coordinate j collapses, then the coordinate is
/// deleted. Input lives on [n]^k (all sizes n+1).
fn delta_j_full(g: &GroupView, n: usize, k: usize, j: usize, values: &[u64]) -> Lin {
    let mut sizes = vec![n + 1; k];
    let mut terms: Lin = HashMap::from([(values.to_vec(), 1i64)]);
    for _ in 0..n {
        let mut next: Lin = HashMap::new();
        for (vals, c) in &terms {
            for (newvals, sign) in delta_j_step(g, &sizes, j, vals) {
                *next.entry(newvals).or_insert(0) += c * sign;
            }
        }
        lin_cleanup(&mut next);
        terms = next;
        sizes[j] -= 1;
    }
    // coordinate j now has size 1; delete it
    debug_assert_eq!(sizes[j], 1);
    let mut out: Lin = HashMap::new();
    for (vals, c) in terms {
        // deleting a size-1 coordinate keeps the flat table unchanged
        *out.entry(vals).or_insert(0) += c;
    }
    lin_cleanup(&mut out);
    out
}

/// The full differential on Q'^n_k: sum over j of (-1)^j delta_j^n.
fn raw_differential(g: &GroupView, n: usize, k: usize, values: &[u64]) -> Lin {
    let mut out: Lin = HashMap::new();
    for j in 0..k {
        let part = delta_j_full(g, n, k, j, values);
        let sign = if (j + 1) % 2 == 0 { 1 } else { -1 };
        for (vals, c) in part {
            *out.entry(vals).or_insert(0) += sign * c;
        }
    }
    lin_cleanup(&mut out);
    out
}

/// Single application of every delta_j (j = 1..k), shrinking the cube from
/// [n]^k to [n-1]^k: the comparison map between cube sizes.
fn raw_comparison(g: &GroupView, n: usize, k: usize, values: &[u64]) -> Lin {
    // compose delta_1 . delta_2 ... delta_k, applying delta_k first
    let mut sizes = vec![n + 1; k];
    let mut terms: Lin = HashMap::from([(values.to_vec(), 1i64)]);
    for j in (0..k).rev() {
        let mut next: Lin = HashMap::new();
        for (vals, c) in &terms {
            for (newvals, sign) in delta_j_step(g, &sizes, j, vals) {
                *next.entry(newvals).or_insert(0) += c * sign;
            }
        }
        lin_cleanup(&mut next);
        terms = next;
        sizes[j] -= 1;
    }
    terms
}

/// The cubical construction of a finite abelian group (or the additive
/// group of a finite ring), materialized through chain degree k_max.
pub struct QComplex {
    pub n: usize,
    pub group: GroupView,
    /// basis[k] = canonical cube functions at chain degree k
    pub basis: Vec<Vec<CubeFn>>,
    index: Vec<HashMap<Vec<u64>, u32>>,
    pub complex: ChainComplex,
}

impl QComplex {
    pub fn rank(&self, k: usize) -> usize {
        self.basis.get(k).map(|b| b.len()).unwrap_or(0)
    }

    pub fn basis_index(&self, k: usize, values: &[u64]) -> Option<u32> {
        self.index.get(k)?.get(values).copied()
    }

    /// Project a raw linear combination into basis coordinates.
    pub fn project(&self, k: usize, lin: &Lin) -> SparseCol {
        let mut entries: Vec<(usize, BigInt)> = lin
            .iter()
            .filter_map(|(vals, c)| {
                self.basis_index(k, vals)
                    .map(|i| (i as usize, BigInt::from(*c)))
            })
            .collect();
        entries.sort_by_key(|e| e.0);
        entries
    }

    /// Differential of a single basis element, in basis coordinates.
    pub fn differential_of(&self, k: usize, values: &[u64]) -> SparseCol {
        let lin = raw_differential(&self.group, self.n, k, values);
        self.project(k - 1, &lin)
    }
}

/// Build Q^n through chain degree k_max. The complex is over Z; d^2 = 0 is
/// verified exactly.
pub fn q_complex(group: &impl AddGroup, n: usize, k_max: usize) -> Result<QComplex> {
    if n == 0 {
        return Err(HmlError::Precondition("cube size n must be >= 1".into()));
    }
    let gv = GroupView::from_group(group)?;
    build_q_complex(gv, n, k_max)
}

fn build_q_complex(gv: GroupView, n: usize, k_max: usize) -> Result<QComplex> {
    let mut basis: Vec<Vec<CubeFn>> = Vec::new();
    let mut index: Vec<HashMap<Vec<u64>, u32>> = Vec::new();
    for k in 0..=k_max {
        let mut b = Vec::new();
        let mut ix = HashMap::new();
        for_each_canonical(gv.size, n, k, |vals| {
            ix.insert(vals.to_vec(), b.len() as u32);
            b.push(CubeFn {
                values: vals.to_vec(),
            });
        })?;
        basis.push(b);
        index.push(ix);
    }
    let mut complex = ChainComplex::new(Coefficient::Z);
    for (k, b) in basis.iter().enumerate() {
        complex.add_degree(k as i64, b.iter().map(|f| f.label()).collect());
    }
    let mut qc = QComplex {
        n,
        group: gv,
        basis,
        index,
        complex,
    };
    for k in 1..=k_max {
        let mut d = SparseIntMatrix::new(qc.rank(k - 1), qc.rank(k));
        for (j, f) in qc.basis[k].iter().enumerate() {
            d.set_col(j, qc.differential_of(k, &f.values));
        }
        qc.complex.set_differential(k as i64, d);
    }
    qc.complex.validate()?;
    Ok(qc)
}

/// Matrix of the comparison chain map Q^n_k -> Q^{n-1}_k. Both complexes
/// must already be built (the target gives the codomain basis).
pub fn q_map(source: &QComplex, target: &QComplex, k: usize) -> Result<SparseIntMatrix> {
    if source.n < 2 {
        return Err(HmlError::Precondition(
            "comparison map needs cube size n >= 2".into(),
        ));
    }
    if target.n != source.n - 1 || target.group.size != source.group.size {
        return Err(HmlError::Precondition(
            "target must be the same group at cube size n-1".into(),
        ));
    }
    let mut m = SparseIntMatrix::new(target.rank(k), source.rank(k));
    for (j, f) in source.basis[k].iter().enumerate() {
        if k == 0 {
            // empty composition: identity on Z[A]/Z[0]
            m.set_col(
                j,
                vec![(
                    target.basis_index(0, &f.values).expect("same basis") as usize,
                    BigInt::from(1),
                )],
            );
        } else {
            let lin = raw_comparison(&source.group, source.n, k, &f.values);
            m.set_col(j, target.project(k, &lin));
        }
    }
    Ok(m)
}

/// The lax monoidal product on Q^n of a finite commutative ring: the
/// product of basis functions f: [n]^k -> R and g: [n]^l -> R is the
/// function (x,y) |-> f(x) g(y), projected to the canonical basis.
pub fn mu_basis(
    ring: &FiniteRing,
    qc: &QComplex,
    k: usize,
    f: &[u64],
    l: usize,
    g: &[u64],
) -> Option<u32> {
    let mut values = Vec::with_capacity(f.len() * g.len());
    for x in f {
        for y in g {
            values.push(ring.mul(*x, *y));
        }
    }
    qc.basis_index(k + l, &values)
}

/// The unit of the product: [1] in Q_0(R).
pub fn epsilon(ring: &FiniteRing, qc: &QComplex) -> u32 {
    qc.basis_index(0, &[ring.one()])
        .expect("unit function [1] is canonical")
}

// ---------------------------------------------------------------------------
// non-degenerate subsets

/// All non-degenerate subsets of [n]^k, as sorted position lists
/// (row-major). For k = 0 the single subset {()} is returned.
pub fn nondeg_subsets(n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    let len = pow_usize(n + 1, k);
    if len > 16 {
        return Err(HmlError::Guard {
            what: "non-degenerate subset enumeration".into(),
            needed: 1u128 << len,
            bound: 1 << 16,
        });
    }
    if k == 0 {
        return Ok(vec![vec![0]]);
    }
    let side = n + 1;
    let coords: Vec<Vec<usize>> = (0..len)
        .map(|pos| {
            (0..k)
                .map(|i| (pos / pow_usize(side, k - 1 - i)) % side)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1u32 << len) {
        let members: Vec<usize> = (0..len).filter(|p| mask >> p & 1 == 1).collect();
        // not contained in any S_j^i: every coordinate value must occur
        for i in 0..k {
            for j in 0..side {
                if !members.iter().any(|&p| coords[p][i] == j) {
                    continue 'mask;
                }
            }
        }
        // not contained in any D_i
        for i in 0..k - 1 {
            if members.iter().all(|&p| coords[p][i] == coords[p][i + 1]) {
                continue 'mask;
            }
        }
        out.push(members);
    }
    Ok(out)
}

/// Predicted rank of Q^n_k(A) from the direct sum decomposition:
/// sum over non-degenerate S of (|A| - 1)^|S|.
pub fn rank_from_subsets(n: usize, k: usize, group_size: u64) -> Result<u128> {
    let subsets = nondeg_subsets(n, k)?;
    Ok(subsets
        .iter()
        .map(|s| guards::checked_pow((group_size - 1) as u128, s.len() as u32))
        .sum())
}

// ---------------------------------------------------------------------------
// cross-effects of set maps

/// Cross-effect (a_1 | ... | a_m)_f of a set map f: A -> B given as a value
/// table. Empty argument list gives f(0).
pub fn cross_effect(
    gb: &impl AddGroup,
    ga: &impl AddGroup,
    f: &[u64],
    args: &[u64],
) -> u64 {
    let m = args.len();
    if m == 0 {
        return f[0];
    }
    // closed inclusion-exclusion formula; the f(0) normalization cancels
    let mut acc = gb.zero();
    for mask in 0u32..(1u32 << m) {
        let mut s = ga.zero();
        for (i, a) in args.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s = ga.add(s, *a);
            }
        }
        let v = f[s as usize];
        let parity = (m as u32 - mask.count_ones()) % 2;
        acc = if parity == 0 {
            gb.add(acc, v)
        } else {
            gb.add(acc, gb.neg(v))
        };
    }
    acc
}

#[derive(Debug, PartialEq, Eq, Clone, Copy)]
pub enum PolyDegree {
    Degree(usize),
    ExceedsBound,
}

/// Least n such that all (n+1)-fold cross-effects vanish, or the sentinel.
pub fn polynomial_degree(
    gb: &impl AddGroup,
    ga: &impl AddGroup,
    f: &[u64],
    bound: usize,
) -> Result<PolyDegree> {
    let a = ga.size();
    for n in 0..=bound {
        let tuples = guards::checked_pow(a as u128, (n + 1) as u32);
        guards::check("cross-effect tuple enumeration", tuples << (n + 1), 1 << 26)?;
        let mut all_zero = true;
        let mut args = vec![0u64; n + 1];
        'outer: loop {
            if cross_effect(gb, ga, f, &args) != gb.zero() {
                all_zero = false;
                break;
            }
            let mut pos = 0;
            loop {
                if pos == n + 1 {
                    break 'outer;
                }
                args[pos] += 1;
                if args[pos] < a {
                    break;
                }
                args[pos] = 0;
                pos += 1;
            }
        }
        if all_zero {
            return Ok(PolyDegree::Degree(n));
        }
    }
    Ok(PolyDegree::ExceedsBound)
}

// ---------------------------------------------------------------------------
// cross-effect acyclicity

pub struct CrossAcyclicityReport {
    pub homology: Vec<(usize, FGAbGroup)>,
    pub all_zero: bool,
}

/// Build the (n+1)-st cross-effect of Q^n on a direct sum of groups (via
/// the image of the inclusion-exclusion idempotent) and verify its homology
/// vanishes in degrees 0..=max_degree. The chain group at max_degree + 1 is
/// streamed, never materialized.
pub fn cross_acyclicity(
    groups: &[crate::ring::FiniteAbGroup],
    n: usize,
    max_degree: usize,
) -> Result<CrossAcyclicityReport> {
    let m = groups.len();
    if m != n + 1 {
        return Err(HmlError::Precondition(format!(
            "cross_{{{}}} needs exactly {} groups",
            m,
            n + 1
        )));
    }
    let all_moduli: Vec<u64> = groups.iter().flat_map(|g| g.moduli.clone()).collect();
    let total = crate::ring::FiniteAbGroup::new(all_moduli);
    let qc = q_complex(&total, n, max_degree)?;

    // projection pi_T on the direct sum, as a map of element indices
    let comp_counts: Vec<usize> = groups.iter().map(|g| g.moduli.len()).collect();
    let project = |t_mask: u32, elt: u64| -> u64 {
        let comps = total.components(elt);
        let mut out = vec![0u64; comps.len()];
        let mut offset = 0;
        for (gi, cnt) in comp_counts.iter().enumerate() {
            if t_mask >> gi & 1 == 1 {
                out[offset..offset + cnt].copy_from_slice(&comps[offset..offset + cnt]);
            }
            offset += cnt;
        }
        total.from_components(&out)
    };

    // idempotent image of a basis function, as a raw linear combination
    let idempotent = |_k: usize, values: &[u64]| -> Lin {
        let mut lin: Lin = HashMap::new();
        for t_mask in 0u32..(1u32 << m) {
            let img: Vec<u64> = values.iter().map(|v| project(t_mask, *v)).collect();
            let parity = (m as u32 - t_mask.count_ones()) % 2;
            let sign = if parity == 0 { 1 } else { -1 };
            *lin.entry(img).or_insert(0) += sign;
        }
        lin_cleanup(&mut lin);
        lin
    };

    // generators of the image subcomplex per materialized degree
    let mut image_gens: Vec<Vec<SparseCol>> = Vec::new();
    for k in 0..=max_degree {
        let mut ech = ZColEchelon::new();
        for f in &qc.basis[k] {
            let col = qc.project(k, &idempotent(k, &f.values));
            ech.insert(col);
        }
        image_gens.push(ech.pivot_cols());
    }

    // boundary lattices: d(image at k+1); the top one is streamed
    let mut boundaries: Vec<Vec<SparseCol>> = Vec::new();
    for k in 0..=max_degree {
        let mut ech = ZColEchelon::new();
        if k + 1 <= max_degree {
            let d = qc.complex.differential((k + 1) as i64);
            for gen in &image_gens[k + 1] {
                ech.insert(d.mul_col(gen));
            }
        } else {
            let gv = qc.group.clone();
            for_each_canonical(gv.size, n, k + 1, |vals| {
                let e_img = idempotent(k + 1, vals);
                let mut total_lin: Lin = HashMap::new();
                for (ev, c) in &e_img {
                    for (dv, dc) in raw_differential(&gv, n, k + 1, ev) {
                        *total_lin.entry(dv).or_insert(0) += c * dc;
                    }
                }
                lin_cleanup(&mut total_lin);
                ech.insert(qc.project(k, &total_lin));
            })?;
        }
        boundaries.push(ech.pivot_cols());
    }

    let mut homology = Vec::new();
    let mut all_zero = true;
    for k in 0..=max_degree {
        let d = qc.complex.differential(k as i64);
        let cycles = subquot::kernel_within_z(&d, &image_gens[k]);
        let h = subquot::subquotient_z(qc.rank(k), &cycles, &boundaries[k]);
        if !h.is_zero() {
            all_zero = false;
        }
        homology.push((k, h));
    }
    Ok(CrossAcyclicityReport { homology, all_zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteAbGroup;

    fn z2() -> FiniteAbGroup {
        FiniteAbGroup::cyclic(2)
    }

    #[test]
    fn ranks_of_q1_f2() {
        // enumeration oracle: count canonical functions directly
        let qc = q_complex(&z2(), 1, 3).unwrap();
        assert_eq!(qc.rank(0), 1);
        assert_eq!(qc.rank(1), 1);
        assert_eq!(qc.rank(2), 6);
        // cross-check the k=2 rank against the subset decomposition
        assert_eq!(rank_from_subsets(1, 2, 2).unwrap(), 6);
    }

    #[test]
    fn nondeg_subset_counts() {
        assert_eq!(nondeg_subsets(1, 1).unwrap(), vec![vec![0, 1]]);
        assert_eq!(nondeg_subsets(1, 2).unwrap().len(), 6);
        // pigeonhole: |S| >= n + 1 for k >= 1
        for (n, k) in [(1usize, 1usize), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)] {
            for s in nondeg_subsets(n, k).unwrap() {
                assert!(s.len() >= n + 1, "(n,k)=({n},{k})");
            }
        }
    }

    #[test]
    fn rank_identity_various_groups() {
        for (n, k) in [(1usize, 0usize), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (2, 2), (3, 1)] {
            for size in [2u64, 3, 4] {
                let g = FiniteAbGroup::cyclic(size);
                let qc = q_complex(&g, n, k).unwrap();
                let predicted = rank_from_subsets(n, k, size).unwrap();
                assert_eq!(qc.rank(k) as u128, predicted, "(n,k,|A|)=({n},{k},{size})");
            }
        }
        // a non-cyclic group
        let g = FiniteAbGroup::new(vec![2, 2]);
        let qc = q_complex(&g, 1, 2).unwrap();
        assert_eq!(qc.rank(2) as u128, rank_from_subsets(1, 2, 4).unwrap());
    }

    #[test]
    fn homology_of_q1_small_groups() {
        // H_0(Q(A)) = A, H_1 = 0
        for moduli in [vec![2u64], vec![3], vec![4], vec![2, 2]] {
            let g = FiniteAbGroup::new(moduli.clone());
            let qc = q_complex(&g, 1, 2).unwrap();
            let h0 = qc.complex.homology(0);
            let expected = moduli
                .iter()
                .fold(FGAbGroup::zero(), |acc, m| acc.plus(&FGAbGroup::cyclic(*m)));
            assert_eq!(h0, expected, "H_0 for {moduli:?}");
            assert_eq!(qc.complex.homology(1), FGAbGroup::zero(), "H_1 for {moduli:?}");
        }
    }

    /// Independent oracle for H_0 of the cube-size-n construction:
    /// Z[A \ 0] modulo the vanishing of all (n+1)-fold cross-effects of
    /// a |-> [a].
    fn h0_oracle(g: &FiniteAbGroup, n: usize) -> FGAbGroup {
        use num_bigint::BigInt;
        let size = g.size() as usize;
        // generator i-1 stands for [i], i = 1..size-1
        let gens: Vec<SparseCol> = (1..size)
            .map(|i| vec![(i - 1, BigInt::from(1))])
            .collect();
        let mut rels: Vec<SparseCol> = Vec::new();
        let mut args = vec![0u64; n + 1];
        loop {
            let mut rel: std::collections::BTreeMap<usize, i64> = Default::default();
            for mask in 1u32..(1u32 << (n + 1)) {
                let mut s = 0u64;
                for (i, a) in args.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        s = g.add(s, *a);
                    }
                }
                if s != 0 {
                    let sign = if ((n + 1) as u32 - mask.count_ones()) % 2 == 0 {
                        1
                    } else {
                        -1
                    };
                    *rel.entry(s as usize - 1).or_insert(0) += sign;
                }
            }
            let col: SparseCol = rel
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(i, c)| (i, BigInt::from(c)))
                .collect();
            if !col.is_empty() {
                rels.push(col);
            }
            let mut pos = 0;
            loop {
                if pos == n + 1 {
                    return subquot::subquotient_z(size - 1, &gens, &rels);
                }
                args[pos] += 1;
                if args[pos] < g.size() {
                    break;
                }
                args[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn q2_homology_matches_cross_effect_oracle() {
        // for cube size n >= 2, H_0 is the universal degree-<=n polynomial
        // quotient of Z[A], not A itself
        for size in [2u64, 3] {
            let g = FiniteAbGroup::cyclic(size);
            let qc = q_complex(&g, 2, 2).unwrap();
            assert_eq!(qc.complex.homology(0), h0_oracle(&g, 2), "|A|={size}");
            assert_eq!(qc.complex.homology(1), FGAbGroup::zero(), "|A|={size}");
        }
        // sanity: the same oracle at n = 1 recovers A
        let g3 = FiniteAbGroup::cyclic(3);
        assert_eq!(h0_oracle(&g3, 1), FGAbGroup::cyclic(3));
    }

    #[test]
    fn comparison_map_is_chain_map() {
        let g = FiniteAbGroup::cyclic(2);
        let q2 = q_complex(&g, 2, 2).unwrap();
        let q1 = q_complex(&g, 1, 2).unwrap();
        for k in [0usize, 1, 2] {
            let qk = q_map(&q2, &q1, k).unwrap();
            if k >= 1 {
                let qk1 = q_map(&q2, &q1, k - 1).unwrap();
                let lhs = q1.complex.differential(k as i64).mul(&qk);
                let rhs = qk1.mul(&q2.complex.differential(k as i64));
                assert_eq!(lhs, rhs, "q d = d q at k={k}");
            }
        }
        // q_1 undefined
        assert!(q_map(&q1, &q1, 0).is_err());
    }

    #[test]
    fn mu_unit_and_leibniz() {
        let ring = FiniteRing::zmod(2).unwrap();
        let qc = q_complex(&ring, 1, 3).unwrap();
        let unit = epsilon(&ring, &qc);
        // unit law on every basis element of degree <= 2
        for k in 0..=2usize {
            for (i, f) in qc.basis[k].iter().enumerate() {
                let prod = mu_basis(&ring, &qc, 0, &qc.basis[0][unit as usize].values, k, &f.values);
                assert_eq!(prod, Some(i as u32), "unit law at k={k}");
            }
        }
        // Leibniz: d(f*g) = d(f)*g + (-1)^{|f|} f*d(g) on basis pairs
        for (kf, kg) in [(1usize, 1usize), (1, 2), (2, 1)] {
            for f in &qc.basis[kf] {
                for g in &qc.basis[kg] {
                    let mut prod_vals: Vec<u64> = Vec::new();
                    for x in &f.values {
                        for y in &g.values {
                            prod_vals.push(ring.mul(*x, *y));
                        }
                    }
                    let lhs = raw_differential(&qc.group, 1, kf + kg, &prod_vals);
                    let lhs = qc.project(kf + kg - 1, &lhs);
                    // rhs: d(f) * g + (-1)^{kf} f * d(g), expanded on raw terms
                    let mut rhs: Lin = HashMap::new();
                    for (vals, c) in raw_differential(&qc.group, 1, kf, &f.values) {
                        let mut pv = Vec::new();
                        for x in &vals {
                            for y in &g.values {
                                pv.push(ring.mul(*x, *y));
                            }
                        }
                        *rhs.entry(pv).or_insert(0) += c;
                    }
                    let sign = if kf % 2 == 0 { 1 } else { -1 };
                    for (vals, c) in raw_differential(&qc.group, 1, kg, &g.values) {
                        let mut pv = Vec::new();
                        for x in &f.values {
                            for y in &vals {
                                pv.push(ring.mul(*x, *y));
                            }
                        }
                        *rhs.entry(pv).or_insert(0) += sign * c;
                    }
                    lin_cleanup(&mut rhs);
                    let rhs = qc.project(kf + kg - 1, &rhs);
                    assert_eq!(lhs, rhs, "Leibniz at ({kf},{kg})");
                }
            }
        }
    }

    #[test]
    fn cross_effect_formulas() {
        let z8 = FiniteAbGroup::cyclic(8);
        // f(x) = x^2 on Z/8
        let sq: Vec<u64> = (0..8).map(|x| (x * x) % 8).collect();
        assert_eq!(cross_effect(&z8, &z8, &sq, &[1, 2]), 4); // 2ab = 4
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(cross_effect(&z8, &z8, &sq, &[a, b]), (2 * a * b) % 8);
                for c in 0..8 {
                    assert_eq!(cross_effect(&z8, &z8, &sq, &[a, b, c]), 0);
                }
            }
        }
        // additive map has vanishing second cross-effect
        let dbl: Vec<u64> = (0..8).map(|x| (2 * x) % 8).collect();
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(cross_effect(&z8, &z8, &dbl, &[a, b]), 0);
            }
        }
    }

    #[test]
    fn polynomial_degrees() {
        let z5 = FiniteAbGroup::cyclic(5);
        let cube: Vec<u64> = (0..5).map(|x| (x * x * x) % 5).collect();
        assert_eq!(
            polynomial_degree(&z5, &z5, &cube, 4).unwrap(),
            PolyDegree::Degree(3)
        );
        let constant: Vec<u64> = vec![3; 5];
        assert_eq!(
            polynomial_degree(&z5, &z5, &constant, 2).unwrap(),
            PolyDegree::Degree(0)
        );
        // e |-> [e] into the rank-1 free part of Z[Z/2]/Z[0] never becomes
        // polynomial: model the target as a big cyclic group
        let z2 = FiniteAbGroup::cyclic(2);
        let z64 = FiniteAbGroup::cyclic(64);
        let embed: Vec<u64> = vec![0, 1];
        assert_eq!(
            polynomial_degree(&z64, &z2, &embed, 5).unwrap(),
            PolyDegree::ExceedsBound
        );
    }

    #[test]
    fn cross_acyclicity_degree_zero() {
        let report = cross_acyclicity(&[z2(), z2()], 1, 0).unwrap();
        assert!(report.all_zero, "{:?}", report.homology);
    }

    #[test]
    fn feasibility_guard_fires() {
        let g = FiniteAbGroup::cyclic(4);
        // 4^(2^13) is way over the bound
        assert!(matches!(
            q_complex(&g, 1, 13),
            Err(HmlError::Guard { .. })
        ));
    }
}
