//! Z-indexed chain complexes of finite-rank free modules over Z or Z/m,
//! with basis labels, exact homology, and dualization.
//!
//! Homological indexing throughout: the differential at degree n maps
//! C_n -> C_{n-1}. Cohomological objects are realized by `dualize`, which
//! places the dual of C_n in degree -n.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{HmlError, Result};
use crate::fgab::FGAbGroup;
use crate::matrix::{SparseCol, SparseIntMatrix};
use crate::modm::{self, ModCol, ModEchelon};
use crate::snf::{self, ZColEchelon};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Coefficient {
    Z,
    Zmod(u64),
}

impl Coefficient {
    pub fn modulus(&self) -> Option<u64> {
        match self {
            Coefficient::Z => None,
            Coefficient::Zmod(m) => Some(*m),
        }
    }
}

impl std::fmt::Display for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficient::Z => write!(f, "Z"),
            Coefficient::Zmod(m) => write!(f, "Z/{m}"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeData {
    pub rank: usize,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub coefficient: Coefficient,
    pub degrees: BTreeMap<i64, DegreeData>,
    /// d_n : C_n -> C_{n-1}
    pub differentials: BTreeMap<i64, SparseIntMatrix>,
}

impl ChainComplex {
    pub fn new(coefficient: Coefficient) -> Self {
        ChainComplex {
            coefficient,
            degrees: BTreeMap::new(),
            differentials: BTreeMap::new(),
        }
    }

    pub fn add_degree(&mut self, n: i64, labels: Vec<String>) {
        self.degrees.insert(
            n,
            DegreeData {
                rank: labels.len(),
                labels,
            },
        );
    }

    pub fn add_degree_anon(&mut self, n: i64, rank: usize) {
        let labels = (0..rank).map(|i| format!("e{i}")).collect();
        self.add_degree(n, labels);
    }

    pub fn set_differential(&mut self, n: i64, d: SparseIntMatrix) {
        assert_eq!(d.cols(), self.rank(n), "d_{n} column count");
        assert_eq!(d.rows(), self.rank(n - 1), "d_{n} row count");
        self.differentials.insert(n, d);
    }

    pub fn rank(&self, n: i64) -> usize {
        self.degrees.get(&n).map(|d| d.rank).unwrap_or(0)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.keys().next_back().copied()
    }

    /// The differential at degree n, materializing a zero matrix of the
    /// right shape when absent.
    pub fn differential(&self, n: i64) -> SparseIntMatrix {
        match self.differentials.get(&n) {
            Some(d) => d.clone(),
            None => SparseIntMatrix::new(self.rank(n - 1), self.rank(n)),
        }
    }

    fn is_zero_mod(&self, m: &SparseIntMatrix) -> bool {
        match self.coefficient {
            Coefficient::Z => m.is_zero(),
            Coefficient::Zmod(k) => m.to_mod(k).iter().all(|c| c.is_empty()),
        }
    }

    /// Check shapes and d . d = 0 in every adjacent degree pair.
    pub fn validate(&self) -> Result<()> {
        for (n, d) in &self.differentials {
            if d.cols() != self.rank(*n) || d.rows() != self.rank(*n - 1) {
                return Err(HmlError::Invalid(format!(
                    "differential at degree {n} has shape {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    self.rank(*n - 1),
                    self.rank(*n)
                )));
            }
        }
        for (n, d) in &self.differentials {
            if let Some(d_next) = self.differentials.get(&(*n + 1)) {
                if !self.is_zero_mod(&d.mul(d_next)) {
                    return Err(HmlError::Verification(format!(
                        "d_{} . d_{} != 0",
                        n,
                        *n + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Isomorphism type of ker(d_n) / im(d_{n+1}).
    pub fn homology(&self, n: i64) -> FGAbGroup {
        let rank_n = self.rank(n);
        if rank_n == 0 {
            return FGAbGroup::zero();
        }
        let d_n = self.differential(n);
        let d_up = self.differential(n + 1);
        match self.coefficient {
            Coefficient::Z => homology_z(&d_n, &d_up, rank_n),
            Coefficient::Zmod(m) => homology_mod(&d_n, &d_up, rank_n, m),
        }
    }

    /// H^n of the dual complex, i.e. homology of `dualize` at degree -n.
    pub fn cohomology(&self, n: i64) -> FGAbGroup {
        self.dualize().homology(-n)
    }

    /// Degreewise dual: degree -n holds the dual of C_n, and the
    /// differential out of degree -n is the transpose of d_{n+1} with no
    /// extra sign.
    pub fn dualize(&self) -> ChainComplex {
        let mut out = ChainComplex::new(self.coefficient);
        for (n, data) in &self.degrees {
            let labels = data.labels.iter().map(|l| format!("{l}*")).collect();
            out.add_degree(-n, labels);
        }
        for (n, d) in &self.differentials {
            // d_n : C_n -> C_{n-1}; transpose maps dual(C_{n-1}) -> dual(C_n),
            // i.e. degree -(n-1) -> degree -n in the dual complex.
            out.set_differential(-(n - 1), d.transpose());
        }
        out
    }
}

fn homology_z(d_n: &SparseIntMatrix, d_up: &SparseIntMatrix, rank_n: usize) -> FGAbGroup {
    // kernel of d_n
    let kernel: Vec<SparseCol> = if d_n.rows() == 0 {
        (0..rank_n)
            .map(|i| vec![(i, BigInt::from(1))])
            .collect()
    } else {
        snf::kernel_z(d_n)
    };
    if kernel.is_empty() {
        return FGAbGroup::zero();
    }
    // image lattice of d_{n+1}, streamed
    let mut ech = ZColEchelon::new();
    for j in 0..d_up.cols() {
        ech.insert(d_up.col(j).clone());
    }
    let image = ech.pivot_cols();
    // express image generators in kernel coordinates
    let k = kernel.len();
    let kmat = {
        let mut m = SparseIntMatrix::new(rank_n, k);
        for (j, col) in kernel.iter().enumerate() {
            m.set_col(j, col.clone());
        }
        m
    };
    let mut rel_cols: Vec<SparseCol> = Vec::with_capacity(image.len());
    for im in &image {
        let y = snf::solve_z(&kmat, im).expect("image lies in kernel (d.d=0)");
        rel_cols.push(y);
    }
    let rel = {
        let mut m = SparseIntMatrix::new(k, rel_cols.len());
        for (j, col) in rel_cols.into_iter().enumerate() {
            m.set_col(j, col);
        }
        m
    };
    let res = snf::snf(&rel, false, false);
    let invariants: Vec<BigUint> = res
        .invariants()
        .into_iter()
        .map(|d| d.magnitude().clone())
        .collect();
    FGAbGroup::from_invariants(k - res.rank, invariants)
}

fn homology_mod(
    d_n: &SparseIntMatrix,
    d_up: &SparseIntMatrix,
    rank_n: usize,
    m: u64,
) -> FGAbGroup {
    let d_n_cols = d_n.to_mod(m);
    // kernel generators of d_n over Z/m (combos are in C_n coordinates)
    let kernel: Vec<ModCol> = if d_n.rows() == 0 {
        (0..rank_n).map(|i| vec![(i, 1u64)]).collect()
    } else {
        let gens = modm::kernel_mod(&d_n_cols, m);
        gens.into_iter()
            .map(|mut g| {
                g.sort_by_key(|e| e.0);
                g
            })
            .collect()
    };
    if kernel.is_empty() {
        return FGAbGroup::zero();
    }
    // image of d_{n+1}, streamed
    let mut img_ech = ModEchelon::new(m, false);
    for col in d_up.to_mod(m) {
        img_ech.insert(col);
    }
    let image = img_ech.pivot_cols();
    // solver on the kernel generator matrix
    let mut ker_ech = ModEchelon::new(m, true);
    for g in &kernel {
        ker_ech.insert(g.clone());
    }
    let k = kernel.len();
    let mut rels: Vec<Vec<(usize, u64)>> = Vec::new();
    // dependencies among kernel generators
    rels.extend(ker_ech.kernel_combos().iter().cloned());
    // image generators expressed in kernel coordinates
    for im in &image {
        let (residue, expr) = ker_ech.reduce(im.clone());
        assert!(residue.is_empty(), "image lies in kernel (d.d=0 mod m)");
        rels.push(expr.unwrap());
    }
    // invariants of (Z/m)^k / <rels> via Z-SNF of [rels | mI]
    let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
    for (j, r) in rels.iter().enumerate() {
        for (i, v) in r {
            trip.push((*i, j, BigInt::from(*v)));
        }
    }
    let ncols = rels.len() + k;
    for i in 0..k {
        trip.push((i, rels.len() + i, BigInt::from(m)));
    }
    let relmat = SparseIntMatrix::from_triplets(k, ncols, trip);
    let res = snf::snf(&relmat, false, false);
    let invariants: Vec<BigUint> = res
        .invariants()
        .into_iter()
        .map(|d| d.magnitude().clone())
        .collect();
    debug_assert_eq!(res.rank, k, "m*I forces full rank");
    FGAbGroup::from_invariants(0, invariants)
}

// ---------------------------------------------------------------------------
// serialization (versioned, bit-exact round-trip)

#[derive(Serialize, Deserialize)]
struct DegreeRepr {
    n: i64,
    rank: usize,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct DiffRepr {
    n: i64,
    triplets: Vec<(usize, usize, String)>,
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    schema: String,
    coefficient: Coefficient,
    degrees: Vec<DegreeRepr>,
    differentials: Vec<DiffRepr>,
}

pub const CHAIN_COMPLEX_SCHEMA: &str = "hmllab/chain-complex/v1";

impl Serialize for ChainComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = ComplexRepr {
            schema: CHAIN_COMPLEX_SCHEMA.to_string(),
            coefficient: self.coefficient,
            degrees: self
                .degrees
                .iter()
                .map(|(n, d)| DegreeRepr {
                    n: *n,
                    rank: d.rank,
                    labels: d.labels.clone(),
                })
                .collect(),
            differentials: self
                .differentials
                .iter()
                .map(|(n, d)| DiffRepr {
                    n: *n,
                    triplets: d
                        .triplets()
                        .into_iter()
                        .map(|(r, c, v)| (r, c, v.to_string()))
                        .collect(),
                })
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ComplexRepr::deserialize(d)?;
        if repr.schema != CHAIN_COMPLEX_SCHEMA {
            return Err(serde::de::Error::custom(format!(
                "unknown schema {}",
                repr.schema
            )));
        }
        let mut c = ChainComplex::new(repr.coefficient);
        for deg in repr.degrees {
            if deg.labels.len() != deg.rank {
                return Err(serde::de::Error::custom("rank/labels mismatch"));
            }
            c.add_degree(deg.n, deg.labels);
        }
        for diff in repr.differentials {
            let rows = c.rank(diff.n - 1);
            let cols = c.rank(diff.n);
            let mut trip = Vec::with_capacity(diff.triplets.len());
            for (r, col, v) in diff.triplets {
                let v: BigInt = v.parse().map_err(serde::de::Error::custom)?;
                if v.is_zero() {
                    return Err(serde::de::Error::custom("stored zero entry"));
                }
                trip.push((r, col, v));
            }
            let m = SparseIntMatrix::from_triplets(rows, cols, trip);
            c.set_differential(diff.n, m);
        }
        Ok(c)
    }
}

/// Two-term complex (Z --k--> Z)-style helper, used all over the tests.
pub fn two_term(coefficient: Coefficient, top_degree: i64, matrix: SparseIntMatrix) -> ChainComplex {
    let mut c = ChainComplex::new(coefficient);
    c.add_degree_anon(top_degree, matrix.cols());
    c.add_degree_anon(top_degree - 1, matrix.rows());
    c.set_differential(top_degree, matrix);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn cokernel_of_times_two() {
        // Z --2--> Z in degrees 1, 0; H_0 = Z/2, H_1 = 0
        let c = two_term(Coefficient::Z, 1, SparseIntMatrix::from_dense(1, 1, &[2]));
        c.validate().unwrap();
        assert_eq!(c.homology(0), FGAbGroup::cyclic(2));
        assert_eq!(c.homology(1), FGAbGroup::zero());
    }

    #[test]
    fn dual_of_times_two() {
        let c = two_term(Coefficient::Z, 1, SparseIntMatrix::from_dense(1, 1, &[2]));
        let d = c.dualize();
        d.validate().unwrap();
        // H^0 = 0, H^1 = Z/2 by universal coefficients
        assert_eq!(c.cohomology(0), FGAbGroup::zero());
        assert_eq!(c.cohomology(1), FGAbGroup::cyclic(2));
        // dualize twice restores ranks and differential SNF
        let dd = d.dualize();
        assert_eq!(dd.rank(0), c.rank(0));
        assert_eq!(dd.rank(1), c.rank(1));
        let s1 = snf::snf(&c.differential(1), false, false).invariants();
        let s2 = snf::snf(&dd.differential(1), false, false).invariants();
        assert_eq!(s1, s2);
    }

    #[test]
    fn homology_mod_m() {
        // Z/4 complex: (Z/4) --2--> (Z/4), H_0 = Z/2, H_1 = Z/2
        let c = two_term(
            Coefficient::Zmod(4),
            1,
            SparseIntMatrix::from_dense(1, 1, &[2]),
        );
        assert_eq!(c.homology(0), FGAbGroup::cyclic(2));
        assert_eq!(c.homology(1), FGAbGroup::cyclic(2));
    }

    #[test]
    fn homology_free_part() {
        // 0 -> Z^2 with zero differential
        let mut c = ChainComplex::new(Coefficient::Z);
        c.add_degree_anon(0, 2);
        assert_eq!(c.homology(0), FGAbGroup::free(2));
    }

    #[test]
    fn validate_catches_nonzero_square() {
        let mut c = ChainComplex::new(Coefficient::Z);
        c.add_degree_anon(0, 1);
        c.add_degree_anon(1, 1);
        c.add_degree_anon(2, 1);
        c.set_differential(1, SparseIntMatrix::from_dense(1, 1, &[1]));
        c.set_differential(2, SparseIntMatrix::from_dense(1, 1, &[1]));
        assert!(c.validate().is_err());
    }

    #[test]
    fn json_round_trip_exact() {
        let mut c = two_term(
            Coefficient::Zmod(6),
            3,
            SparseIntMatrix::from_dense(2, 2, &[1, 2, 3, 4]),
        );
        c.degrees.get_mut(&3).unwrap().labels = vec!["a".into(), "b".into()];
        let json = serde_json::to_string(&c).unwrap();
        let c2: ChainComplex = serde_json::from_str(&json).unwrap();
        let json2 = serde_json::to_string(&c2).unwrap();
        assert_eq!(json, json2);
        assert_eq!(c2.differential(3).get(1, 0), BigInt::from(3));
    }

    #[test]
    fn homology_invariant_under_basis_permutation() {
        // permuting the basis of the middle degree leaves homology unchanged
        let d2 = SparseIntMatrix::from_dense(2, 3, &[2, 0, 4, 0, 6, 6]);
        let d1 = SparseIntMatrix::from_dense(1, 2, &[0, 0]);
        let mut c = ChainComplex::new(Coefficient::Z);
        c.add_degree_anon(2, 3);
        c.add_degree_anon(1, 2);
        c.add_degree_anon(0, 1);
        c.set_differential(2, d2.clone());
        c.set_differential(1, d1.clone());
        let h = c.homology(1);
        // swap the two basis vectors of degree 1
        let p = SparseIntMatrix::from_dense(2, 2, &[0, 1, 1, 0]);
        let mut c2 = c.clone();
        c2.set_differential(2, p.mul(&d2));
        c2.set_differential(1, d1.mul(&p));
        assert_eq!(c2.homology(1), h);
    }
}
