//! Presentations of subquotients span(gens)/span(rels) inside a free
//! ambient module over Z or Z/m. Relations must lie in the span of the
//! generators; the result is the isomorphism type.

use num_bigint::{BigInt, BigUint};

use crate::fgab::FGAbGroup;
use crate::matrix::{SparseCol, SparseIntMatrix};
use crate::modm::{self, ModCol, ModEchelon};
use crate::snf;

/// span(gens)/span(rels) in Z^ambient_dim.
pub fn subquotient_z(
    ambient_dim: usize,
    gens: &[SparseCol],
    rels: &[SparseCol],
) -> FGAbGroup {
    let g = gens.len();
    if g == 0 {
        return FGAbGroup::zero();
    }
    let gmat = {
        let mut m = SparseIntMatrix::new(ambient_dim, g);
        for (j, col) in gens.iter().enumerate() {
            m.set_col(j, col.clone());
        }
        m
    };
    // dependencies among the generators
    let mut rel_cols: Vec<SparseCol> = snf::kernel_z(&gmat);
    // the stated relations, in generator coordinates
    for r in rels {
        let y = snf::solve_z(&gmat, r).expect("relation must lie in the generator span");
        rel_cols.push(y);
    }
    let rel = {
        let mut m = SparseIntMatrix::new(g, rel_cols.len());
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
    FGAbGroup::from_invariants(g - res.rank, invariants)
}

/// span(gens)/span(rels) in (Z/m)^ambient_dim.
pub fn subquotient_mod(gens: &[ModCol], rels: &[ModCol], m: u64) -> FGAbGroup {
    let g = gens.len();
    if g == 0 {
        return FGAbGroup::zero();
    }
    let mut ech = ModEchelon::new(m, true);
    for gen in gens {
        ech.insert(gen.clone());
    }
    let mut rel_combos: Vec<Vec<(usize, u64)>> = ech.kernel_combos().to_vec();
    for r in rels {
        let (residue, expr) = ech.reduce(r.clone());
        assert!(residue.is_empty(), "relation must lie in the generator span");
        rel_combos.push(expr.unwrap());
    }
    // invariants of (Z/m)^g / <rel_combos> via Z-SNF of [rels | mI]
    let mut trip: Vec<(usize, usize, BigInt)> = Vec::new();
    for (j, r) in rel_combos.iter().enumerate() {
        for (i, v) in r {
            trip.push((*i, j, BigInt::from(*v)));
        }
    }
    for i in 0..g {
        trip.push((i, rel_combos.len() + i, BigInt::from(m)));
    }
    let relmat = SparseIntMatrix::from_triplets(g, rel_combos.len() + g, trip);
    let res = snf::snf(&relmat, false, false);
    let invariants: Vec<BigUint> = res
        .invariants()
        .into_iter()
        .map(|d| d.magnitude().clone())
        .collect();
    FGAbGroup::from_invariants(0, invariants)
}

/// Kernel generators of `matrix` restricted to the subgroup spanned by
/// `gens`: returns vectors in ambient coordinates spanning
/// ker(matrix) ∩ span(gens), assuming matrix maps the span into anywhere.
pub fn kernel_within_z(matrix: &SparseIntMatrix, gens: &[SparseCol]) -> Vec<SparseCol> {
    if gens.is_empty() {
        return Vec::new();
    }
    let g = gens.len();
    let composed = {
        let mut m = SparseIntMatrix::new(matrix.rows(), g);
        for (j, col) in gens.iter().enumerate() {
            m.set_col(j, matrix.mul_col(col));
        }
        m
    };
    let combos = snf::kernel_z(&composed);
    let gmat = {
        let mut m = SparseIntMatrix::new(matrix.cols(), g);
        for (j, col) in gens.iter().enumerate() {
            m.set_col(j, col.clone());
        }
        m
    };
    combos.into_iter().map(|c| gmat.mul_col(&c)).collect()
}

/// Mod-m version of `kernel_within_z`.
pub fn kernel_within_mod(
    matrix_cols: &[ModCol],
    gens: &[ModCol],
    m: u64,
) -> Vec<ModCol> {
    if gens.is_empty() {
        return Vec::new();
    }
    let composed: Vec<ModCol> = gens
        .iter()
        .map(|gcol| {
            let mut acc: ModCol = Vec::new();
            for (r, v) in gcol {
                modm::mod_axpy(&mut acc, *v, &matrix_cols[*r], m);
            }
            acc
        })
        .collect();
    let combos = modm::kernel_mod(&composed, m);
    combos
        .into_iter()
        .map(|c| {
            let mut acc: ModCol = Vec::new();
            for (j, v) in c {
                modm::mod_axpy(&mut acc, v, &gens[j], m);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn z_subquotient() {
        // <2e1, e2> / <4e1 + e2> in Z^2: quotient Z (e2 kills itself vs...)
        let gens = vec![
            vec![(0usize, BigInt::from(2))],
            vec![(1usize, BigInt::from(1))],
        ];
        let rels = vec![vec![(0usize, BigInt::from(4)), (1usize, BigInt::from(1))]];
        let h = subquotient_z(2, &gens, &rels);
        assert_eq!(h, FGAbGroup::free(1));
        // <e1>/<2e1> = Z/2
        let h2 = subquotient_z(
            1,
            &[vec![(0usize, BigInt::from(1))]],
            &[vec![(0usize, BigInt::from(2))]],
        );
        assert_eq!(h2, FGAbGroup::cyclic(2));
    }

    #[test]
    fn mod_subquotient() {
        // in (Z/8): <2> / <4> = Z/2
        let h = subquotient_mod(&[vec![(0usize, 2u64)]], &[vec![(0usize, 4u64)]], 8);
        assert_eq!(h, FGAbGroup::cyclic(2));
        // <1>/<0> = Z/8
        let h2 = subquotient_mod(&[vec![(0usize, 1u64)]], &[], 8);
        assert_eq!(h2, FGAbGroup::cyclic(8));
    }
}
