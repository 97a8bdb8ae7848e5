//! Mixed complexes: a chain complex (differential b, homological degree -1)
//! together with an anticommuting second differential delta of degree +1.
//! Both squares and the anticommutator are checked by exact matrix
//! arithmetic on construction.

use std::collections::BTreeMap;

use crate::complex::{ChainComplex, Coefficient};
use crate::error::{HmlError, Result};
use crate::fgab::FGAbGroup;
use crate::matrix::SparseIntMatrix;

#[derive(Clone, Debug)]
pub struct MixedComplex {
    pub base: ChainComplex,
    /// delta_n : K_n -> K_{n+1}
    pub delta: BTreeMap<i64, SparseIntMatrix>,
    /// Degrees above this are truncated away, not genuinely zero: identity
    /// checks touching missing data are skipped and page trust flags treat
    /// the region as unavailable.
    pub truncated_above: Option<i64>,
}

impl MixedComplex {
    /// Construct and verify b^2 = 0, delta^2 = 0 and b delta + delta b = 0.
    pub fn new(base: ChainComplex, delta: BTreeMap<i64, SparseIntMatrix>) -> Result<Self> {
        let k = MixedComplex {
            base,
            delta,
            truncated_above: None,
        };
        k.validate()?;
        Ok(k)
    }

    /// A window truncation of a larger mixed complex: data at degrees > top
    /// is missing rather than zero.
    pub fn new_truncated(
        base: ChainComplex,
        delta: BTreeMap<i64, SparseIntMatrix>,
        top: i64,
    ) -> Result<Self> {
        let k = MixedComplex {
            base,
            delta,
            truncated_above: Some(top),
        };
        k.validate()?;
        Ok(k)
    }

    pub fn coefficient(&self) -> Coefficient {
        self.base.coefficient
    }

    pub fn delta_at(&self, n: i64) -> SparseIntMatrix {
        match self.delta.get(&n) {
            Some(d) => d.clone(),
            None => SparseIntMatrix::new(self.base.rank(n + 1), self.base.rank(n)),
        }
    }

    fn is_zero_mod(&self, m: &SparseIntMatrix) -> bool {
        match self.coefficient() {
            Coefficient::Z => m.is_zero(),
            Coefficient::Zmod(k) => m.to_mod(k).iter().all(|c| c.is_empty()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for (n, d) in &self.delta {
            if d.cols() != self.base.rank(*n) || d.rows() != self.base.rank(*n + 1) {
                return Err(HmlError::Invalid(format!(
                    "delta at degree {n} has shape {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    self.base.rank(*n + 1),
                    self.base.rank(*n)
                )));
            }
        }
        let degrees: Vec<i64> = self
            .base
            .degrees
            .keys()
            .chain(self.delta.keys())
            .copied()
            .collect();
        let avail = |d: i64| self.truncated_above.map(|t| d <= t).unwrap_or(true);
        for n in degrees {
            // delta^2 = 0 (only when degree n+2 data is genuine)
            let d = self.delta_at(n);
            if avail(n + 2) {
                let d2 = self.delta_at(n + 1);
                if !self.is_zero_mod(&d2.mul(&d)) {
                    return Err(HmlError::Verification(format!("delta^2 != 0 at degree {n}")));
                }
            }
            // b delta + delta b = 0 on K_n (needs degree n+1 data)
            if avail(n + 1) {
                let b_after = self.base.differential(n + 1); // K_{n+1} -> K_n
                let b_here = self.base.differential(n); // K_n -> K_{n-1}
                let delta_below = self.delta_at(n - 1); // K_{n-1} -> K_n
                let anti = b_after.mul(&d).sub(&delta_below.mul(&b_here).neg());
                if !self.is_zero_mod(&anti) {
                    return Err(HmlError::Verification(format!(
                        "b delta + delta b != 0 at degree {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Truncated Z/2-graded totalization over a finite degree window.
    pub fn tot_window(&self, mode: TotMode, window: (i64, i64)) -> Result<TotWindow> {
        let (lo, hi) = window;
        if lo > hi {
            return Err(HmlError::Precondition("empty totalization window".into()));
        }
        let mut even: Vec<(i64, usize)> = Vec::new();
        let mut odd: Vec<(i64, usize)> = Vec::new();
        for n in lo..=hi {
            let r = self.base.rank(n);
            for i in 0..r {
                if n.rem_euclid(2) == 0 {
                    even.push((n, i));
                } else {
                    odd.push((n, i));
                }
            }
        }
        let pos = |list: &[(i64, usize)], n: i64, i: usize| -> Option<usize> {
            list.binary_search(&(n, i)).ok()
        };
        // block map x in K_n |-> b(x) + delta(x), both components clipped
        // to the window
        let build = |src: &[(i64, usize)], dst: &[(i64, usize)]| -> SparseIntMatrix {
            let mut m = SparseIntMatrix::new(dst.len(), src.len());
            for (j, (n, i)) in src.iter().enumerate() {
                let b = self.base.differential(*n);
                for (r, v) in b.col(*i) {
                    if let Some(p) = pos(dst, *n - 1, *r) {
                        m.set(p, j, v.clone());
                    }
                }
                let d = self.delta_at(*n);
                for (r, v) in d.col(*i) {
                    if let Some(p) = pos(dst, *n + 1, *r) {
                        m.set(p, j, v.clone());
                    }
                }
            }
            m
        };
        let even_to_odd = build(&even, &odd);
        let odd_to_even = build(&odd, &even);

        // 2-periodic complex, unrolled to four degrees so both parities
        // have a well-defined homology slot: degrees 0 and 2 carry the even
        // part, 1 and 3 the odd part.
        let mut c = ChainComplex::new(self.coefficient());
        let label = |list: &[(i64, usize)]| -> Vec<String> {
            list.iter().map(|(n, i)| format!("K{n}[{i}]")).collect()
        };
        c.add_degree(0, label(&even));
        c.add_degree(1, label(&odd));
        c.add_degree(2, label(&even));
        c.add_degree(3, label(&odd));
        c.set_differential(1, odd_to_even.clone());
        c.set_differential(2, even_to_odd.clone());
        c.set_differential(3, odd_to_even.clone());
        c.validate()?;
        Ok(TotWindow {
            complex: c,
            mode,
            window,
            even,
            odd,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TotMode {
    Sum,
    Product,
}

/// The truncation of Tot(K, b + delta) over a finite window.
///
/// Homology of a truncation is a diagnostic, not the homology of the full
/// totalization: classes can be created or destroyed at the window edges.
/// Callers compare it against spectral-page reconstructions over the same
/// raw data, where the comparison is exact.
#[derive(Clone, Debug)]
pub struct TotWindow {
    /// 2-periodic unrolled representation. Degree 1 and 2 are the canonical
    /// homology slots for the odd and even parity respectively.
    pub complex: ChainComplex,
    pub mode: TotMode,
    pub window: (i64, i64),
    /// basis bookkeeping: position -> (homological degree, index in K_n)
    pub even: Vec<(i64, usize)>,
    pub odd: Vec<(i64, usize)>,
}

impl TotWindow {
    pub fn homology_even(&self) -> FGAbGroup {
        self.complex.homology(2)
    }

    pub fn homology_odd(&self) -> FGAbGroup {
        self.complex.homology(1)
    }

    /// Positions of the filtration step F_n (cohomological convention:
    /// F_n collects homological degrees >= -n of matching parity).
    pub fn filtration_positions(&self, n: i64) -> Vec<usize> {
        let list = if n.rem_euclid(2) == 0 { &self.even } else { &self.odd };
        list.iter()
            .enumerate()
            .filter(|(_, (deg, _))| -deg <= n)
            .map(|(p, _)| p)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::two_term;
    use num_bigint::BigInt;

    fn koszul(m: i64) -> MixedComplex {
        // K_0 = Z, K_1 = Z, b = 0, delta = multiplication by m
        let mut base = ChainComplex::new(Coefficient::Z);
        base.add_degree_anon(0, 1);
        base.add_degree_anon(1, 1);
        base.set_differential(1, SparseIntMatrix::new(1, 1));
        let mut delta = BTreeMap::new();
        delta.insert(0, SparseIntMatrix::from_dense(1, 1, &[m]));
        MixedComplex::new(base, delta).unwrap()
    }

    #[test]
    fn koszul_tot_window() {
        let k = koszul(5);
        let tot = k.tot_window(TotMode::Sum, (0, 1)).unwrap();
        assert_eq!(tot.homology_even(), FGAbGroup::zero());
        assert_eq!(tot.homology_odd(), FGAbGroup::cyclic(5));
    }

    #[test]
    fn delta_zero_is_just_b() {
        // delta = 0: totalization is the folded complex with differential b
        let base = two_term(Coefficient::Z, 1, SparseIntMatrix::from_dense(1, 1, &[3]));
        let k = MixedComplex::new(base, BTreeMap::new()).unwrap();
        let tot = k.tot_window(TotMode::Sum, (0, 1)).unwrap();
        assert_eq!(tot.homology_even(), FGAbGroup::cyclic(3));
        assert_eq!(tot.homology_odd(), FGAbGroup::zero());
    }

    #[test]
    fn constructor_rejects_bad_anticommutator() {
        // b: K_1 -> K_0 identity, delta: K_0 -> K_1 identity:
        // b delta + delta b = 2 id != 0
        let mut base = ChainComplex::new(Coefficient::Z);
        base.add_degree_anon(0, 1);
        base.add_degree_anon(1, 1);
        base.set_differential(1, SparseIntMatrix::from_dense(1, 1, &[1]));
        let mut delta = BTreeMap::new();
        delta.insert(0, SparseIntMatrix::from_dense(1, 1, &[1]));
        assert!(MixedComplex::new(base, delta).is_err());
    }

    #[test]
    fn empty_window_rejected() {
        let k = koszul(2);
        assert!(k.tot_window(TotMode::Sum, (3, 2)).is_err());
    }

    #[test]
    fn anticommutator_checked_at_every_degree() {
        // b = id, delta = id: bd + db = id on both degrees, rejected even
        // over Z/2 (and the failure is visible at degree 1 where no delta
        // is stored)
        let mut base = ChainComplex::new(Coefficient::Zmod(2));
        base.add_degree_anon(0, 1);
        base.add_degree_anon(1, 1);
        base.set_differential(1, SparseIntMatrix::from_dense(1, 1, &[1]));
        let mut delta = BTreeMap::new();
        delta.insert(0, SparseIntMatrix::from_dense(1, 1, &[1]));
        assert!(MixedComplex::new(base, delta).is_err());
        let _ = BigInt::from(0);
    }

    #[test]
    fn filtration_positions_follow_parity() {
        let k = koszul(3);
        let tot = k.tot_window(TotMode::Product, (0, 1)).unwrap();
        // cohomological degree 0 holds homological degree 0
        assert_eq!(tot.filtration_positions(0).len(), 1);
        // odd filtration step -1 holds homological degree 1
        assert_eq!(tot.filtration_positions(-1).len(), 1);
        assert_eq!(tot.filtration_positions(-3).len(), 0);
    }
}
