//! Isomorphism types of finitely generated abelian groups.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// Invariant-factor form: free rank plus torsion d1 | d2 | ... with each
/// d_i >= 2. Equality of values is equality of isomorphism types.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FGAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl FGAbGroup {
    pub fn zero() -> Self {
        FGAbGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FGAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(m: u64) -> Self {
        assert!(m >= 2);
        FGAbGroup {
            free_rank: 0,
            torsion: vec![BigUint::from(m)],
        }
    }

    /// Build from a list of diagonal entries (SNF output plus free
    /// generators as zeros). Ones are dropped, zeros count toward the free
    /// rank, and the divisibility chain is checked.
    pub fn from_invariants<I: IntoIterator<Item = BigUint>>(free_rank: usize, factors: I) -> Self {
        let mut torsion: Vec<BigUint> = factors
            .into_iter()
            .filter(|d| !d.is_one() && *d != BigUint::default())
            .collect();
        torsion.sort();
        for w in torsion.windows(2) {
            debug_assert!(
                (&w[1] % &w[0]) == BigUint::default(),
                "invariant factors must form a divisibility chain"
            );
        }
        FGAbGroup { free_rank, torsion }
    }

    /// (Z/m)^n
    pub fn elementary(m: u64, n: usize) -> Self {
        FGAbGroup {
            free_rank: 0,
            torsion: vec![BigUint::from(m); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        Some(self.torsion.iter().product())
    }

    /// Direct sum.
    pub fn plus(&self, other: &FGAbGroup) -> FGAbGroup {
        // merging two invariant-factor lists in general requires primary
        // decomposition; we only need it for tests with coprime or equal
        // factors, so do it properly via prime powers.
        let mut primary: std::collections::BTreeMap<BigUint, Vec<u32>> = Default::default();
        for d in self.torsion.iter().chain(other.torsion.iter()) {
            for (p, e) in factor_biguint(d) {
                primary.entry(p).or_default().push(e);
            }
        }
        for v in primary.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        let max_len = primary.values().map(|v| v.len()).max().unwrap_or(0);
        let mut torsion = vec![BigUint::one(); max_len];
        for (p, exps) in primary {
            for (i, e) in exps.into_iter().enumerate() {
                // largest exponents go to the last invariant factor
                let slot = max_len - 1 - i;
                torsion[slot] *= p.pow(e);
            }
        }
        FGAbGroup::from_invariants(self.free_rank + other.free_rank, torsion)
    }
}

fn factor_biguint(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= n {
        if (&n % &p) == BigUint::default() {
            let mut e = 0u32;
            while (&n % &p) == BigUint::default() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

impl std::fmt::Debug for FGAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::fmt::Display for FGAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for FGAbGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            free_rank: usize,
            torsion: Vec<String>,
            display: &'a str,
        }
        Repr {
            free_rank: self.free_rank,
            torsion: self.torsion.iter().map(|d| d.to_string()).collect(),
            display: &self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FGAbGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            free_rank: usize,
            torsion: Vec<String>,
        }
        let r = Repr::deserialize(d)?;
        let torsion = r
            .torsion
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<BigUint>, _>>()?;
        Ok(FGAbGroup {
            free_rank: r.free_rank,
            torsion,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_eq() {
        assert_eq!(FGAbGroup::zero().to_string(), "0");
        assert_eq!(FGAbGroup::cyclic(2).to_string(), "Z/2");
        let g = FGAbGroup::from_invariants(1, vec![BigUint::from(2u32), BigUint::from(4u32)]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/4");
        assert_eq!(g, g.clone());
    }

    #[test]
    fn plus_merges_primary_parts() {
        let a = FGAbGroup::cyclic(2);
        let b = FGAbGroup::cyclic(3);
        assert_eq!(a.plus(&b), FGAbGroup::cyclic(6));
        let c = FGAbGroup::cyclic(2).plus(&FGAbGroup::cyclic(2));
        assert_eq!(c, FGAbGroup::elementary(2, 2));
        let d = FGAbGroup::cyclic(4).plus(&FGAbGroup::cyclic(6));
        assert_eq!(
            d,
            FGAbGroup::from_invariants(0, vec![BigUint::from(2u32), BigUint::from(12u32)])
        );
    }
}
