//! Exact linear algebra over Z/m with machine-word residues.
//!
//! The workhorse is a streaming column echelon in the style of the Howell
//! form: columns are inserted one at a time, pivots keep leading values
//! dividing m, and for every pivot with non-unit leading value g the
//! annihilator multiple (m/g) * pivot is folded back in. This makes span
//! membership and kernel extraction complete over Z/m even when m is not
//! prime, while never forming row transforms -- so matrices with millions of
//! columns stream through in bounded memory.

use num_integer::Integer;

pub type ModCol = Vec<(usize, u64)>;

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn negmod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Inverse of a unit mod m.
pub fn invmod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    let mut x = e.x % m as i128;
    if x < 0 {
        x += m as i128;
    }
    Some(x as u64)
}

/// A unit u with u*a = gcd(a, m) mod m.
fn unit_normalizer(a: u64, m: u64) -> u64 {
    let g = a.gcd(&m);
    let a1 = a / g;
    let m1 = m / g;
    if m1 == 1 {
        return 1;
    }
    let mut u = invmod(a1 % m1, m1).expect("a/g invertible mod m/g");
    // lift to a unit mod m
    while u.gcd(&m) != 1 {
        u += m1;
    }
    u
}

/// v += c * w over Z/m, sparse sorted representation.
pub fn mod_axpy(v: &mut ModCol, c: u64, w: &[(usize, u64)], m: u64) {
    if c == 0 || w.is_empty() {
        return;
    }
    let mut out: ModCol = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < v.len() || j < w.len() {
        if j >= w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push(v[i]);
            i += 1;
        } else if i >= v.len() || w[j].0 < v[i].0 {
            let val = mulmod(c, w[j].1, m);
            if val != 0 {
                out.push((w[j].0, val));
            }
            j += 1;
        } else {
            let val = addmod(v[i].1, mulmod(c, w[j].1, m), m);
            if val != 0 {
                out.push((v[i].0, val));
            }
            i += 1;
            j += 1;
        }
    }
    *v = out;
}

pub fn mod_scale(v: &[(usize, u64)], c: u64, m: u64) -> ModCol {
    let mut out = Vec::with_capacity(v.len());
    for (r, x) in v {
        let val = mulmod(c, *x, m);
        if val != 0 {
            out.push((*r, val));
        }
    }
    out
}

struct Pivot {
    col: ModCol,
    /// expression of `col` in terms of inserted columns (original index, coeff)
    combo: Option<Vec<(usize, u64)>>,
}

/// Streaming Howell-style column echelon over Z/m.
pub struct ModEchelon {
    m: u64,
    track: bool,
    pivots: std::collections::BTreeMap<usize, Pivot>,
    kernel: Vec<Vec<(usize, u64)>>,
    inserted: usize,
}

impl ModEchelon {
    pub fn new(m: u64, track_combos: bool) -> Self {
        assert!(m >= 2);
        ModEchelon {
            m,
            track: track_combos,
            pivots: std::collections::BTreeMap::new(),
            kernel: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// Pivot columns, by leading row.
    pub fn pivot_cols(&self) -> Vec<ModCol> {
        self.pivots.values().map(|p| p.col.clone()).collect()
    }

    /// Kernel combinations (in original column indices) discovered so far.
    /// Complete once every column of the matrix has been inserted.
    pub fn kernel_combos(&self) -> &[Vec<(usize, u64)>] {
        &self.kernel
    }

    /// Insert the next column of the matrix.
    pub fn insert(&mut self, col: ModCol) {
        let idx = self.inserted;
        self.inserted += 1;
        let combo = self.track.then(|| vec![(idx, 1u64)]);
        self.insert_with_combo(col, combo);
    }

    fn insert_with_combo(&mut self, mut v: ModCol, mut combo: Option<Vec<(usize, u64)>>) {
        let m = self.m;
        loop {
            let Some(&(lead, lead_val)) = v.first() else {
                if let Some(c) = combo {
                    if !c.is_empty() {
                        self.kernel.push(c);
                    }
                }
                return;
            };
            match self.pivots.get(&lead) {
                None => {
                    // normalize so the leading value divides m
                    let u = unit_normalizer(lead_val, m);
                    let g = lead_val.gcd(&m);
                    let v_n = mod_scale(&v, u, m);
                    let combo_n = combo.map(|c| mod_scale(&c, u, m));
                    debug_assert_eq!(v_n[0].1, g);
                    self.pivots.insert(
                        lead,
                        Pivot {
                            col: v_n.clone(),
                            combo: combo_n.clone(),
                        },
                    );
                    // Howell closure: fold in the annihilator multiple
                    if g > 1 {
                        let ann = m / g;
                        let tail = mod_scale(&v_n, ann, m);
                        let tail_combo = combo_n.map(|c| mod_scale(&c, ann, m));
                        debug_assert!(tail.first().map(|e| e.0 != lead).unwrap_or(true));
                        self.insert_with_combo(tail, tail_combo);
                    }
                    return;
                }
                Some(p) => {
                    let g = p.col[0].1;
                    if lead_val % g == 0 {
                        let q = negmod(lead_val / g, m);
                        let pc = p.col.clone();
                        let pcombo = p.combo.clone();
                        mod_axpy(&mut v, q, &pc, m);
                        if let (Some(c), Some(pc)) = (&mut combo, &pcombo) {
                            mod_axpy(c, q, pc, m);
                        }
                    } else {
                        // gcd combination becomes the new pivot
                        let e = (g as i128).extended_gcd(&(lead_val as i128));
                        let gg = e.gcd as u64;
                        let mi = m as i128;
                        let s = (e.x.rem_euclid(mi)) as u64;
                        let t = (e.y.rem_euclid(mi)) as u64;
                        let pc = p.col.clone();
                        let pcombo = p.combo.clone();

                        let mut newp = mod_scale(&pc, s, m);
                        mod_axpy(&mut newp, t, &v, m);
                        let newp_combo = if self.track {
                            let mut c = mod_scale(pcombo.as_ref().unwrap(), s, m);
                            mod_axpy(&mut c, t, combo.as_ref().unwrap(), m);
                            Some(c)
                        } else {
                            None
                        };
                        debug_assert_eq!(newp.first().map(|e| (e.0, e.1)), Some((lead, gg)));

                        // remainder with zero at the leading row
                        let mut rest = mod_scale(&v, g / gg, m);
                        mod_axpy(&mut rest, negmod(lead_val / gg, m), &pc, m);
                        let rest_combo = if self.track {
                            let mut c = mod_scale(combo.as_ref().unwrap(), g / gg, m);
                            mod_axpy(&mut c, negmod(lead_val / gg, m), pcombo.as_ref().unwrap(), m);
                            Some(c)
                        } else {
                            None
                        };

                        // re-insert the displaced pivot material
                        let u = unit_normalizer(gg, m);
                        let gnorm = gg.gcd(&m);
                        let newp_n = mod_scale(&newp, u, m);
                        let newp_combo_n = newp_combo.map(|c| mod_scale(&c, u, m));
                        self.pivots.insert(
                            lead,
                            Pivot {
                                col: newp_n.clone(),
                                combo: newp_combo_n.clone(),
                            },
                        );
                        if gnorm > 1 {
                            let ann = m / gnorm;
                            let tail = mod_scale(&newp_n, ann, m);
                            let tail_combo = newp_combo_n.map(|c| mod_scale(&c, ann, m));
                            self.insert_with_combo(tail, tail_combo);
                        }
                        v = rest;
                        combo = rest_combo;
                    }
                }
            }
        }
    }

    /// Reduce a vector against the echelon. Returns the residue and, when
    /// tracking, the expression of the removed part in original columns.
    pub fn reduce(&self, mut v: ModCol) -> (ModCol, Option<Vec<(usize, u64)>>) {
        let m = self.m;
        let mut expr: Option<Vec<(usize, u64)>> = self.track.then(Vec::new);
        loop {
            let Some(&(lead, lead_val)) = v.first() else {
                return (v, expr);
            };
            match self.pivots.get(&lead) {
                None => return (v, expr),
                Some(p) => {
                    let g = p.col[0].1;
                    if lead_val % g != 0 {
                        return (v, expr);
                    }
                    let q = lead_val / g;
                    mod_axpy(&mut v, negmod(q, m), &p.col, m);
                    if let (Some(e), Some(pc)) = (&mut expr, &p.combo) {
                        mod_axpy(e, q, pc, m);
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &ModCol) -> bool {
        self.reduce(v.clone()).0.is_empty()
    }
}

/// Kernel of the matrix given by `cols` acting (Z/m)^cols -> (Z/m)^rows.
/// Returns generators as dense-free sparse combos over column indices.
pub fn kernel_mod(cols: &[ModCol], m: u64) -> Vec<Vec<(usize, u64)>> {
    let mut ech = ModEchelon::new(m, true);
    for c in cols {
        ech.insert(c.clone());
    }
    ech.kernel_combos().to_vec()
}

/// One solution x of `cols * x = b` over Z/m, if any.
pub fn solve_mod(cols: &[ModCol], b: &ModCol, m: u64) -> Option<Vec<(usize, u64)>> {
    let mut ech = ModEchelon::new(m, true);
    for c in cols {
        ech.insert(c.clone());
    }
    let (residue, expr) = ech.reduce(b.clone());
    if residue.is_empty() {
        expr
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(cols: &[ModCol], x: &[(usize, u64)], m: u64) -> ModCol {
        let mut acc: ModCol = Vec::new();
        for (j, c) in x {
            mod_axpy(&mut acc, *c, &cols[*j], m);
        }
        acc
    }

    /// brute-force kernel over Z/m for tiny matrices
    fn kernel_brute(cols: &[ModCol], rows: usize, m: u64) -> Vec<Vec<u64>> {
        let n = cols.len();
        let mut out = Vec::new();
        let total = (m as u128).pow(n as u32);
        assert!(total <= 1 << 20);
        for code in 0..total {
            let mut x = vec![0u64; n];
            let mut c = code;
            for xi in x.iter_mut() {
                *xi = (c % m as u128) as u64;
                c /= m as u128;
            }
            let mut img = vec![0u64; rows];
            for (j, col) in cols.iter().enumerate() {
                for (r, v) in col {
                    img[*r] = addmod(img[*r], mulmod(x[j], *v, m), m);
                }
            }
            if img.iter().all(|v| *v == 0) {
                out.push(x);
            }
        }
        out
    }

    #[test]
    fn kernel_complete_non_prime() {
        for m in [4u64, 6, 8, 9, 12] {
            let cols: Vec<ModCol> = vec![
                vec![(0, 1), (1, 2)],
                vec![(0, 2)],
                vec![(1, 3 % m)],
                vec![(0, m - 1), (1, 1)],
            ];
            let gens = kernel_mod(&cols, m);
            // every generator really is in the kernel
            for g in &gens {
                assert!(apply(&cols, g, m).is_empty(), "m={m}");
            }
            // generated subgroup equals brute-force kernel
            let brute = kernel_brute(&cols, 2, m);
            let mut span = ModEchelon::new(m, false);
            for g in &gens {
                let mut dense: ModCol = g.clone();
                dense.sort_by_key(|e| e.0);
                span.insert(dense);
            }
            for x in &brute {
                let v: ModCol = x
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(i, v)| (i, *v))
                    .collect();
                assert!(span.contains(&v), "missing kernel elt {x:?} mod {m}");
            }
        }
    }

    #[test]
    fn solve_non_prime() {
        let m = 8;
        let cols: Vec<ModCol> = vec![vec![(0, 2)], vec![(0, 4), (1, 2)]];
        let b = vec![(0, 6), (1, 2)];
        let x = solve_mod(&cols, &b, m).unwrap();
        assert_eq!(apply(&cols, &x, m), b);
        assert!(solve_mod(&cols, &vec![(0, 1)], m).is_none());
        assert!(solve_mod(&cols, &vec![(1, 1)], m).is_none());
    }

    #[test]
    fn powmod_basics() {
        assert_eq!(powmod(2, 10, 1000), 24);
        assert_eq!(powmod(3, 0, 7), 1);
        // Wieferich congruence for 1093
        let p = 1093u64;
        assert_eq!(powmod(2, p - 1, p * p), 1);
    }
}
