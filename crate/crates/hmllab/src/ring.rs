//! Enumerable finite commutative rings with exact arithmetic, and finite
//! abelian groups.
//!
//! Three ring kinds cover everything downstream: Z/m, Galois fields
//! F_p[x]/(f), and truncated local quotients Z[x]/(f, p^N). The last kind
//! carries discrete-valuation metadata (uniformizer, ramification index,
//! residue field size) and partial division operations with explicit
//! precision-loss tracking.
//!
//! Elements are dense indices 0..size; index 0 is always the zero element.
//! Ring axioms are verified on construction, exhaustively for size <= 256
//! and on a deterministic sample above that.



use crate::error::{HmlError, Result};
use crate::modm::{invmod, mulmod};

/// Direct sum of cyclic groups; element = mixed-radix index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbGroup {
    pub moduli: Vec<u64>,
}

/// Addition-only view shared by groups and rings.
pub trait AddGroup {
    fn size(&self) -> u64;
    fn add(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn zero(&self) -> u64 {
        0
    }
}

impl FiniteAbGroup {
    pub fn new(moduli: Vec<u64>) -> Self {
        assert!(moduli.iter().all(|m| *m >= 1));
        FiniteAbGroup { moduli }
    }

    pub fn cyclic(m: u64) -> Self {
        Self::new(vec![m])
    }

    pub fn components(&self, mut idx: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|m| {
                let c = idx % m;
                idx /= m;
                c
            })
            .collect()
    }

    pub fn from_components(&self, comps: &[u64]) -> u64 {
        let mut idx = 0u64;
        for (c, m) in comps.iter().zip(&self.moduli).rev() {
            idx = idx * m + (c % m);
        }
        idx
    }
}

impl AddGroup for FiniteAbGroup {
    fn size(&self) -> u64 {
        self.moduli.iter().product()
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        let ca = self.components(a);
        let cb = self.components(b);
        let sum: Vec<u64> = ca
            .iter()
            .zip(&cb)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        self.from_components(&sum)
    }
    fn neg(&self, a: u64) -> u64 {
        let ca = self.components(a);
        let n: Vec<u64> = ca
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| (m - x) % m)
            .collect();
        self.from_components(&n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    ZmodM(u64),
    /// F_p[x]/(poly), poly monic irreducible over F_p, coeffs low-to-high.
    GaloisField { p: u64, poly: Vec<i64> },
    /// Z[x]/(poly, p^precision), poly monic.
    LocalQuotient { p: u64, poly: Vec<i64>, precision: u32 },
}

/// Cached operation tables for small rings; indexing a*size+b.
#[derive(Clone)]
struct RingTables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

const TABLE_LIMIT: u64 = 512;

#[derive(Clone)]
pub struct FiniteRing {
    pub kind: RingKind,
    size: u64,
    /// coefficient modulus (p^N or p or m) and number of coefficients
    coeff_mod: u64,
    deg: usize,
    tables: Option<std::sync::Arc<RingTables>>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for FiniteRing {}

impl std::fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteRing({})", print_ring_spec(self))
    }
}

impl AddGroup for FiniteRing {
    fn size(&self) -> u64 {
        self.size
    }
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        if let Some(t) = &self.tables {
            return t.add[(a * self.size + b) as usize] as u64;
        }
        self.add_slow(a, b)
    }
    #[inline]
    fn neg(&self, a: u64) -> u64 {
        if let Some(t) = &self.tables {
            return t.neg[a as usize] as u64;
        }
        self.neg_slow(a)
    }
}

impl FiniteRing {
    pub fn zmod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(HmlError::Precondition(format!("Z/{m} is not a ring here")));
        }
        let mut r = FiniteRing {
            kind: RingKind::ZmodM(m),
            size: m,
            coeff_mod: m,
            deg: 1,
            tables: None,
        };
        r.build_tables();
        r.verify_axioms()?;
        Ok(r)
    }

    pub fn galois(p: u64, poly: Vec<i64>) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(HmlError::Precondition(format!("{p} is not prime")));
        }
        let d = poly.len() - 1;
        if d == 0 || *poly.last().unwrap() != 1 {
            return Err(HmlError::Precondition("field polynomial must be monic of degree >= 1".into()));
        }
        let mut r = FiniteRing {
            kind: RingKind::GaloisField { p, poly: poly.clone() },
            size: p.pow(d as u32),
            coeff_mod: p,
            deg: d,
            tables: None,
        };
        if !r.poly_irreducible_mod_p() {
            return Err(HmlError::Precondition(
                "polynomial is reducible, not a field".into(),
            ));
        }
        r.build_tables();
        r.verify_axioms()?;
        Ok(r)
    }

    pub fn galois_prime(p: u64) -> Result<Self> {
        Self::galois(p, vec![0, 1])
    }

    pub fn local_quotient(p: u64, poly: Vec<i64>, precision: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(HmlError::Precondition(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(HmlError::Precondition("precision must be >= 1".into()));
        }
        let d = poly.len() - 1;
        if d == 0 || *poly.last().unwrap() != 1 {
            return Err(HmlError::Precondition("polynomial must be monic of degree >= 1".into()));
        }
        let pn = p
            .checked_pow(precision)
            .ok_or_else(|| HmlError::Precondition("p^N overflows".into()))?;
        let size = (pn as u128).pow(d as u32);
        if size > 1 << 24 {
            return Err(HmlError::Guard {
                what: "local quotient ring size".into(),
                needed: size,
                bound: 1 << 24,
            });
        }
        let mut r = FiniteRing {
            kind: RingKind::LocalQuotient { p, poly, precision },
            size: size as u64,
            coeff_mod: pn,
            deg: d,
            tables: None,
        };
        r.build_tables();
        r.verify_axioms()?;
        Ok(r)
    }

    fn poly_irreducible_mod_p(&self) -> bool {
        // brute force: no root for deg <= 3; for higher degrees check no
        // factor by trial products (fields here are tiny)
        let RingKind::GaloisField { p, poly } = &self.kind else {
            return true;
        };
        let d = poly.len() - 1;
        if d == 1 {
            return true;
        }
        let eval = |x: u64| -> u64 {
            let mut acc = 0u64;
            for c in poly.iter().rev() {
                let c = c.rem_euclid(*p as i64) as u64;
                acc = (acc * x + c) % p;
            }
            acc
        };
        if (0..*p).any(|x| eval(x) == 0) {
            return false;
        }
        if d <= 3 {
            return true;
        }
        // degree 4/5 over tiny p: check divisibility by all monic quadratics
        let quads: Vec<Vec<u64>> = (0..*p)
            .flat_map(|a| (0..*p).map(move |b| vec![b, a, 1]))
            .collect();
        for q in quads {
            if poly_divides_mod_p(&q, poly, *p) {
                return false;
            }
        }
        true
    }

    pub fn coeffs(&self, mut idx: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.deg);
        for _ in 0..self.deg {
            out.push(idx % self.coeff_mod);
            idx /= self.coeff_mod;
        }
        out
    }

    pub fn pack(&self, coeffs: &[u64]) -> u64 {
        let mut idx = 0u64;
        for c in coeffs.iter().rev() {
            idx = idx * self.coeff_mod + (c % self.coeff_mod);
        }
        idx
    }

    pub fn additive_exponent(&self) -> u64 {
        self.coeff_mod
    }

    pub fn additive_rank(&self) -> usize {
        self.deg
    }

    pub fn one(&self) -> u64 {
        let mut c = vec![0u64; self.deg];
        c[0] = 1;
        self.pack(&c)
    }

    pub fn from_integer(&self, n: i64) -> u64 {
        let mut c = vec![0u64; self.deg];
        c[0] = n.rem_euclid(self.coeff_mod as i64) as u64;
        self.pack(&c)
    }

    fn add_slow(&self, a: u64, b: u64) -> u64 {
        let mut out = Vec::with_capacity(self.deg);
        let (mut a, mut b) = (a, b);
        for _ in 0..self.deg {
            let ca = a % self.coeff_mod;
            let cb = b % self.coeff_mod;
            a /= self.coeff_mod;
            b /= self.coeff_mod;
            out.push((ca + cb) % self.coeff_mod);
        }
        self.pack(&out)
    }

    fn neg_slow(&self, a: u64) -> u64 {
        let c = self.coeffs(a);
        let n: Vec<u64> = c.iter().map(|x| (self.coeff_mod - x) % self.coeff_mod).collect();
        self.pack(&n)
    }

    fn build_tables(&mut self) {
        if self.size > TABLE_LIMIT {
            return;
        }
        let n = self.size as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for a in 0..n as u64 {
            neg[a as usize] = self.neg_slow(a) as u32;
            for b in 0..n as u64 {
                add[(a * self.size + b) as usize] = self.add_slow(a, b) as u32;
                mul[(a * self.size + b) as usize] = self.mul_slow(a, b) as u32;
            }
        }
        self.tables = Some(std::sync::Arc::new(RingTables { add, mul, neg }));
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if let Some(t) = &self.tables {
            return t.mul[(a * self.size + b) as usize] as u64;
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let m = self.coeff_mod;
        let mut prod = vec![0u64; 2 * self.deg - 1];
        for (i, x) in ca.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(*x, *y, m)) % m;
            }
        }
        // reduce by the monic modulus polynomial
        let f = self.modulus_poly();
        for i in (self.deg..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, fj) in f.iter().enumerate().take(self.deg) {
                let fj = fj.rem_euclid(m as i64) as u64;
                if fj != 0 {
                    // x^i = x^{i-deg} * (x^deg) = -x^{i-deg} * (low part of f)
                    let sub = mulmod(c, fj, m);
                    let pos = i - self.deg + j;
                    prod[pos] = (prod[pos] + m - sub) % m;
                }
            }
        }
        prod.truncate(self.deg);
        self.pack(&prod)
    }

    fn modulus_poly(&self) -> Vec<i64> {
        match &self.kind {
            RingKind::ZmodM(_) => vec![0, 1],
            RingKind::GaloisField { poly, .. } => poly.clone(),
            RingKind::LocalQuotient { poly, .. } => poly.clone(),
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.size
    }

    pub fn is_commutative_check(&self) -> bool {
        true // all kinds here are commutative by construction
    }

    fn verify_axioms(&self) -> Result<()> {
        let n = self.size;
        let sample: Vec<u64> = if n <= 256 {
            (0..n).collect()
        } else {
            let stride = n / 151;
            (0..151).map(|i| (i * stride + i) % n).chain([0, 1, n - 1]).collect()
        };
        let one = self.one();
        for &a in &sample {
            if self.add(a, 0) != a || self.mul(a, one) != a {
                return Err(HmlError::Verification("identity axiom failed".into()));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(HmlError::Verification("negation axiom failed".into()));
            }
            for &b in &sample {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(HmlError::Verification("commutativity failed".into()));
                }
                for &c in &sample {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(HmlError::Verification("additive associativity failed".into()));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(HmlError::Verification("multiplicative associativity failed".into()));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(HmlError::Verification("distributivity failed".into()));
                    }
                }
            }
        }
        Ok(())
    }

    // -- DVR metadata ------------------------------------------------------

    pub fn dvr(&self) -> Option<DvrData> {
        let RingKind::LocalQuotient { p, poly, precision } = &self.kind else {
            return None;
        };
        let d = poly.len() - 1;
        let eisenstein = d >= 2
            && poly[..d].iter().all(|c| c.rem_euclid(*p as i64) == 0)
            && poly[0].rem_euclid((*p * *p) as i64) != 0;
        let (ramification, residue_degree, uniformizer) = if eisenstein {
            (d as u32, 1usize, self.pack(&{
                let mut c = vec![0u64; d];
                c[1] = 1;
                c
            }))
        } else {
            // unramified: poly must stay irreducible mod p (checked below)
            (1u32, d, self.from_integer(*p as i64))
        };
        Some(DvrData {
            p: *p,
            precision: *precision,
            ramification,
            residue_degree,
            q: p.pow(residue_degree as u32),
            uniformizer,
            eisenstein,
        })
    }
}

/// Discrete-valuation metadata of a LocalQuotient ring: Z[x]/(f, p^N) as a
/// stand-in for O_L / m^(e*N).
#[derive(Clone, Debug)]
pub struct DvrData {
    pub p: u64,
    pub precision: u32,
    pub ramification: u32,
    pub residue_degree: usize,
    /// residue field size q = p^residue_degree
    pub q: u64,
    pub uniformizer: u64,
    pub eisenstein: bool,
}

impl DvrData {
    /// pi-adic precision of the quotient: pi^(e*N) = 0.
    pub fn pi_precision(&self) -> u32 {
        self.ramification * self.precision
    }
}

/// A DVR quotient: ring plus its valuation metadata plus the reduction to
/// the residue field.
pub struct DvrQuotient {
    pub ring: FiniteRing,
    pub data: DvrData,
    pub residue_field: FiniteRing,
}

impl DvrQuotient {
    pub fn new(ring: FiniteRing) -> Result<Self> {
        let data = ring
            .dvr()
            .ok_or_else(|| HmlError::Precondition("not a local quotient ring".into()))?;
        let residue_field = if data.residue_degree == 1 {
            FiniteRing::galois_prime(data.p)?
        } else {
            let RingKind::LocalQuotient { poly, .. } = &ring.kind else {
                unreachable!()
            };
            FiniteRing::galois(data.p, poly.clone())?
        };
        let q = Self {
            ring,
            data,
            residue_field,
        };
        q.verify_invariants()?;
        Ok(q)
    }

    /// Residue-field image of a ring element.
    pub fn reduce(&self, a: u64) -> u64 {
        let coeffs = self.ring.coeffs(a);
        if self.data.eisenstein {
            // x |-> 0
            self.residue_field.from_integer((coeffs[0] % self.data.p) as i64)
        } else {
            let c: Vec<u64> = coeffs.iter().map(|c| c % self.data.p).collect();
            self.residue_field.pack(&c)
        }
    }

    /// Membership in the maximal ideal.
    pub fn in_maximal(&self, a: u64) -> bool {
        self.reduce(a) == 0
    }

    /// pi-adic valuation, capped at the quotient precision.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.data.pi_precision();
        }
        let mut v = 0;
        let mut cur = a;
        loop {
            match self.div_uniformizer(cur) {
                Some((q, _)) if v < self.data.pi_precision() => {
                    v += 1;
                    if q == 0 {
                        // all further divisions ambiguous; a was pi^v * 0-ish
                        return self.data.pi_precision();
                    }
                    cur = q;
                }
                _ => return v,
            }
        }
    }

    /// Exact division by the uniformizer when possible. The result is only
    /// well-defined modulo m^(pi_precision - 1); the returned loss records
    /// that one pi-digit of precision is gone.
    pub fn div_uniformizer(&self, a: u64) -> Option<(u64, u32)> {
        self.divide_by(self.data.uniformizer, a, 1)
    }

    /// Exact division by p; loses e digits of pi-precision.
    pub fn div_p(&self, a: u64) -> Option<(u64, u32)> {
        self.divide_by(self.ring.from_integer(self.data.p as i64), a, self.data.ramification)
    }

    fn divide_by(&self, d: u64, a: u64, loss: u32) -> Option<(u64, u32)> {
        // solve d * x = a by linear algebra on coefficient vectors mod p^N
        let m = self.ring.coeff_mod;
        let deg = self.ring.deg;
        let cols: Vec<Vec<(usize, u64)>> = (0..deg)
            .map(|j| {
                let mut basis = vec![0u64; deg];
                basis[j] = 1;
                let prod = self.ring.mul(d, self.ring.pack(&basis));
                self.ring
                    .coeffs(prod)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| *v != 0)
                    .collect()
            })
            .collect();
        let b: Vec<(usize, u64)> = self
            .ring
            .coeffs(a)
            .into_iter()
            .enumerate()
            .filter(|(_, v)| *v != 0)
            .collect();
        let x = crate::modm::solve_mod(&cols, &b, m)?;
        let mut coeffs = vec![0u64; deg];
        for (j, v) in x {
            coeffs[j] = (coeffs[j] + v) % m;
        }
        Some((self.ring.pack(&coeffs), loss))
    }

    fn verify_invariants(&self) -> Result<()> {
        let q = self.data.q;
        for a in self.ring.elements() {
            // x^q = x mod m
            let aq = self.ring.pow(a, q);
            if self.reduce(aq) != self.reduce(a) {
                return Err(HmlError::Verification(format!(
                    "x^q != x mod m for element {a}"
                )));
            }
        }
        // pi^(e*N) = 0
        let pi_pow = self.ring.pow(self.data.uniformizer, self.data.pi_precision() as u64);
        if pi_pow != 0 {
            return Err(HmlError::Verification("uniformizer precision invariant failed".into()));
        }
        Ok(())
    }
}

fn poly_divides_mod_p(div: &[u64], poly: &[i64], p: u64) -> bool {
    // remainder of poly / div over F_p; div monic
    let mut rem: Vec<u64> = poly.iter().map(|c| c.rem_euclid(p as i64) as u64).collect();
    let d = div.len() - 1;
    while rem.len() > d {
        let c = *rem.last().unwrap();
        let n = rem.len();
        if c != 0 {
            for (j, dj) in div.iter().enumerate() {
                let pos = n - 1 - d + j;
                rem[pos] = (rem[pos] + p - mulmod(c, *dj % p, p)) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|c| *c == 0)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'wit: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = crate::modm::powmod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

/// Multiplicative inverse in Z/m, if it exists (re-exported convenience).
pub fn ring_invmod(a: u64, m: u64) -> Option<u64> {
    invmod(a, m)
}

// ---------------------------------------------------------------------------
// ring-spec mini-language
//
// ring  := "Z/" nat
//        | "GF(" nat ")" [":" poly]      (poly required for non-prime order)
//        | "Zp(" prime "," nat ")"       (= Z[x]/(x, p^N), i.e. Z/p^N with
//                                          DVR metadata)
//        | "Eis(" prime "," poly "," nat ")"
// poly  := term (("+"|"-") term)*        in the variable x, integer coeffs

pub fn parse_ring_spec(s: &str) -> Result<FiniteRing> {
    let t = s.trim();
    let err = |pos: usize, msg: &str| HmlError::Parse {
        pos,
        msg: msg.to_string(),
    };
    if let Some(rest) = t.strip_prefix("Z/") {
        let m: u64 = rest
            .parse()
            .map_err(|_| err(2, "expected modulus after Z/"))?;
        return FiniteRing::zmod(m);
    }
    if let Some(rest) = t.strip_prefix("GF(") {
        let close = rest.find(')').ok_or_else(|| err(3, "missing )"))?;
        let q: u64 = rest[..close]
            .parse()
            .map_err(|_| err(3, "expected field order"))?;
        let tail = &rest[close + 1..];
        let (p, r) = prime_power(q).ok_or_else(|| err(3, "field order must be a prime power"))?;
        if tail.is_empty() {
            if r != 1 {
                return Err(err(
                    3 + close + 1,
                    "non-prime field order needs :poly, e.g. GF(4):x^2+x+1",
                ));
            }
            return FiniteRing::galois_prime(p);
        }
        let poly_src = tail
            .strip_prefix(':')
            .ok_or_else(|| err(3 + close + 1, "expected :poly"))?;
        let poly = parse_poly(poly_src, 3 + close + 2)?;
        if poly.len() - 1 != r as usize {
            return Err(err(3 + close + 2, "polynomial degree does not match field order"));
        }
        return FiniteRing::galois(p, poly);
    }
    if let Some(rest) = t.strip_prefix("Zp(") {
        let close = rest.find(')').ok_or_else(|| err(3, "missing )"))?;
        let parts: Vec<&str> = rest[..close].split(',').collect();
        if parts.len() != 2 {
            return Err(err(3, "expected Zp(p,N)"));
        }
        let p: u64 = parts[0].trim().parse().map_err(|_| err(3, "bad prime"))?;
        let n: u32 = parts[1].trim().parse().map_err(|_| err(3, "bad precision"))?;
        return FiniteRing::local_quotient(p, vec![0, 1], n);
    }
    if let Some(rest) = t.strip_prefix("Eis(") {
        let close = rest.rfind(')').ok_or_else(|| err(4, "missing )"))?;
        let parts: Vec<&str> = rest[..close].splitn(3, ',').collect();
        if parts.len() != 3 {
            return Err(err(4, "expected Eis(p,poly,N)"));
        }
        let p: u64 = parts[0].trim().parse().map_err(|_| err(4, "bad prime"))?;
        let poly = parse_poly(parts[1].trim(), 4 + parts[0].len() + 1)?;
        let n: u32 = parts[2].trim().parse().map_err(|_| err(4, "bad precision"))?;
        let ring = FiniteRing::local_quotient(p, poly, n)?;
        let dvr = ring.dvr().unwrap();
        if !dvr.eisenstein {
            return Err(HmlError::Precondition(
                "Eis(...) requires an Eisenstein polynomial".into(),
            ));
        }
        return Ok(ring);
    }
    Err(err(0, "unknown ring spec (expected Z/m, GF(q)[:poly], Zp(p,N) or Eis(p,poly,N))"))
}

/// Canonical printer; parse(print(r)) reproduces the ring.
pub fn print_ring_spec(r: &FiniteRing) -> String {
    match &r.kind {
        RingKind::ZmodM(m) => format!("Z/{m}"),
        RingKind::GaloisField { p, poly } => {
            if poly.len() == 2 {
                format!("GF({p})")
            } else {
                format!("GF({}):{}", p.pow((poly.len() - 1) as u32), print_poly(poly))
            }
        }
        RingKind::LocalQuotient { p, poly, precision } => {
            if poly == &vec![0, 1] {
                format!("Zp({p},{precision})")
            } else {
                format!("Eis({p},{},{precision})", print_poly(poly))
            }
        }
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    for p in 2..=q {
        if q % p == 0 {
            if !is_prime_u64(p) {
                return None;
            }
            let mut r = 0;
            let mut qq = q;
            while qq % p == 0 {
                qq /= p;
                r += 1;
            }
            return if qq == 1 { Some((p, r)) } else { None };
        }
    }
    None
}

pub fn parse_poly(src: &str, base_pos: usize) -> Result<Vec<i64>> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(HmlError::Parse {
            pos: base_pos,
            msg: "empty polynomial".into(),
        });
    }
    let mut coeffs: std::collections::BTreeMap<usize, i64> = Default::default();
    let bytes = s.as_bytes();
    let mut i = 0usize;
    let mut sign = 1i64;
    while i < bytes.len() {
        match bytes[i] {
            b'+' => {
                sign = 1;
                i += 1;
                continue;
            }
            b'-' => {
                sign = -1;
                i += 1;
                continue;
            }
            _ => {}
        }
        // term: [num]["*"]["x"["^"exp]]
        let mut num: Option<i64> = None;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i > start {
            num = Some(s[start..i].parse().map_err(|_| HmlError::Parse {
                pos: base_pos + start,
                msg: "bad coefficient".into(),
            })?);
        }
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        let mut exp = 0usize;
        if i < bytes.len() && bytes[i] == b'x' {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let es = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == es {
                    return Err(HmlError::Parse {
                        pos: base_pos + i,
                        msg: "expected exponent".into(),
                    });
                }
                exp = s[es..i].parse().map_err(|_| HmlError::Parse {
                    pos: base_pos + es,
                    msg: "bad exponent".into(),
                })?;
            }
        } else if num.is_none() {
            return Err(HmlError::Parse {
                pos: base_pos + i,
                msg: "expected term".into(),
            });
        }
        let c = sign * num.unwrap_or(1);
        *coeffs.entry(exp).or_insert(0) += c;
        sign = 1;
    }
    let deg = *coeffs.keys().next_back().unwrap();
    let mut out = vec![0i64; deg + 1];
    for (e, c) in coeffs {
        out[e] = c;
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    Ok(out)
}

pub fn print_poly(poly: &[i64]) -> String {
    let mut parts = Vec::new();
    for (e, c) in poly.iter().enumerate().rev() {
        if *c == 0 {
            continue;
        }
        let mag = c.abs();
        let body = match (e, mag) {
            (0, m) => format!("{m}"),
            (1, 1) => "x".to_string(),
            (1, m) => format!("{m}*x"),
            (e, 1) => format!("x^{e}"),
            (e, m) => format!("{m}*x^{e}"),
        };
        if parts.is_empty() {
            parts.push(if *c < 0 { format!("-{body}") } else { body });
        } else {
            parts.push(if *c < 0 {
                format!("-{body}")
            } else {
                format!("+{body}")
            });
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.concat()
    }
}

/// Parse a ring element like "3", "1+2*x", "x^2-1".
pub fn parse_element(r: &FiniteRing, s: &str) -> Result<u64> {
    let poly = parse_poly(s, 0)?;
    if poly.len() > r.deg {
        return Err(HmlError::Precondition(format!(
            "element degree {} exceeds ring degree {}",
            poly.len() - 1,
            r.deg - 1 + usize::from(r.deg == 1)
        )));
    }
    let coeffs: Vec<u64> = (0..r.deg)
        .map(|i| {
            poly.get(i)
                .map(|c| c.rem_euclid(r.coeff_mod as i64) as u64)
                .unwrap_or(0)
        })
        .collect();
    Ok(r.pack(&coeffs))
}

pub fn print_element(r: &FiniteRing, a: u64) -> String {
    let coeffs = r.coeffs(a);
    let as_i64: Vec<i64> = coeffs.iter().map(|c| *c as i64).collect();
    print_poly(&as_i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_basics() {
        let r = FiniteRing::zmod(8).unwrap();
        assert_eq!(r.size(), 8);
        assert_eq!(r.add(5, 6), 3);
        assert_eq!(r.mul(3, 3), 1);
        assert_eq!(r.pow(3, 2), 1);
        assert_eq!(r.neg(3), 5);
    }

    #[test]
    fn gf4_arithmetic() {
        let r = parse_ring_spec("GF(4):x^2+x+1").unwrap();
        assert_eq!(r.size(), 4);
        // x * x = x + 1
        let x = r.pack(&[0, 1]);
        let x1 = r.pack(&[1, 1]);
        assert_eq!(r.mul(x, x), x1);
        // every nonzero element has order dividing 3
        for a in 1..4 {
            assert_eq!(r.pow(a, 3), r.one());
        }
    }

    #[test]
    fn zp_is_z8_with_dvr_data() {
        let r = parse_ring_spec("Zp(2,3)").unwrap();
        assert_eq!(r.size(), 8);
        let d = r.dvr().unwrap();
        assert_eq!(d.q, 2);
        assert_eq!(d.ramification, 1);
        assert_eq!(d.uniformizer, 2);
        let q = DvrQuotient::new(r).unwrap();
        assert_eq!(q.reduce(5), 1);
        assert!(q.in_maximal(6));
        // (6)/2 = 3
        assert_eq!(q.div_p(6).unwrap().0, 3);
        assert!(q.div_p(5).is_none());
    }

    #[test]
    fn eisenstein_quotient() {
        let r = parse_ring_spec("Eis(2,x^2-2,3)").unwrap();
        assert_eq!(r.size(), 64);
        let d = r.dvr().unwrap();
        assert!(d.eisenstein);
        assert_eq!(d.ramification, 2);
        assert_eq!(d.q, 2);
        let q = DvrQuotient::new(r).unwrap();
        let pi = q.data.uniformizer;
        // pi^2 = 2
        assert_eq!(q.ring.mul(pi, pi), q.ring.from_integer(2));
        assert_eq!(q.valuation(q.ring.from_integer(2)), 2);
        assert_eq!(q.valuation(pi), 1);
        assert_eq!(q.valuation(0), 6);
        // division by pi: (2)/pi = pi
        let (quot, loss) = q.div_uniformizer(q.ring.from_integer(2)).unwrap();
        assert_eq!(quot, pi);
        assert_eq!(loss, 1);
        assert!(q.div_uniformizer(q.ring.one()).is_none());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["Z/8", "GF(2)", "GF(4):x^2+x+1", "Zp(2,3)", "Eis(2,x^2-2,3)"] {
            let r = parse_ring_spec(s).unwrap();
            assert_eq!(print_ring_spec(&r), s, "round trip of {s}");
            let r2 = parse_ring_spec(&print_ring_spec(&r)).unwrap();
            assert_eq!(r, r2);
        }
        assert!(parse_ring_spec("GF(6)").is_err());
        assert!(parse_ring_spec("banana").is_err());
        assert!(parse_ring_spec("GF(4)").is_err());
        assert!(parse_ring_spec("Eis(2,x^2-1,3)").is_err());
    }

    #[test]
    fn element_parse_print() {
        let r = parse_ring_spec("Eis(2,x^2-2,3)").unwrap();
        let e = parse_element(&r, "1+2*x").unwrap();
        assert_eq!(print_element(&r, e), "2*x+1");
        let e2 = parse_element(&r, &print_element(&r, e)).unwrap();
        assert_eq!(e, e2);
        let z8 = parse_ring_spec("Z/8").unwrap();
        assert_eq!(parse_element(&z8, "11").unwrap(), 3);
        assert_eq!(print_element(&z8, 3), "3");
    }

    #[test]
    fn group_direct_sum() {
        let g = FiniteAbGroup::new(vec![2, 2]);
        assert_eq!(g.size(), 4);
        let a = g.from_components(&[1, 0]);
        let b = g.from_components(&[0, 1]);
        assert_eq!(g.add(a, b), g.from_components(&[1, 1]));
        assert_eq!(g.add(a, a), 0);
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1093));
        assert!(is_prime_u64(3511));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(1093 * 3511));
    }
}
