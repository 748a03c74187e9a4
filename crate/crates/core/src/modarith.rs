//! Arithmetic for 2×2 matrices over ℤ/nℤ, CRT splitting across coprime
//! moduli, and the Kronecker symbol.

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Prime factorization `n = ∏ p^k` as `(p, k)` pairs in increasing prime order.
pub fn factorize(n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut n = n;
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= n as u64 {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime-power factors of `n` in increasing prime order.
pub fn prime_powers(n: u32) -> Vec<u32> {
    factorize(n).into_iter().map(|(p, k)| p.pow(k)).collect()
}

pub fn prime_divisors(n: u32) -> Vec<u32> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut ds = vec![1u32];
    for (p, k) in factorize(n) {
        let current = ds.clone();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            ds.extend(current.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn euler_phi(n: u32) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, k)| (p as u64 - 1) * (p as u64).pow(k - 1))
        .product()
}

/// |GL₂(ℤ/nℤ)| = n⁴ ∏_{p|n} (1 − 1/p²)(1 − 1/p).
pub fn gl2_order(n: u32) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, k)| {
            let p = p as u64;
            let q = p.pow(4 * (k - 1));
            q * (p * p - 1) * (p * p - p)
        })
        .product()
}

/// |SL₂(ℤ/nℤ)| = |GL₂(ℤ/nℤ)| / φ(n).
pub fn sl2_order(n: u32) -> u64 {
    gl2_order(n) / euler_phi(n)
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let e = (a as i64).extended_gcd(&(n as i64));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(n as i64) as u64)
}

/// Units of ℤ/nℤ, ascending. For n = 1 the single residue 0 is a unit.
pub fn units(n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| u.gcd(&n) == 1).collect()
}

/// Solve x ≡ r1 (mod m1), x ≡ r2 (mod m2) for coprime m1, m2.
pub fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    let m = m1 * m2;
    let inv = mod_inverse(m1 % m2, m2).expect("moduli must be coprime");
    let t = ((r2 + m2 - r1 % m2) % m2) * inv % m2;
    (r1 + m1 * t) % m
}

/// Kronecker symbol (a / n).
pub fn kronecker(a: i64, n: i64) -> i32 {
    const TAB2: [i32; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let mut a = a as i128;
    let mut b = n as i128;
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while b % 2 == 0 {
        v += 1;
        b /= 2;
    }
    let mut k = if v % 2 == 0 {
        1
    } else {
        TAB2[(a & 7) as usize]
    };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        v = 0;
        while a % 2 == 0 {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// True when `d` is a fundamental discriminant (1 included).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    let squarefree = |m: i64| {
        let m = m.unsigned_abs();
        let mut p = 2u64;
        while p * p <= m {
            if m.is_multiple_of(p * p) {
                return false;
            }
            p += 1;
        }
        true
    };
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && squarefree(q)
        }
        _ => false,
    }
}

/// A 2×2 matrix `[[a, b], [c, d]]` over ℤ/nℤ with entries reduced into `[0, n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueMatrix {
    level: u32,
    e: [u32; 4],
}

impl ResidueMatrix {
    /// Build a matrix from integer entries `[a, b, c, d]` (row-major), reducing mod `level`.
    pub fn new(level: u32, entries: [i64; 4]) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidLevel(0));
        }
        let n = level as i64;
        let r = |x: i64| x.rem_euclid(n) as u32;
        Ok(Self {
            level,
            e: [r(entries[0]), r(entries[1]), r(entries[2]), r(entries[3])],
        })
    }

    /// Entries must already be reduced.
    pub(crate) fn from_reduced(level: u32, e: [u32; 4]) -> Self {
        debug_assert!(e.iter().all(|&x| x < level));
        Self { level, e }
    }

    pub fn identity(level: u32) -> Self {
        Self::scalar(level, 1)
    }

    pub fn minus_identity(level: u32) -> Self {
        Self::scalar(level, -1)
    }

    pub fn scalar(level: u32, k: i64) -> Self {
        let k = k.rem_euclid(level as i64) as u32;
        Self {
            level,
            e: [k, 0, 0, k],
        }
    }

    pub fn diagonal(level: u32, a: i64, d: i64) -> Self {
        Self::new(level, [a, 0, 0, d]).expect("level is positive")
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn entries(&self) -> [u32; 4] {
        self.e
    }

    pub fn det(&self) -> u32 {
        let n = self.level as u64;
        let [a, b, c, d] = self.e.map(|x| x as u64);
        ((a * d % n + n - b * c % n) % n) as u32
    }

    pub fn trace(&self) -> u32 {
        ((self.e[0] as u64 + self.e[3] as u64) % self.level as u64) as u32
    }

    pub fn is_invertible(&self) -> bool {
        self.level == 1 || (self.det() as u64).gcd(&(self.level as u64)) == 1
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.level)
    }

    /// Checked product.
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        Ok(self.mul_same(other))
    }

    #[inline]
    pub(crate) fn mul_same(&self, other: &Self) -> Self {
        debug_assert_eq!(self.level, other.level);
        let n = self.level as u64;
        let [a, b, c, d] = self.e.map(|x| x as u64);
        let [p, q, r, s] = other.e.map(|x| x as u64);
        Self {
            level: self.level,
            e: [
                ((a * p + b * r) % n) as u32,
                ((a * q + b * s) % n) as u32,
                ((c * p + d * r) % n) as u32,
                ((c * q + d * s) % n) as u32,
            ],
        }
    }

    /// Checked inverse.
    pub fn mat_inv(&self) -> Result<Self> {
        let n = self.level as u64;
        let det = self.det();
        let inv = mod_inverse(det as u64, n).ok_or(Error::NonInvertible {
            det,
            level: self.level,
        })?;
        let [a, b, c, d] = self.e.map(|x| x as u64);
        let neg = |x: u64| (n - x % n) % n;
        Ok(Self {
            level: self.level,
            e: [
                (d * inv % n) as u32,
                (neg(b) * inv % n) as u32,
                (neg(c) * inv % n) as u32,
                (a * inv % n) as u32,
            ],
        })
    }

    /// Inverse of a matrix known to be invertible.
    #[inline]
    pub(crate) fn inv(&self) -> Self {
        self.mat_inv().expect("group elements are invertible")
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::identity(self.level);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative order of an invertible matrix.
    pub fn order(&self) -> u64 {
        let id = Self::identity(self.level);
        let mut x = *self;
        let mut k = 1;
        while x != id {
            x = x.mul_same(self);
            k += 1;
        }
        k
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, g: &Self) -> Self {
        g.mul_same(self).mul_same(&g.inv())
    }

    pub fn transpose(&self) -> Self {
        Self {
            level: self.level,
            e: [self.e[0], self.e[2], self.e[1], self.e[3]],
        }
    }

    pub fn neg(&self) -> Self {
        let n = self.level;
        Self {
            level: n,
            e: self.e.map(|x| (n - x) % n),
        }
    }

    /// Reduction modulo a divisor of the level.
    pub fn reduce(&self, d: u32) -> Result<Self> {
        if d == 0 || !self.level.is_multiple_of(d) {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: d,
            });
        }
        Ok(self.reduce_unchecked(d))
    }

    #[inline]
    pub(crate) fn reduce_unchecked(&self, d: u32) -> Self {
        Self {
            level: d,
            e: self.e.map(|x| x % d),
        }
    }

    /// Some invertible matrix mod `target` (a multiple of the level) reducing to `self`.
    pub fn lift_invertible(&self, target: u32) -> Result<Self> {
        if !target.is_multiple_of(self.level) {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: target,
            });
        }
        if !self.is_invertible() {
            return Err(Error::NonInvertible {
                det: self.det(),
                level: self.level,
            });
        }
        let steps = target / self.level;
        let n = self.level;
        // Lifting one entry at a time suffices almost always; fall back to all four.
        for t in 0..steps.pow(4) {
            let mut k = t;
            let mut e = self.e;
            for slot in e.iter_mut() {
                *slot += (k % steps) * n;
                k /= steps;
            }
            let cand = Self::from_reduced(target, e);
            if cand.is_invertible() {
                return Ok(cand);
            }
        }
        unreachable!("reduction GL₂(ℤ/Mℤ) → GL₂(ℤ/mℤ) is surjective")
    }

    /// Dense code `((a·n + b)·n + c)·n + d`; lexicographic on entries.
    #[inline]
    pub fn code(&self) -> u64 {
        let n = self.level as u64;
        let [a, b, c, d] = self.e.map(|x| x as u64);
        ((a * n + b) * n + c) * n + d
    }

    #[inline]
    pub fn from_code(level: u32, code: u64) -> Self {
        let n = level as u64;
        let d = code % n;
        let c = (code / n) % n;
        let b = (code / (n * n)) % n;
        let a = code / (n * n * n);
        Self {
            level,
            e: [a as u32, b as u32, c as u32, d as u32],
        }
    }

    /// Split along pairwise-coprime moduli multiplying to the level, in the order given.
    pub fn crt_split(&self, moduli: &[u32]) -> Result<CrtSplit> {
        check_factorization(self.level, moduli)?;
        Ok(CrtSplit {
            moduli: moduli.to_vec(),
            components: moduli.iter().map(|&m| self.reduce_unchecked(m)).collect(),
        })
    }

    /// Split into prime-power components in increasing prime order.
    pub fn prime_power_split(&self) -> CrtSplit {
        self.crt_split(&prime_powers(self.level))
            .expect("prime-power factorization is admissible")
    }

    /// Combine `x` mod m1 and `y` mod m2 into a matrix mod m1·m2.
    pub fn crt_pair(x: &Self, y: &Self) -> Result<Self> {
        let (m1, m2) = (x.level, y.level);
        if m1.gcd(&m2) != 1 {
            return Err(Error::BadFactorization {
                n: m1 * m2,
                reason: format!("{m1} and {m2} are not coprime"),
            });
        }
        let e: [u32; 4] = std::array::from_fn(|i| {
            crt_pair(x.e[i] as u64, m1 as u64, y.e[i] as u64, m2 as u64) as u32
        });
        Ok(Self::from_reduced(m1 * m2, e))
    }
}

impl Mul for ResidueMatrix {
    type Output = ResidueMatrix;

    /// Unchecked product; operands at different levels are a logic error.
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.level, rhs.level, "level mismatch in product");
        self.mul_same(&rhs)
    }
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.level)
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn check_factorization(n: u32, moduli: &[u32]) -> Result<()> {
    let bad = |reason: String| Error::BadFactorization { n, reason };
    if moduli.contains(&0) {
        return Err(bad("zero modulus".into()));
    }
    let product: u64 = moduli.iter().map(|&m| m as u64).product();
    if product != n as u64 {
        return Err(bad(format!("moduli multiply to {product}")));
    }
    for (i, &a) in moduli.iter().enumerate() {
        for &b in &moduli[i + 1..] {
            if a.gcd(&b) != 1 {
                return Err(bad(format!("{a} and {b} are not coprime")));
            }
        }
    }
    Ok(())
}

/// A matrix split into components along pairwise-coprime moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtSplit {
    pub moduli: Vec<u32>,
    pub components: Vec<ResidueMatrix>,
}

impl CrtSplit {
    pub fn combine(&self) -> Result<ResidueMatrix> {
        crt_combine(self)
    }
}

/// Inverse of [`ResidueMatrix::crt_split`].
pub fn crt_combine(split: &CrtSplit) -> Result<ResidueMatrix> {
    let n: u64 = split.moduli.iter().map(|&m| m as u64).product();
    let n = u32::try_from(n).map_err(|_| Error::InvalidInput("level overflows u32".into()))?;
    check_factorization(n, &split.moduli)?;
    if split.components.len() != split.moduli.len()
        || split
            .components
            .iter()
            .zip(&split.moduli)
            .any(|(c, &m)| c.level != m)
    {
        return Err(Error::BadFactorization {
            n,
            reason: "components do not match moduli".into(),
        });
    }
    let mut acc = ResidueMatrix::identity(1).reduce_unchecked(1);
    for c in &split.components {
        acc = ResidueMatrix::crt_pair(&acc, c)?;
    }
    Ok(acc)
}

/// Serialized form: `{"level": n, "entries": [a, b, c, d]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    level: u32,
    entries: [i64; 4],
}

impl Serialize for ResidueMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            level: self.level,
            entries: self.e.map(|x| x as i64),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ResidueMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        ResidueMatrix::new(r.level, r.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(n: u32, e: [i64; 4]) -> ResidueMatrix {
        ResidueMatrix::new(n, e).unwrap()
    }

    /// Adjugate times inverse determinant, written out independently.
    fn adjugate_inverse(x: &ResidueMatrix) -> ResidueMatrix {
        let n = x.level() as i64;
        let [a, b, c, d] = x.entries().map(|v| v as i64);
        let det = (a * d - b * c).rem_euclid(n);
        let inv = (1..n).find(|k| (k * det) % n == 1).unwrap();
        m(x.level(), [d * inv, -b * inv, -c * inv, a * inv])
    }

    #[test]
    fn products() {
        let x = m(6, [1, 1, 0, 1]);
        let y = m(6, [1, 0, 1, 1]);
        assert_eq!(x.mat_mul(&y).unwrap(), m(6, [2, 1, 1, 1]));
        assert_eq!(ResidueMatrix::identity(6).mat_mul(&x).unwrap(), x);
        let g = m(6, [1, 1, 0, 5]);
        assert_eq!(g * g, ResidueMatrix::identity(6));
        assert_eq!(
            x.mat_mul(&ResidueMatrix::identity(5)),
            Err(Error::LevelMismatch { left: 6, right: 5 })
        );
    }

    #[test]
    fn inverses() {
        assert_eq!(
            ResidueMatrix::identity(15).mat_inv().unwrap(),
            ResidueMatrix::identity(15)
        );
        let g = m(6, [1, 1, 0, 5]);
        assert_eq!(g.mat_inv().unwrap(), g);
        let h = m(15, [0, 2, 14, 0]);
        let hi = h.mat_inv().unwrap();
        assert_eq!(hi, adjugate_inverse(&h));
        assert!((h * hi).is_identity());
        assert!(matches!(
            m(6, [2, 0, 0, 1]).mat_inv(),
            Err(Error::NonInvertible { det: 2, level: 6 })
        ));
    }

    #[test]
    fn crt_examples() {
        let s = m(6, [5, 4, 4, 1]).crt_split(&[2, 3]).unwrap();
        assert_eq!(s.components, vec![m(2, [1, 0, 0, 1]), m(3, [2, 1, 1, 1])]);
        let s = ResidueMatrix::minus_identity(18).prime_power_split();
        assert_eq!(s.moduli, vec![2, 9]);
        assert_eq!(s.components, vec![m(2, [1, 0, 0, 1]), m(9, [8, 0, 0, 8])]);
        assert!(m(6, [1, 0, 0, 1]).crt_split(&[2, 2]).is_err());
        assert!(m(12, [1, 0, 0, 1]).crt_split(&[2, 6]).is_err());
        assert!(m(12, [1, 0, 0, 1]).crt_split(&[4, 2]).is_err());
    }

    #[test]
    fn crt_round_trip_exhaustive_small_levels() {
        for n in 1..=30u32 {
            let facs = prime_powers(n);
            // all entries for n ≤ 12, a stride otherwise
            let step = if n <= 12 { 1 } else { 7 };
            let mut code = 0u64;
            let total = (n as u64).pow(4);
            while code < total {
                let x = ResidueMatrix::from_code(n, code);
                let s = x.crt_split(&facs).unwrap();
                assert_eq!(crt_combine(&s).unwrap(), x);
                code += step;
            }
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(1, 7), 1);
        assert_eq!(kronecker(-3, 5), -1);
        assert_eq!(kronecker(5, 5), 0);
    }

    /// Euler's criterion for odd primes p.
    fn legendre_by_euler(a: i64, p: i64) -> i32 {
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        let mut acc = 1i64;
        for _ in 0..(p - 1) / 2 {
            acc = acc * r % p;
        }
        if acc == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_matches_legendre() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for a in -40..40 {
                assert_eq!(kronecker(a, p), legendre_by_euler(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_periodic_for_fundamental_discriminants() {
        for d in [-3i64, 5, -7, 8] {
            assert!(is_fundamental_discriminant(d));
            let p = d.abs();
            for k in 1..200 {
                assert_eq!(kronecker(d, k), kronecker(d, k + p), "D={d} k={k}");
            }
        }
        assert!(!is_fundamental_discriminant(20));
        assert!(!is_fundamental_discriminant(-4 * 3));
        assert!(is_fundamental_discriminant(-4));
        assert!(is_fundamental_discriminant(-8));
    }

    #[test]
    fn group_orders() {
        assert_eq!(gl2_order(2), 6);
        assert_eq!(gl2_order(3), 48);
        assert_eq!(gl2_order(4), 96);
        assert_eq!(gl2_order(5), 480);
        assert_eq!(gl2_order(6), 288);
        assert_eq!(gl2_order(9), 3888);
        assert_eq!(sl2_order(6), 144);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    fn arb_matrix(n: u32) -> impl Strategy<Value = ResidueMatrix> {
        prop::array::uniform4(0..n as i64).prop_map(move |e| ResidueMatrix::new(n, e).unwrap())
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(n in 2u32..200, seed in any::<u64>()) {
            let x = ResidueMatrix::from_code(n, seed % (n as u64).pow(4));
            let y = ResidueMatrix::from_code(n, (seed / 7) % (n as u64).pow(4));
            let lhs = (x * y).det() as u64;
            let rhs = x.det() as u64 * y.det() as u64 % n as u64;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn crt_round_trip_random(x in arb_matrix(9240)) {
            let s = x.prime_power_split();
            prop_assert_eq!(crt_combine(&s).unwrap(), x);
            let s2 = x.crt_split(&[40, 231]).unwrap();
            prop_assert_eq!(s2.combine().unwrap(), x);
        }

        #[test]
        fn kronecker_completely_multiplicative(d in -60i64..60, a in 1i64..300, b in 1i64..300) {
            prop_assert_eq!(kronecker(d, a * b), kronecker(d, a) * kronecker(d, b));
        }

        #[test]
        fn inverse_is_two_sided(x in arb_matrix(60)) {
            if let Ok(xi) = x.mat_inv() {
                prop_assert!((x * xi).is_identity());
                prop_assert!((xi * x).is_identity());
            } else {
                prop_assert!(!x.is_invertible());
            }
        }
    }
}
