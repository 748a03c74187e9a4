//! Height census of specializations of a one-parameter family: rationals
//! of bounded height, the bad set `B_E`, and preimage hits of the four
//! exceptional maps `t₂, t₆, t₉, t₁₈`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratfield::{EllipticFamily, Poly, RatFunc, Q};

/// Default height bound accepted by [`census`].
pub const DEFAULT_HEIGHT_BUDGET: u64 = 10_000;

type Rf = RatFunc<Q>;

/// Reduced pairs `(x, y)`, `y > 0`, with `max(|x|, y) ≤ T`, ordered by
/// denominator then numerator.
pub fn reduced_pairs_up_to_height(t: u64) -> impl Iterator<Item = (i64, i64)> {
    let t = t as i64;
    (1..=t).flat_map(move |y| numerators(y, t).map(move |x| (x, y)))
}

fn numerators(y: i64, t: i64) -> impl Iterator<Item = i64> {
    (-t..=t).filter(move |&x| x.gcd(&y) == 1)
}

/// Each rational of height at most `T` exactly once.
pub fn rationals_up_to_height(t: u64) -> impl Iterator<Item = Q> {
    reduced_pairs_up_to_height(t).map(|(x, y)| Q::new(BigInt::from(x), BigInt::from(y)))
}

/// `H(x/y) = max(|x|, |y|)` in lowest terms.
pub fn height(q: &Q) -> BigInt {
    q.numer().abs().max(q.denom().abs())
}

/// Positive divisors of `|n|`, `n ≠ 0`, by trial division.
fn divisors_big(n: &BigInt) -> Vec<BigInt> {
    if let Some(m) = n.abs().to_u64() {
        return divisors_u64(m).into_iter().map(BigInt::from).collect();
    }
    let mut m = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += 1;
    }
    if !m.is_one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let base = divs.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk *= &p;
            divs.extend(base.iter().map(|d| d * &pk));
        }
    }
    divs
}

fn divisors_u64(mut n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let base = divs.clone();
            let mut pk = 1;
            while n.is_multiple_of(p) {
                n /= p;
                pk *= p;
                divs.extend(base.iter().map(|d| d * pk));
            }
        }
        p += 1;
    }
    if n > 1 {
        let base = divs.clone();
        divs.extend(base.iter().map(|d| d * n));
    }
    divs
}

const FILTER_PRIMES: [i64; 4] = [7, 11, 13, 17];

/// `Σ aᵢ pⁱ q^{n−i} mod m`.
fn homog_mod(coeffs: &[BigInt], p: &BigInt, q: &BigInt, m: i64) -> i64 {
    let m_big = BigInt::from(m);
    let r = |x: &BigInt| x.mod_floor(&m_big).to_i64().unwrap();
    let (pm, qm) = (r(p), r(q));
    let n = coeffs.len() - 1;
    let mut acc = 0i64;
    for (i, a) in coeffs.iter().enumerate() {
        let mut term = r(a);
        for _ in 0..i {
            term = term * pm % m;
        }
        for _ in 0..n - i {
            term = term * qm % m;
        }
        acc = (acc + term) % m;
    }
    acc
}

fn homog_exact(coeffs: &[BigInt], p: &BigInt, q: &BigInt) -> BigInt {
    // Horner in the homogeneous form: ((aₙ p + aₙ₋₁ q) p + aₙ₋₂ q²) ...
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for a in coeffs.iter().rev() {
        acc = acc * p + a * &qpow;
        qpow *= q;
    }
    acc
}

/// Rational roots of a nonzero integer polynomial (constant term first).
fn integer_poly_rational_roots(coeffs: &[BigInt]) -> Vec<Q> {
    let mut c: Vec<BigInt> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let mut roots = Vec::new();
    if c.len() <= 1 {
        return roots;
    }
    if c[0].is_zero() {
        roots.push(Q::from_integer(BigInt::zero()));
        while c[0].is_zero() {
            c.remove(0);
        }
    }
    if c.len() <= 1 {
        return roots;
    }
    let nums = divisors_big(&c[0]);
    let dens = divisors_big(c.last().unwrap());
    for q in &dens {
        for p0 in &nums {
            if !p0.gcd(q).is_one() {
                continue;
            }
            for p in [p0.clone(), -p0] {
                if FILTER_PRIMES.iter().any(|&m| homog_mod(&c, &p, q, m) != 0) {
                    continue;
                }
                if homog_exact(&c, &p, q).is_zero() {
                    roots.push(Q::new(p, q.clone()));
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Clears denominators of a rational polynomial.
fn integer_coeffs(p: &Poly<Q>) -> Vec<BigInt> {
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs()
        .iter()
        .map(|c| (c * Q::from_integer(den.clone())).to_integer())
        .collect()
}

/// Distinct rational roots of a nonzero polynomial over ℚ.
pub fn rational_roots(p: &Poly<Q>) -> Vec<Q> {
    if p.is_constant() {
        return Vec::new();
    }
    let sqfree = p.exact_div(&p.gcd(&p.derivative())).expect("gcd divides p");
    integer_poly_rational_roots(&integer_coeffs(&sqfree))
}

/// Whether `f(u) = t₀` has a solution `u ∈ ℚ` with `den f(u) ≠ 0`.
pub fn rational_preimage_exists(f: &Rf, t0: &Q) -> bool {
    let x: Vec<BigInt> = integer_coeffs(f.num());
    let d: Vec<BigInt> = integer_coeffs(f.den());
    // Common clearing factor so that num/den is preserved.
    let (ln, ld) = (lcm_denoms(f.num()), lcm_denoms(f.den()));
    let (tn, td) = (t0.numer(), t0.denom());
    let n = x.len().max(d.len());
    let coeffs: Vec<BigInt> = (0..n)
        .map(|i| {
            let a = x.get(i).cloned().unwrap_or_default() * &ld;
            let b = d.get(i).cloned().unwrap_or_default() * &ln;
            a * td - b * tn
        })
        .collect();
    if coeffs.iter().all(|c| c.is_zero()) {
        return true;
    }
    integer_poly_rational_roots(&coeffs)
        .iter()
        .any(|u| !Zero::is_zero(&f.den().eval(u)))
}

fn lcm_denoms(p: &Poly<Q>) -> BigInt {
    p.coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Preimage test for one map specialized to small integer arithmetic:
/// `f(u) = x/y` is decided on `y·N(u) − x·D(u)` with divisors read from a
/// smallest-prime-factor table. Agrees with [`rational_preimage_exists`].
pub struct PreimageTester {
    num: Vec<i64>,
    den: Vec<i64>,
    spf: Vec<u32>,
}

impl PreimageTester {
    /// `None` when the map's integer coefficients are too large for the
    /// fixed-width path.
    pub fn new(f: &Rf, max_height: u64) -> Option<Self> {
        let (ln, ld) = (lcm_denoms(f.num()), lcm_denoms(f.den()));
        let num: Option<Vec<i64>> = integer_coeffs(f.num())
            .iter()
            .map(|c| (c * &ld).to_i64())
            .collect();
        let den: Option<Vec<i64>> = integer_coeffs(f.den())
            .iter()
            .map(|c| (c * &ln).to_i64())
            .collect();
        let (num, den) = (num?, den?);
        let cmax = num
            .iter()
            .chain(&den)
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0);
        let bound = 2 * cmax.checked_mul(max_height)?;
        if bound > 1 << 24 || num.len().max(den.len()) > 8 {
            return None;
        }
        Some(Self {
            num,
            den,
            spf: spf_table(bound as usize),
        })
    }

    fn divisors(&self, n: u64) -> Vec<u64> {
        let mut n = n as usize;
        let mut divs = vec![1u64];
        while n > 1 {
            let p = self.spf[n] as usize;
            let base = divs.len();
            let mut pk = 1u64;
            while n.is_multiple_of(p) {
                n /= p;
                pk *= p as u64;
                for i in 0..base {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs
    }

    /// Whether `f(u) = x/y` for some rational `u` off the poles, `gcd(x, y) = 1`, `y > 0`.
    pub fn hits(&self, x: i64, y: i64) -> bool {
        let n = self.num.len().max(self.den.len());
        let mut c = [0i128; 8];
        for (i, ci) in c.iter_mut().enumerate().take(n) {
            let a = *self.num.get(i).unwrap_or(&0) as i128;
            let b = *self.den.get(i).unwrap_or(&0) as i128;
            *ci = a * y as i128 - b * x as i128;
        }
        let mut hi = n;
        while hi > 0 && c[hi - 1] == 0 {
            hi -= 1;
        }
        if hi == 0 {
            return true;
        }
        let mut lo = 0;
        while c[lo] == 0 {
            lo += 1;
        }
        if lo > 0 && self.den_nonzero(0, 1) {
            return true;
        }
        let c = &c[lo..hi];
        if c.len() == 1 {
            return false;
        }
        let nums = self.divisors(c[0].unsigned_abs() as u64);
        let dens = self.divisors(c[c.len() - 1].unsigned_abs() as u64);
        // Non-reduced candidates are harmless: a root p/q is a root in any form.
        let cw: Vec<u64> = c.iter().map(|&a| a as u64).collect();
        for &q in &dens {
            for &p0 in &nums {
                for p in [p0 as i128, -(p0 as i128)] {
                    if homog_wrapping(&cw, p as u64, q) != 0 {
                        continue;
                    }
                    if homog_i128(c, p, q as i128) == 0 && self.den_nonzero(p as i64, q as i64) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn den_nonzero(&self, p: i64, q: i64) -> bool {
        homog_i128(
            &self.den.iter().map(|&d| d as i128).collect::<Vec<_>>(),
            p as i128,
            q as i128,
        ) != 0
    }
}

/// The homogeneous form modulo 2⁶⁴; nonzero here implies nonzero over ℤ.
fn homog_wrapping(c: &[u64], p: u64, q: u64) -> u64 {
    let mut acc = 0u64;
    let mut qpow = 1u64;
    for a in c.iter().rev() {
        acc = acc.wrapping_mul(p).wrapping_add(a.wrapping_mul(qpow));
        qpow = qpow.wrapping_mul(q);
    }
    acc
}

fn homog_i128(c: &[i128], p: i128, q: i128) -> i128 {
    let mut acc = 0i128;
    let mut qpow = 1i128;
    for a in c.iter().rev() {
        acc = acc * p + a * qpow;
        qpow *= q;
    }
    acc
}

fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Rational poles of `a` or `b`, rational zeros of `Δ`, and rational
/// solutions of `j = 0` and `j = 1728`.
pub fn compute_be(family: &EllipticFamily<Rf>) -> BTreeSet<Q> {
    let mut out = BTreeSet::new();
    out.extend(rational_roots(family.a.den()));
    out.extend(rational_roots(family.b.den()));
    let disc = family.discriminant();
    out.extend(rational_roots(disc.num()));
    if let Ok(j) = family.j_invariant() {
        out.extend(rational_roots(j.num()));
        let shifted = &j - &Rf::int(1728);
        out.extend(rational_roots(shifted.num()));
    }
    out
}

/// `t₂(u) = (3u² + 1)/(u(u² + 3))`.
pub fn t2() -> Rf {
    let u = Rf::var();
    (3 * u.pow(2) + 1) / (u.clone() * (u.pow(2) + 3))
}

/// `t₆(u) = u³ + 1`.
pub fn t6() -> Rf {
    Rf::var().pow(3) + 1
}

/// `t₉(u) = 1/u³`.
pub fn t9() -> Rf {
    1 / Rf::var().pow(3)
}

/// `t₁₈(u) = 1/(u³ − 1)`.
pub fn t18() -> Rf {
    1 / (Rf::var().pow(3) - 1)
}

/// The four exceptional maps with their labels.
pub fn exceptional_maps() -> [(&'static str, Rf); 4] {
    [("t2", t2()), ("t6", t6()), ("t9", t9()), ("t18", t18())]
}

/// `y² = x³ − 108(t²−1)(t²−9)³/(t⁴+18t²−27)² x − 432(t²−1)(t²−9)³/(t⁴+18t²−27)²`.
pub fn serre_family() -> EllipticFamily<Rf> {
    let t = Rf::var();
    let common = (t.pow(2) - 1) * (t.pow(2) - 9).pow(3) / (t.pow(4) + 18 * t.pow(2) - 27).pow(2);
    EllipticFamily::new(-108 * common.clone(), -432 * common)
}

/// Per-map and union counts of preimage hits outside `B_E`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCounts {
    pub t2: u64,
    pub t6: u64,
    pub t9: u64,
    pub t18: u64,
    pub union: u64,
}

/// Counts at one height bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    #[serde(rename = "T")]
    pub t: u64,
    pub total: u64,
    pub excluded: u64,
    pub exceptional_by_map: ExceptionalCounts,
    pub serre_ratio: f64,
}

/// Census at the largest checkpoint plus the per-checkpoint rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    /// The exceptional set measured is the union of the four preimage sets
    /// minus `B_E`; the remainder term is not computed.
    pub exceptional_set: String,
    #[serde(rename = "T")]
    pub t: u64,
    pub total: u64,
    pub excluded: u64,
    pub exceptional_by_map: ExceptionalCounts,
    pub serre_ratio: f64,
    /// Least-squares slope of `log(union)` against `log(T)`.
    pub fitted_exponent: Option<f64>,
    pub be: Vec<String>,
    pub checkpoints: Vec<CensusRow>,
}

#[derive(Clone, Default)]
struct Histogram {
    total: Vec<u64>,
    excluded: Vec<u64>,
    maps: [Vec<u64>; 4],
    union: Vec<u64>,
}

impl Histogram {
    fn new(t: usize) -> Self {
        let z = vec![0u64; t + 1];
        Self {
            total: z.clone(),
            excluded: z.clone(),
            maps: [z.clone(), z.clone(), z.clone(), z.clone()],
            union: z,
        }
    }

    fn merge(mut self, o: Self) -> Self {
        let add = |a: &mut Vec<u64>, b: &Vec<u64>| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        add(&mut self.total, &o.total);
        add(&mut self.excluded, &o.excluded);
        for i in 0..4 {
            add(&mut self.maps[i], &o.maps[i]);
        }
        add(&mut self.union, &o.union);
        self
    }

    fn cumulative(&self, t: usize) -> (u64, u64, ExceptionalCounts) {
        let s = |v: &Vec<u64>| v[..=t].iter().sum::<u64>();
        (
            s(&self.total),
            s(&self.excluded),
            ExceptionalCounts {
                t2: s(&self.maps[0]),
                t6: s(&self.maps[1]),
                t9: s(&self.maps[2]),
                t18: s(&self.maps[3]),
                union: s(&self.union),
            },
        )
    }
}

/// Rationals of height at most `t` hit by `map`, including points of `B_E`.
pub fn preimage_hits(map: &Rf, t: u64) -> Vec<Q> {
    rationals_up_to_height(t)
        .filter(|t0| rational_preimage_exists(map, t0))
        .collect()
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Census of the family of [`serre_family`] up to the largest checkpoint.
pub fn census(t: u64, checkpoints: &[u64]) -> Result<CensusReport> {
    census_with_budget(t, checkpoints, DEFAULT_HEIGHT_BUDGET)
}

pub fn census_with_budget(t: u64, checkpoints: &[u64], budget: u64) -> Result<CensusReport> {
    if t == 0 {
        return Err(Error::InvalidInput(
            "height bound must be at least 1".into(),
        ));
    }
    if t > budget {
        return Err(Error::BudgetExceeded { order: t, budget });
    }
    let mut cps: Vec<u64> = checkpoints
        .iter()
        .copied()
        .filter(|&c| c >= 1 && c <= t)
        .collect();
    cps.push(t);
    cps.sort_unstable();
    cps.dedup();

    let family = serre_family();
    let be = compute_be(&family);
    let maps = exceptional_maps();
    let testers: Vec<Option<PreimageTester>> = maps
        .iter()
        .map(|(_, f)| PreimageTester::new(f, t))
        .collect();
    let be_pairs: Vec<(i64, i64)> = be
        .iter()
        .filter_map(|q| Some((q.numer().to_i64()?, q.denom().to_i64()?)))
        .collect();
    let ti = t as i64;
    let hist = (1..=ti)
        .into_par_iter()
        .fold(
            || Histogram::new(t as usize),
            |mut h, y| {
                for x in numerators(y, ti) {
                    let hgt = x.unsigned_abs().max(y as u64) as usize;
                    h.total[hgt] += 1;
                    if be_pairs.contains(&(x, y)) {
                        h.excluded[hgt] += 1;
                        continue;
                    }
                    let mut any = false;
                    for (i, (_, f)) in maps.iter().enumerate() {
                        let hit = match &testers[i] {
                            Some(tester) => tester.hits(x, y),
                            None => rational_preimage_exists(
                                f,
                                &Q::new(BigInt::from(x), BigInt::from(y)),
                            ),
                        };
                        if hit {
                            h.maps[i][hgt] += 1;
                            any = true;
                        }
                    }
                    if any {
                        h.union[hgt] += 1;
                    }
                }
                h
            },
        )
        .reduce(|| Histogram::new(t as usize), Histogram::merge);

    let rows: Vec<CensusRow> = cps
        .iter()
        .map(|&c| {
            let (total, excluded, counts) = hist.cumulative(c as usize);
            let good = total - excluded;
            CensusRow {
                t: c,
                total,
                excluded,
                exceptional_by_map: counts,
                serre_ratio: (good - counts.union) as f64 / good as f64,
            }
        })
        .collect();
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.exceptional_by_map.union > 0)
        .map(|r| ((r.t as f64).ln(), (r.exceptional_by_map.union as f64).ln()))
        .collect();
    let last = rows.last().expect("at least one checkpoint").clone();
    Ok(CensusReport {
        exceptional_set: "surrogate: union of t2, t6, t9, t18 preimages minus B_E".into(),
        t: last.t,
        total: last.total,
        excluded: last.excluded,
        exceptional_by_map: last.exceptional_by_map,
        serre_ratio: last.serre_ratio,
        fitted_exponent: least_squares_slope(&pts),
        be: be.iter().map(|q| q.to_string()).collect(),
        checkpoints: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfield::{q, qr};

    #[test]
    fn height_one() {
        let v: Vec<Q> = rationals_up_to_height(1).collect();
        assert_eq!(v, vec![q(-1), q(0), q(1)]);
    }

    #[test]
    fn no_duplicates_at_50() {
        let v: Vec<Q> = rationals_up_to_height(50).collect();
        let s: BTreeSet<Q> = v.iter().cloned().collect();
        assert_eq!(v.len(), s.len());
        assert!(v.iter().all(|x| height(x) <= BigInt::from(50)));
    }

    #[test]
    fn preimage_examples() {
        assert!(rational_preimage_exists(&t6(), &q(2)));
        assert!(rational_preimage_exists(&t2(), &q(1)));
        assert!(!rational_preimage_exists(&t9(), &q(2)));
        assert!(rational_preimage_exists(&t9(), &qr(1, 8)));
        assert!(rational_preimage_exists(&t18(), &qr(8, 19)));
    }

    #[test]
    fn bad_set_of_serre_family() {
        let be = compute_be(&serre_family());
        for x in [-3, -1, 1, 3] {
            assert!(be.contains(&q(x)), "{x} missing from {be:?}");
        }
    }

    #[test]
    fn rational_roots_of_products() {
        let p = Poly::from_coeffs(vec![q(-6), q(1), q(1)]); // (t + 3)(t − 2)
        let p = &(&p * &p) * &Poly::from_coeffs(vec![q(1), q(0), q(2)]);
        assert_eq!(rational_roots(&p), vec![q(-3), q(2)]);
        let r = Poly::from_coeffs(vec![q(-3), q(0), q(0), q(2)]);
        assert!(rational_roots(&r).is_empty());
        let s = Poly::from_coeffs(vec![qr(-1, 2), q(1)]);
        assert_eq!(rational_roots(&s), vec![qr(1, 2)]);
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            census_with_budget(20, &[], 10),
            Err(Error::BudgetExceeded {
                order: 20,
                budget: 10
            })
        );
    }
}
