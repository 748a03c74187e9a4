//! Field trait and the scalar fields ℚ and ℚ(√d).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{euclid_gcd, Poly};

/// Exact field arithmetic used by polynomials and rational functions.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n).mul(&Self::from_i64(d).inv().expect("nonzero denominator"))
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Monic gcd of two polynomials; fields may override the Euclidean default.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        euclid_gcd(a, b)
    }

    /// Whether the printed form needs parentheses as a coefficient.
    fn is_compound(&self) -> bool {
        false
    }
}

/// Rationals.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_i64(n: i64) -> Self {
        q(n)
    }
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        super::poly::primitive_prs_gcd(a, b)
    }
    fn is_compound(&self) -> bool {
        !self.is_integer()
    }
}

/// `a + b√d` with rational `a, b` and squarefree `d ≠ 1`.
///
/// Rationals are stored with `b = 0, d = 1`; combining two elements with
/// different nontrivial radicands panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    pub a: Q,
    pub b: Q,
    pub d: i64,
}

impl QuadScalar {
    pub fn new(a: Q, b: Q, d: i64) -> Self {
        Self { a, b, d }.normalized()
    }

    pub fn rational(a: Q) -> Self {
        Self { a, b: q(0), d: 1 }
    }

    /// `√d`.
    pub fn sqrt(d: i64) -> Self {
        Self::new(q(0), q(1), d)
    }

    fn normalized(mut self) -> Self {
        if Zero::is_zero(&self.b) || self.d == 1 {
            if self.d == 1 {
                self.a += &self.b;
            }
            self.b = q(0);
            self.d = 1;
        }
        self
    }

    fn radicand(&self, other: &Self) -> i64 {
        match (self.d, other.d) {
            (1, d) | (d, 1) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("mixed radicands {d} and {e}"),
        }
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.d)
    }

    /// `a² − d b²`.
    pub fn norm(&self) -> Q {
        &self.a * &self.a - q(self.d) * &self.b * &self.b
    }

    pub fn trace(&self) -> Q {
        q(2) * &self.a
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let rad = format!("sqrt({})", self.d);
        let babs = self.b.abs();
        let bpart = if One::is_one(&babs) {
            rad
        } else {
            format!("{babs}*{rad}")
        };
        if Zero::is_zero(&self.a) {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{bpart}")
        } else {
            write!(f, "{} {sign} {bpart}", self.a)
        }
    }
}

impl Field for QuadScalar {
    fn zero() -> Self {
        Self::rational(q(0))
    }
    fn one() -> Self {
        Self::rational(q(1))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn add(&self, other: &Self) -> Self {
        let d = self.radicand(other);
        Self::new(&self.a + &other.a, &self.b + &other.b, d)
    }
    fn sub(&self, other: &Self) -> Self {
        let d = self.radicand(other);
        Self::new(&self.a - &other.a, &self.b - &other.b, d)
    }
    fn mul(&self, other: &Self) -> Self {
        let d = self.radicand(other);
        let a = &self.a * &other.a + q(d) * &self.b * &other.b;
        let b = &self.a * &other.b + &self.b * &other.a;
        Self::new(a, b, d)
    }
    fn neg(&self) -> Self {
        Self::new(-&self.a, -&self.b, self.d)
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return None;
        }
        let c = self.conj();
        Some(Self::new(&c.a / &n, &c.b / &n, c.d))
    }
    fn from_i64(n: i64) -> Self {
        Self::rational(q(n))
    }
    fn is_compound(&self) -> bool {
        !Zero::is_zero(&self.b) || !self.a.is_integer()
    }
}

/// Square root in ℚ when it exists.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}
