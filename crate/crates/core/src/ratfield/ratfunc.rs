//! Rational functions `F(t)` in reduced form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::Poly;
use super::scalar::Field;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic, so equality of
/// functions is equality of representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return Self::from_poly(Poly::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let l = den.lead().inv().expect("nonzero denominator");
        Self {
            num: num.scale(&l),
            den: den.scale(&l),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(F::from_ratio(n, d))
    }

    /// The variable `t`.
    pub fn var() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn checked_inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.checked_inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        Self {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            self.checked_inv().map(|x| x.pow(e.unsigned_abs()))
        }
    }

    pub fn eval(&self, x: &F) -> Result<F> {
        let d = self.den.eval(x);
        let di = d.inv().ok_or(Error::DivisionByZeroFunction)?;
        Ok(self.num.eval(x).mul(&di))
    }

    /// `self(inner)`, evaluated by homogenizing so that reduction happens once.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let k = self
            .num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0));
        let n_pows: Vec<Poly<F>> = (0..=k).map(|i| inner.num.pow(i as u32)).collect();
        let d_pows: Vec<Poly<F>> = (0..=k).map(|i| inner.den.pow(i as u32)).collect();
        let homog = |p: &Poly<F>| {
            p.coeffs()
                .iter()
                .enumerate()
                .fold(Poly::zero(), |acc, (i, c)| {
                    &acc + &(&n_pows[i] * &d_pows[k - i]).scale(c)
                })
        };
        Self::new(homog(&self.num), homog(&self.den))
    }

    pub fn display_with(&self, var: &str) -> String {
        let n = self.num.display_with(var);
        if self.den.is_constant() {
            return n;
        }
        format!("({n})/({})", self.den.display_with(var))
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::reduce(&self.num + &other.num, self.den.clone());
        }
        Self::reduce(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }
    fn sub(&self, other: &Self) -> Self {
        Field::add(self, &Field::neg(other))
    }
    fn mul(&self, other: &Self) -> Self {
        Self::reduce(&self.num * &other.num, &self.den * &other.den)
    }
    fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
    fn from_i64(n: i64) -> Self {
        Self::int(n)
    }
    fn is_compound(&self) -> bool {
        true
    }
}

impl<F: Field> Add for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn add(self, o: &RatFunc<F>) -> RatFunc<F> {
        Field::add(self, o)
    }
}

impl<F: Field> Sub for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn sub(self, o: &RatFunc<F>) -> RatFunc<F> {
        Field::sub(self, o)
    }
}

impl<F: Field> Mul for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn mul(self, o: &RatFunc<F>) -> RatFunc<F> {
        Field::mul(self, o)
    }
}

/// Panics on division by the zero function; use [`RatFunc::checked_div`]
/// for fallible division.
impl<F: Field> Div for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn div(self, o: &RatFunc<F>) -> RatFunc<F> {
        self.checked_div(o).expect("division by the zero function")
    }
}

impl<F: Field> Neg for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        Field::neg(self)
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        Field::neg(&self)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<F: Field> $tr for RatFunc<F> {
            type Output = RatFunc<F>;
            fn $m(self, o: RatFunc<F>) -> RatFunc<F> { <&RatFunc<F> as $tr>::$m(&self, &o) }
        }
        impl<F: Field> $tr<&RatFunc<F>> for RatFunc<F> {
            type Output = RatFunc<F>;
            fn $m(self, o: &RatFunc<F>) -> RatFunc<F> { <&RatFunc<F> as $tr>::$m(&self, o) }
        }
        impl<F: Field> $tr<RatFunc<F>> for &RatFunc<F> {
            type Output = RatFunc<F>;
            fn $m(self, o: RatFunc<F>) -> RatFunc<F> { <&RatFunc<F> as $tr>::$m(self, &o) }
        }
        impl<F: Field> $tr<i64> for RatFunc<F> {
            type Output = RatFunc<F>;
            fn $m(self, o: i64) -> RatFunc<F> { <&RatFunc<F> as $tr>::$m(&self, &RatFunc::int(o)) }
        }
        impl<F: Field> $tr<i64> for &RatFunc<F> {
            type Output = RatFunc<F>;
            fn $m(self, o: i64) -> RatFunc<F> { <&RatFunc<F> as $tr>::$m(self, &RatFunc::int(o)) }
        }
        impl<F: Field> $tr<RatFunc<F>> for i64 {
            type Output = RatFunc<F>;
            fn $m(self, o: RatFunc<F>) -> RatFunc<F> { <&RatFunc<F> as $tr>::$m(&RatFunc::int(self), &o) }
        }
        impl<F: Field> $tr<&RatFunc<F>> for i64 {
            type Output = RatFunc<F>;
            fn $m(self, o: &RatFunc<F>) -> RatFunc<F> { <&RatFunc<F> as $tr>::$m(&RatFunc::int(self), o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::super::scalar::Q;
    use super::*;

    type R = RatFunc<Q>;

    #[test]
    fn reduces_to_canonical_form() {
        let t = R::var();
        let a = (&t * &t - 1) / (2 * t.clone() - 2);
        let b = (t.clone() + 1) / 2;
        assert_eq!(a, b);
        assert!(a.den().is_monic());
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(
            R::new(Poly::one(), Poly::zero()),
            Err(Error::DivisionByZeroFunction)
        );
        assert_eq!(R::zero().checked_inv(), Err(Error::DivisionByZeroFunction));
    }

    #[test]
    fn compose_matches_substitution() {
        let t = R::var();
        let f = (&t * &t + 3) / (t.clone() - 1);
        let g = 1 / (t.clone() + 2);
        let direct = (&g * &g + 3) / (g.clone() - 1);
        assert_eq!(f.compose(&g).unwrap(), direct);
        let x = super::super::scalar::q(5);
        assert_eq!(
            f.compose(&g).unwrap().eval(&x).unwrap(),
            f.eval(&g.eval(&x).unwrap()).unwrap()
        );
    }
}
