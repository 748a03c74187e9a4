//! Cubic discriminants, the diagonal cubic of two cubics, and invariants of
//! short Weierstrass families.

use super::scalar::Field;
use crate::error::{Error, Result};

fn c<F: Field>(n: i64) -> F {
    F::from_i64(n)
}

/// Discriminant of `x³ + a x² + b x + c`.
pub fn cubic_disc<F: Field>(a: &F, b: &F, cc: &F) -> F {
    let ab = a.mul(b);
    ab.mul(&ab)
        .sub(&c::<F>(4).mul(&b.pow(3)))
        .sub(&c::<F>(4).mul(&a.pow(3)).mul(cc))
        .sub(&c::<F>(27).mul(&cc.mul(cc)))
        .add(&c::<F>(18).mul(&ab).mul(cc))
}

/// Monic cubic `x³ + a x² + b x + c` as `[a, b, c]`.
pub type Cubic<F> = [F; 3];

/// Coefficients `[G, H, I]` of the cubic whose roots are
/// `s₁t₁ + s₂t₂ + s₃t₃` and its cyclic shifts, where `sᵢ` are the roots of
/// `first`, `tᵢ` the roots of `second`, and
/// `δ = ∏_{i<j}(sᵢ − sⱼ) · ∏_{i<j}(tᵢ − tⱼ)`.
///
/// Fails with [`Error::DeltaMismatch`] unless `δ²` is the product of the
/// two discriminants.
pub fn diagonal_cubic<F: Field>(
    first: &Cubic<F>,
    second: &Cubic<F>,
    delta: &F,
) -> Result<Cubic<F>> {
    let [a, b, cc] = first;
    let [d, e, f] = second;
    let disc = cubic_disc(a, b, cc).mul(&cubic_disc(d, e, f));
    if delta.mul(delta) != disc {
        return Err(Error::DeltaMismatch);
    }
    let g = a.mul(d).neg();
    let h = a
        .mul(a)
        .mul(e)
        .add(&d.mul(d).mul(b))
        .sub(&c::<F>(3).mul(b).mul(e));
    let i_sum = c::<F>(2)
        .mul(cc)
        .mul(&d.pow(3))
        .add(&a.mul(b).mul(d).mul(e))
        .add(&c::<F>(2).mul(&a.pow(3)).mul(f))
        .sub(&c::<F>(9).mul(cc).mul(d).mul(e))
        .sub(&c::<F>(9).mul(a).mul(b).mul(f))
        .add(&c::<F>(27).mul(cc).mul(f))
        .add(delta);
    let i = i_sum.mul(&F::from_ratio(-1, 2));
    Ok([g, h, i])
}

/// `Δ = −16(4a³ + 27b²)` of `y² = x³ + a x + b`.
pub fn weierstrass_disc<F: Field>(a: &F, b: &F) -> F {
    c::<F>(-16).mul(&c::<F>(4).mul(&a.pow(3)).add(&c::<F>(27).mul(&b.mul(b))))
}

/// `j = (−48a)³ / Δ`; fails with [`Error::SingularFamily`] when `Δ = 0`.
pub fn weierstrass_j<F: Field>(a: &F, b: &F) -> Result<F> {
    let disc = weierstrass_disc(a, b);
    let inv = disc.inv().ok_or(Error::SingularFamily)?;
    Ok(c::<F>(-48).mul(a).pow(3).mul(&inv))
}

/// Short form `[p, q]` of `x³ + a₂x² + a₄x + a₆` under `x ↦ x − a₂/3`.
pub fn depress<F: Field>(a2: &F, a4: &F, a6: &F) -> [F; 2] {
    let third = F::from_ratio(1, 3);
    let p = a4.sub(&a2.mul(a2).mul(&third));
    let q = c::<F>(2)
        .mul(&a2.pow(3))
        .mul(&F::from_ratio(1, 27))
        .sub(&a2.mul(a4).mul(&third))
        .add(a6);
    [p, q]
}

/// `y² = x³ + a x + b` over a field of functions.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticFamily<F> {
    pub a: F,
    pub b: F,
}

impl<F: Field> EllipticFamily<F> {
    pub fn new(a: F, b: F) -> Self {
        Self { a, b }
    }

    /// Reduces `y² = x³ + a₂x² + a₄x + a₆` to short form.
    pub fn from_long(a2: &F, a4: &F, a6: &F) -> Self {
        let [a, b] = depress(a2, a4, a6);
        Self { a, b }
    }

    pub fn discriminant(&self) -> F {
        weierstrass_disc(&self.a, &self.b)
    }

    pub fn j_invariant(&self) -> Result<F> {
        weierstrass_j(&self.a, &self.b)
    }

    /// `λ` with `(a', b') = (λ²a, λ³b)`, when `ab ≠ 0`, one exists and both
    /// curves are nonsingular. The curves are isomorphic over the base field
    /// exactly when `λ` is a square. For `j ∈ {0, 1728}` the ratio only fixes
    /// `λ³` or `λ²`, and `None` is returned.
    pub fn scaling_to(&self, other: &Self) -> Option<F> {
        if self.discriminant().is_zero() || other.discriminant().is_zero() {
            return None;
        }
        if self.a.is_zero() || self.b.is_zero() {
            return None;
        }
        let lambda = other.b.mul(&self.a).mul(&other.a.mul(&self.b).inv()?);
        (lambda.mul(&lambda).mul(&self.a) == other.a && lambda.pow(3).mul(&self.b) == other.b)
            .then_some(lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::super::scalar::{q, Q};
    use super::*;

    #[test]
    fn small_diagonal_cubic() {
        // Roots (1, 2, 3) and (0, 1, −1).
        let first = [q(-6), q(11), q(-6)];
        let second = [q(0), q(-1), q(0)];
        let [g, h, i] = diagonal_cubic(&first, &second, &q(4)).unwrap();
        assert_eq!((g, h, i), (q(0), q(-3), q(-2)));
        assert_eq!(
            diagonal_cubic(&first, &second, &q(5)),
            Err(Error::DeltaMismatch)
        );
    }

    #[test]
    fn j_of_known_curves() {
        assert_eq!(weierstrass_j(&q(-1), &q(0)).unwrap(), q(1728));
        assert_eq!(weierstrass_j(&q(0), &q(1)).unwrap(), q(0));
        assert_eq!(weierstrass_j::<Q>(&q(0), &q(0)), Err(Error::SingularFamily));
    }

    #[test]
    fn depression_preserves_j() {
        // x³ + 3x² + 3x + 2 = (x + 1)³ + 1.
        let e = EllipticFamily::from_long(&q(3), &q(3), &q(2));
        assert_eq!((e.a.clone(), e.b.clone()), (q(0), q(1)));
        assert_eq!(e.j_invariant().unwrap(), q(0));
        assert_eq!(e.scaling_to(&EllipticFamily::new(q(0), q(8))), None);
        let curve = EllipticFamily::new(q(-1), q(1));
        let twist = EllipticFamily::new(q(-4), q(8));
        assert_eq!(curve.scaling_to(&twist), Some(q(2)));
        assert_eq!(curve.scaling_to(&EllipticFamily::new(q(-4), q(9))), None);
    }
}
