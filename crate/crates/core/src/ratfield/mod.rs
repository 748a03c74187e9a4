//! Exact polynomial and rational-function arithmetic over ℚ and ℚ(√d),
//! the diagonal cubic of two cubics, and verification of the explicit
//! modular-curve models.

mod elliptic;
pub mod models;
mod poly;
mod ratfunc;
mod scalar;

pub use elliptic::{
    cubic_disc, depress, diagonal_cubic, weierstrass_disc, weierstrass_j, Cubic, EllipticFamily,
};
pub use models::{
    verify, verify_all, verify_ed, verify_factor_lemmas, verify_level10, verify_level15,
    verify_level18, IdentityCheck, ModelReport, ModelSelection,
};
pub use poly::{euclid_gcd, primitive_prs_gcd, Poly};
pub use ratfunc::RatFunc;
pub use scalar::{q, qr, rational_sqrt, Field, QuadScalar, Q};
