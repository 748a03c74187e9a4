//! Classification of non-abelian entanglement groups of elliptic-curve
//! division fields, represented as finite-level subgroups of GL₂(ℤ/nℤ),
//! together with exact verification of explicit modular-curve models and a
//! height census of specializations.

pub mod census;
pub mod classify;
pub mod error;
pub mod goursat;
pub mod group;
pub mod invariants;
pub mod lattice;
pub mod modarith;
pub mod ratfield;

pub use error::{Error, Result};
pub use group::{AbstractQuotient, MatGroup, SmallGroup};
pub use modarith::ResidueMatrix;
