//! Computations in the Heisenberg plane: the group `Heis` of upper-triangular
//! affine maps acting on 𝔸² ⊂ ℝP², its ℤ²-representations, complete
//! Heisenberg tori and orbifolds, constant-curvature cone tori that
//! degenerate to translation tori, and conjugacy limits of the isometry
//! algebras of S², E² and H².
//!
//! The modules build on each other in this order:
//!
//! - [`heis`] and [`projective`]: the Lie algebra, the group, and PGL(3, ℝ).
//! - [`rep`]: the representation variety, normal forms and classification.
//! - [`tori`]: developing maps and closed geodesics of Heisenberg tori.
//! - [`models`]: projective models of the constant-curvature planes.
//! - [`regeneration`]: cone tori converging to translation tori.
//! - [`limits`]: conjugacy limits of isometry Lie algebras.
//! - [`orbifolds`]: the nine Heisenberg orbifolds and holonomy extensions.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod heis;
pub mod limits;
pub mod models;
pub mod orbifolds;
pub mod projective;
pub mod regeneration;
pub mod rep;
pub mod tori;

pub use error::{Error, Result};
pub use heis::{HeisAlgVec, HeisElem, Sign};
pub use projective::{pgl_distance, ProjMat};

/// Default tolerance for equality and "nonzero" predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/heisenberg.md")]
    mod heisenberg {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/tori.md")]
    mod tori {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/regeneration.md")]
    mod regeneration {}
    #[doc = include_str!("../../../book/src/limits.md")]
    mod limits {}
    #[doc = include_str!("../../../book/src/orbifolds.md")]
    mod orbifolds {}
}
