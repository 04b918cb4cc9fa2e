//! Symbolic exterior calculus for volume-preserving (Liouville) vector fields.
//!
//! Given a vector field `X` and volume form `Ω` in coordinates, the crate builds
//! the potential `γ` with `X ⌟ Ω = dγ`, the form `ϑ = σ + dt ∧ γ` on the
//! extended space `R × P`, and the characteristic field of the maximal-degree
//! variational principle defined by `ϑ`, together with exact certificates for
//! every identity involved. Numeric flow diagnostics live in [`flow`].
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod expr;
pub mod exterior;
pub mod flow;
pub mod linalg;
pub mod liouville;
pub mod rational;
pub mod systems;

pub use expr::{parse_expr, Certainty, Expr, Symbol, ZeroTest, ZeroVerdict};
pub use exterior::{DiffForm, MultiIndex, Space, VectorField};
pub use rational::Rational;
