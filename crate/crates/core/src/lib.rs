//! Self-validated enclosures for Sobolev embedding constants on domains with
//! minimally smooth boundary.
//!
//! The crate computes mathematically certified upper bounds for the embedding
//! constant `C_p` of `W^{1,q} -> L^p` by bounding the operator norm of a
//! Stein-type extension operator. Every number that leaves this crate is an
//! interval enclosure produced by directed-rounding arithmetic: the exact
//! value is guaranteed to lie between the printed endpoints.
//!
//! The building blocks, bottom to top:
//!
//! * [`interval`] / [`elementary`] — outward-rounded interval arithmetic and
//!   verified elementary functions,
//! * [`special`] — a rigorous Gamma function and the sharp constant of the
//!   classical Sobolev inequality,
//! * [`quadrature`] — verified adaptive integration with singular-endpoint
//!   and tail bounds,
//! * [`psi`] / [`mollifier`] — the certified kernel and mollifier constants
//!   entering the extension-operator bound,
//! * [`norms`] — the operator-norm and embedding-constant formulas,
//! * [`tuner`] — parameter sweeps and the one-dimensional minimization of
//!   the bound over the stretch parameter tau,
//! * [`catalog`] / [`report`] — built-in example domains and the
//!   machine-readable report schema.
//!
//! All core math is generic over the endpoint scalar via [`scalar::Scalar`];
//! `f64` is the working instantiation (see the aliases below), `f32` remains
//! sound but too coarse for the reference tolerances.

// `!(x > 0)` style guards are deliberate throughout: unlike `x <= 0`, the
// negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod elementary;
pub mod error;
pub mod interval;
pub mod mollifier;
pub mod norms;
pub mod psi;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod special;
pub mod textio;
pub mod tuner;

pub use error::{Error, Result};
pub use interval::Interval;
pub use scalar::Scalar;

/// Working-precision interval.
pub type Interval64 = Interval<f64>;
/// Single-precision interval (sound, wide; mostly for smoke tests).
pub type Interval32 = Interval<f32>;
