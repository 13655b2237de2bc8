//! Exact algebra on the affine quadric threefold `xt - yz = 1`.
//!
//! The crate is `no_std` (with `alloc`). It provides sparse polynomial
//! arithmetic over the rationals, the coordinate ring of the quadric,
//! tame automorphisms given as words in orthogonal and elementary
//! generators, monomial valuations with weights in `Q(sqrt 2)`, local
//! exploration of the square complex, and degree-growth diagnostics.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod complex;
pub mod dynamics;
mod error;
pub mod poly;
pub mod ring;
pub mod tame;
pub mod valuation;

pub use error::{Error, Result};
pub use poly::{Monomial, QPoly, QuadExt, Rational, Var, Weight4};
pub use ring::{QElem, Ring, DEFAULT_DEGREE_CAP};
pub use tame::{Generator, Letter, TameAut, Word};
pub use valuation::{ResonanceClass, Valuation, Value};
