//! Systematic algebraic manipulation detection (AMD) codes built from highly
//! nonlinear functions over finite abelian groups.
//!
//! The crate constructs the catalog functions (Maiorana-McFarland, Dillon,
//! dual-basis Dillon, trace-of-generator-power, and the polynomial family
//! `x^{t+2} + sum s_i x^i`), turns any `f: A1 x A2 -> B` into the code
//! `s -> (s, x, f(s, x))`, and evaluates tampering success exactly by
//! exhaustive enumeration. All probabilities are [`Rational`]s.

pub mod algebra;
pub mod amd;
pub mod bounds;
pub mod derive;
mod error;
pub mod functions;
pub mod limits;
pub mod nonlinearity;
mod rational;
pub mod report;

pub use error::{Error, Result};
pub use rational::Rational;
