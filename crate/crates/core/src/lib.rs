//! Finite-section numerics for Toeplitz and Hankel structure of integral
//! operators on the Hardy space H² of the unit disk.
//!
//! Operators are infinite matrices in the basis `e_k = z^k`, stored as exact
//! entry rules and cut down to finite sections on demand. The machinery is
//! generic over the real scalar (`f64`, `f32`, `BigRational`); the aliases
//! below fix the common choices.

pub mod asymptotics;
pub mod constants;
pub mod error;
pub mod essential;
pub mod harness;
pub mod operators;
pub mod scalar;
pub mod sections;
pub mod series;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex<f64>;
pub type CRational = scalar::CRational;

pub type Rule64 = sections::OperatorRule<f64>;
pub type Rule32 = sections::OperatorRule<f32>;
pub type ExactRule = sections::OperatorRule<num_rational::BigRational>;

pub type Section64 = sections::FiniteSection<f64>;
pub type Section32 = sections::FiniteSection<f32>;
pub type ExactSection = sections::FiniteSection<num_rational::BigRational>;
