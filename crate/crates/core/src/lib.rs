//! Exact continued fractions of square roots of power sums.
//!
//! The crate computes continued-fraction expansions of `√α(2m+r)` for an
//! integer power sum `α`, recovers functional expansions whose partial
//! quotients are themselves power sums of `m`, builds effective
//! approximations of `(√α + β)/γ` on parity classes, and decides whether
//! `α` can be approximated by the square of a power sum.
//!
//! Core routines are generic: power sums over any [`scalar::Scalar`] field,
//! continued fractions over any [`scalar::IntScalar`] integer type. The
//! aliases below fix the exact instantiations used by the experiment layer.

pub mod approx;
pub mod cf;
pub mod hypothesis;
pub mod interval;
pub mod lab;
pub mod linalg;
pub mod powersum;
pub mod recurrence;
pub mod scalar;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use powersum::{DominantRoot, IndexUnit, PowerSum, PowerSumError, Term};

/// Exact rational scalar.
pub type Rational = BigRational;
/// Power sum with exact rational coefficients (and roots).
pub type PowerSumQ = PowerSum<Rational>;
pub type PowerSumF64 = PowerSum<f64>;
pub type PowerSumF32 = PowerSum<f32>;
/// Quadratic surd over arbitrary-precision integers.
pub type QuadSurdZ = cf::QuadSurd<BigInt>;
pub type CfExpansionZ = cf::CfExpansion<BigInt>;
