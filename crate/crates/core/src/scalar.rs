//! Scalar traits the generic routines are written against.
//!
//! Power sums are generic over a coefficient field [`Scalar`]; the exact
//! routines (symbolic square roots, parsing, recurrence fitting) need an
//! [`ExactScalar`]. Continued-fraction kernels run over any [`IntScalar`],
//! which lets hot loops use `i128` while large inputs fall back to `BigInt`.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer types usable by the continued-fraction kernels.
pub trait IntScalar:
    Integer + Signed + Roots + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> IntScalar for T where
    T: Integer + Signed + Roots + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Field of coefficients and roots of a power sum.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Signed + Send + Sync + 'static {
    fn from_i64(v: i64) -> Self;

    /// True when the value is an integer.
    fn is_integral(&self) -> bool;

    /// Nearest `f64`; only used for reporting and numeric cross-checks.
    fn to_f64_lossy(&self) -> f64;
}

/// Scalars with exact equality and exact square-root detection.
pub trait ExactScalar: Scalar + Eq + Hash {
    /// The nonnegative square root, when it lies in the field.
    fn sqrt_exact(&self) -> Option<Self>;
}

macro_rules! float_scalar {
    ($($t:ty)*) => ($(
        impl Scalar for $t {
            #[inline]
            fn from_i64(v: i64) -> Self {
                v as $t
            }

            #[inline]
            fn is_integral(&self) -> bool {
                self.fract() == 0.0
            }

            #[inline]
            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }
    )*)
}

float_scalar!(f32 f64);

impl<I: IntScalar> Scalar for Ratio<I> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v).expect("integer type too narrow"))
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_f64_lossy(&self) -> f64 {
        let (n, d) = (self.numer(), self.denom());
        match (n.to_f64(), d.to_f64()) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
            _ => ratio_to_f64_scaled(n, d),
        }
    }
}

// Huge numerators/denominators overflow f64 separately but not as a quotient.
fn ratio_to_f64_scaled<I: IntScalar>(n: &I, d: &I) -> f64 {
    let ten = I::from_u8(10).unwrap();
    let (mut n, mut d) = (n.clone(), d.clone());
    let mut exp = 0i32;
    while n.to_f64().is_none_or(|v| !v.is_finite()) {
        n = n / ten.clone();
        exp += 1;
    }
    while d.to_f64().is_none_or(|v| !v.is_finite()) {
        d = d / ten.clone();
        exp -= 1;
    }
    if d.is_zero() {
        return f64::INFINITY;
    }
    n.to_f64().unwrap() / d.to_f64().unwrap() * 10f64.powi(exp)
}

impl<I: IntScalar> ExactScalar for Ratio<I> {
    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = exact_isqrt(self.numer())?;
        let d = exact_isqrt(self.denom())?;
        Some(Ratio::new(n, d))
    }
}

/// `Some(s)` when `n = s²` for an integer `s ≥ 0`.
pub fn exact_isqrt<I: IntScalar>(n: &I) -> Option<I> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if s.clone() * s.clone() == *n {
        Some(s)
    } else {
        None
    }
}
