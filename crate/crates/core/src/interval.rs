//! Closed intervals with exact rational endpoints.
//!
//! Rational arithmetic is exact, so the only rounding is in
//! [`Interval::sqrt`], which encloses `√x` between dyadic rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cf::isqrt;
use crate::scalar::{ExactScalar, Scalar};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Encloses `√x` for `x ≥ 0` with dyadic endpoints of `bits` fractional
    /// bits. Exact squares of rationals give a point.
    pub fn sqrt(x: &Rational, bits: u32) -> Self {
        assert!(!x.is_negative(), "square root of a negative number");
        if let Some(r) = x.sqrt_exact() {
            return Interval::point(r);
        }
        let scale = BigInt::one() << (2 * bits as usize);
        let n = (x.clone() * Rational::from_integer(scale)).floor().to_integer();
        let s = isqrt(&n);
        let den = BigInt::one() << bits as usize;
        // s² ≤ n ≤ x·4^p < n+1 ≤ (s+1)²
        Interval {
            lo: Rational::new(s.clone(), den.clone()),
            hi: Rational::new(s + 1, den),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let (a, b) = (self.lo.clone() * k, self.hi.clone() * k);
        if k.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self.clone()
        } else {
            let hi = if -self.lo.clone() > self.hi {
                -self.lo.clone()
            } else {
                self.hi.clone()
            };
            Interval {
                lo: Rational::zero(),
                hi,
            }
        }
    }

    /// `Some(order)` when every point of `self` compares the same way with
    /// every point of `other`.
    pub fn compare(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Whether the width is at most `2^-bits` relative to the magnitude
    /// (or the interval is a point).
    pub fn is_tight(&self, bits: u32) -> bool {
        if self.is_point() {
            return true;
        }
        let mag = if self.lo.abs() > self.hi.abs() {
            self.lo.abs()
        } else {
            self.hi.abs()
        };
        self.width() * Rational::from_integer(BigInt::one() << bits as usize) <= mag
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((self.lo.clone() + self.hi.clone()) / Rational::from_integer(BigInt::from(2))).to_f64_lossy()
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        self + -rhs
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64_lossy(), self.hi.to_f64_lossy())
    }
}
