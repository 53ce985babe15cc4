//! Exact recovery of an integer-rooted power sum from integer samples.
//!
//! The pipeline is: minimal linear recurrence (Hankel systems over ℚ) →
//! integer roots of its characteristic polynomial → generalized Vandermonde
//! solve for the coefficients → exact check on held-out samples.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{Matrix, Solution};
use crate::{IndexUnit, PowerSumQ, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("need at least {need} samples, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("sample indices must be consecutive")]
    NotConsecutive,
    #[error("no linear recurrence of degree ≤ {max_degree} fits the samples")]
    NoRecurrence { max_degree: usize },
    #[error("characteristic polynomial {0} has a repeated root")]
    RepeatedRoot(String),
    #[error("characteristic polynomial {0} has a non-integer root")]
    NonIntegerRoot(String),
    #[error("characteristic polynomial {0} has root 0")]
    ZeroRoot(String),
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("samples are not generated by the given roots")]
    Inconsistent,
    #[error("fitted power sum disagrees with held-out sample at m={m}")]
    HoldoutMismatch { m: u32 },
    #[error("fitted coefficient {0} is not an integer")]
    NonIntegerCoefficient(String),
    #[error("holdout must be at least 2 samples")]
    HoldoutTooSmall,
}

/// Integer values at consecutive indices `start, start+1, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSample {
    start: u32,
    values: Vec<BigInt>,
}

impl SequenceSample {
    pub fn new(start: u32, values: Vec<BigInt>) -> Self {
        SequenceSample { start, values }
    }

    /// From `(m, value)` pairs with strictly consecutive `m`.
    pub fn from_points(points: Vec<(u32, BigInt)>) -> Result<Self, FitError> {
        let start = points.first().map_or(0, |p| p.0);
        for (k, (m, _)) in points.iter().enumerate() {
            if *m != start + k as u32 {
                return Err(FitError::NotConsecutive);
            }
        }
        Ok(SequenceSample {
            start,
            values: points.into_iter().map(|p| p.1).collect(),
        })
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (u32, &BigInt)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.start + k as u32, v))
    }

    fn split_at(&self, k: usize) -> (SequenceSample, SequenceSample) {
        (
            SequenceSample::new(self.start, self.values[..k].to_vec()),
            SequenceSample::new(self.start + k as u32, self.values[k..].to_vec()),
        )
    }
}

/// Integer polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    /// `∏ (x − rᵢ)`.
    pub fn from_roots(roots: &[BigInt]) -> Self {
        let mut c = vec![BigInt::one()];
        for r in roots {
            let mut next = vec![BigInt::zero(); c.len() + 1];
            for (i, a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        IntPoly::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    fn to_rational(&self) -> Vec<Rational> {
        self.coeffs.iter().cloned().map(Rational::from_integer).collect()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(k == 0 && first) {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let lead = b.last().expect("division by zero polynomial").clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap().clone() / lead.clone();
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= f.clone() * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn poly_gcd_degree(a: &[Rational], b: &[Rational]) -> usize {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// Minimal monic recurrence annihilating the sample, of degree at most
/// `⌊N/2⌋ − 1` so that at least two equations beyond the unknowns check it.
pub fn min_recurrence(s: &SequenceSample) -> Result<IntPoly, FitError> {
    let n = s.len();
    if n < 4 {
        return Err(FitError::TooFewPoints { need: 4, got: n });
    }
    if s.values.iter().all(Zero::is_zero) {
        return Ok(IntPoly::new(vec![BigInt::one()]));
    }
    let vals: Vec<Rational> = s.values.iter().cloned().map(Rational::from_integer).collect();
    let max_degree = n / 2 - 1;
    for d in 1..=max_degree {
        // Hankel rows [s_j … s_{j+d−1}] · c = s_{j+d}
        let rows: Vec<Vec<Rational>> = (0..n - d).map(|j| vals[j..j + d].to_vec()).collect();
        let rhs: Vec<Rational> = (0..n - d).map(|j| vals[j + d].clone()).collect();
        let Some(c) = Matrix::from_rows(rows).solve(&rhs).into_vec() else {
            continue;
        };
        // Integer sequences have integer minimal recurrences; a fractional
        // solution is an artefact of the finite window.
        if !c.iter().all(|x| x.is_integer()) {
            continue;
        }
        let mut coeffs: Vec<BigInt> = c.into_iter().map(|x| -x.to_integer()).collect();
        coeffs.push(BigInt::one());
        return Ok(IntPoly::new(coeffs));
    }
    Err(FitError::NoRecurrence { max_degree })
}

/// Distinct nonzero integer roots of a squarefree monic integer polynomial,
/// in canonical power-sum order.
pub fn roots_integer(p: &IntPoly) -> Result<Vec<BigInt>, FitError> {
    if p.degree() == 0 {
        return Err(FitError::ConstantPolynomial);
    }
    let c0 = &p.coeffs()[0];
    if c0.is_zero() {
        return Err(FitError::ZeroRoot(p.to_string()));
    }
    let pr = p.to_rational();
    let dp: Vec<Rational> = pr
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.clone() * Rational::from_integer(BigInt::from(k)))
        .collect();
    if poly_gcd_degree(&pr, &dp) > 0 {
        return Err(FitError::RepeatedRoot(p.to_string()));
    }
    // Integer roots divide the constant term.
    let target = c0.abs();
    let mut roots = Vec::new();
    let try_root = |r: BigInt, roots: &mut Vec<BigInt>| {
        if !roots.contains(&r) && p.eval(&r).is_zero() {
            roots.push(r);
        }
    };
    let mut d = BigInt::one();
    while &d * &d <= target && roots.len() < p.degree() {
        if target.is_multiple_of(&d) {
            let e = &target / &d;
            for cand in [d.clone(), -d.clone(), e.clone(), -e] {
                try_root(cand, &mut roots);
            }
        }
        d += 1;
    }
    if roots.len() < p.degree() {
        return Err(FitError::NonIntegerRoot(p.to_string()));
    }
    roots.sort_by(|a, b| b.abs().cmp(&a.abs()).then(b.cmp(a)));
    Ok(roots)
}

/// Coefficients `bⱼ` with `Σ bⱼ cⱼ^m = s_m` on every sample.
pub fn solve_coefficients(roots: &[BigInt], s: &SequenceSample) -> Result<Vec<Rational>, FitError> {
    if roots.len() > s.len() {
        return Err(FitError::TooFewPoints {
            need: roots.len(),
            got: s.len(),
        });
    }
    if roots.is_empty() {
        return if s.values.iter().all(Zero::is_zero) {
            Ok(Vec::new())
        } else {
            Err(FitError::Inconsistent)
        };
    }
    let rows: Vec<Vec<Rational>> = s
        .points()
        .map(|(m, _)| {
            roots
                .iter()
                .map(|c| Rational::from_integer(num_traits::pow(c.clone(), m as usize)))
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = s.values.iter().cloned().map(Rational::from_integer).collect();
    match Matrix::from_rows(rows).solve(&rhs) {
        Solution::Unique(b) => Ok(b),
        Solution::Underdetermined(_) | Solution::Inconsistent => Err(FitError::Inconsistent),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FitOptions {
    pub integrality_required: bool,
    /// Trailing samples withheld from fitting and checked exactly.
    pub holdout: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            integrality_required: true,
            holdout: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceFit {
    pub char_poly: IntPoly,
    pub roots: Vec<BigInt>,
    pub coeffs: Vec<Rational>,
    /// The recovered power sum, in `m`.
    pub fitted: PowerSumQ,
    pub train_window: (u32, u32),
    pub holdout_window: (u32, u32),
}

/// Recovers `β` with `β(m) = s_m` exactly, validated on held-out samples.
pub fn fit_power_sum(s: &SequenceSample, opts: FitOptions) -> Result<RecurrenceFit, FitError> {
    if opts.holdout < 2 {
        return Err(FitError::HoldoutTooSmall);
    }
    let need = (opts.holdout + 4).max(6);
    if s.len() < need {
        return Err(FitError::TooFewPoints { need, got: s.len() });
    }
    let (train, hold) = s.split_at(s.len() - opts.holdout);
    let char_poly = min_recurrence(&train)?;
    let roots = if char_poly.degree() == 0 {
        Vec::new()
    } else {
        roots_integer(&char_poly)?
    };
    let coeffs = solve_coefficients(&roots, &train)?;
    if opts.integrality_required {
        if let Some(c) = coeffs.iter().find(|c| !c.is_integer()) {
            return Err(FitError::NonIntegerCoefficient(c.to_string()));
        }
    }
    let fitted = PowerSumQ::from_terms(
        IndexUnit::M,
        coeffs
            .iter()
            .cloned()
            .zip(roots.iter().cloned().map(Rational::from_integer)),
    )
    .expect("roots are nonzero");
    for (m, v) in hold.points() {
        if fitted.evaluate(m) != Rational::from_integer(v.clone()) {
            return Err(FitError::HoldoutMismatch { m });
        }
    }
    let last = |x: &SequenceSample| x.start + x.len() as u32 - 1;
    Ok(RecurrenceFit {
        char_poly,
        roots,
        coeffs,
        fitted,
        train_window: (train.start, last(&train)),
        holdout_window: (hold.start, last(&hold)),
    })
}
