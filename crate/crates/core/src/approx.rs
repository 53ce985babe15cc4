//! Truncated expansions approximating `(√α(2m+r) + β(2m+r)) / γ(2m+r)`.
//!
//! With `α(2m+r) = B₁C₁^m (1 + σ(m))` and `γ(2m+r) = F₁G₁^m (1 − φ(m))`,
//! where `σ, φ` have roots below 1, the approximation is
//!
//! ```text
//! η(m) = (√B₁ · √C₁^m · Σ_{j≤H} (1/2 choose j) σ^j + β(2m+r))
//!        · F₁⁻¹ G₁^{-m} · Σ_{k≤s} φ^k
//! ```
//!
//! Everything is exact except the single radical `√B₁`, so `η` is a
//! [`RadicalPowerSum`]. The orders `H` and `s` are the least ones for which
//! every discarded term has root (in `m`) below `t²`.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::interval::Interval;
use crate::scalar::{ExactScalar, Scalar};
use crate::{IndexUnit, PowerSumError, PowerSumQ, Rational};

/// Precision ceiling for [`verify_eta`].
pub const MAX_PRECISION_BITS: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("leading coefficient of α on this parity is negative")]
    NegativeLeading,
    #[error("α is identically zero")]
    ZeroAlpha,
    #[error("γ is identically zero")]
    ZeroGamma,
    #[error("parity must be 0 or 1, got {0}")]
    BadParity(u32),
    #[error("target ratio t must lie in (0, 1), got {0}")]
    BadTarget(String),
    #[error(transparent)]
    PowerSum(#[from] PowerSumError),
    #[error("γ(2m+r) vanishes at m={m}")]
    GammaVanishes { m: u32 },
    #[error("α(2m+r) is negative at m={m}")]
    NegativeRadicand { m: u32 },
    #[error("m range is empty")]
    EmptyRange,
    #[error("precision must be at least 128 bits, got {0}")]
    PrecisionTooLow(u32),
    #[error("interval at m={m} undecided at {bits} bits")]
    PrecisionExhausted { m: u32, bits: u32 },
}

/// `√ρ · A(m) + B(m)` with rational `ρ ≥ 0` and `A, B` in `m`.
///
/// Canonical form: when `ρ` is the square of a rational, or `A ≡ 0`, the
/// radical is folded into `B` and `ρ = 0`, `A ≡ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalPowerSum {
    radicand: Rational,
    radical_part: PowerSumQ,
    rational_part: PowerSumQ,
}

impl RadicalPowerSum {
    pub fn new(radicand: Rational, radical_part: PowerSumQ, rational_part: PowerSumQ) -> Result<Self, PowerSumError> {
        assert!(!radicand.is_negative(), "negative radicand");
        if radical_part.is_zero() {
            return Ok(Self::rational(rational_part));
        }
        match radicand.sqrt_exact() {
            Some(root) => Ok(Self::rational(rational_part.checked_add(&radical_part.scale(&root))?)),
            None => Ok(RadicalPowerSum {
                radicand,
                radical_part,
                rational_part,
            }),
        }
    }

    pub fn rational(b: PowerSumQ) -> Self {
        RadicalPowerSum {
            radicand: Rational::zero(),
            radical_part: PowerSumQ::zero(b.unit()),
            rational_part: b,
        }
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn radical_part(&self) -> &PowerSumQ {
        &self.radical_part
    }

    pub fn rational_part(&self) -> &PowerSumQ {
        &self.rational_part
    }

    pub fn is_rational(&self) -> bool {
        self.radical_part.is_zero()
    }

    fn checked_mul(&self, other: &PowerSumQ) -> Result<Self, PowerSumError> {
        Self::new(
            self.radicand.clone(),
            self.radical_part.checked_mul(other)?,
            self.rational_part.checked_mul(other)?,
        )
    }

    pub fn evaluate_interval(&self, m: u32, bits: u32) -> Interval {
        let b = Interval::point(self.rational_part.evaluate(m));
        if self.is_rational() {
            return b;
        }
        Interval::sqrt(&self.radicand, bits).scale(&self.radical_part.evaluate(m)) + b
    }

    pub fn evaluate_f64(&self, m: u32) -> f64 {
        self.evaluate_interval(m, 128).midpoint_f64()
    }

    /// All roots of both parts.
    pub fn roots(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.radical_part.roots().chain(self.rational_part.roots())
    }
}

impl fmt::Display for RadicalPowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.rational_part);
        }
        write!(f, "sqrt({})*[{}]", self.radicand, self.radical_part)?;
        if !self.rational_part.is_zero() {
            write!(f, " + [{}]", self.rational_part)?;
        }
        Ok(())
    }
}

/// `(1/2 choose j)`.
pub fn binomial_half(j: u32) -> Rational {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut acc = Rational::one();
    for i in 0..j {
        let i = Rational::from_integer(BigInt::from(i));
        acc = acc * (half.clone() - i.clone()) / (i + Rational::one());
    }
    acc
}

fn check_parity(r: u32) -> Result<(), ApproxError> {
    if r > 1 {
        Err(ApproxError::BadParity(r))
    } else {
        Ok(())
    }
}

/// Least `k ≥ 0` with `scale · ratio^{k+1} < bound`, for `0 < ratio < 1`.
fn order_for(scale: &Rational, ratio: &Rational, bound: &Rational) -> u32 {
    let mut k = 0;
    let mut v = scale.clone() * ratio;
    while &v >= bound {
        v *= ratio;
        k += 1;
    }
    k
}

/// Leading data of a restricted sum: `(B₁, C₁, σ, C₂/C₁)` with `σ` the
/// normalized remainder and the last entry absent for single-term sums.
struct Normalized {
    lead_coeff: Rational,
    lead_root: Rational,
    rest: PowerSumQ,
    ratio: Option<Rational>,
}

fn normalize(p: &PowerSumQ) -> Result<Normalized, PowerSumError> {
    let lead = p.leading().ok_or(PowerSumError::ZeroPowerSum)?;
    let (b1, c1) = (lead.coeff.clone(), lead.root.clone());
    let tail = PowerSumQ::from_terms(
        p.unit(),
        p.terms()
            .iter()
            .skip(1)
            .map(|t| (t.coeff.clone() / b1.clone(), t.root.clone() / c1.clone())),
    )?;
    let ratio = tail.leading().map(|t| t.root.abs());
    Ok(Normalized {
        lead_coeff: b1,
        lead_root: c1,
        rest: tail,
        ratio,
    })
}

fn series(x: &PowerSumQ, order: u32, coeff: impl Fn(u32) -> Rational) -> Result<PowerSumQ, PowerSumError> {
    let mut acc = PowerSumQ::zero(x.unit());
    let mut pow = PowerSumQ::constant(x.unit(), Rational::one());
    for j in 0..=order {
        acc = acc.checked_add(&pow.scale(&coeff(j)))?;
        if j < order {
            pow = pow.checked_mul(x)?;
        }
    }
    Ok(acc)
}

/// `√α(2m+r)` truncated at `σ^H`, in `m`, with the root of the first
/// discarded term (`0` when `α` has a single term).
pub fn sqrt_expansion(alpha: &PowerSumQ, r: u32, h: u32) -> Result<(RadicalPowerSum, Rational), ApproxError> {
    let (eta, _, tail) = sqrt_parts(alpha, r, h)?;
    Ok((eta, tail))
}

// Returns (expansion, σ, tail root).
pub(crate) fn sqrt_parts(
    alpha: &PowerSumQ,
    r: u32,
    h: u32,
) -> Result<(RadicalPowerSum, PowerSumQ, Rational), ApproxError> {
    check_parity(r)?;
    if alpha.is_zero() {
        return Err(ApproxError::ZeroAlpha);
    }
    let ar = alpha.restrict(2, r)?;
    let n = normalize(&ar)?;
    if !n.lead_coeff.is_positive() {
        return Err(ApproxError::NegativeLeading);
    }
    let sqrt_c1 = n.lead_root.sqrt_exact().expect("restricted roots are squares");
    let tail = match &n.ratio {
        Some(ratio) => sqrt_c1.clone() * num_traits::pow(ratio.clone(), h as usize + 1),
        None => Rational::zero(),
    };
    let a = series(&n.rest, h, binomial_half)?.shift_roots(&sqrt_c1)?;
    let eta = RadicalPowerSum::new(n.lead_coeff, a, PowerSumQ::zero(IndexUnit::M))?;
    Ok((eta, n.rest, tail))
}

/// The least `H` whose discarded √-tail has root below `bound · divisor`.
pub(crate) fn sqrt_order(alpha_r: &PowerSumQ, divisor: &Rational, bound: &Rational) -> Result<u32, PowerSumError> {
    let n = normalize(alpha_r)?;
    let sqrt_c1 = n.lead_root.sqrt_exact().expect("restricted roots are squares");
    Ok(match &n.ratio {
        Some(ratio) => order_for(&(sqrt_c1 / divisor.clone()), ratio, bound),
        None => 0,
    })
}

/// `γ⁻¹` truncated at `φ^s`, in the unit of `γ`, with the tail root
/// `|g₂/g₁|^{s+1} / |g₁|` (`0` for a single term).
pub fn inverse_expansion(gamma: &PowerSumQ, s: u32) -> Result<(PowerSumQ, Rational), ApproxError> {
    let (inv, _, tail) = inverse_parts(gamma, s)?;
    Ok((inv, tail))
}

fn inverse_parts(gamma: &PowerSumQ, s: u32) -> Result<(PowerSumQ, PowerSumQ, Rational), ApproxError> {
    if gamma.is_zero() {
        return Err(ApproxError::ZeroGamma);
    }
    let n = normalize(gamma)?;
    let phi = -n.rest;
    let g1 = n.lead_root.abs();
    let tail = match &n.ratio {
        Some(ratio) => num_traits::pow(ratio.clone(), s as usize + 1) / g1,
        None => Rational::zero(),
    };
    let inv = series(&phi, s, |_| Rational::one())?
        .scale(&n.lead_coeff.recip())
        .shift_roots(&n.lead_root.recip())?;
    Ok((inv, phi, tail))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaConstruction {
    pub eta: RadicalPowerSum,
    pub h: u32,
    pub s: u32,
    pub t: Rational,
    /// Largest root (in `m`) of any discarded term; `0` when `η` is exact.
    pub error_root: Rational,
    /// Normalized remainder of `α(2m+r)`.
    pub sigma: PowerSumQ,
    /// Normalized remainder of `γ(2m+r)`, sign-flipped.
    pub phi: PowerSumQ,
}

impl EtaConstruction {
    /// `error_root < t²`.
    pub fn postcondition_holds(&self) -> bool {
        self.error_root < self.t.clone() * self.t.clone()
    }
}

impl fmt::Display for EtaConstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "eta = {}", self.eta)?;
        writeln!(f, "H = {}", self.h)?;
        writeln!(f, "s = {}", self.s)?;
        writeln!(f, "t = {}", self.t)?;
        writeln!(f, "error_root = {}", self.error_root)?;
        writeln!(f, "sigma = {}", self.sigma)?;
        write!(f, "phi = {}", self.phi)
    }
}

/// Builds `η_r` with `|(√α + β)/γ − η_r| ≪ t^{2m}` along `n = 2m + r`.
///
/// `α ≡ 0` is allowed and yields the expansion of `β/γ` alone.
pub fn construct_eta(
    alpha: &PowerSumQ,
    beta: &PowerSumQ,
    gamma: &PowerSumQ,
    r: u32,
    t: &Rational,
) -> Result<EtaConstruction, ApproxError> {
    check_parity(r)?;
    if !t.is_positive() || t >= &Rational::one() {
        return Err(ApproxError::BadTarget(t.to_string()));
    }
    let t2 = t.clone() * t.clone();
    let gr = gamma.restrict(2, r)?;
    let br = beta.restrict(2, r)?;
    let ar = alpha.restrict(2, r)?;
    if gr.is_zero() {
        return Err(ApproxError::ZeroGamma);
    }
    let g = normalize(&gr)?;
    let g1 = g.lead_root.clone();

    // Growth root of the numerator √α + β.
    let alpha_scale = ar
        .leading()
        .map(|l| l.root.sqrt_exact().expect("restricted roots are squares"));
    let beta_scale = br.leading().map(|l| l.root.clone());
    let num_scale = match (alpha_scale.clone(), beta_scale) {
        (Some(a), Some(b)) => Some(if a > b { a } else { b }),
        (a, b) => a.or(b),
    };

    let h = if alpha.is_zero() { 0 } else { sqrt_order(&ar, &g1, &t2)? };
    let s = match (&num_scale, &g.ratio) {
        (Some(scale), Some(ratio)) => order_for(&(scale.clone() / g1.clone()), ratio, &t2),
        _ => 0,
    };

    let (inv, phi, inv_tail) = inverse_parts(&gr, s)?;
    let (numerator, sigma, sqrt_tail) = if alpha.is_zero() {
        (
            RadicalPowerSum::rational(br.clone()),
            PowerSumQ::zero(IndexUnit::M),
            Rational::zero(),
        )
    } else {
        let (e, sigma, tail) = sqrt_parts(alpha, r, h)?;
        let rational = e.rational_part.checked_add(&br)?;
        let e = RadicalPowerSum::new(e.radicand, e.radical_part, rational)?;
        (e, sigma, tail)
    };
    let eta = numerator.checked_mul(&inv)?;

    let from_sqrt = sqrt_tail / g1;
    let from_inv = num_scale.map_or_else(Rational::zero, |n| n * inv_tail);
    let error_root = if from_sqrt > from_inv { from_sqrt } else { from_inv };
    let ec = EtaConstruction {
        eta,
        h,
        s,
        t: t.clone(),
        error_root,
        sigma,
        phi,
    };
    debug_assert!(ec.postcondition_holds());
    Ok(ec)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EtaRow {
    pub m: u32,
    /// `|(√α + β)/γ − η| / t^{2m}` as an interval.
    pub ratio: Interval,
    pub bits: u32,
}

impl EtaRow {
    pub fn ratio_upper(&self) -> f64 {
        self.ratio.hi().to_f64_lossy()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EtaReport {
    pub rows: Vec<EtaRow>,
    pub max_ratio: f64,
    /// No ratio is certainly above twice the first one.
    pub bounded: bool,
    /// No ratio is certainly above its predecessor.
    pub non_increasing: bool,
    pub postcondition_ok: bool,
}

impl EtaReport {
    pub fn passed(&self) -> bool {
        self.postcondition_ok && self.bounded
    }
}

fn eval_ratio(
    ec: &EtaConstruction,
    parts: (&PowerSumQ, &PowerSumQ, &PowerSumQ),
    m: u32,
    start_bits: u32,
) -> Result<EtaRow, ApproxError> {
    let (ar, br, gr) = parts;
    let a = ar.evaluate(m);
    if a.is_negative() {
        return Err(ApproxError::NegativeRadicand { m });
    }
    let g = gr.evaluate(m);
    if g.is_zero() {
        return Err(ApproxError::GammaVanishes { m });
    }
    let t2m = num_traits::pow(ec.t.clone(), 2 * m as usize);
    let b = br.evaluate(m);
    let mut bits = start_bits;
    loop {
        let target = (Interval::sqrt(&a, bits) + Interval::point(b.clone())).scale(&g.recip());
        let diff = target - ec.eta.evaluate_interval(m, bits);
        let ratio = diff.abs().scale(&t2m.recip());
        // Relative width 2^-32, or indistinguishable from zero at this precision.
        let negligible = ratio.hi() * Rational::from_integer(BigInt::one() << (bits / 4) as usize) < Rational::one();
        if ratio.is_tight(32) || negligible {
            return Ok(EtaRow { m, ratio, bits });
        }
        if bits >= MAX_PRECISION_BITS {
            return Err(ApproxError::PrecisionExhausted { m, bits });
        }
        bits = (bits * 2).min(MAX_PRECISION_BITS);
    }
}

/// Evaluates the normalized error of `η` over `m_range` with interval
/// arithmetic, doubling precision per row until it decides.
pub fn verify_eta(
    ec: &EtaConstruction,
    alpha: &PowerSumQ,
    beta: &PowerSumQ,
    gamma: &PowerSumQ,
    r: u32,
    m_range: RangeInclusive<u32>,
    precision_bits: u32,
) -> Result<EtaReport, ApproxError> {
    check_parity(r)?;
    if m_range.is_empty() {
        return Err(ApproxError::EmptyRange);
    }
    if precision_bits < 128 {
        return Err(ApproxError::PrecisionTooLow(precision_bits));
    }
    let ar = alpha.restrict(2, r)?;
    let br = beta.restrict(2, r)?;
    let gr = gamma.restrict(2, r)?;
    let rows: Vec<EtaRow> = m_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| eval_ratio(ec, (&ar, &br, &gr), m, precision_bits))
        .collect::<Result<_, _>>()?;

    let first_hi = rows[0].ratio.hi().clone();
    let two = Rational::from_integer(BigInt::from(2));
    // A violation counts only when the intervals certify it.
    let bounded = rows
        .iter()
        .all(|row| row.ratio.lo() <= &(first_hi.clone() * two.clone()));
    let non_increasing = rows.windows(2).all(|w| w[1].ratio.lo() <= w[0].ratio.hi());
    let max_ratio = rows.iter().map(EtaRow::ratio_upper).fold(0.0, f64::max);
    Ok(EtaReport {
        rows,
        max_ratio,
        bounded,
        non_increasing,
        postcondition_ok: ec.postcondition_holds(),
    })
}
