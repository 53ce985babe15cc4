//! Exact test of whether `√α` is too well approximated by a power sum.
//!
//! On the progression `n = 2m + r` write `α_r(m) = α(2m+r)` with leading
//! term `B₁C₁^m`, `C₁ = c₁²`. The question is whether some `ξ ∈ Σ` has
//! `l(α_r − ξ²) < c₁`.
//!
//! Such a `ξ` is unique up to sign. If `l(α_r − ξ²) < c₁` then
//! `√α_r − ξ = (α_r − ξ²)/(√α_r + ξ)` tends to 0, so `ξ` must agree with
//! every term of the asymptotic expansion of `√α_r` whose root is at least
//! 1, and those terms are finitely many. The check therefore builds the
//! expansion far enough that every remaining term has root below 1, keeps
//! the rest, and asks whether the kept part lies in `Σ`: the leading scalar
//! `√B₁` must be rational and every kept root an integer. If so, the
//! residual `α_r − ξ²` decides exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::approx::{sqrt_order, sqrt_parts, ApproxError};
use crate::scalar::ExactScalar;
use crate::{PowerSumError, PowerSumQ, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    PowerSum(#[from] PowerSumError),
    #[error("roots must be integers, found {0}")]
    NonIntegerRoot(String),
    #[error("α is the square of {0}")]
    SquarePowerSum(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No power sum approximates `√α_r` to the critical order.
    Holds,
    /// A witness `ξ` exists.
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "Holds",
            Verdict::Fails => "Fails",
        })
    }
}

/// Why no witness exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// `B₁` is not the square of a rational.
    NonSquareLeadingScalar,
    /// A kept expansion term has a non-integer root.
    NonIntegerRoot(Rational),
    /// The expansion lies in `Σ` but the residual is still too large
    /// (`l(α_r − ξ²) ≥ c₁`).
    ResidualTooLarge(BigInt),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::NonSquareLeadingScalar => f.write_str("NonSquareLeadingScalar"),
            Obstruction::NonIntegerRoot(r) => write!(f, "NonIntegerRoot({r})"),
            Obstruction::ResidualTooLarge(r) => write!(f, "ResidualTooLarge({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub parity: u32,
    pub verdict: Verdict,
    /// `ξ` in `m` whenever the expansion lies in `Σ`.
    pub witness: Option<PowerSumQ>,
    /// `l(α_r − ξ²)`, with `0` for an identically zero residual.
    pub residual_root: Option<BigInt>,
    /// `c₁ = l(α_r)^{1/2}`.
    pub threshold: BigInt,
    pub obstruction: Option<Obstruction>,
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parity = {}", self.parity)?;
        writeln!(f, "verdict = {}", self.verdict)?;
        match &self.witness {
            Some(xi) => writeln!(f, "witness = {xi}")?,
            None => writeln!(f, "witness = none")?,
        }
        match &self.residual_root {
            Some(r) => writeln!(f, "residual_root = {r}")?,
            None => writeln!(f, "residual_root = none")?,
        }
        write!(f, "threshold = {}", self.threshold)?;
        if let Some(o) = &self.obstruction {
            write!(f, "\nobstruction = {o}")?;
        }
        Ok(())
    }
}

fn restricted(alpha: &PowerSumQ, r: u32) -> Result<PowerSumQ, HypothesisError> {
    if let Some(t) = alpha.terms().iter().find(|t| !t.root.is_integer()) {
        return Err(HypothesisError::NonIntegerRoot(t.root.to_string()));
    }
    if r > 1 {
        return Err(ApproxError::BadParity(r).into());
    }
    let ar = alpha.restrict(2, r)?;
    match ar.leading() {
        None => Err(ApproxError::ZeroAlpha.into()),
        Some(l) if !l.coeff.is_positive() => Err(ApproxError::NegativeLeading.into()),
        Some(_) => Ok(ar),
    }
}

/// The unique candidate `ξ` (positive leading coefficient), or the first
/// reason it cannot lie in `Σ`.
pub fn candidate_xi(alpha: &PowerSumQ, r: u32) -> Result<Result<PowerSumQ, Obstruction>, HypothesisError> {
    let ar = restricted(alpha, r)?;
    if ar.leading().unwrap().coeff.sqrt_exact().is_none() {
        return Ok(Err(Obstruction::NonSquareLeadingScalar));
    }
    let one = Rational::one();
    let h = sqrt_order(&ar, &one, &one)?;
    let (expansion, _, _) = sqrt_parts(alpha, r, h)?;
    debug_assert!(expansion.is_rational());
    let kept = expansion.rational_part().filter_terms(|t| t.root >= one);
    if let Some(t) = kept.terms().iter().find(|t| !t.root.is_integer()) {
        return Ok(Err(Obstruction::NonIntegerRoot(t.root.clone())));
    }
    Ok(Ok(kept))
}

/// `l(α_r − ξ²)`, or `0` when the residual vanishes.
pub fn residual_root(alpha_r: &PowerSumQ, xi: &PowerSumQ) -> Result<BigInt, PowerSumError> {
    let rho = alpha_r.checked_sub(&xi.square())?;
    Ok(match rho.leading() {
        Some(t) => t.root.to_integer(),
        None => BigInt::zero(),
    })
}

/// Decides on parity class `r` whether `l(α_r − ξ²) < c₁` for some `ξ ∈ Σ`.
pub fn check_hypothesis(alpha: &PowerSumQ, r: u32) -> Result<HypothesisReport, HypothesisError> {
    let ar = restricted(alpha, r)?;
    let threshold = ar
        .leading()
        .unwrap()
        .root
        .sqrt_exact()
        .expect("restricted roots are squares")
        .to_integer();
    let mut report = HypothesisReport {
        parity: r,
        verdict: Verdict::Holds,
        witness: None,
        residual_root: None,
        threshold,
        obstruction: None,
    };
    match candidate_xi(alpha, r)? {
        Err(ob) => report.obstruction = Some(ob),
        Ok(xi) => {
            let root = residual_root(&ar, &xi)?;
            if root < report.threshold {
                report.verdict = Verdict::Fails;
            } else {
                report.obstruction = Some(Obstruction::ResidualTooLarge(root.clone()));
            }
            report.witness = Some(xi);
            report.residual_root = Some(root);
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodOutlook {
    /// The hypothesis holds on both parities, so the period length of
    /// `√α(n)` tends to infinity.
    UnboundedPeriod,
    NoConclusion,
}

impl fmt::Display for PeriodOutlook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PeriodOutlook::UnboundedPeriod => "UnboundedPeriod",
            PeriodOutlook::NoConclusion => "NoConclusion",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodForecast {
    pub reports: [HypothesisReport; 2],
    pub overall: PeriodOutlook,
}

/// `Some(ξ)` with `ξ² = α` identically; for sums with negative roots, both
/// parity classes must be squares.
pub fn square_root_of(alpha: &PowerSumQ) -> Option<String> {
    if let Some(xi) = alpha.symbolic_sqrt() {
        return Some(xi.to_string());
    }
    if alpha.all_roots_positive() {
        return None;
    }
    let even = alpha.restrict(2, 0).ok()?.symbolic_sqrt()?;
    let odd = alpha.restrict(2, 1).ok()?.symbolic_sqrt()?;
    Some(format!("{even} (n even), {odd} (n odd)"))
}

pub fn forecast_period(alpha: &PowerSumQ) -> Result<PeriodForecast, HypothesisError> {
    if let Some(xi) = square_root_of(alpha) {
        return Err(HypothesisError::SquarePowerSum(xi));
    }
    let reports = [check_hypothesis(alpha, 0)?, check_hypothesis(alpha, 1)?];
    let overall = if reports.iter().all(|r| r.verdict == Verdict::Holds) {
        PeriodOutlook::UnboundedPeriod
    } else {
        PeriodOutlook::NoConclusion
    };
    Ok(PeriodForecast { reports, overall })
}
