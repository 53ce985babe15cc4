//! Scans of `√α(2m+r)` over `m` and recovery of functional continued
//! fractions `√α(2m+r) = [β₀(m); β₁(m), …, β_R(m)]`.
//!
//! A stabilized period means `W` consecutive usable rows with equal period
//! length at the top of the scanned range. That is evidence for a constant
//! period on an infinite set of `m`, not a proof of it, and holdout
//! agreement of a fitted family is likewise evidence only.

mod experiment;

pub use experiment::{
    parse_config, run_experiment, ConfigError, ExperimentConfig, ExperimentOutcome, EXIT_BUDGET, EXIT_FIT, EXIT_OK,
    EXIT_PARSE,
};

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cf::{
    complete_quotient, convergents_of, exact_summary, quality_bound_check, sqrt_cf_with_budget, trace_identity_check,
    CfError, CfExpansion, Convergent, QuadSurd, DEFAULT_MAX_STEPS,
};
use crate::recurrence::{fit_power_sum, FitError, FitOptions, SequenceSample};
use crate::{PowerSumError, PowerSumQ, Rational};

/// Periods longer than this are summarized rather than stored.
pub const DEFAULT_KEEP_LIMIT: usize = 4096;
/// Partial quotients shown at the start of a period digest.
pub const DIGEST_HEAD: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LabError {
    #[error(transparent)]
    PowerSum(#[from] PowerSumError),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error("parity must be 0 or 1, got {0}")]
    BadParity(u32),
    #[error("m range is empty")]
    EmptyRange,
    #[error("α(2m+r) is not eventually positive")]
    NotEventuallyPositive,
    #[error("α(2m+r) is not an integer at m={m}")]
    NonIntegerValue { m: u32 },
    #[error("α(2m+r) at m={m} is not a positive nonsquare")]
    UnusableValue { m: u32 },
    #[error("period length did not stabilize")]
    NotStabilized,
    #[error("partial quotient {index} has no functional form: {reason}")]
    FitFailed { index: usize, reason: String },
    #[error("⌊√α(2m+r)⌋ is neither η(m) nor η(m)−1 at m={m}")]
    MembershipFailed { m: u32 },
    #[error("prefix length {h} must be between 1 and {available}")]
    BadPrefix { h: usize, available: usize },
}

fn check_parity(r: u32) -> Result<(), LabError> {
    if r > 1 {
        Err(LabError::BadParity(r))
    } else {
        Ok(())
    }
}

/// `α(2m+r)` as a power sum in `m`, required to be eventually positive.
pub fn restricted_alpha(alpha: &PowerSumQ, r: u32) -> Result<PowerSumQ, LabError> {
    check_parity(r)?;
    let ar = alpha.restrict(2, r)?;
    if ar.is_zero() || !ar.eventually_positive()? {
        return Err(LabError::NotEventuallyPositive);
    }
    Ok(ar)
}

fn integer_value(ar: &PowerSumQ, m: u32) -> Result<BigInt, LabError> {
    let v = ar.evaluate(m);
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(LabError::NonIntegerValue { m })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Periodic,
    Square,
    NonPositive,
    NonInteger,
    BudgetExceeded { steps: usize },
}

impl RowStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RowStatus::Periodic => "periodic",
            RowStatus::Square => "square",
            RowStatus::NonPositive => "nonpositive",
            RowStatus::NonInteger => "noninteger",
            RowStatus::BudgetExceeded { .. } => "budget_exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub m: u32,
    /// `α(2m+r)`, or its floor when not an integer.
    pub value: BigInt,
    pub status: RowStatus,
    pub a0: Option<BigInt>,
    pub period_len: Option<usize>,
    pub head: Vec<BigInt>,
    pub last: Option<BigInt>,
    /// The whole period when short enough to keep.
    pub period: Option<Vec<BigInt>>,
    /// Trace identity on the stored period.
    pub trace_ok: Option<bool>,
}

impl ScanRow {
    fn excluded(m: u32, value: BigInt, status: RowStatus) -> Self {
        ScanRow {
            m,
            value,
            status,
            a0: None,
            period_len: None,
            head: Vec::new(),
            last: None,
            period: None,
            trace_ok: None,
        }
    }

    pub fn is_usable(&self) -> bool {
        self.status == RowStatus::Periodic
    }

    /// First quotients, then `...` and the last one for long periods.
    pub fn digest(&self) -> String {
        let Some(len) = self.period_len else {
            return self.status.label().to_string();
        };
        let mut parts: Vec<String> = self.head.iter().map(ToString::to_string).collect();
        if len > self.head.len() {
            if len > self.head.len() + 1 {
                parts.push("...".into());
            }
            parts.push(self.last.as_ref().map(ToString::to_string).unwrap_or_default());
        }
        parts.join(" ")
    }

    /// The expansion, when the period was kept.
    pub fn expansion(&self) -> Option<CfExpansion<BigInt>> {
        Some(CfExpansion {
            a0: self.a0.clone()?,
            preperiod: Vec::new(),
            period: self.period.clone()?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub step_budget: usize,
    pub keep_limit: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            step_budget: DEFAULT_MAX_STEPS,
            keep_limit: DEFAULT_KEEP_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodScan {
    pub r: u32,
    pub rows: Vec<ScanRow>,
}

impl PeriodScan {
    pub fn usable(&self) -> impl Iterator<Item = &ScanRow> + '_ {
        self.rows.iter().filter(|r| r.is_usable())
    }

    pub fn budget_exceeded(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.status, RowStatus::BudgetExceeded { .. }))
            .count()
    }
}

fn scan_row(m: u32, value: Rational, opts: ScanOptions) -> ScanRow {
    if !value.is_integer() {
        return ScanRow::excluded(m, value.floor().to_integer(), RowStatus::NonInteger);
    }
    let value = value.to_integer();
    if !value.is_positive() {
        return ScanRow::excluded(m, value, RowStatus::NonPositive);
    }
    match exact_summary(&value, opts.step_budget, DIGEST_HEAD, opts.keep_limit) {
        Err(CfError::PerfectSquare(_)) => {
            let mut row = ScanRow::excluded(m, value.clone(), RowStatus::Square);
            row.a0 = Some(crate::cf::isqrt(&value));
            row
        }
        Err(CfError::StepBudgetExceeded { steps }) => ScanRow::excluded(m, value, RowStatus::BudgetExceeded { steps }),
        Err(e) => unreachable!("positive radicand: {e}"),
        Ok(s) => {
            let trace_ok = s.full.as_ref().map(|p| trace_identity_check(&s.a0, p));
            ScanRow {
                m,
                value,
                status: RowStatus::Periodic,
                a0: Some(s.a0),
                period_len: Some(s.period_len),
                head: s.head,
                last: Some(s.last),
                period: s.full,
                trace_ok,
            }
        }
    }
}

/// Expands `√α(2m+r)` for every `m` in range. Rows that are squares,
/// nonpositive, non-integral or over budget are marked, not fatal.
pub fn period_scan(
    alpha: &PowerSumQ,
    r: u32,
    m_range: RangeInclusive<u32>,
    opts: ScanOptions,
) -> Result<PeriodScan, LabError> {
    let ar = restricted_alpha(alpha, r)?;
    if m_range.is_empty() {
        return Err(LabError::EmptyRange);
    }
    let rows = m_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| scan_row(m, ar.evaluate(m), opts))
        .collect();
    Ok(PeriodScan { r, rows })
}

/// `R` when the last `window` usable rows share the period length `R`.
pub fn detect_stabilization(scan: &PeriodScan, window: usize) -> Option<usize> {
    if window == 0 {
        return None;
    }
    let usable: Vec<&ScanRow> = scan.usable().collect();
    if usable.len() < window {
        return None;
    }
    let tail = &usable[usable.len() - window..];
    let r = tail[0].period_len?;
    tail.iter().all(|row| row.period_len == Some(r)).then_some(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionalOptions {
    pub window: usize,
    pub scan: ScanOptions,
    pub fit: FitOptions,
    /// Values of `m` past the scan checked against fresh expansions.
    pub validate: u32,
    /// Convergent indices checked against the quality bound per row.
    pub quality_depth: usize,
}

impl Default for FunctionalOptions {
    fn default() -> Self {
        FunctionalOptions {
            window: 5,
            scan: ScanOptions::default(),
            fit: FitOptions::default(),
            validate: 2,
            quality_depth: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalCf {
    pub period_len: usize,
    /// `β₀ … β_R` in `m`.
    pub betas: Vec<PowerSumQ>,
    /// First `m` of the run the family was fitted on.
    pub valid_from: u32,
    pub train_window: (u32, u32),
    /// `m` past the scan where the family matched a fresh expansion.
    pub validated: Vec<u32>,
    /// Convergents checked against the quality bound.
    pub quality_checks: usize,
}

impl FunctionalCf {
    /// `[β₀(m); β₁(m), …, β_R(m)]` at a given `m`.
    pub fn expansion_at(&self, m: u32) -> Option<CfExpansion<BigInt>> {
        let mut vals = self.betas.iter().map(|b| {
            let v = b.evaluate(m);
            v.is_integer().then(|| v.to_integer())
        });
        let a0 = vals.next()??;
        let period = vals.collect::<Option<Vec<_>>>()?;
        Some(CfExpansion {
            a0,
            preperiod: Vec::new(),
            period,
        })
    }
}

impl fmt::Display for FunctionalCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "R = {}", self.period_len)?;
        for (i, b) in self.betas.iter().enumerate() {
            writeln!(f, "beta_{i} = {b}")?;
        }
        write!(f, "valid_from = {}", self.valid_from)
    }
}

fn fit_failed(index: usize, reason: impl fmt::Display) -> LabError {
    LabError::FitFailed {
        index,
        reason: reason.to_string(),
    }
}

/// Scans, detects a stable period and fits every partial quotient.
pub fn fit_functional_cf(
    alpha: &PowerSumQ,
    r: u32,
    m_range: RangeInclusive<u32>,
    opts: FunctionalOptions,
) -> Result<FunctionalCf, LabError> {
    let scan = period_scan(alpha, r, m_range, opts.scan)?;
    let period_len = detect_stabilization(&scan, opts.window).ok_or(LabError::NotStabilized)?;
    fit_from_scan(alpha, &scan, period_len, opts)
}

/// Fits `β₀ … β_R` on the longest run of consecutive rows ending at the top
/// of the scan whose period has length `period_len`, then checks the family
/// against fresh expansions just past the scan.
pub fn fit_from_scan(
    alpha: &PowerSumQ,
    scan: &PeriodScan,
    period_len: usize,
    opts: FunctionalOptions,
) -> Result<FunctionalCf, LabError> {
    let ar = restricted_alpha(alpha, scan.r)?;
    let run: Vec<&ScanRow> = {
        let mut run: Vec<&ScanRow> = scan
            .rows
            .iter()
            .rev()
            .take_while(|row| row.is_usable() && row.period_len == Some(period_len) && row.period.is_some())
            .collect();
        run.reverse();
        run
    };
    let Some(first) = run.first() else {
        return Err(LabError::NotStabilized);
    };
    let start = first.m;
    let mut betas = Vec::with_capacity(period_len + 1);
    let mut train_window = (start, start);
    for i in 0..=period_len {
        let values = run
            .iter()
            .map(|row| {
                if i == 0 {
                    row.a0.clone().unwrap()
                } else {
                    row.period.as_ref().unwrap()[i - 1].clone()
                }
            })
            .collect();
        let fit =
            fit_power_sum(&SequenceSample::new(start, values), opts.fit).map_err(|e: FitError| fit_failed(i, e))?;
        train_window = (fit.train_window.0, fit.holdout_window.1);
        betas.push(fit.fitted);
    }
    if period_len >= 1 {
        let twice = betas[0].scale(&Rational::from_integer(BigInt::from(2)));
        if betas[period_len] != twice {
            return Err(fit_failed(
                period_len,
                format!("β_R = {} is not 2β₀ = {}", betas[period_len], twice),
            ));
        }
    }

    let mut family = FunctionalCf {
        period_len,
        betas,
        valid_from: start,
        train_window,
        validated: Vec::new(),
        quality_checks: 0,
    };
    let top = scan.rows.last().map_or(start, |row| row.m);
    for m in top + 1..=top + opts.validate {
        let d = integer_value(&ar, m)?;
        let actual =
            sqrt_cf_with_budget(&d, opts.scan.step_budget).map_err(|e| fit_failed(0, format!("m={m}: {e}")))?;
        let predicted = family
            .expansion_at(m)
            .ok_or_else(|| fit_failed(0, format!("m={m}: non-integer prediction")))?;
        if predicted != actual {
            let index = (0..=period_len.max(actual.period_len()))
                .find(|&i| predicted.quotient(i) != actual.quotient(i))
                .unwrap_or(0);
            return Err(fit_failed(
                index,
                format!("m={m}: predicted {predicted}, found {actual}"),
            ));
        }
        for i in 0..opts.quality_depth.min(period_len) {
            if !quality_bound_check(&d, &actual, i) {
                return Err(fit_failed(i, format!("m={m}: convergent quality bound fails")));
            }
            family.quality_checks += 1;
        }
        family.validated.push(m);
    }
    Ok(family)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FloorBranch {
    /// `⌊√α⌋ = η`.
    Eta,
    /// `⌊√α⌋ = η − 1`.
    EtaMinusOne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub rows: Vec<(u32, FloorBranch)>,
    /// Smallest `m` from which the branch no longer changes.
    pub constant_from: u32,
    pub final_branch: FloorBranch,
}

/// Checks `⌊√α(2m+r)⌋ ∈ {η(m), η(m) − 1}` over the range.
pub fn floor_eta_membership(
    alpha: &PowerSumQ,
    r: u32,
    eta: &PowerSumQ,
    m_range: RangeInclusive<u32>,
) -> Result<MembershipReport, LabError> {
    let ar = restricted_alpha(alpha, r)?;
    let mut rows = Vec::new();
    for m in m_range {
        let d = integer_value(&ar, m)?;
        if d.is_negative() {
            return Err(LabError::UnusableValue { m });
        }
        let e = integer_value(eta, m)?;
        let a0 = crate::cf::isqrt(&d);
        let branch = if a0 == e {
            FloorBranch::Eta
        } else if a0 == e - 1 {
            FloorBranch::EtaMinusOne
        } else {
            return Err(LabError::MembershipFailed { m });
        };
        rows.push((m, branch));
    }
    let (last_m, final_branch) = *rows.last().ok_or(LabError::EmptyRange)?;
    let constant_from = rows
        .iter()
        .rev()
        .take_while(|(_, b)| *b == final_branch)
        .last()
        .map_or(last_m, |(m, _)| *m);
    Ok(MembershipReport {
        rows,
        constant_from,
        final_branch,
    })
}

/// `x_h = [a_h; a_{h+1}, …]`, the tail of `√D` after `h` quotients.
///
/// Prefixes up to one full pass through the period are accepted.
pub fn tail_surd_of(d: &BigInt, h: usize, step_budget: usize) -> Result<QuadSurd<BigInt>, LabError> {
    let cf = sqrt_cf_with_budget(d, step_budget)?;
    let available = 1 + cf.preperiod.len() + cf.period_len();
    if h == 0 || h > available {
        return Err(LabError::BadPrefix { h, available });
    }
    let conv = convergents_of(cf.partial_quotients().take(h));
    let seed = Convergent {
        p: BigInt::one(),
        q: BigInt::zero(),
    };
    let prev2 = if h >= 2 { &conv[h - 2] } else { &seed };
    Ok(complete_quotient(d, &conv[h - 1], prev2)?)
}

/// [`tail_surd_of`] at `D = α(2m+r)`.
pub fn tail_surd(alpha: &PowerSumQ, r: u32, m: u32, h: usize) -> Result<QuadSurd<BigInt>, LabError> {
    let ar = restricted_alpha(alpha, r)?;
    let d = integer_value(&ar, m)?;
    if !d.is_positive() {
        return Err(LabError::UnusableValue { m });
    }
    tail_surd_of(&d, h, DEFAULT_MAX_STEPS)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionSummary {
    pub values: Vec<bool>,
    /// Value on the trailing constant stretch of the window.
    pub final_value: bool,
    /// Start of that stretch.
    pub constant_from: u32,
    /// Sign of the condition for all large `m`, read off the leading term.
    pub asymptotic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignWindowReport {
    pub ms: Vec<u32>,
    /// `γ′ − (β_u ξ′ − τ′)² ≥ 0`.
    pub lower: ConditionSummary,
    /// `γ′ − (ξ′ + ξ′β_u − τ′)² < 0`.
    pub upper: ConditionSummary,
    /// Fewer than three values of `m`.
    pub inconclusive: bool,
}

impl SignWindowReport {
    /// Both conditions hold at the top of the window.
    pub fn both_hold(&self) -> bool {
        !self.inconclusive && self.lower.final_value && self.upper.final_value
    }
}

// Sign for large m when roots are positive: that of the leading coefficient.
fn eventual_sign(p: &PowerSumQ) -> Option<std::cmp::Ordering> {
    if !p.all_roots_positive() {
        return None;
    }
    Some(match p.leading() {
        None => std::cmp::Ordering::Equal,
        Some(t) => t.coeff.cmp(&Rational::zero()),
    })
}

fn summarize(ms: &[u32], values: Vec<bool>, asymptotic: Option<bool>) -> ConditionSummary {
    let final_value = *values.last().unwrap_or(&false);
    let stretch = values.iter().rev().take_while(|v| **v == final_value).count();
    let constant_from = ms.get(ms.len().saturating_sub(stretch)).copied().unwrap_or(0);
    ConditionSummary {
        values,
        final_value,
        constant_from,
        asymptotic,
    }
}

/// Evaluates the two floor conditions for `β_u = ⌊(√γ′ + τ′)/ξ′⌋` exactly.
pub fn sign_window_check(
    gamma_p: &PowerSumQ,
    tau_p: &PowerSumQ,
    xi_p: &PowerSumQ,
    beta_u: &PowerSumQ,
    m_range: RangeInclusive<u32>,
) -> Result<SignWindowReport, LabError> {
    let lower = gamma_p.checked_sub(&beta_u.checked_mul(xi_p)?.checked_sub(tau_p)?.square())?;
    let upper_inner = xi_p.checked_add(&xi_p.checked_mul(beta_u)?)?.checked_sub(tau_p)?;
    let upper = gamma_p.checked_sub(&upper_inner.square())?;
    let ms: Vec<u32> = m_range.collect();
    let zero = Rational::zero();
    let lower_vals = ms.iter().map(|&m| lower.evaluate(m) >= zero).collect();
    let upper_vals = ms.iter().map(|&m| upper.evaluate(m) < zero).collect();
    Ok(SignWindowReport {
        lower: summarize(&ms, lower_vals, eventual_sign(&lower).map(|s| s.is_ge())),
        upper: summarize(&ms, upper_vals, eventual_sign(&upper).map(|s| s.is_lt())),
        inconclusive: ms.len() < 3,
        ms,
    })
}

/// Number of decimal digits of `|n|`.
pub fn decimal_digits(n: &BigInt) -> usize {
    if n.is_zero() {
        1
    } else {
        n.abs().to_str_radix(10).len()
    }
}

/// Rows whose stored period fails the trace identity.
pub fn trace_failures(scan: &PeriodScan) -> Vec<u32> {
    scan.rows
        .iter()
        .filter(|r| r.trace_ok == Some(false))
        .map(|r| r.m)
        .collect()
}

/// Largest usable `R` over a set of rows.
pub fn max_period(rows: &[&ScanRow]) -> Option<usize> {
    rows.iter().filter_map(|r| r.period_len).max()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PowerSumQ {
        s.parse().unwrap()
    }

    fn scan(a: &str, r: u32, range: RangeInclusive<u32>) -> PeriodScan {
        period_scan(&ps(a), r, range, ScanOptions::default()).unwrap()
    }

    #[test]
    fn scan_examples() {
        let s = scan("4^n + 1", 0, 1..=6);
        assert!(s
            .rows
            .iter()
            .all(|r| r.period_len == Some(1) && r.trace_ok == Some(true)));
        let s = scan("4^n + 2", 0, 1..=6);
        assert!(s.rows.iter().all(|r| r.period_len == Some(2)));

        let s = scan("2^n + 1", 1, 1..=8);
        assert_eq!(s.rows[0].status, RowStatus::Square);
        assert_eq!(s.rows[1].period_len, Some(4));
        assert_eq!(s.rows[1].digest(), "1 2 1 10");
        assert_eq!(s.rows[1].a0, Some(BigInt::from(5)));
        let first = s.rows[1].period_len.unwrap();
        let last = s.rows.last().unwrap().period_len.unwrap();
        assert!(last > first);
    }

    #[test]
    fn scan_marks_budget_and_sign() {
        let s = period_scan(
            &ps("2*4^n + 1"),
            0,
            1..=6,
            ScanOptions {
                step_budget: 5,
                keep_limit: 16,
            },
        )
        .unwrap();
        assert!(s.budget_exceeded() > 0);
        let s = scan("4^n - 100", 0, 1..=3);
        assert_eq!(s.rows[0].status, RowStatus::NonPositive);
        let s = scan("1/2*4^n + 1", 0, 2..=3);
        assert!(s.rows.iter().all(|r| r.status == RowStatus::Periodic));
        let s = scan("1/3*4^n", 0, 1..=2);
        assert_eq!(s.rows[0].status, RowStatus::NonInteger);
        assert!(matches!(
            period_scan(&ps("-4^n"), 0, 1..=2, ScanOptions::default()),
            Err(LabError::NotEventuallyPositive)
        ));
    }

    #[test]
    fn digest_shapes() {
        let row = ScanRow {
            m: 1,
            value: BigInt::from(0),
            status: RowStatus::Periodic,
            a0: Some(BigInt::from(1)),
            period_len: Some(12),
            head: (1..=8).map(BigInt::from).collect(),
            last: Some(BigInt::from(99)),
            period: None,
            trace_ok: None,
        };
        assert_eq!(row.digest(), "1 2 3 4 5 6 7 8 ... 99");
        let mut short = row.clone();
        short.period_len = Some(9);
        assert_eq!(short.digest(), "1 2 3 4 5 6 7 8 99");
    }

    #[test]
    fn stabilization_examples() {
        assert_eq!(detect_stabilization(&scan("4^n + 1", 0, 1..=8), 5), Some(1));
        assert_eq!(detect_stabilization(&scan("2*4^n + 1", 0, 1..=6), 3), None);
        assert_eq!(detect_stabilization(&scan("4^n + 1", 0, 1..=3), 5), None);
    }

    #[test]
    fn functional_examples() {
        let opts = FunctionalOptions {
            window: 2,
            ..FunctionalOptions::default()
        };
        let f = fit_functional_cf(&ps("4^n + 1"), 0, 1..=8, opts).unwrap();
        assert_eq!(f.period_len, 1);
        assert_eq!(f.betas, vec![ps("4^m"), ps("2*4^m")]);
        assert_eq!(f.validated, vec![9, 10]);

        let f = fit_functional_cf(&ps("4^n + 2"), 0, 1..=6, opts).unwrap();
        assert_eq!(f.period_len, 2);
        assert_eq!(f.betas[0].to_string(), "1*4^m");
        assert_eq!(f.betas[1].to_string(), "1*4^m");
        assert_eq!(f.betas[2].to_string(), "2*4^m");

        assert_eq!(
            fit_functional_cf(&ps("2*4^n + 1"), 0, 1..=8, opts),
            Err(LabError::NotStabilized)
        );
    }

    #[test]
    fn membership_examples() {
        let rep = floor_eta_membership(&ps("4^n + 1"), 0, &ps("4^m"), 1..=8).unwrap();
        assert_eq!(rep.final_branch, FloorBranch::Eta);
        assert_eq!(rep.constant_from, 1);

        // α(2m) = (4^m − 2)² + 1 lies just below η² for η = 4^m − 1.
        let rep = floor_eta_membership(&ps("4^n - 4*2^n + 5"), 0, &ps("4^m - 1"), 1..=8).unwrap();
        assert_eq!(rep.final_branch, FloorBranch::EtaMinusOne);

        assert_eq!(
            floor_eta_membership(&ps("4^n + 1"), 0, &ps("5^m"), 1..=8),
            Err(LabError::MembershipFailed { m: 2 })
        );
    }

    #[test]
    fn tail_surd_examples() {
        let x = tail_surd(&ps("4^n + 1"), 0, 1, 1).unwrap();
        assert_eq!(
            x,
            QuadSurd::new(BigInt::from(4), BigInt::from(1), BigInt::from(17)).unwrap()
        );
        let cf = crate::cf::surd_cf(&x, 100).unwrap();
        assert_eq!(cf.to_string(), "[8; | 8]");

        let seven = BigInt::from(7);
        let x = tail_surd_of(&seven, 1, 100).unwrap();
        assert_eq!(
            x,
            QuadSurd::new(BigInt::from(2), BigInt::from(3), seven.clone()).unwrap()
        );
        assert_eq!(crate::cf::surd_cf(&x, 100).unwrap().period_len(), 4);

        assert!(matches!(tail_surd_of(&seven, 9, 100), Err(LabError::BadPrefix { .. })));
        assert!(matches!(tail_surd_of(&seven, 0, 100), Err(LabError::BadPrefix { .. })));
    }

    #[test]
    fn sign_window_examples() {
        // √(16^m + 1) − 4^m = 1/(√(16^m+1) + 4^m): γ′ = 16^m + 1, τ′ = 4^m, ξ′ = 1.
        let (g, t, x) = (ps("16^m + 1"), ps("4^m"), ps("1*1^m"));
        let rep = sign_window_check(&g, &t, &x, &ps("2*4^m"), 1..=8).unwrap();
        assert!(rep.both_hold());
        assert_eq!(rep.lower.asymptotic, Some(true));
        assert_eq!(rep.upper.asymptotic, Some(true));

        let rep = sign_window_check(&g, &t, &x, &ps("2*4^m + 1"), 1..=8).unwrap();
        assert!(!rep.lower.final_value);
        assert!(rep.upper.final_value);
        let rep = sign_window_check(&g, &t, &x, &ps("2*4^m - 1"), 1..=8).unwrap();
        assert!(rep.lower.final_value);
        assert!(!rep.upper.final_value);
        assert_eq!(rep.upper.asymptotic, Some(false));

        let rep = sign_window_check(&g, &t, &x, &ps("2*4^m"), 1..=2).unwrap();
        assert!(rep.inconclusive);
        assert!(!rep.both_hold());
    }
}
