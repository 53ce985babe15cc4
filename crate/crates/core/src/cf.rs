//! Continued fractions of quadratic surds `(√D + P)/Q`.
//!
//! Everything here is integer-only: floors of surds come from `isqrt` and
//! sign analysis, never from floating point. Expansions are computed with the
//! PQa recurrence
//!
//! ```text
//! aₖ = ⌊(Pₖ + √D)/Qₖ⌋,  Pₖ₊₁ = aₖQₖ − Pₖ,  Qₖ₊₁ = (D − Pₖ₊₁²)/Qₖ
//! ```
//!
//! which keeps `Qₖ | D − Pₖ²` at every step. A complete quotient is purely
//! periodic exactly when it is reduced (`x > 1`, `−1 < x̄ < 0`), so the
//! preperiod ends at the first reduced state and the period closes on the
//! first revisit of that `(P, Q)` state.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::scalar::IntScalar;

/// Step budget used when callers do not pass one.
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("{0} is a perfect square")]
    PerfectSquare(String),
    #[error("radicand must be positive, got {0}")]
    NonPositiveRadicand(String),
    #[error("surd denominator is zero")]
    ZeroDenominator,
    #[error("no period found within {steps} steps")]
    StepBudgetExceeded { steps: usize },
    #[error("p/q is not below √D; the tail would be nonpositive")]
    NonPositiveTail,
    #[error("denominator must be positive")]
    NonPositiveDenominator,
    #[error("period is empty")]
    EmptyPeriod,
}

/// `⌊√n⌋` for `n ≥ 0`.
///
/// # Panics
/// On negative input.
pub fn isqrt<I: IntScalar>(n: &I) -> I {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

pub fn is_perfect_square<I: IntScalar>(n: &I) -> bool {
    crate::scalar::exact_isqrt(n).is_some()
}

/// The quadratic irrational `(√D + P)/Q`, with `Q | D − P²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd<I> {
    p: I,
    q: I,
    d: I,
}

impl<I: IntScalar> QuadSurd<I> {
    /// Builds `(√d + p)/q`. When `q ∤ d − p²` the triple is rescaled to
    /// `(p|q|, q|q|, d q²)`, which has the same value.
    pub fn new(p: I, q: I, d: I) -> Result<Self, CfError> {
        if q.is_zero() {
            return Err(CfError::ZeroDenominator);
        }
        if !d.is_positive() {
            return Err(CfError::NonPositiveRadicand(d.to_string()));
        }
        if is_perfect_square(&d) {
            return Err(CfError::PerfectSquare(d.to_string()));
        }
        let rem = d.clone() - p.clone() * p.clone();
        if (rem % q.clone()).is_zero() {
            Ok(QuadSurd { p, q, d })
        } else {
            let aq = q.abs();
            Ok(QuadSurd {
                p: p * aq.clone(),
                d: d * q.clone() * q.clone(),
                q: q * aq,
            })
        }
    }

    /// `√d` itself.
    pub fn sqrt(d: I) -> Result<Self, CfError> {
        Self::new(I::zero(), I::one(), d)
    }

    pub fn p(&self) -> &I {
        &self.p
    }

    pub fn q(&self) -> &I {
        &self.q
    }

    pub fn d(&self) -> &I {
        &self.d
    }

    /// `⌊(√D + P)/Q⌋`, exact for either sign of `Q`.
    pub fn floor(&self) -> I {
        floor_parts(&self.p, &self.q, &isqrt(&self.d))
    }

    /// Purely periodic expansion test: `x > 1` and `−1 < x̄ < 0`.
    pub fn is_reduced(&self) -> bool {
        is_reduced_parts(&self.p, &self.q, &isqrt(&self.d))
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(f64::INFINITY);
        (d.sqrt() + self.p.to_f64().unwrap_or(0.0)) / self.q.to_f64().unwrap_or(1.0)
    }
}

impl<I: IntScalar> fmt::Display for QuadSurd<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_negative() {
            write!(f, "(√{} - {})/{}", self.d, self.p.abs(), self.q)
        } else {
            write!(f, "(√{} + {})/{}", self.d, self.p, self.q)
        }
    }
}

fn floor_parts<I: IntScalar>(p: &I, q: &I, s: &I) -> I {
    // √D is irrational, so ⌊√D + P⌋ = s + P and the quotient is never an integer.
    let top = s.clone() + p.clone();
    if q.is_positive() {
        top.div_floor(q)
    } else {
        -(top.div_floor(&q.abs()) + I::one())
    }
}

fn is_reduced_parts<I: IntScalar>(p: &I, q: &I, s: &I) -> bool {
    q.is_positive() && p.is_positive() && p <= s && *q > s.clone() - p.clone() && *q <= s.clone() + p.clone()
}

/// `⌊(√D + P)/Q⌋`.
pub fn surd_floor<I: IntScalar>(s: &QuadSurd<I>) -> I {
    s.floor()
}

/// Eventually periodic expansion `[a0; preperiod, period, period, …]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfExpansion<I> {
    pub a0: I,
    pub preperiod: Vec<I>,
    pub period: Vec<I>,
}

impl<I: IntScalar> CfExpansion<I> {
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// `a0, a1, a2, …` with the period repeated forever.
    pub fn partial_quotients(&self) -> impl Iterator<Item = &I> + '_ {
        std::iter::once(&self.a0)
            .chain(self.preperiod.iter())
            .chain(self.period.iter().cycle())
    }

    /// The `i`-th partial quotient (`i = 0` is `a0`).
    pub fn quotient(&self, i: usize) -> &I {
        if i == 0 {
            return &self.a0;
        }
        let k = i - 1;
        if k < self.preperiod.len() {
            &self.preperiod[k]
        } else {
            &self.period[(k - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn map<J>(&self, f: impl Fn(&I) -> J) -> CfExpansion<J> {
        CfExpansion {
            a0: f(&self.a0),
            preperiod: self.preperiod.iter().map(&f).collect(),
            period: self.period.iter().map(&f).collect(),
        }
    }
}

impl<I: fmt::Display> fmt::Display for CfExpansion<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[I]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let pre = join(&self.preperiod);
        let per = join(&self.period);
        match (pre.is_empty(), per.is_empty()) {
            (true, true) => write!(f, "[{}; |]", self.a0),
            (true, false) => write!(f, "[{}; | {}]", self.a0, per),
            (false, true) => write!(f, "[{}; {} |]", self.a0, pre),
            (false, false) => write!(f, "[{}; {} | {}]", self.a0, pre, per),
        }
    }
}

struct Pqa<I> {
    d: I,
    s: I,
    p: I,
    q: I,
}

impl<I: IntScalar> Pqa<I> {
    fn new(x: &QuadSurd<I>) -> Self {
        Pqa {
            s: isqrt(&x.d),
            d: x.d.clone(),
            p: x.p.clone(),
            q: x.q.clone(),
        }
    }

    fn advance(&mut self) -> I {
        let a = floor_parts(&self.p, &self.q, &self.s);
        let p = a.clone() * self.q.clone() - self.p.clone();
        let q = (self.d.clone() - p.clone() * p.clone()) / self.q.clone();
        debug_assert!(!q.is_zero());
        self.p = p;
        self.q = q;
        a
    }

    fn is_reduced(&self) -> bool {
        is_reduced_parts(&self.p, &self.q, &self.s)
    }
}

/// Expands `x`, handing each period quotient to `on_period` instead of
/// storing it. Returns `(a0, preperiod, period_len)`.
pub fn stream_surd_cf<I: IntScalar>(
    x: &QuadSurd<I>,
    max_steps: usize,
    mut on_period: impl FnMut(&I),
) -> Result<(I, Vec<I>, usize), CfError> {
    let mut w = Pqa::new(x);
    let a0 = w.advance();
    let mut steps = 1usize;
    let mut pre = Vec::new();
    while !w.is_reduced() {
        if steps >= max_steps {
            return Err(CfError::StepBudgetExceeded { steps });
        }
        pre.push(w.advance());
        steps += 1;
    }
    let (p0, q0) = (w.p.clone(), w.q.clone());
    let mut len = 0usize;
    loop {
        if steps >= max_steps {
            return Err(CfError::StepBudgetExceeded { steps });
        }
        let a = w.advance();
        on_period(&a);
        steps += 1;
        len += 1;
        if w.p == p0 && w.q == q0 {
            return Ok((a0, pre, len));
        }
    }
}

/// Eventually periodic expansion of a surd.
pub fn surd_cf<I: IntScalar>(x: &QuadSurd<I>, max_steps: usize) -> Result<CfExpansion<I>, CfError> {
    let mut period = Vec::new();
    let (a0, preperiod, _) = stream_surd_cf(x, max_steps, |a| period.push(a.clone()))?;
    Ok(CfExpansion { a0, preperiod, period })
}

/// `√D = [a0; a1, …, a_{R−1}, 2a0 | repeating]` with the default budget.
pub fn sqrt_cf<I: IntScalar>(d: &I) -> Result<CfExpansion<I>, CfError> {
    sqrt_cf_with_budget(d, DEFAULT_MAX_STEPS)
}

pub fn sqrt_cf_with_budget<I: IntScalar>(d: &I, max_steps: usize) -> Result<CfExpansion<I>, CfError> {
    let x = QuadSurd::sqrt(d.clone())?;
    surd_cf(&x, max_steps)
}

/// Bounded-memory description of a `√D` expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSummary<I> {
    pub a0: I,
    pub period_len: usize,
    /// First quotients of the period (at most `head_len`).
    pub head: Vec<I>,
    pub last: I,
    /// Whole period, when it is no longer than the requested limit.
    pub full: Option<Vec<I>>,
}

pub fn sqrt_cf_summary<I: IntScalar>(
    d: &I,
    max_steps: usize,
    head_len: usize,
    keep_limit: usize,
) -> Result<PeriodSummary<I>, CfError> {
    let x = QuadSurd::sqrt(d.clone())?;
    let mut head = Vec::with_capacity(head_len);
    let mut full = Some(Vec::new());
    let mut last = I::zero();
    let (a0, _, period_len) = stream_surd_cf(&x, max_steps, |a| {
        if head.len() < head_len {
            head.push(a.clone());
        }
        if let Some(v) = full.as_mut() {
            if v.len() < keep_limit {
                v.push(a.clone());
            } else {
                full = None;
            }
        }
        last = a.clone();
    })?;
    Ok(PeriodSummary {
        a0,
        period_len,
        head,
        last,
        full,
    })
}

/// [`sqrt_cf_summary`] for big integers. Radicands below 2^120 run in
/// `i128`, where every intermediate of the walk stays below `4D`.
pub fn exact_summary(
    d: &BigInt,
    max_steps: usize,
    head_len: usize,
    keep_limit: usize,
) -> Result<PeriodSummary<BigInt>, CfError> {
    if d.bits() < 120 {
        if let Some(small) = d.to_i128() {
            let s = sqrt_cf_summary(&small, max_steps, head_len, keep_limit)?;
            return Ok(PeriodSummary {
                a0: BigInt::from(s.a0),
                period_len: s.period_len,
                head: s.head.into_iter().map(BigInt::from).collect(),
                last: BigInt::from(s.last),
                full: s.full.map(|v| v.into_iter().map(BigInt::from).collect()),
            });
        }
    }
    sqrt_cf_summary(d, max_steps, head_len, keep_limit)
}

/// Convergent `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Convergent<I> {
    pub p: I,
    pub q: I,
}

/// Convergents of `[a0; a1, …]` with seeds `p₋₁ = 1, q₋₁ = 0`, so `q₀ = 1`.
pub fn convergents_of<'a, I: IntScalar>(quotients: impl IntoIterator<Item = &'a I>) -> Vec<Convergent<I>> {
    let (mut p1, mut q1) = (I::one(), I::zero());
    let (mut p2, mut q2) = (I::zero(), I::one());
    let mut out = Vec::new();
    for a in quotients {
        let p = a.clone() * p1.clone() + p2;
        let q = a.clone() * q1.clone() + q2;
        p2 = p1;
        q2 = q1;
        p1 = p.clone();
        q1 = q.clone();
        out.push(Convergent { p, q });
    }
    out
}

/// First `k` convergents of an expansion.
pub fn convergents<I: IntScalar>(cf: &CfExpansion<I>, k: usize) -> Vec<Convergent<I>> {
    convergents_of(cf.partial_quotients().take(k))
}

/// Tail convergents `p'ᵢ/q'ᵢ = [a1, …, aᵢ]` for `i = 0..=len`, seeded with
/// `p'₀ = 1, q'₀ = 0` (and `p'₋₁ = 0, q'₋₁ = 1`).
pub fn tail_convergents<I: IntScalar>(quotients: &[I]) -> Vec<Convergent<I>> {
    let mut out = Vec::with_capacity(quotients.len() + 1);
    let (mut p1, mut q1) = (I::one(), I::zero());
    let (mut p2, mut q2) = (I::zero(), I::one());
    out.push(Convergent {
        p: p1.clone(),
        q: q1.clone(),
    });
    for a in quotients {
        let p = a.clone() * p1.clone() + p2;
        let q = a.clone() * q1.clone() + q2;
        p2 = p1;
        q2 = q1;
        p1 = p.clone();
        q1 = q.clone();
        out.push(Convergent { p, q });
    }
    out
}

/// Coefficients `(A, B, C)` of `A β² + B β + C = 0` satisfied by the purely
/// periodic `β = [period, period, …]`: `A = q'_R`, `B = q'_{R−1} − p'_R`,
/// `C = −p'_{R−1}`. `β` is the positive root.
pub fn tail_quadratic<I: IntScalar>(period: &[I]) -> Result<(I, I, I), CfError> {
    if period.is_empty() {
        return Err(CfError::EmptyPeriod);
    }
    let t = tail_convergents(period);
    let r = period.len();
    let a = t[r].q.clone();
    let b = t[r - 1].q.clone() - t[r].p.clone();
    let c = -t[r - 1].p.clone();
    Ok((a, b, c))
}

/// Trace relation `2a0 = (p'_R − q'_{R−1}) / p'_{R−1}` for `√D = [a0; period]`.
pub fn trace_identity_check<I: IntScalar>(a0: &I, period: &[I]) -> bool {
    if period.is_empty() {
        return false;
    }
    let t = tail_convergents(period);
    let r = period.len();
    let two_a0 = a0.clone() + a0.clone();
    t[r].p.clone() - t[r - 1].q.clone() == two_a0 * t[r - 1].p.clone()
}

/// `1/(√D − p/q) = (√(q⁴D) + pq)/(q²D − p²)` for `p/q < √D`.
pub fn surd_reciprocal_tail<I: IntScalar>(d: &I, p: &I, q: &I) -> Result<QuadSurd<I>, CfError> {
    if !q.is_positive() {
        return Err(CfError::NonPositiveDenominator);
    }
    if is_perfect_square(d) {
        return Err(CfError::PerfectSquare(d.to_string()));
    }
    let q2 = q.clone() * q.clone();
    let den = q2.clone() * d.clone() - p.clone() * p.clone();
    // p/q < √D iff p < 0 or p² < q²D; a negative p may give den < 0, which
    // the rationalized form handles unchanged.
    if !p.is_negative() && !den.is_positive() {
        return Err(CfError::NonPositiveTail);
    }
    QuadSurd::new(p.clone() * q.clone(), den, q2.clone() * q2 * d.clone())
}

/// The `h`-th complete quotient `x_h = [a_h; a_{h+1}, …]` of `√D`, recovered
/// from the two preceding convergents:
/// `x_h = (p_{h−2} − q_{h−2}√D)/(q_{h−1}√D − p_{h−1})`.
pub fn complete_quotient<I: IntScalar>(
    d: &I,
    prev: &Convergent<I>,
    prev2: &Convergent<I>,
) -> Result<QuadSurd<I>, CfError> {
    let det = prev2.p.clone() * prev.q.clone() - prev2.q.clone() * prev.p.clone();
    let rational = prev2.p.clone() * prev.p.clone() - prev2.q.clone() * prev.q.clone() * d.clone();
    let den = prev.q.clone() * prev.q.clone() * d.clone() - prev.p.clone() * prev.p.clone();
    // det = ±1: x = (det·√D + rational)/den
    if det.is_positive() {
        QuadSurd::new(rational, den, d.clone())
    } else {
        QuadSurd::new(-rational, -den, d.clone())
    }
}

/// `|√D − pᵢ/qᵢ| < 1/(a_{i+1} qᵢ²)`, decided exactly.
pub fn quality_bound_check<I: IntScalar>(d: &I, cf: &CfExpansion<I>, i: usize) -> bool {
    let conv = convergents(cf, i + 1);
    let Convergent { p, q } = &conv[i];
    let a = cf.quotient(i + 1);
    // Scale by S = a q²: the window is ((apq − 1)/S, (apq + 1)/S).
    let s = a.clone() * q.clone() * q.clone();
    let apq = a.clone() * p.clone() * q.clone();
    let lo = apq.clone() - I::one();
    let hi = apq + I::one();
    let ds2 = d.clone() * s.clone() * s;
    let above_lo = lo.is_negative() || lo.clone() * lo < ds2;
    let below_hi = hi.is_positive() && hi.clone() * hi > ds2;
    above_lo && below_hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    fn v(xs: &[i64]) -> Vec<i64> {
        xs.to_vec()
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&48i64), 6);
        assert_eq!(isqrt(&49i64), 7);
        assert_eq!(isqrt(&0i64), 0);
        let big = BigInt::from(10).pow(60) + 1;
        assert_eq!(isqrt(&big), BigInt::from(10).pow(30));
    }

    #[test]
    fn sqrt_cf_examples() {
        let e = sqrt_cf(&2i64).unwrap();
        assert_eq!((e.a0, e.preperiod.clone(), e.period.clone()), (1, vec![], v(&[2])));
        let e = sqrt_cf(&7i64).unwrap();
        assert_eq!((e.a0, e.period.clone()), (2, v(&[1, 1, 1, 4])));
        assert_eq!(sqrt_cf(&16i64), Err(CfError::PerfectSquare("16".into())));
        assert!(matches!(sqrt_cf(&0i64), Err(CfError::NonPositiveRadicand(_))));
        assert_eq!(sqrt_cf(&33i64).unwrap().period, v(&[1, 2, 1, 10]));
    }

    #[test]
    fn surd_cf_examples() {
        let golden = QuadSurd::new(1i64, 2, 5).unwrap();
        let e = surd_cf(&golden, 100).unwrap();
        assert_eq!((e.a0, e.preperiod.clone(), e.period.clone()), (1, vec![], v(&[1])));
        let e = surd_cf(&QuadSurd::new(1i64, 1, 2).unwrap(), 100).unwrap();
        assert_eq!((e.a0, e.period.clone()), (2, v(&[2])));
        let e = surd_cf(&QuadSurd::new(2i64, 3, 7).unwrap(), 100).unwrap();
        assert_eq!(e.a0, 1);
        assert_eq!(e.period_len(), 4);
    }

    #[test]
    fn surd_cf_with_preperiod() {
        // √2 − 10 = −9 + (√2 − 1), and 1/(√2 − 1) = √2 + 1 is already reduced.
        let x = QuadSurd::new(-10i64, 1, 2).unwrap();
        let e = surd_cf(&x, 100).unwrap();
        assert_eq!(e.a0, -9);
        assert_eq!(e.period, v(&[2]));
        assert!(e.preperiod.iter().all(|a| *a >= 1));
        // [−9; pre | 2] must be √2 − 10 numerically.
        let c = convergents(&e, 12).pop().unwrap();
        assert!((c.p as f64 / c.q as f64 - (2f64.sqrt() - 10.0)).abs() < 1e-7);
    }

    #[test]
    fn step_budget_is_reported() {
        assert_eq!(
            sqrt_cf_with_budget(&7i64, 3),
            Err(CfError::StepBudgetExceeded { steps: 3 })
        );
    }

    #[test]
    fn normalization_scales_non_divisible_surds() {
        // (√3 + 1)/5: 5 ∤ 3 − 1
        let x = QuadSurd::new(1i64, 5, 3).unwrap();
        assert_eq!((x.p, x.q, x.d), (5, 25, 75));
        let x = QuadSurd::new(1i64, -5, 3).unwrap();
        assert_eq!((x.p, x.q, x.d), (5, -25, 75));
        assert!((x.to_f64() - (3f64.sqrt() + 1.0) / -5.0).abs() < 1e-12);
    }

    #[test]
    fn convergent_examples() {
        let c = convergents(&sqrt_cf(&2i64).unwrap(), 3);
        let pq: Vec<_> = c.iter().map(|c| (c.p, c.q)).collect();
        assert_eq!(pq, vec![(1, 1), (3, 2), (7, 5)]);
        let c = convergents(&sqrt_cf(&7i64).unwrap(), 5);
        let pq: Vec<_> = c.iter().map(|c| (c.p, c.q)).collect();
        assert_eq!(pq, vec![(2, 1), (3, 1), (5, 2), (8, 3), (37, 14)]);
        for w in c.windows(2) {
            assert_eq!((w[1].p * w[0].q - w[0].p * w[1].q).abs(), 1);
        }
    }

    #[test]
    fn tail_quadratic_examples() {
        assert_eq!(tail_quadratic(&[2i64]).unwrap(), (1, -2, -1));
        assert_eq!(tail_quadratic(&[1i64]).unwrap(), (1, -1, -1));
        assert_eq!(tail_quadratic(&[1i64, 1, 1, 4]).unwrap(), (9, -12, -3));
        assert_eq!(tail_quadratic::<i64>(&[]), Err(CfError::EmptyPeriod));
        let t = tail_convergents(&[1i64, 1, 1, 4]);
        let p: Vec<_> = t.iter().map(|c| c.p).collect();
        let q: Vec<_> = t.iter().map(|c| c.q).collect();
        assert_eq!(p, v(&[1, 1, 2, 3, 14]));
        assert_eq!(q, v(&[0, 1, 1, 2, 9]));
    }

    #[test]
    fn trace_identity_examples() {
        assert!(trace_identity_check(&1i64, &[2]));
        assert!(trace_identity_check(&2i64, &[1, 1, 1, 4]));
        assert!(trace_identity_check(&5i64, &[10]));
        assert!(!trace_identity_check(&3i64, &[1, 1, 1, 4]));
        // The printed sign (q'_{R−1} − p'_R)/p'_{R−1} gives −2 for √2.
        let t = tail_convergents(&[2i64]);
        assert_eq!((t[0].q - t[1].p) / t[0].p, -2);
    }

    #[test]
    fn reciprocal_tail_examples() {
        let x = surd_reciprocal_tail(&2i64, &1, &1).unwrap();
        assert_eq!((x.p, x.q, x.d), (1, 1, 2));
        let x = surd_reciprocal_tail(&7i64, &2, &1).unwrap();
        assert_eq!((x.p, x.q, x.d), (2, 3, 7));
        let x = surd_reciprocal_tail(&7i64, &5, &2).unwrap();
        assert_eq!((x.p, x.q, x.d), (10, 3, 112));
        assert_eq!(surd_reciprocal_tail(&7i64, &3, &1), Err(CfError::NonPositiveTail));
        assert_eq!(
            surd_reciprocal_tail(&7i64, &3, &0),
            Err(CfError::NonPositiveDenominator)
        );
    }

    #[test]
    fn floor_examples() {
        assert_eq!(QuadSurd::new(2i64, 3, 7).unwrap().floor(), 1);
        assert_eq!(QuadSurd::new(1i64, 1, 2).unwrap().floor(), 2);
        assert_eq!(QuadSurd::new(-10i64, 1, 2).unwrap().floor(), -9);
        // negative denominator: (√7 + 2)/(−3) ≈ −1.548
        assert_eq!(QuadSurd::new(2i64, -3, 7).unwrap().floor(), -2);
    }

    #[test]
    fn quality_bound_examples() {
        let e2 = sqrt_cf(&2i64).unwrap();
        assert!(quality_bound_check(&2i64, &e2, 0));
        let e7 = sqrt_cf(&7i64).unwrap();
        assert!(quality_bound_check(&7i64, &e7, 1));
        for d in 2i64..100 {
            if is_perfect_square(&d) {
                continue;
            }
            let e = sqrt_cf(&BigInt::from(d)).unwrap();
            for i in 0..=20 {
                assert!(quality_bound_check(&BigInt::from(d), &e, i), "D={d} i={i}");
            }
        }
    }

    #[test]
    fn complete_quotients_match_pqa_states() {
        let d = BigInt::from(94);
        let e = sqrt_cf(&d).unwrap();
        let conv = convergents(&e, 30);
        let seed = Convergent {
            p: BigInt::one(),
            q: BigInt::zero(),
        };
        for h in 1..25 {
            let prev2 = if h == 1 { &seed } else { &conv[h - 2] };
            let x = complete_quotient(&d, &conv[h - 1], prev2).unwrap();
            assert_eq!(x.floor(), *e.quotient(h), "h={h}");
            let tail = surd_cf(&x, 1000).unwrap();
            for i in 0..40 {
                assert_eq!(tail.quotient(i), e.quotient(h + i));
            }
        }
    }

    #[test]
    fn summary_matches_full_expansion() {
        let d = BigInt::from(4_000_037u64);
        let full = sqrt_cf(&d).unwrap();
        let s = sqrt_cf_summary(&d, DEFAULT_MAX_STEPS, 8, 1 << 20).unwrap();
        assert_eq!(s.period_len, full.period_len());
        assert_eq!(s.head, full.period[..8.min(full.period_len())].to_vec());
        assert_eq!(&s.last, full.period.last().unwrap());
        assert_eq!(s.full.as_ref(), Some(&full.period));
        let s = sqrt_cf_summary(&d, DEFAULT_MAX_STEPS, 8, 2).unwrap();
        assert!(s.full.is_none());
    }

    #[test]
    fn display_form() {
        assert_eq!(sqrt_cf(&7i64).unwrap().to_string(), "[2; | 1, 1, 1, 4]");
        let e = CfExpansion {
            a0: -9i64,
            preperiod: vec![1, 1],
            period: vec![2],
        };
        assert_eq!(e.to_string(), "[-9; 1, 1 | 2]");
    }
}
