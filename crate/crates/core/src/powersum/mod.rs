//! The ring of power sums `n ↦ Σ bᵢ cᵢⁿ`.
//!
//! A [`PowerSum`] stores its terms in canonical order: strictly decreasing
//! `|root|`, positive root before its negative twin, no zero coefficients and
//! no repeated roots. Equality of power sums is therefore equality of term
//! lists. The empty list is the zero power sum.
//!
//! Every power sum carries an [`IndexUnit`]. Sums in `n` and their parity
//! restrictions in `m` (where `n = t·m + s`) cannot be mixed.

mod text;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::scalar::{ExactScalar, Scalar};

pub use text::{parse_power_sum, ParseError};

/// Which variable the exponent ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexUnit {
    N,
    M,
}

impl IndexUnit {
    pub fn symbol(self) -> char {
        match self {
            IndexUnit::N => 'n',
            IndexUnit::M => 'm',
        }
    }
}

impl fmt::Display for IndexUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PowerSumError {
    #[error("power sum term has root 0")]
    ZeroRoot,
    #[error("index units differ: expected {expected}, found {found}")]
    UnitMismatch { expected: IndexUnit, found: IndexUnit },
    #[error("power sum is identically zero")]
    ZeroPowerSum,
    #[error("negative root {0}; restrict to a parity class first")]
    NegativeRoot(String),
    #[error("restriction needs t ≥ 1 and 0 ≤ s < t (got t={t}, s={s})")]
    BadProgression { t: u32, s: u32 },
}

/// One `coeff · rootⁿ` term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term<T> {
    pub coeff: T,
    pub root: T,
}

impl<T> Term<T> {
    pub fn new(coeff: T, root: T) -> Self {
        Term { coeff, root }
    }
}

/// Largest root `l(α)` of a power sum whose roots are all positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DominantRoot<T>(T);

impl<T> DominantRoot<T> {
    pub fn value(&self) -> &T {
        &self.0
    }

    pub fn into_inner(self) -> T {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSum<T> {
    unit: IndexUnit,
    terms: Vec<Term<T>>,
}

/// Canonical term order: decreasing `|root|`, positive first on ties.
fn canonical_cmp<T: Scalar>(a: &T, b: &T) -> Ordering {
    let (aa, ab) = (a.abs(), b.abs());
    match ab.partial_cmp(&aa).unwrap_or(Ordering::Equal) {
        Ordering::Equal => {
            let (pa, pb) = (a.is_positive(), b.is_positive());
            pb.cmp(&pa)
        }
        o => o,
    }
}

impl<T: Scalar> PowerSum<T> {
    pub fn zero(unit: IndexUnit) -> Self {
        PowerSum {
            unit,
            terms: Vec::new(),
        }
    }

    /// The constant power sum `c · 1ⁿ`.
    pub fn constant(unit: IndexUnit, c: T) -> Self {
        Self::from_terms_unchecked(unit, vec![Term::new(c, T::one())])
    }

    /// `coeff · rootⁿ`.
    pub fn monomial(unit: IndexUnit, coeff: T, root: T) -> Result<Self, PowerSumError> {
        Self::from_terms(unit, [(coeff, root)])
    }

    /// Builds the canonical form: merges like roots, drops zero coefficients
    /// and sorts. Idempotent on canonical input.
    pub fn from_terms<I>(unit: IndexUnit, raw: I) -> Result<Self, PowerSumError>
    where
        I: IntoIterator<Item = (T, T)>,
    {
        let mut terms = Vec::new();
        for (coeff, root) in raw {
            if root.is_zero() {
                return Err(PowerSumError::ZeroRoot);
            }
            terms.push(Term::new(coeff, root));
        }
        Ok(Self::from_terms_unchecked(unit, terms))
    }

    // Roots are known nonzero.
    fn from_terms_unchecked(unit: IndexUnit, mut terms: Vec<Term<T>>) -> Self {
        terms.sort_by(|a, b| canonical_cmp(&a.root, &b.root));
        let mut out: Vec<Term<T>> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.root == t.root => last.coeff = last.coeff.clone() + t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        PowerSum { unit, terms: out }
    }

    pub fn unit(&self) -> IndexUnit {
        self.unit
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term in canonical order.
    pub fn leading(&self) -> Option<&Term<T>> {
        self.terms.first()
    }

    pub fn roots(&self) -> impl Iterator<Item = &T> + '_ {
        self.terms.iter().map(|t| &t.root)
    }

    pub fn all_roots_positive(&self) -> bool {
        self.terms.iter().all(|t| t.root.is_positive())
    }

    pub fn all_roots_integral(&self) -> bool {
        self.terms.iter().all(|t| t.root.is_integral())
    }

    pub fn all_coeffs_integral(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_integral())
    }

    /// Same terms, relabelled index unit.
    pub fn with_unit(mut self, unit: IndexUnit) -> Self {
        self.unit = unit;
        self
    }

    /// Exact value `Σ bᵢ cᵢⁿ`.
    pub fn evaluate(&self, n: u32) -> T {
        self.terms.iter().fold(T::zero(), |acc, t| {
            acc + t.coeff.clone() * num_traits::pow(t.root.clone(), n as usize)
        })
    }

    fn check_unit(&self, other: &Self) -> Result<(), PowerSumError> {
        if self.unit != other.unit {
            return Err(PowerSumError::UnitMismatch {
                expected: self.unit,
                found: other.unit,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PowerSumError> {
        self.check_unit(other)?;
        let terms = self.terms.iter().chain(other.terms.iter()).cloned().collect();
        Ok(Self::from_terms_unchecked(self.unit, terms))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PowerSumError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PowerSumError> {
        self.check_unit(other)?;
        Ok(self.mul_same_unit(other))
    }

    fn mul_same_unit(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term::new(
                    a.coeff.clone() * b.coeff.clone(),
                    a.root.clone() * b.root.clone(),
                ));
            }
        }
        Self::from_terms_unchecked(self.unit, terms)
    }

    pub fn square(&self) -> Self {
        self.mul_same_unit(self)
    }

    /// `α^k`, with `α⁰ = 1`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.unit, T::one());
        for _ in 0..k {
            acc = acc.mul_same_unit(self);
        }
        acc
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.unit);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.coeff.clone() * c.clone(), t.root.clone()))
            .collect();
        PowerSum { unit: self.unit, terms }
    }

    /// Multiplies every root by `k` (i.e. multiplies the sum by `kⁿ`).
    pub fn shift_roots(&self, k: &T) -> Result<Self, PowerSumError> {
        if k.is_zero() {
            return Err(PowerSumError::ZeroRoot);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.coeff.clone(), t.root.clone() * k.clone()))
            .collect();
        Ok(Self::from_terms_unchecked(self.unit, terms))
    }

    /// Keeps only the terms selected by `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Term<T>) -> bool) -> Self {
        let terms = self.terms.iter().filter(|t| keep(t)).cloned().collect();
        PowerSum { unit: self.unit, terms }
    }

    /// `α(t·m + s)` as a power sum in `m`: roots `cᵢᵗ`, coefficients `bᵢ cᵢˢ`.
    pub fn restrict(&self, t: u32, s: u32) -> Result<Self, PowerSumError> {
        if self.unit != IndexUnit::N {
            return Err(PowerSumError::UnitMismatch {
                expected: IndexUnit::N,
                found: self.unit,
            });
        }
        if t == 0 || s >= t {
            return Err(PowerSumError::BadProgression { t, s });
        }
        let terms = self
            .terms
            .iter()
            .map(|term| {
                Term::new(
                    term.coeff.clone() * num_traits::pow(term.root.clone(), s as usize),
                    num_traits::pow(term.root.clone(), t as usize),
                )
            })
            .collect();
        Ok(Self::from_terms_unchecked(IndexUnit::M, terms))
    }

    fn require_positive_roots(&self) -> Result<(), PowerSumError> {
        match self.terms.iter().find(|t| !t.root.is_positive()) {
            Some(t) => Err(PowerSumError::NegativeRoot(t.root.to_string())),
            None => Ok(()),
        }
    }

    /// `l(α)`: the largest root. Defined only for nonzero sums with positive roots.
    pub fn dominant_root(&self) -> Result<DominantRoot<T>, PowerSumError> {
        let lead = self.leading().ok_or(PowerSumError::ZeroPowerSum)?;
        self.require_positive_roots()?;
        Ok(DominantRoot(lead.root.clone()))
    }

    /// Whether `α(n) ≥ 0` for all large `n`.
    pub fn eventually_positive(&self) -> Result<bool, PowerSumError> {
        self.require_positive_roots()?;
        Ok(self.leading().is_none_or(|t| t.coeff.is_positive()))
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PowerSum<U> {
        let terms = self.terms.iter().map(|t| Term::new(f(&t.coeff), f(&t.root))).collect();
        PowerSum::from_terms_unchecked(self.unit, terms)
    }
}

impl<T: ExactScalar> PowerSum<T> {
    /// Finds `ξ` with `ξ² = α` identically and positive leading coefficient.
    ///
    /// Greedy on leading terms: the top term fixes `ξ`'s top term, and every
    /// later top term of `α − ξ²` must be the cross term `2·b₁·d·(c₁e)ⁿ` of a
    /// new term `d·eⁿ` of `ξ` with integer root `e` below the previous one.
    /// Returns `None` for sums with nonpositive roots.
    pub fn symbolic_sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.all_roots_positive() {
            return None;
        }
        let lead = self.leading()?;
        let top_root = lead.root.sqrt_exact()?;
        let top_coeff = lead.coeff.sqrt_exact()?;
        if !top_root.is_integral() || top_coeff.is_zero() {
            return None;
        }
        let two_b1 = top_coeff.clone() + top_coeff.clone();
        let mut xi = Self::monomial(self.unit, top_coeff, top_root.clone()).ok()?;
        // ξ never needs more terms than α has.
        for _ in 0..self.len() {
            let residual = self.checked_sub(&xi.square()).ok()?;
            let Some(next) = residual.leading() else {
                return Some(xi);
            };
            let e = next.root.clone() / top_root.clone();
            let last_root = xi.terms.last().map(|t| t.root.clone())?;
            if !e.is_integral() || !e.is_positive() || e >= last_root {
                return None;
            }
            let d = next.coeff.clone() / two_b1.clone();
            xi = xi.checked_add(&Self::monomial(self.unit, d, e).ok()?).ok()?;
        }
        let residual = self.checked_sub(&xi.square()).ok()?;
        residual.is_zero().then_some(xi)
    }
}

impl<T: Scalar> std::ops::Neg for &PowerSum<T> {
    type Output = PowerSum<T>;

    fn neg(self) -> PowerSum<T> {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(-t.coeff.clone(), t.root.clone()))
            .collect();
        PowerSum { unit: self.unit, terms }
    }
}

impl<T: Scalar> std::ops::Neg for PowerSum<T> {
    type Output = PowerSum<T>;

    fn neg(self) -> PowerSum<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{PowerSumQ, Rational};
    use num_bigint::BigInt;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn qr(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ps(unit: IndexUnit, terms: &[(i64, i64)]) -> PowerSumQ {
        PowerSum::from_terms(unit, terms.iter().map(|&(c, r)| (q(c), q(r)))).unwrap()
    }

    fn n(terms: &[(i64, i64)]) -> PowerSumQ {
        ps(IndexUnit::N, terms)
    }

    fn m(terms: &[(i64, i64)]) -> PowerSumQ {
        ps(IndexUnit::M, terms)
    }

    #[test]
    fn normalize_merges_and_cancels() {
        assert_eq!(n(&[(1, 2), (3, 2)]).terms(), &[Term::new(q(4), q(2))]);
        assert!(n(&[(1, 2), (-1, 2)]).is_zero());
        assert_eq!(
            PowerSumQ::from_terms(IndexUnit::N, [(q(1), q(0))]),
            Err(PowerSumError::ZeroRoot)
        );
    }

    #[test]
    fn canonical_order_ties_positive_first() {
        let a = n(&[(1, -2), (1, 1), (1, 2), (1, -3)]);
        let roots: Vec<_> = a.roots().cloned().collect();
        assert_eq!(roots, vec![q(-3), q(2), q(-2), q(1)]);
        let again = PowerSum::from_terms(
            IndexUnit::N,
            a.terms().iter().map(|t| (t.coeff.clone(), t.root.clone())),
        )
        .unwrap();
        assert_eq!(a, again);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(n(&[(3, 2), (1, 1)]).evaluate(4), q(49));
        assert_eq!(PowerSumQ::zero(IndexUnit::N).evaluate(10), q(0));
        let a = PowerSum::from_terms(IndexUnit::N, [(qr(1, 2), q(4)), (q(-1), q(3))]).unwrap();
        assert_eq!(a.evaluate(3), q(5));
    }

    #[test]
    fn ring_examples() {
        assert_eq!(n(&[(1, 2)]).checked_mul(&n(&[(1, 3)])).unwrap(), n(&[(1, 6)]));
        assert_eq!(n(&[(1, 2), (1, 1)]).square(), n(&[(1, 4), (2, 2), (1, 1)]));
        let a = n(&[(3, 5), (-2, -1)]);
        assert!(a.checked_add(&-&a).unwrap().is_zero());
        assert_eq!(
            n(&[(1, 2)]).checked_add(&m(&[(1, 2)])),
            Err(PowerSumError::UnitMismatch {
                expected: IndexUnit::N,
                found: IndexUnit::M
            })
        );
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(n(&[(1, 2), (1, 1)]).restrict(2, 1).unwrap(), m(&[(2, 4), (1, 1)]));
        assert_eq!(n(&[(1, -2)]).restrict(2, 0).unwrap(), m(&[(1, 4)]));
        assert_eq!(n(&[(1, 3), (-1, 2)]).restrict(2, 0).unwrap(), m(&[(1, 9), (-1, 4)]));
        assert!(matches!(
            m(&[(1, 2)]).restrict(2, 0),
            Err(PowerSumError::UnitMismatch { .. })
        ));
        assert!(matches!(
            n(&[(1, 2)]).restrict(2, 2),
            Err(PowerSumError::BadProgression { .. })
        ));
    }

    #[test]
    fn restrict_merges_opposite_roots() {
        // 2ⁿ + (−2)ⁿ vanishes on odd n.
        let a = n(&[(1, 2), (1, -2)]);
        assert_eq!(a.restrict(2, 0).unwrap(), m(&[(2, 4)]));
        assert!(a.restrict(2, 1).unwrap().is_zero());
    }

    #[test]
    fn dominant_root_examples() {
        assert_eq!(n(&[(5, 7), (-1, 3), (2, 1)]).dominant_root().unwrap().value(), &q(7));
        let prod = n(&[(1, 2), (1, 1)]).checked_mul(&n(&[(1, 3), (-1, 1)])).unwrap();
        assert_eq!(prod.dominant_root().unwrap().value(), &q(6));
        assert_eq!(
            PowerSumQ::zero(IndexUnit::N).dominant_root(),
            Err(PowerSumError::ZeroPowerSum)
        );
        assert!(matches!(
            n(&[(1, -3)]).dominant_root(),
            Err(PowerSumError::NegativeRoot(_))
        ));
    }

    #[test]
    fn symbolic_sqrt_examples() {
        assert_eq!(n(&[(1, 4), (6, 2), (9, 1)]).symbolic_sqrt(), Some(n(&[(1, 2), (3, 1)])));
        assert_eq!(n(&[(1, 4), (1, 1)]).symbolic_sqrt(), None);
        assert_eq!(n(&[(1, 9)]).symbolic_sqrt(), Some(n(&[(1, 3)])));
        assert_eq!(n(&[(1, 2)]).symbolic_sqrt(), None);
        // (2ⁿ − 1/2)² with a rational coefficient.
        let xi = PowerSum::from_terms(IndexUnit::N, [(q(1), q(2)), (qr(-1, 2), q(1))]).unwrap();
        assert_eq!(xi.square().symbolic_sqrt(), Some(xi));
    }

    #[test]
    fn eventually_positive_examples() {
        assert_eq!(n(&[(1, 2), (-3, 1)]).eventually_positive(), Ok(true));
        assert_eq!(n(&[(-1, 2), (100, 1)]).eventually_positive(), Ok(false));
        assert_eq!(PowerSumQ::zero(IndexUnit::N).eventually_positive(), Ok(true));
        assert!(n(&[(1, -2)]).eventually_positive().is_err());
    }

    #[test]
    fn float_instantiation_evaluates() {
        let a: PowerSum<f64> = PowerSum::from_terms(IndexUnit::N, [(3.0, 2.0), (1.0, 1.0)]).unwrap();
        assert_eq!(a.evaluate(4), 49.0);
        assert_eq!(a.square().evaluate(2), 169.0);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-10i64..=10, 1i64..=10).prop_map(|(a, b)| qr(a, b))
    }

    fn small_sum(positive: bool) -> impl Strategy<Value = PowerSumQ> {
        let root = if positive {
            (1i64..=10).boxed()
        } else {
            (-10i64..=10).prop_filter("nonzero", |r| *r != 0).boxed()
        };
        proptest::collection::vec((small_rational(), root), 0..=4)
            .prop_map(|terms| PowerSum::from_terms(IndexUnit::N, terms.into_iter().map(|(c, r)| (c, q(r)))).unwrap())
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_sum(false), b in small_sum(false), c in small_sum(false)) {
            let ab_c = a.checked_add(&b).unwrap().checked_add(&c).unwrap();
            let a_bc = a.checked_add(&b.checked_add(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let mab_c = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
            let ma_bc = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(mab_c, ma_bc);
            let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
            let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(a.checked_add(&-&a).unwrap().is_zero());
        }

        #[test]
        fn dominant_root_laws(a in small_sum(true), b in small_sum(true)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let la = a.dominant_root().unwrap().into_inner();
            let lb = b.dominant_root().unwrap().into_inner();
            let prod = a.checked_mul(&b).unwrap();
            prop_assert_eq!(prod.dominant_root().unwrap().into_inner(), la.clone() * lb.clone());
            let sum = a.checked_add(&b).unwrap();
            if !sum.is_zero() {
                prop_assert!(sum.dominant_root().unwrap().into_inner() <= la.max(lb));
            }
        }

        #[test]
        fn growth_sandwich(a in small_sum(true)) {
            prop_assume!(!a.is_zero());
            let lead = a.leading().unwrap().clone();
            prop_assume!(lead.coeff.is_positive());
            // |α(n) − b₁ l(α)ⁿ| ≤ (Σ_{i≥2} |bᵢ|) · c₂ⁿ, so
            // k₁ = b₁/2 and k₂ = 2b₁ work once (c₂/l)ⁿ · Σ|bᵢ| ≤ b₁/2.
            let rest: Rational = a.terms()[1..].iter().map(|t| t.coeff.abs()).sum();
            let k1 = lead.coeff.clone() / q(2);
            let k2 = lead.coeff.clone() * q(2);
            for nn in [10u32, 20, 40] {
                let l_n = num_traits::pow(lead.root.clone(), nn as usize);
                let c2_n = a.terms().get(1).map_or(q(0), |t| num_traits::pow(t.root.clone(), nn as usize));
                if rest.clone() * c2_n > k1.clone() * l_n.clone() {
                    continue;
                }
                let v = a.evaluate(nn);
                prop_assert!(k1.clone() * l_n.clone() <= v);
                prop_assert!(v <= k2.clone() * l_n);
            }
        }

        #[test]
        fn restriction_commutes_with_evaluation(a in small_sum(false), t in 1u32..=3, s_raw in 0u32..3, mm in 0u32..=20) {
            let s = s_raw % t;
            let r = a.restrict(t, s).unwrap();
            prop_assert_eq!(r.evaluate(mm), a.evaluate(t * mm + s));
        }

        #[test]
        fn sqrt_of_square(xi in small_sum(true)) {
            prop_assume!(!xi.is_zero());
            let xi = if xi.leading().unwrap().coeff.is_negative() { -xi } else { xi };
            prop_assert_eq!(xi.square().symbolic_sqrt(), Some(xi));
        }
    }
}
