//! Text syntax: `3*2^n + 1*1^n`, `1/2*4^m - 1*(-3)^m`, `(1/4)^m`.
//!
//! The printer always writes `coeff*root^unit` in canonical order, and the
//! parser reads that form back exactly. Input may omit the coefficient
//! (`4^n`) or the power (`5`, meaning `5*1^n`).

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{IndexUnit, PowerSum, PowerSumError};
use crate::scalar::{IntScalar, Scalar};

/// Syntax error with a 1-based column into the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl<T: Scalar> fmt::Display for PowerSum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0*1^{}", self.unit);
        }
        for (i, t) in self.terms.iter().enumerate() {
            let coeff = if i == 0 {
                t.coeff.clone()
            } else if t.coeff.is_negative() {
                f.write_str(" - ")?;
                t.coeff.abs()
            } else {
                f.write_str(" + ")?;
                t.coeff.clone()
            };
            write!(f, "{coeff}*")?;
            if t.root.is_positive() && t.root.is_integral() {
                write!(f, "{}", t.root)?;
            } else {
                write!(f, "({})", t.root)?;
            }
            write!(f, "^{}", self.unit)?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn uint<I: IntScalar + FromStr>(&mut self) -> Result<I, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<I>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("number out of range")
            }
        }
    }

    /// `uint ['/' uint]`, optionally preceded by a minus.
    fn ratio<I: IntScalar + FromStr>(&mut self, allow_sign: bool) -> Result<Ratio<I>, ParseError> {
        let neg = allow_sign && self.eat(b'-');
        let num: I = self.uint()?;
        let den: I = if self.eat(b'/') {
            let at = self.pos;
            let d: I = self.uint()?;
            if d.is_zero() {
                self.pos = at;
                return self.err("zero denominator");
            }
            d
        } else {
            I::one()
        };
        let r = Ratio::new(num, den);
        Ok(if neg { -r } else { r })
    }

    fn base<I: IntScalar + FromStr>(&mut self) -> Result<Ratio<I>, ParseError> {
        self.skip_ws();
        if self.eat(b'(') {
            let r = self.ratio(true)?;
            self.expect(b')')?;
            Ok(r)
        } else {
            self.ratio(false)
        }
    }

    fn unit(&mut self) -> Result<IndexUnit, ParseError> {
        self.skip_ws();
        let u = match self.peek() {
            Some(b'n') => IndexUnit::N,
            Some(b'm') => IndexUnit::M,
            _ => return self.err("expected exponent variable 'n' or 'm'"),
        };
        self.pos += 1;
        Ok(u)
    }

    fn at_power(&mut self) -> bool {
        self.skip_ws();
        self.peek() == Some(b'^')
    }
}

struct RawTerm<I: Integer> {
    coeff: Ratio<I>,
    root: Ratio<I>,
    unit: Option<(IndexUnit, usize)>,
}

fn parse_term<I: IntScalar + FromStr>(cur: &mut Cursor<'_>, negate: bool) -> Result<RawTerm<I>, ParseError> {
    cur.skip_ws();
    let base_start = cur.pos;
    let (coeff, root, unit) = if cur.peek() == Some(b'(') {
        // bare `(p/q)^u`
        let root = cur.base()?;
        cur.expect(b'^')?;
        let at = cur.pos;
        (Ratio::one(), root, Some((cur.unit()?, at)))
    } else {
        let first = cur.ratio(false)?;
        if cur.eat(b'*') {
            let root = cur.base()?;
            cur.expect(b'^')?;
            let at = cur.pos;
            (first, root, Some((cur.unit()?, at)))
        } else if cur.at_power() {
            if !first.is_integer() {
                cur.pos = base_start;
                return cur.err("a fractional base must be parenthesized");
            }
            cur.expect(b'^')?;
            let at = cur.pos;
            (Ratio::one(), first, Some((cur.unit()?, at)))
        } else {
            (first, Ratio::one(), None)
        }
    };
    if root.is_zero() {
        cur.pos = base_start;
        return cur.err("root must be nonzero");
    }
    let coeff = if negate { -coeff } else { coeff };
    Ok(RawTerm { coeff, root, unit })
}

/// Parses the text syntax, exactly inverting the `Display` form.
pub fn parse_power_sum<I: IntScalar + FromStr>(src: &str) -> Result<PowerSum<Ratio<I>>, ParseError> {
    let mut cur = Cursor {
        src: src.as_bytes(),
        pos: 0,
    };
    let mut raw: Vec<RawTerm<I>> = Vec::new();
    let mut negate = cur.eat(b'-');
    if !negate {
        cur.eat(b'+');
    }
    loop {
        raw.push(parse_term(&mut cur, negate)?);
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(b'+') => {
                cur.pos += 1;
                negate = false;
            }
            Some(b'-') => {
                cur.pos += 1;
                negate = true;
            }
            Some(_) => return cur.err("expected '+', '-' or end of input"),
        }
    }
    let mut unit: Option<IndexUnit> = None;
    for t in &raw {
        if let Some((u, at)) = t.unit {
            match unit {
                Some(prev) if prev != u => {
                    return Err(ParseError {
                        column: at + 1,
                        message: format!("mixed exponent variables '{prev}' and '{u}'"),
                    })
                }
                _ => unit = Some(u),
            }
        }
    }
    let unit = unit.unwrap_or(IndexUnit::N);
    PowerSum::from_terms(unit, raw.into_iter().map(|t| (t.coeff, t.root))).map_err(|e| match e {
        PowerSumError::ZeroRoot => ParseError {
            column: 1,
            message: "root must be nonzero".into(),
        },
        other => ParseError {
            column: 1,
            message: other.to_string(),
        },
    })
}

impl<I: IntScalar + FromStr> FromStr for PowerSum<Ratio<I>> {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_power_sum(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PowerSumQ;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn parse(s: &str) -> PowerSumQ {
        s.parse().unwrap()
    }

    #[test]
    fn prints_canonical_form() {
        assert_eq!(parse("3*2^n + 1*1^n").to_string(), "3*2^n + 1*1^n");
        assert_eq!(parse("1 + 4^n").to_string(), "1*4^n + 1*1^n");
        assert_eq!(parse("-2^n + 100").to_string(), "-1*2^n + 100*1^n");
        assert_eq!(parse("1/2*4^m - (-3)^m").to_string(), "1/2*4^m - 1*(-3)^m");
        assert_eq!(parse("(1/4)^m").to_string(), "1*(1/4)^m");
        assert_eq!(parse("2^n - 2^n").to_string(), "0*1^n");
        assert_eq!(parse("0*1^m").unit(), IndexUnit::M);
    }

    #[test]
    fn constants_follow_other_terms_unit() {
        let a = parse("5 + 3^m");
        assert_eq!(a.unit(), IndexUnit::M);
        assert_eq!(a.evaluate(2), BigInt::from(14).into());
    }

    #[test]
    fn errors_carry_columns() {
        let e = "3*2^n + * 4".parse::<PowerSumQ>().unwrap_err();
        assert_eq!(e.column, 9);
        let e = "2^n + 3^m".parse::<PowerSumQ>().unwrap_err();
        assert!(e.message.contains("mixed"));
        assert_eq!(e.column, 9);
        let e = "3*0^n".parse::<PowerSumQ>().unwrap_err();
        assert!(e.message.contains("nonzero"));
        assert!("1/0".parse::<PowerSumQ>().is_err());
        assert!("2^x".parse::<PowerSumQ>().is_err());
        assert!("".parse::<PowerSumQ>().is_err());
        assert!("3*2^n 4".parse::<PowerSumQ>().is_err());
    }

    #[test]
    fn narrow_integer_instantiation() {
        let a: PowerSum<Ratio<i64>> = "3*2^n + 1".parse().unwrap();
        assert_eq!(a.evaluate(4), Ratio::from_integer(49));
        assert!("99999999999999999999999*2^n".parse::<PowerSum<Ratio<i64>>>().is_err());
    }

    fn arb_sum() -> impl Strategy<Value = PowerSumQ> {
        let coeff = (-30i64..=30, 1i64..=12);
        let root = (-12i64..=12, 1i64..=5).prop_filter("nonzero", |(n, _)| *n != 0);
        (proptest::bool::ANY, proptest::collection::vec((coeff, root), 0..5)).prop_map(|(is_m, ts)| {
            let unit = if is_m { IndexUnit::M } else { IndexUnit::N };
            PowerSum::from_terms(
                unit,
                ts.into_iter().map(|((a, b), (c, d))| {
                    (
                        Ratio::new(BigInt::from(a), BigInt::from(b)),
                        Ratio::new(BigInt::from(c), BigInt::from(d)),
                    )
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(a in arb_sum()) {
            let text = a.to_string();
            let back: PowerSumQ = text.parse().unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
