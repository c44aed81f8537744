//! Text form of expressions.
//!
//! ```text
//! expr := term (('+' | '-') term)*
//! term := [number '*'] atom | number
//! atom := 't' ['^' number] | 'abs(t)' '^' number | 'exp(' number '*t' ')'
//! ```
//!
//! Whitespace is ignored. Numbers are decimal literals with optional sign and
//! exponent. `abs(t)` and `exp(..)` forms must stand alone: the Liouville-class
//! algebra is term-level only.

use std::fmt;
use std::str::FromStr;

use crate::error::{FracError, Result};
use crate::liouville::{LiouvilleTerm, WeylTerm};
use crate::symbolic::{PowerSum, PowerTerm};

/// A parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    /// A finite power sum on t > 0.
    Power(PowerSum),
    /// `c*abs(t)^-d` or `c*exp(r*t)` with r > 0.
    Liouville(LiouvilleTerm),
    /// `c*exp(-r*t)` with r > 0, a decaying term for the Weyl integral.
    Decaying(WeylTerm),
}

impl Expression {
    pub fn into_power_sum(self) -> Result<PowerSum> {
        match self {
            Self::Power(p) => Ok(p),
            other => Err(FracError::Domain(format!("{other} is not a power sum"))),
        }
    }

    pub fn as_power_sum(&self) -> Option<&PowerSum> {
        match self {
            Self::Power(p) => Some(p),
            _ => None,
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        match self {
            Self::Power(p) => p.evaluate(t),
            Self::Liouville(l) => l.evaluate(t),
            Self::Decaying(w) => w.evaluate(t),
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power(p) => p.fmt(f),
            Self::Liouville(l) => l.fmt(f),
            Self::Decaying(w) => w.fmt(f),
        }
    }
}

impl FromStr for Expression {
    type Err = FracError;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

enum Term {
    Power(PowerTerm),
    Special(Expression),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(FracError::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&format!("'{}'", c as char))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w = word.as_bytes();
        if self.src[self.pos..].starts_with(w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - start
    }

    fn at_number(&mut self) -> bool {
        matches!(self.peek(), Some(b'0'..=b'9' | b'.' | b'+' | b'-'))
    }

    /// Signed decimal literal; whitespace may separate the sign from the digits.
    fn number(&mut self) -> Result<f64> {
        let mut negative = false;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            negative ^= c == b'-';
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        let int = self.digits();
        let mut frac = 0;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac = self.digits();
        }
        if int + frac == 0 {
            self.pos = start;
            return self.fail("number");
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(if negative { -v } else { v }),
            _ => {
                self.pos = start;
                self.fail("finite number")
            }
        }
    }

    fn atom(&mut self, coeff: f64) -> Result<Term> {
        if self.keyword("abs(") {
            self.expect(b't')?;
            self.expect(b')')?;
            self.expect(b'^')?;
            let at = self.pos;
            let e = self.number()?;
            return match LiouvilleTerm::power_of_abs(coeff, -e) {
                Ok(l) => Ok(Term::Special(Expression::Liouville(l))),
                Err(_) => {
                    self.pos = at;
                    self.fail("negative exponent for abs(t)")
                }
            };
        }
        if self.keyword("exp(") {
            let rate = self.number()?;
            self.expect(b'*')?;
            self.expect(b't')?;
            self.expect(b')')?;
            return Ok(if rate > 0.0 {
                Term::Special(Expression::Liouville(LiouvilleTerm::Exponential { coeff, rate }))
            } else if rate < 0.0 {
                Term::Special(Expression::Decaying(WeylTerm::ExpDecay { coeff, rate: -rate }))
            } else {
                Term::Power(PowerTerm::new(coeff, 0.0))
            });
        }
        if self.eat(b't') {
            let exponent = if self.eat(b'^') { self.number()? } else { 1.0 };
            return Ok(Term::Power(PowerTerm::new(coeff, exponent)));
        }
        self.fail("'t', 'abs(t)' or 'exp('")
    }

    fn term(&mut self) -> Result<Term> {
        if self.at_number() {
            // A bare sign in front of an atom reads as a unit coefficient.
            let save = self.pos;
            let mut sign = 1.0;
            while let Some(c @ (b'+' | b'-')) = self.peek() {
                if c == b'-' {
                    sign = -sign;
                }
                self.pos += 1;
            }
            if matches!(self.peek(), Some(b't' | b'a' | b'e')) {
                return self.atom(sign);
            }
            self.pos = save;
            let c = self.number()?;
            if self.eat(b'*') {
                return self.atom(c);
            }
            return Ok(Term::Power(PowerTerm::new(c, 0.0)));
        }
        self.atom(1.0)
    }
}

/// Parses an expression.
///
/// ```
/// use fracops::{parse, Expression, PowerSum};
///
/// let e = parse("2*t^0.5 + 1").unwrap();
/// assert_eq!(e, Expression::Power(PowerSum::from_pairs(&[(2.0, 0.5), (1.0, 0.0)])));
/// assert!(parse("2*t^").is_err());
/// ```
pub fn parse(source: &str) -> Result<Expression> {
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return p.fail("expression");
    }
    let mut powers = Vec::new();
    let mut special: Option<Expression> = None;
    let mut count = 0usize;
    let mut sign = 1.0;
    loop {
        p.peek();
        let start = p.pos;
        let term = p.term()?;
        count += 1;
        match term {
            Term::Power(t) => powers.push(PowerTerm::new(sign * t.coeff, t.exponent)),
            Term::Special(e) => {
                special = Some(match e {
                    Expression::Liouville(LiouvilleTerm::PowerOfAbs { coeff, delta }) => {
                        Expression::Liouville(LiouvilleTerm::PowerOfAbs {
                            coeff: sign * coeff,
                            delta,
                        })
                    }
                    Expression::Liouville(LiouvilleTerm::Exponential { coeff, rate }) => {
                        Expression::Liouville(LiouvilleTerm::Exponential {
                            coeff: sign * coeff,
                            rate,
                        })
                    }
                    Expression::Decaying(WeylTerm::ExpDecay { coeff, rate }) => {
                        Expression::Decaying(WeylTerm::ExpDecay {
                            coeff: sign * coeff,
                            rate,
                        })
                    }
                    other => other,
                });
            }
        }
        if special.is_some() && count > 1 {
            p.pos = start;
            return p.fail("abs(t) and exp() terms to stand alone");
        }
        match p.peek() {
            None => break,
            Some(b'+') => sign = 1.0,
            Some(b'-') => sign = -1.0,
            Some(_) => return p.fail("'+', '-' or end of input"),
        }
        p.pos += 1;
        if special.is_some() {
            return p.fail("end of input after abs(t) or exp() term");
        }
    }
    Ok(match special {
        Some(e) => e,
        None => Expression::Power(PowerSum::new(powers)),
    })
}
