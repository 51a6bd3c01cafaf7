//! Exact scalars: arbitrary-precision integers, reduced rationals and
//! Gaussian rationals `a + bi`.
//!
//! Every value is kept in its narrowest kind, so a Gaussian rational with a
//! zero imaginary part *is* a rational, and a rational with denominator one
//! *is* an integer. Equality and hashing are therefore structural.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarKind {
    Integer,
    Rational,
    GaussianRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Integer(BigInt),
    /// Denominator is never one.
    Rational(BigRational),
    /// Imaginary part is never zero.
    Gaussian {
        re: BigRational,
        im: BigRational,
    },
}

/// An exact number. Immutable; cloning is the only way to share one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error(
        "cannot order {0} and {1}: Gaussian values with a nonzero imaginary part are unordered"
    )]
    Unordered(String, String),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar(Repr::Integer(BigInt::zero()))
    }

    pub fn integer(value: impl Into<BigInt>) -> Scalar {
        Scalar(Repr::Integer(value.into()))
    }

    pub fn rational(
        numer: impl Into<BigInt>,
        denom: impl Into<BigInt>,
    ) -> Result<Scalar, NumericError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(NumericError::ZeroDenominator);
        }
        Ok(Scalar::from_ratio(BigRational::new(numer.into(), denom)))
    }

    pub fn from_ratio(value: BigRational) -> Scalar {
        if value.is_integer() {
            Scalar(Repr::Integer(value.to_integer()))
        } else {
            Scalar(Repr::Rational(value))
        }
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Scalar {
        if im.is_zero() {
            Scalar::from_ratio(re)
        } else {
            Scalar(Repr::Gaussian { re, im })
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self.0 {
            Repr::Integer(_) => ScalarKind::Integer,
            Repr::Rational(_) => ScalarKind::Rational,
            Repr::Gaussian { .. } => ScalarKind::GaussianRational,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Integer(n) if n.is_zero())
    }

    /// True for integers and rationals.
    pub fn is_real(&self) -> bool {
        !matches!(self.0, Repr::Gaussian { .. })
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match &self.0 {
            Repr::Integer(n) => Some(n),
            _ => None,
        }
    }

    pub fn real(&self) -> BigRational {
        match &self.0 {
            Repr::Integer(n) => BigRational::from_integer(n.clone()),
            Repr::Rational(r) => r.clone(),
            Repr::Gaussian { re, .. } => re.clone(),
        }
    }

    pub fn imag(&self) -> BigRational {
        match &self.0 {
            Repr::Gaussian { im, .. } => im.clone(),
            _ => BigRational::zero(),
        }
    }

    fn parts(&self) -> (BigRational, BigRational) {
        (self.real(), self.imag())
    }

    /// Multiplies by an integer.
    pub fn scale(&self, k: &BigInt) -> Scalar {
        match &self.0 {
            Repr::Integer(n) => Scalar::integer(n * k),
            Repr::Rational(r) => Scalar::from_ratio(r * k),
            Repr::Gaussian { re, im } => Scalar::gaussian(re * k, im * k),
        }
    }

    /// Divides by a nonzero integer; `None` when `d` is zero.
    pub fn checked_div_integer(&self, d: &BigInt) -> Option<Scalar> {
        if d.is_zero() {
            return None;
        }
        let d = BigRational::from_integer(d.clone());
        let (re, im) = self.parts();
        Some(Scalar::gaussian(re / &d, im / d))
    }

    /// Order comparison; fails if either side has a nonzero imaginary part.
    pub fn try_cmp(&self, other: &Scalar) -> Result<Ordering, NumericError> {
        match (&self.0, &other.0) {
            (Repr::Integer(a), Repr::Integer(b)) => Ok(a.cmp(b)),
            (Repr::Gaussian { .. }, _) | (_, Repr::Gaussian { .. }) => {
                Err(NumericError::Unordered(self.to_string(), other.to_string()))
            }
            _ => Ok(self.real().cmp(&other.real())),
        }
    }

    /// A total order (real part, then imaginary part) used only to put
    /// collections of scalars into a canonical sequence.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Integer(a), Repr::Integer(b)) => a.cmp(b),
            _ => self
                .real()
                .cmp(&other.real())
                .then_with(|| self.imag().cmp(&other.imag())),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        match self.try_cmp(other) {
            Ok(ord) => Some(ord),
            Err(_) if self == other => Some(Ordering::Equal),
            Err(_) => None,
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::integer(v)
    }
}

impl From<u64> for Scalar {
    fn from(v: u64) -> Self {
        Scalar::integer(v)
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::integer(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::from_ratio(v)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Integer(a), Repr::Integer(b)) => Scalar::integer(a + b),
            (Repr::Integer(a), Repr::Rational(r)) | (Repr::Rational(r), Repr::Integer(a)) => {
                Scalar::from_ratio(r + a)
            }
            _ => {
                let (ar, ai) = self.parts();
                let (br, bi) = rhs.parts();
                Scalar::gaussian(ar + br, ai + bi)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Integer(a), _) => rhs.scale(a),
            (_, Repr::Integer(b)) => self.scale(b),
            _ => {
                let (ar, ai) = self.parts();
                let (br, bi) = rhs.parts();
                Scalar::gaussian(&ar * &br - &ai * &bi, ar * bi + ai * br)
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Integer(n) => Scalar::integer(-n),
            Repr::Rational(r) => Scalar(Repr::Rational(-r)),
            Repr::Gaussian { re, im } => Scalar(Repr::Gaussian { re: -re, im: -im }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($($imp:ident::$method:ident),*) => {$(
        impl $imp<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add::add, Sub::sub, Mul::mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| &acc + x)
    }
}

impl Sum<Scalar> for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| &acc + &x)
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Integer(n) => write!(f, "{n}"),
            Repr::Rational(r) => write_ratio(f, r),
            Repr::Gaussian { re, im } => {
                if !re.is_zero() {
                    write_ratio(f, re)?;
                    f.write_str(if im.is_positive() { "+" } else { "-" })?;
                } else if im.is_negative() {
                    f.write_str("-")?;
                }
                let magnitude = im.abs();
                if !magnitude.is_one() {
                    write_ratio(f, &magnitude)?;
                }
                f.write_str("i")
            }
        }
    }
}

/// Canonical literal text of a scalar.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

/// Parses a scalar literal: `-5`, `27/2`, `1+i`, `3 - 1/2 i`, `-i`.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseScalarError> {
    Parser::new(text)?.parse()
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_scalar(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar literal {input:?}: {problem} (token {token:?} at byte {position})")]
pub struct ParseScalarError {
    pub input: String,
    pub token: String,
    pub position: usize,
    pub problem: ParseProblem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParseProblem {
    #[error("empty literal")]
    Empty,
    #[error("unexpected character")]
    StrayCharacter,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expected a number")]
    ExpectedNumber,
    #[error("expected '+' or '-'")]
    ExpectedSign,
    #[error("expected 'i'")]
    ExpectedImaginaryUnit,
    #[error("unexpected trailing token")]
    Trailing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Slash,
    Plus,
    Minus,
    I,
}

struct Parser<'a> {
    input: &'a str,
    /// Token, its source text and byte offset.
    tokens: Vec<(Tok, &'a str, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Result<Self, ParseScalarError> {
        let mut tokens = Vec::new();
        let bytes = input.as_bytes();
        let mut at = 0;
        while at < bytes.len() {
            let b = bytes[at];
            let start = at;
            let tok = match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    at += 1;
                    continue;
                }
                b'0'..=b'9' => {
                    while at < bytes.len() && bytes[at].is_ascii_digit() {
                        at += 1;
                    }
                    let digits = &input[start..at];
                    tokens.push((Tok::Num(digits.parse().unwrap()), digits, start));
                    continue;
                }
                b'/' => Tok::Slash,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'i' => Tok::I,
                // U+2212 MINUS SIGN, as written in typeset tables
                _ if input[at..].starts_with('\u{2212}') => {
                    at += '\u{2212}'.len_utf8();
                    tokens.push((Tok::Minus, &input[start..at], start));
                    continue;
                }
                _ => {
                    let ch = input[at..].chars().next().unwrap();
                    return Err(ParseScalarError {
                        input: input.to_string(),
                        token: ch.to_string(),
                        position: at,
                        problem: ParseProblem::StrayCharacter,
                    });
                }
            };
            at += 1;
            tokens.push((tok, &input[start..at], start));
        }
        Ok(Parser {
            input,
            tokens,
            pos: 0,
        })
    }

    fn error(&self, problem: ParseProblem) -> ParseScalarError {
        let (token, position) = match self.tokens.get(self.pos) {
            Some((_, text, at)) => (text.to_string(), *at),
            None => (String::from("<end>"), self.input.len()),
        };
        ParseScalarError {
            input: self.input.to_string(),
            token,
            position,
            problem,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// `true` for a negative sign; absent sign is positive.
    fn sign(&mut self) -> bool {
        if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        }
    }

    fn number(&mut self) -> Option<BigInt> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                Some(n)
            }
            _ => None,
        }
    }

    /// `digits` or `digits/digits`, if present.
    fn magnitude(&mut self) -> Result<Option<BigRational>, ParseScalarError> {
        let start = self.pos;
        let Some(numer) = self.number() else {
            return Ok(None);
        };
        if !self.eat(&Tok::Slash) {
            return Ok(Some(BigRational::from_integer(numer)));
        }
        let Some(denom) = self.number() else {
            return Err(self.error(ParseProblem::ExpectedNumber));
        };
        if denom.is_zero() {
            let (_, _, from) = self.tokens[start];
            let (_, text, at) = self.tokens[self.pos - 1];
            return Err(ParseScalarError {
                input: self.input.to_string(),
                token: self.input[from..at + text.len()].to_string(),
                position: from,
                problem: ParseProblem::ZeroDenominator,
            });
        }
        Ok(Some(BigRational::new(numer, denom)))
    }

    fn finish(&self, value: Scalar) -> Result<Scalar, ParseScalarError> {
        if self.pos == self.tokens.len() {
            Ok(value)
        } else {
            Err(self.error(ParseProblem::Trailing))
        }
    }

    fn parse(mut self) -> Result<Scalar, ParseScalarError> {
        if self.tokens.is_empty() {
            return Err(self.error(ParseProblem::Empty));
        }
        let negative = self.sign();
        let signed = |neg: bool, r: BigRational| if neg { -r } else { r };
        let first = self.magnitude()?;
        if self.eat(&Tok::I) {
            let im = signed(negative, first.unwrap_or_else(BigRational::one));
            return self.finish(Scalar::gaussian(BigRational::zero(), im));
        }
        let Some(first) = first else {
            return Err(self.error(ParseProblem::ExpectedNumber));
        };
        let re = signed(negative, first);
        if self.pos == self.tokens.len() {
            return Ok(Scalar::from_ratio(re));
        }
        let negative_im = match self.peek() {
            Some(Tok::Plus) => false,
            Some(Tok::Minus) => true,
            _ => return Err(self.error(ParseProblem::ExpectedSign)),
        };
        self.pos += 1;
        let magnitude = self.magnitude()?.unwrap_or_else(BigRational::one);
        if !self.eat(&Tok::I) {
            return Err(self.error(ParseProblem::ExpectedImaginaryUnit));
        }
        self.finish(Scalar::gaussian(re, signed(negative_im, magnitude)))
    }
}
