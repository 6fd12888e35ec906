//! Polynomial text and JSON input, parsed into a [`Support`] with exact
//! rational coefficients, and the canonical text form of a support.
//!
//! Text grammar (whitespace-insensitive):
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*' factor) | ('/' nat) | var-factor)*
//! factor := nat | var ['^' nat] | '(' poly ')'
//! var    := 'x' | 'y' | 'z'
//! ```
//!
//! A `*` is required between a coefficient and a variable (`2*x`), but may be
//! omitted between variables (`x^4y`). Parenthesized sums are expanded.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Axis, ExponentVector, Rational, MAX_EXPONENT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariable { pos: usize, name: char },
    #[error("polynomial has empty support")]
    EmptySupport,
    #[error("invalid JSON input: {0}")]
    Json(String),
    #[error("dimension mismatch: expected {expected}, input has {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Coefficient of a monomial: an exact non-zero rational, or a marker for
/// "some generic non-zero value".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficient {
    Exact(Rational),
    Generic,
}

/// A finite set of exponent vectors, each carrying a coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    dim: usize,
    monomials: BTreeMap<ExponentVector, Coefficient>,
}

impl Support {
    pub fn new(dim: usize) -> Support {
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3");
        Support { dim, monomials: BTreeMap::new() }
    }

    /// Support-only construction; every coefficient is generic.
    pub fn from_points<I, P>(dim: usize, points: I) -> Support
    where
        I: IntoIterator<Item = P>,
        P: Into<ExponentVector>,
    {
        let mut s = Support::new(dim);
        for p in points {
            s.insert(p.into(), Coefficient::Generic);
        }
        s
    }

    /// Adds a monomial, combining it with an existing term of the same exponent.
    /// Exact terms that cancel are removed; a generic term absorbs anything.
    pub fn insert(&mut self, e: ExponentVector, c: Coefficient) {
        assert_eq!(e.dim(), self.dim, "exponent dimension mismatch");
        if let Coefficient::Exact(r) = &c {
            if r.is_zero() {
                return;
            }
        }
        match self.monomials.remove(&e) {
            None => {
                self.monomials.insert(e, c);
            }
            Some(Coefficient::Exact(old)) => match c {
                Coefficient::Exact(r) => {
                    let sum = old + r;
                    if !sum.is_zero() {
                        self.monomials.insert(e, Coefficient::Exact(sum));
                    }
                }
                Coefficient::Generic => {
                    self.monomials.insert(e, Coefficient::Generic);
                }
            },
            Some(Coefficient::Generic) => {
                self.monomials.insert(e, Coefficient::Generic);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, e: &ExponentVector) -> bool {
        self.monomials.contains_key(e)
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Option<&Coefficient> {
        self.monomials.get(e)
    }

    /// Exponent vectors in ascending lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = &ExponentVector> + '_ {
        self.monomials.keys()
    }

    pub fn point_vec(&self) -> Vec<ExponentVector> {
        self.monomials.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExponentVector, &Coefficient)> + '_ {
        self.monomials.iter()
    }

    pub fn has_generic(&self) -> bool {
        self.monomials.values().any(|c| matches!(c, Coefficient::Generic))
    }

    /// The same exponents with every coefficient marked generic.
    pub fn generic(&self) -> Support {
        Support::from_points(self.dim, self.monomials.keys().cloned())
    }

    /// Restriction to the monomials whose exponents lie in `points`.
    pub fn restricted<'a>(&self, points: impl IntoIterator<Item = &'a ExponentVector>) -> Support {
        let mut s = Support::new(self.dim);
        for p in points {
            if let Some(c) = self.monomials.get(p) {
                s.monomials.insert(p.clone(), c.clone());
            }
        }
        s
    }

    /// Formal partial derivative. Generic coefficients stay generic.
    pub fn derivative(&self, axis: Axis) -> Support {
        let mut s = Support::new(self.dim);
        for (e, c) in &self.monomials {
            let k = e.get(axis);
            if let Some(lowered) = e.lowered(axis) {
                let c = match c {
                    Coefficient::Exact(r) => Coefficient::Exact(r * &Rational::from(k as i64)),
                    Coefficient::Generic => Coefficient::Generic,
                };
                s.insert(lowered, c);
            }
        }
        s
    }
}

/// Parses text or JSON input (autodetected by a leading `{` or `[`).
pub fn parse_input(text: &str, dim: usize) -> Result<Support, ParseError> {
    let t = text.trim_start();
    if t.starts_with('{') {
        parse_json(t, Some(dim))
    } else {
        parse_polynomial(text, dim)
    }
}

pub fn parse_polynomial(text: &str, dim: usize) -> Result<Support, ParseError> {
    if dim != 2 && dim != 3 {
        return Err(ParseError::DimensionMismatch { expected: 3, found: dim });
    }
    let tokens = tokenize(text, dim)?;
    let mut parser = Parser { tokens, pos: 0, dim, end: text.len() };
    let poly = parser.expr()?;
    if let Some(tok) = parser.peek() {
        return Err(parser.error_at(tok.pos, format!("unexpected {}", tok.kind.describe())));
    }
    let mut s = Support::new(dim);
    for (e, c) in poly {
        let e = ExponentVector::new(e).map_err(|err| ParseError::Syntax { pos: 0, message: err.to_string() })?;
        s.insert(e, Coefficient::Exact(Rational::from(c)));
    }
    if s.is_empty() {
        return Err(ParseError::EmptySupport);
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Nat(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Nat(n) => format!("number {n}"),
            TokenKind::Var(i) => format!("variable {}", Axis::ALL[*i]),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Slash => "'/'".into(),
            TokenKind::Caret => "'^'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn tokenize(text: &str, dim: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((pos, ch)) = chars.next() {
        let kind = match ch {
            c if c.is_whitespace() => continue,
            '0'..='9' => {
                let mut digits = String::from(ch);
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                TokenKind::Nat(digits.parse().expect("digits"))
            }
            'x' | 'y' | 'z' => {
                let i = (ch as u8 - b'x') as usize;
                if i >= dim {
                    return Err(ParseError::UnknownVariable { pos, name: ch });
                }
                TokenKind::Var(i)
            }
            '+' => TokenKind::Plus,
            '-' => TokenKind::Minus,
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            c if c.is_alphabetic() => return Err(ParseError::UnknownVariable { pos, name: c }),
            c => {
                return Err(ParseError::Syntax { pos, message: format!("unexpected character '{c}'") })
            }
        };
        out.push(Token { kind, pos });
    }
    Ok(out)
}

type Poly = BTreeMap<Vec<u32>, BigRational>;

fn poly_const(dim: usize, c: BigRational) -> Poly {
    let mut p = Poly::new();
    if !c.is_zero() {
        p.insert(vec![0; dim], c);
    }
    p
}

fn poly_add(mut a: Poly, b: Poly, sign: i32) -> Poly {
    for (e, c) in b {
        let c = if sign < 0 { -c } else { c };
        let entry = a.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
    }
    a.retain(|_, c| !c.is_zero());
    a
}

fn poly_is_constant(p: &Poly) -> bool {
    p.keys().all(|e| e.iter().all(|&c| c == 0))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    dim: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos, message: message.into() }
    }

    fn expect_nat(&mut self, what: &str) -> Result<BigInt, ParseError> {
        match self.peek().cloned() {
            Some(Token { kind: TokenKind::Nat(n), .. }) => {
                self.pos += 1;
                Ok(n)
            }
            Some(tok) => Err(self.error_at(tok.pos, format!("expected {what}, found {}", tok.kind.describe()))),
            None => Err(self.error_at(self.end, format!("expected {what}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut sign = 1;
        match self.peek_kind() {
            Some(TokenKind::Plus) => self.pos += 1,
            Some(TokenKind::Minus) => {
                self.pos += 1;
                sign = -1;
            }
            _ => {}
        }
        let mut acc = poly_add(Poly::new(), self.term()?, sign);
        loop {
            let sign = match self.peek_kind() {
                Some(TokenKind::Plus) => 1,
                Some(TokenKind::Minus) => -1,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            acc = poly_add(acc, t, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let (mut acc, mut last_coefficient) = self.factor()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Star) => {
                    self.pos += 1;
                    let (f, is_coeff) = self.factor()?;
                    acc = self.multiply(&acc, &f)?;
                    last_coefficient = is_coeff;
                }
                Some(TokenKind::Slash) => {
                    let pos = self.here();
                    self.pos += 1;
                    let d = self.expect_nat("a natural number after '/'")?;
                    if d.is_zero() {
                        return Err(self.error_at(pos, "division by zero"));
                    }
                    let inv = BigRational::new(BigInt::one(), d);
                    for c in acc.values_mut() {
                        *c = &*c * &inv;
                    }
                }
                Some(TokenKind::Var(_)) => {
                    if last_coefficient {
                        return Err(self.error_at(self.here(), "expected '*' between coefficient and variable"));
                    }
                    let (f, _) = self.factor()?;
                    acc = self.multiply(&acc, &f)?;
                    last_coefficient = false;
                }
                Some(TokenKind::Nat(_)) | Some(TokenKind::LParen) => {
                    return Err(self.error_at(self.here(), "expected '*' before this factor"));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// Returns the factor and whether it is a pure coefficient.
    fn factor(&mut self) -> Result<(Poly, bool), ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error_at(self.end, "unexpected end of input"));
        };
        match tok.kind {
            TokenKind::Nat(n) => {
                self.pos += 1;
                Ok((poly_const(self.dim, BigRational::from_integer(n)), true))
            }
            TokenKind::Var(i) => {
                self.pos += 1;
                let mut k: u32 = 1;
                if self.peek_kind() == Some(&TokenKind::Caret) {
                    self.pos += 1;
                    let pos = self.here();
                    let n = self.expect_nat("an exponent after '^'")?;
                    k = u32::try_from(&n)
                        .ok()
                        .filter(|&k| k <= MAX_EXPONENT)
                        .ok_or_else(|| self.error_at(pos, format!("exponent {n} exceeds {MAX_EXPONENT}")))?;
                }
                let mut e = vec![0; self.dim];
                e[i] = k;
                let mut p = Poly::new();
                p.insert(e, BigRational::one());
                Ok((p, false))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek_kind() {
                    Some(TokenKind::RParen) => self.pos += 1,
                    _ => return Err(self.error_at(self.here(), "expected ')'")),
                }
                if self.peek_kind() == Some(&TokenKind::Caret) {
                    return Err(self.error_at(self.here(), "powers of parenthesized expressions are not supported"));
                }
                let is_coeff = poly_is_constant(&inner);
                Ok((inner, is_coeff))
            }
            other => Err(self.error_at(tok.pos, format!("unexpected {}", other.describe()))),
        }
    }

    fn multiply(&self, a: &Poly, b: &Poly) -> Result<Poly, ParseError> {
        let mut out = Poly::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if e.iter().any(|&c| c > MAX_EXPONENT) {
                    return Err(self.error_at(self.here(), format!("exponent exceeds {MAX_EXPONENT}")));
                }
                let entry = out.entry(e).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonSupport {
    vars: Vec<String>,
    monomials: Vec<JsonMonomial>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonMonomial {
    e: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<serde_json::Value>,
}

/// Parses `{"vars":[...], "monomials":[{"e":[...], "c":"p/q"}, ...]}`.
/// A missing `"c"` marks the coefficient generic.
pub fn parse_json(text: &str, dim: Option<usize>) -> Result<Support, ParseError> {
    let raw: JsonSupport = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    support_from_json(raw, dim)
}

fn support_from_json(raw: JsonSupport, dim: Option<usize>) -> Result<Support, ParseError> {
    let n = raw.vars.len();
    let expected = ["x", "y", "z"];
    if !(n == 2 || n == 3) || raw.vars.iter().zip(expected).any(|(v, e)| v != e) {
        return Err(ParseError::Json(format!("vars must be [\"x\",\"y\"] or [\"x\",\"y\",\"z\"], got {:?}", raw.vars)));
    }
    if let Some(d) = dim {
        if d != n {
            return Err(ParseError::DimensionMismatch { expected: d, found: n });
        }
    }
    let mut s = Support::new(n);
    for m in raw.monomials {
        if m.e.len() != n {
            return Err(ParseError::Json(format!("exponent {:?} does not have {n} entries", m.e)));
        }
        let e = ExponentVector::new(m.e).map_err(|e| ParseError::Json(e.to_string()))?;
        let c = match m.c {
            None | Some(serde_json::Value::Null) => Coefficient::Generic,
            Some(serde_json::Value::String(s)) => Coefficient::Exact(s.parse().map_err(ParseError::Json)?),
            Some(serde_json::Value::Number(num)) => {
                let r: Rational = num.to_string().parse().map_err(|_| {
                    ParseError::Json(format!("coefficient {num} is not an integer; use a \"p/q\" string"))
                })?;
                Coefficient::Exact(r)
            }
            Some(other) => return Err(ParseError::Json(format!("bad coefficient {other}"))),
        };
        s.insert(e, c);
    }
    if s.is_empty() {
        return Err(ParseError::EmptySupport);
    }
    Ok(s)
}

/// Parses either a single JSON support object or an array of them.
pub fn parse_json_batch(text: &str, dim: Option<usize>) -> Result<Vec<Support>, ParseError> {
    let t = text.trim_start();
    if t.starts_with('[') {
        let raws: Vec<JsonSupport> = serde_json::from_str(t).map_err(|e| ParseError::Json(e.to_string()))?;
        raws.into_iter().map(|r| support_from_json(r, dim)).collect()
    } else {
        Ok(vec![parse_json(t, dim)?])
    }
}

pub fn support_to_json_value(s: &Support) -> serde_json::Value {
    let raw = JsonSupport {
        vars: ["x", "y", "z"][..s.dim()].iter().map(|v| v.to_string()).collect(),
        monomials: s
            .monomials
            .iter()
            .rev()
            .map(|(e, c)| JsonMonomial {
                e: e.coords().to_vec(),
                c: match c {
                    Coefficient::Exact(r) => Some(serde_json::Value::String(r.to_string())),
                    Coefficient::Generic => None,
                },
            })
            .collect(),
    };
    serde_json::to_value(raw).expect("support serializes")
}

pub fn support_to_json(s: &Support) -> String {
    support_to_json_value(s).to_string()
}

/// Canonical text: terms in descending lexicographic order of exponents.
/// Generic coefficients are written as 1.
pub fn serialize_support(s: &Support) -> String {
    let mut out = String::new();
    for (i, (e, c)) in s.monomials.iter().rev().enumerate() {
        let coeff = match c {
            Coefficient::Exact(r) => r.inner().clone(),
            Coefficient::Generic => BigRational::one(),
        };
        let negative = coeff.is_negative();
        let mag = coeff.abs();
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        let monomial = monomial_text(e);
        let coeff_text = if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("({}/{})", mag.numer(), mag.denom())
        };
        match (mag.is_one(), monomial.is_empty()) {
            (true, false) => out.push_str(&monomial),
            (_, true) => out.push_str(&coeff_text),
            (false, false) => {
                let _ = write!(out, "{coeff_text}*{monomial}");
            }
        }
    }
    out
}

fn monomial_text(e: &ExponentVector) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.coords().iter().enumerate() {
        let v = Axis::ALL[i].name();
        match k {
            0 => {}
            1 => parts.push(v.to_string()),
            k => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}
