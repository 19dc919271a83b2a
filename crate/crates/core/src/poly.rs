//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Polynomial`] is a map from exponent vectors to nonzero rationals. Terms
//! are kept in graded-lexicographic order so that every computation that walks
//! the support is deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rational::{self, Rational};

/// Exponent vector `α ∈ ℕ₀ⁿ`.
///
/// Ordered graded-lexicographically: total degree first, then entrywise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// `k·e_i` in `n` variables.
    pub fn axis(n: usize, i: usize, k: u32) -> Self {
        let mut e = vec![0; n];
        e[i] = k;
        Exponent(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Membership in `2ℕ₀ⁿ`.
    pub fn is_even(&self) -> bool {
        self.0.iter().all(|&e| e % 2 == 0)
    }

    /// If exactly one entry is nonzero, returns `(index, value)`.
    pub fn as_axis_power(&self) -> Option<(usize, u32)> {
        let mut hit = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e != 0 {
                if hit.is_some() {
                    return None;
                }
                hit = Some((i, e));
            }
        }
        hit
    }

    pub fn permuted(&self, perm: &[usize]) -> Exponent {
        let mut out = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            out[perm[i]] = e;
        }
        Exponent(out)
    }

    /// The lifted column `(α; 1)` as rationals.
    pub fn lifted(&self) -> Vec<Rational> {
        self.0
            .iter()
            .map(|&e| rational::int(i64::from(e)))
            .chain(std::iter::once(Rational::one()))
            .collect()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

impl<const N: usize> From<[u32; N]> for Exponent {
    fn from(v: [u32; N]) -> Self {
        Exponent(v.to_vec())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponent {0:?} is not in the support")]
    ExponentNotInSupport(Exponent),
    #[error("exponent {exponent:?} has length {got}, expected {expected}")]
    BadExponentLength {
        exponent: Exponent,
        expected: usize,
        got: usize,
    },
}

/// `f(x) = Σ_{α ∈ A(f)} f_α x^α` with `f_α ≠ 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    var_names: Vec<String>,
    terms: BTreeMap<Exponent, Rational>,
}

impl Polynomial {
    pub fn zero(var_names: Vec<String>) -> Self {
        Polynomial {
            var_names,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a canonical polynomial, merging duplicate exponents and dropping
    /// zero coefficients.
    pub fn from_terms<I>(var_names: Vec<String>, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let n = var_names.len();
        let mut map: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != n {
                return Err(PolyError::BadExponentLength {
                    got: e.len(),
                    exponent: e,
                    expected: n,
                });
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            var_names,
            terms: map,
        })
    }

    /// Like [`Polynomial::from_terms`] with default names `x1..xn`.
    pub fn with_default_names<I>(n: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        Self::from_terms(default_names(n), terms)
    }

    pub fn n_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn coefficient(&self, alpha: &Exponent) -> Option<&Rational> {
        self.terms.get(alpha)
    }

    /// Coefficient, or zero for exponents outside the support.
    pub fn coeff_or_zero(&self, alpha: &Exponent) -> Rational {
        self.terms.get(alpha).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero or a nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponent::is_origin)
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<f64, PolyError> {
        if point.len() != self.n_vars() {
            return Err(PolyError::DimensionMismatch {
                expected: self.n_vars(),
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(alpha, c)| {
                let mono: f64 = alpha
                    .entries()
                    .iter()
                    .zip(point)
                    .map(|(&e, &x)| x.powi(e as i32))
                    .product();
                rational::to_f64(c) * mono
            })
            .sum())
    }

    /// `f^S`: the terms of `f` whose exponents lie in `subset`.
    pub fn subpolynomial<'a, I>(&self, subset: I) -> Result<Polynomial, PolyError>
    where
        I: IntoIterator<Item = &'a Exponent>,
    {
        let mut terms = BTreeMap::new();
        for alpha in subset {
            let c = self
                .terms
                .get(alpha)
                .ok_or_else(|| PolyError::ExponentNotInSupport(alpha.clone()))?;
            terms.insert(alpha.clone(), c.clone());
        }
        Ok(Polynomial {
            var_names: self.var_names.clone(),
            terms,
        })
    }

    pub fn scaled(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.var_names.clone());
        }
        Polynomial {
            var_names: self.var_names.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    /// Renames variable `i` to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Polynomial {
        let mut names = vec![String::new(); self.n_vars()];
        for (i, name) in self.var_names.iter().enumerate() {
            names[perm[i]] = name.clone();
        }
        Polynomial {
            var_names: names,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.permuted(perm), v.clone()))
                .collect(),
        }
    }

    pub fn sum(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        Polynomial::from_terms(
            self.var_names.clone(),
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// Deterministic text form; terms in descending graded-lex order.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (alpha, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (name, &e) in self.var_names.iter().zip(alpha.entries()) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if !abs.is_one() || factors.is_empty() {
                factors.insert(0, rational::to_fraction_string(&abs));
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.var_names.join(","), self.render())
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Variable handling for [`parse_polynomial`].
#[derive(Debug, Clone)]
pub enum VarSpec {
    /// Collect identifiers in first-appearance order.
    Infer,
    Explicit(Vec<String>),
}

/// Parses the polynomial grammar
///
/// ```text
/// poly    := term (('+' | '-') term)* ;
/// term    := coeff ('*' factor)* | factor ('*' factor)* ;
/// coeff   := integer | integer '/' positive-integer | decimal ;
/// factor  := ident ('^' positive-integer)? ;
/// ident   := letter (letter | digit | '_')* ;
/// ```
///
/// A single leading sign on the first term is accepted (`-x^2 + y^2`).
pub fn parse_polynomial(text: &str, vars: &VarSpec) -> Result<Polynomial, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: text.len(),
        names: match vars {
            VarSpec::Infer => Vec::new(),
            VarSpec::Explicit(v) => v.clone(),
        },
        infer: matches!(vars, VarSpec::Infer),
    };
    let raw = parser.poly()?;
    let n = parser.names.len();
    let terms = raw.into_iter().map(|(powers, c)| {
        let mut e = vec![0u32; n];
        for (i, p) in powers {
            e[i] += p;
        }
        (Exponent(e), c)
    });
    Ok(Polynomial::from_terms(parser.names, terms).expect("exponent lengths match"))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Dot,
    Digits(String),
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b if b.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'.' => Tok::Dot,
            b if b.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Digits(text[start..i].to_string()), start));
                continue;
            }
            b if b.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character `{}`", &text[start..].chars().next().unwrap()),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

type RawTerm = (Vec<(usize, u32)>, Rational);

struct Parser<'a> {
    tokens: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    names: Vec<String>,
    infer: bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.position(),
            message: message.into(),
        })
    }

    fn poly(&mut self) -> Result<Vec<RawTerm>, ParseError> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (powers, c) = self.term()?;
            terms.push((powers, if negate { -c } else { c }));
            match self.peek() {
                None => break,
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                Some(_) => return self.syntax("expected `+`, `-` or end of input"),
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let mut powers = Vec::new();
        let coeff = match self.peek() {
            Some(Tok::Digits(_)) => {
                let c = self.coeff()?;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    powers.push(self.factor()?);
                }
                c
            }
            Some(Tok::Ident(_)) => {
                powers.push(self.factor()?);
                Rational::one()
            }
            _ => return self.syntax("expected a coefficient or a variable"),
        };
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            powers.push(self.factor()?);
        }
        Ok((powers, coeff))
    }

    fn digits(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Digits(d)) => {
                let d = d.clone();
                self.pos += 1;
                Ok(d)
            }
            _ => self.syntax(format!("expected {what}")),
        }
    }

    fn coeff(&mut self) -> Result<Rational, ParseError> {
        let whole = self.digits("an integer")?;
        match self.peek() {
            Some(Tok::Slash) => {
                self.pos += 1;
                let at = self.position();
                let den = self.digits("a positive integer denominator")?;
                rational::parse_rational(&format!("{whole}/{den}")).ok_or(ParseError::Syntax {
                    position: at,
                    message: "denominator must be positive".into(),
                })
            }
            Some(Tok::Dot) => {
                self.pos += 1;
                let frac = self.digits("decimal digits")?;
                Ok(rational::parse_rational(&format!("{whole}.{frac}")).expect("digits"))
            }
            _ => Ok(rational::parse_rational(&whole).expect("digits")),
        }
    }

    fn factor(&mut self) -> Result<(usize, u32), ParseError> {
        let at = self.position();
        let name = match self.peek() {
            Some(Tok::Ident(name)) => name.clone(),
            _ => return self.syntax("expected a variable"),
        };
        self.pos += 1;
        let idx = match self.names.iter().position(|n| *n == name) {
            Some(i) => i,
            None if self.infer => {
                self.names.push(name);
                self.names.len() - 1
            }
            None => return Err(ParseError::UnknownVariable { name, position: at }),
        };
        let mut power = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            if self.peek() == Some(&Tok::Minus) {
                return Err(ParseError::NegativeExponent {
                    position: self.position(),
                });
            }
            let at = self.position();
            let d = self.digits("a positive integer exponent")?;
            power = match d.parse::<u32>() {
                Ok(p) if p > 0 => p,
                _ => {
                    return Err(ParseError::Syntax {
                        position: at,
                        message: "exponent must be a positive integer".into(),
                    })
                }
            };
        }
        Ok((idx, power))
    }
}

/// Sorted set helper used across modules.
pub fn exponent_set<'a>(it: impl IntoIterator<Item = &'a Exponent>) -> BTreeSet<Exponent> {
    it.into_iter().cloned().collect()
}
