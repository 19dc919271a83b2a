//! Two-parameter region scans over polynomial templates.
//!
//! A template such as `x^4 + A*x^3*y + B*x*y^3 + y^4` names its parameters
//! with uppercase identifiers in coefficient position. Each grid value is an
//! exact rational, substituted textually before parsing.

use std::fmt::Write as _;

use num_traits::{One, Signed};
use rayon::prelude::*;
use thiserror::Error;

use crate::certify::{certify, sufficiency_report, CertifyOptions, Verdict};
use crate::poly::{parse_polynomial, ParseError, VarSpec};
use crate::rational::{parse_rational, to_display_string, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScanError {
    #[error("placeholder mismatch: {0}")]
    PlaceholderMismatch(String),
    #[error("bad parameter range `{0}`; expected NAME:MIN:MAX:STEPS")]
    BadRange(String),
    #[error("cell {p1}, {p2}: {source}")]
    Parse {
        p1: String,
        p2: String,
        source: ParseError,
    },
}

/// One scanned parameter: `steps` equally spaced values from `min` to `max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamRange {
    pub name: String,
    pub min: Rational,
    pub max: Rational,
    pub steps: usize,
}

impl ParamRange {
    /// Parses `A:-2.5:2.5:101`.
    pub fn parse(text: &str) -> Result<Self, ScanError> {
        let bad = || ScanError::BadRange(text.to_string());
        let parts: Vec<&str> = text.split(':').collect();
        let [name, min, max, steps] = parts.as_slice() else {
            return Err(bad());
        };
        if !is_placeholder(name) {
            return Err(bad());
        }
        let min = parse_rational(min).ok_or_else(bad)?;
        let max = parse_rational(max).ok_or_else(bad)?;
        let steps: usize = steps.parse().map_err(|_| bad())?;
        if steps == 0 || max < min {
            return Err(bad());
        }
        Ok(ParamRange {
            name: name.to_string(),
            min,
            max,
            steps,
        })
    }

    pub fn values(&self) -> Vec<Rational> {
        if self.steps == 1 {
            return vec![self.min.clone()];
        }
        let span = &self.max - &self.min;
        let denom = Rational::from_integer(((self.steps - 1) as i64).into());
        (0..self.steps)
            .map(|i| &self.min + &span * Rational::from_integer((i as i64).into()) / &denom)
            .collect()
    }
}

fn is_placeholder(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Other(char),
    Number(String),
    Space(String),
}

fn tokenize(text: &str) -> Vec<Tok> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Tok::Number(chars[start..i].iter().collect()));
        } else if c.is_whitespace() {
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            out.push(Tok::Space(chars[start..i].iter().collect()));
        } else {
            out.push(Tok::Other(c));
            i += 1;
        }
    }
    out
}

/// Variable names of a template: every identifier that is not one of the
/// placeholders, in order of first appearance.
pub fn template_variables(template: &str, placeholders: &[&str]) -> Vec<String> {
    let mut vars: Vec<String> = Vec::new();
    for t in tokenize(template) {
        if let Tok::Ident(name) = t {
            if !placeholders.contains(&name.as_str()) && !vars.contains(&name) {
                vars.push(name);
            }
        }
    }
    vars
}

/// Replaces each placeholder by its value, folding a negative value into the
/// surrounding sign.
pub fn substitute(template: &str, values: &[(&str, &Rational)]) -> Result<String, ScanError> {
    let toks = tokenize(template);
    for (name, _) in values {
        if !toks.iter().any(|t| matches!(t, Tok::Ident(s) if s == name)) {
            return Err(ScanError::PlaceholderMismatch(format!(
                "`{name}` does not occur in the template"
            )));
        }
    }
    for t in &toks {
        if let Tok::Ident(s) = t {
            if is_placeholder(s) && !values.iter().any(|(n, _)| n == s) {
                return Err(ScanError::PlaceholderMismatch(format!(
                    "`{s}` looks like a placeholder but has no range"
                )));
            }
        }
    }
    let is_significant = |j: &usize| !matches!(toks[*j], Tok::Space(_));
    let mut out: Vec<String> = Vec::new();
    // index in `out` of the sign emitted for the term in progress
    let mut last_sign: Option<usize> = None;
    for (i, t) in toks.iter().enumerate() {
        match t {
            Tok::Ident(name) if values.iter().any(|(n, _)| n == name) => {
                let value = values.iter().find(|(n, _)| n == name).map(|(_, v)| *v).unwrap();
                let prev = (0..i).rev().find(is_significant);
                let next = (i + 1..toks.len()).find(is_significant);
                let prev_ok = prev.is_none_or(|j| matches!(toks[j], Tok::Other('+' | '-')));
                let next_ok = next.is_none_or(|j| matches!(toks[j], Tok::Other('+' | '-' | '*')));
                if !prev_ok || !next_ok {
                    return Err(ScanError::PlaceholderMismatch(format!(
                        "`{name}` is not in coefficient position"
                    )));
                }
                if value.is_negative() {
                    match (prev, last_sign) {
                        (Some(_), Some(k)) => {
                            out[k] = if out[k] == "+" { "-".into() } else { "+".into() };
                        }
                        _ => out.push("-".into()),
                    }
                }
                out.push(to_display_string(&value.abs()));
            }
            Tok::Other(c @ ('+' | '-')) => {
                last_sign = Some(out.len());
                out.push(c.to_string());
            }
            Tok::Ident(s) | Tok::Number(s) | Tok::Space(s) => out.push(s.clone()),
            Tok::Other(c) => out.push(c.to_string()),
        }
    }
    Ok(out.concat())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanCell {
    pub p1: Rational,
    pub p2: Rational,
    pub verdict: Verdict,
    /// Deciding theorem, or the sufficiency-test label in compare mode.
    pub theorem: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionScan {
    pub param_names: [String; 2],
    pub ranges: [ParamRange; 2],
    /// `cells[i][j]` holds the `i`-th value of p1 and the `j`-th of p2.
    pub cells: Vec<Vec<ScanCell>>,
}

impl RegionScan {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("p1,p2,verdict,theorem\n");
        for row in &self.cells {
            for c in row {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    to_display_string(&c.p1),
                    to_display_string(&c.p2),
                    c.verdict.as_str(),
                    c.theorem
                );
            }
        }
        s
    }
}

pub fn region_scan(
    template: &str,
    p1: &ParamRange,
    p2: &ParamRange,
    options: &CertifyOptions,
    compare: bool,
) -> Result<RegionScan, ScanError> {
    if p1.name == p2.name {
        return Err(ScanError::PlaceholderMismatch("the two parameters share a name".into()));
    }
    let vars = template_variables(template, &[&p1.name, &p2.name]);
    let spec = VarSpec::Explicit(vars);
    // surface template problems once, before the parallel loop
    let one = Rational::one();
    substitute(template, &[(&p1.name, &one), (&p2.name, &one)])?;

    let v1 = p1.values();
    let v2 = p2.values();
    let jobs: Vec<(usize, usize)> = (0..v1.len())
        .flat_map(|i| (0..v2.len()).map(move |j| (i, j)))
        .collect();
    let flat: Result<Vec<ScanCell>, ScanError> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&v1[i], &v2[j]);
            let text = substitute(template, &[(&p1.name, a), (&p2.name, b)])?;
            let f = parse_polynomial(&text, &spec).map_err(|source| ScanError::Parse {
                p1: to_display_string(a),
                p2: to_display_string(b),
                source,
            })?;
            let cert = certify(&f, options);
            let theorem = if compare {
                sufficiency_report(&f, options)
                    .map_or("none", |r| r.label())
                    .to_string()
            } else {
                cert.theorem.map_or("none", |t| t.as_str()).to_string()
            };
            Ok(ScanCell {
                p1: a.clone(),
                p2: b.clone(),
                verdict: cert.verdict,
                theorem,
            })
        })
        .collect();
    let flat = flat?;
    let cells = flat.chunks(v2.len()).map(<[ScanCell]>::to_vec).collect();
    Ok(RegionScan {
        param_names: [p1.name.clone(), p2.name.clone()],
        ranges: [p1.clone(), p2.clone()],
        cells,
    })
}
