//! The decision cascade and its certificates.
//!
//! Exact decisions come first (necessary conditions, gem regularity, the
//! affine-linear test over `h_α`), enclosure-based ones last (circuit
//! comparisons, the posynomial test). A verdict is never produced from a
//! floating-point comparison.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::barycentric::{build_map, lifted_rank, BarycentricMap};
use crate::circuit::{
    circuit_coercive, compare_with_theta, exact_compare_with_theta, recognize_circuit,
    weighted_coefficients, CircuitStructure, ComparisonRoute,
};
use crate::enclosure::{Interval, LogValue, GUARD_BITS};
use crate::geometry::{analyze, Condition, NewtonAnalysis};
use crate::poly::{Exponent, Polynomial};
use crate::rational::{to_fraction_string, Rational};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_PRECISION_BITS: u32 = 192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Coercive,
    NotCoercive,
    Borderline,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Coercive => "Coercive",
            Verdict::NotCoercive => "NotCoercive",
            Verdict::Borderline => "Borderline",
            Verdict::Unknown => "Unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    NecessaryConditions,
    GemRegularChar,
    CircuitChar,
    TheoremMain,
    Posynomial,
}

impl Theorem {
    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::NecessaryConditions => "NecessaryConditions",
            Theorem::GemRegularChar => "GemRegularChar",
            Theorem::CircuitChar => "CircuitChar",
            Theorem::TheoremMain => "TheoremMain",
            Theorem::Posynomial => "Posynomial",
        }
    }
}

/// What to do when a rational lands inside a circuit-number enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MarginPolicy {
    /// Try an exact comparison of integer powers before reporting Borderline.
    #[default]
    ExactFallback,
    /// Report Borderline straight away.
    EnclosureOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyOptions {
    pub precision_bits: u32,
    /// Seeds of the shuffled maps tried after the canonical one.
    pub map_seeds: Vec<u64>,
    pub margin_policy: MarginPolicy,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            precision_bits: DEFAULT_PRECISION_BITS,
            map_seeds: vec![1, 2, 3, 4],
            margin_policy: MarginPolicy::ExactFallback,
        }
    }
}

impl CertifyOptions {
    pub fn with_seed_count(precision_bits: u32, k: u64) -> Self {
        CertifyOptions {
            precision_bits,
            map_seeds: (1..=k).collect(),
            margin_policy: MarginPolicy::ExactFallback,
        }
    }
}

/// Number of decimal digits worth printing for a given precision.
fn display_digits(precision_bits: u32) -> u32 {
    ((precision_bits as f64 * std::f64::consts::LOG10_2) as u32).clamp(12, 60)
}

/// Circuit data recorded when a circuit decision was made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitWitness {
    pub r: usize,
    pub n: usize,
    pub alpha_star: Exponent,
    pub f_alpha_star: Rational,
    pub outer: Vec<(Exponent, Rational, Rational)>,
    pub log_theta: LogValue,
    /// `a` (r = n), `b` (r = n-1) or `vertex-count`.
    pub case: String,
    pub comparison: ComparisonRoute,
    precision_bits: u32,
}

impl CircuitWitness {
    pub fn new(cs: &CircuitStructure, precision_bits: u32) -> Self {
        CircuitWitness {
            r: cs.r,
            n: cs.n_vars,
            alpha_star: cs.inner.0.clone(),
            f_alpha_star: cs.inner.1.clone(),
            outer: cs
                .outer
                .iter()
                .zip(&cs.lambdas)
                .map(|((a, c), l)| (a.clone(), c.clone(), l.clone()))
                .collect(),
            log_theta: cs.log_theta(precision_bits),
            case: String::new(),
            comparison: ComparisonRoute::Trivial,
            precision_bits,
        }
    }

    fn to_json(&self) -> Value {
        let digits = display_digits(self.precision_bits);
        let theta = self.log_theta.value_enclosure();
        json!({
            "r": self.r,
            "n": self.n,
            "alpha_star": self.alpha_star,
            "f_alpha_star": to_fraction_string(&self.f_alpha_star),
            "outer": self.outer.iter().map(|(a, c, l)| json!({
                "alpha": a,
                "coefficient": to_fraction_string(c),
                "lambda": to_fraction_string(l),
            })).collect::<Vec<_>>(),
            "theta": {"lo": theta.lo_decimal(digits), "hi": theta.hi_decimal(digits)},
            "case": self.case,
            "comparison": self.comparison,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HAlphaRow {
    pub f_alpha: Rational,
    pub h: Rational,
}

/// `h_α` for every `α ∈ V(f)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HAlphaTable {
    pub rows: BTreeMap<Exponent, HAlphaRow>,
}

impl HAlphaTable {
    pub fn h(&self, alpha: &Exponent) -> Option<&Rational> {
        self.rows.get(alpha).map(|r| &r.h)
    }

    pub fn margin(&self, alpha: &Exponent) -> Option<Rational> {
        self.rows.get(alpha).map(|r| &r.f_alpha - &r.h)
    }

    pub fn holds(&self) -> bool {
        self.rows.values().all(|r| r.f_alpha > r.h)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|(a, r)| {
                    json!({
                        "alpha": a,
                        "f_alpha": to_fraction_string(&r.f_alpha),
                        "h": to_fraction_string(&r.h),
                        "margin": to_fraction_string(&(&r.f_alpha - &r.h)),
                    })
                })
                .collect(),
        )
    }

    /// Stable one-line text form, suitable for hashing.
    pub fn canonical_string(&self) -> String {
        self.to_json().to_string()
    }
}

/// `[S_lo, S_hi]`; `hi = None` when a term overflowed the enclosure range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSum {
    pub lo: Rational,
    pub hi: Option<Rational>,
    precision_bits: u32,
}

impl RatioSum {
    fn to_json(&self) -> Value {
        let digits = display_digits(self.precision_bits);
        let bits = self.precision_bits + GUARD_BITS;
        let lo = Interval::point_rational(&self.lo, bits).lo_decimal(digits);
        let hi = match &self.hi {
            Some(h) => Interval::point_rational(h, bits).hi_decimal(digits),
            None => "inf".to_string(),
        };
        json!({"lo": lo, "hi": hi})
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCertificate {
    pub weights: BTreeMap<Exponent, Rational>,
    /// Lower and upper bound of the slack `1 - S`.
    pub epsilon_lo: Rational,
    pub epsilon_hi: Rational,
    pub delta1: BTreeSet<Exponent>,
    pub delta2: BTreeSet<Exponent>,
}

impl WeightCertificate {
    pub fn total(&self) -> Rational {
        self.weights.values().fold(Rational::zero(), |a, w| a + w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness {
    pub failed_condition: Option<String>,
    pub h_alpha_table: Option<HAlphaTable>,
    pub ratio_sum: Option<RatioSum>,
    pub weights: Option<WeightCertificate>,
    pub circuit: Option<CircuitWitness>,
    pub map: Option<BarycentricMap>,
}

impl Witness {
    fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        if let Some(c) = &self.failed_condition {
            obj.insert("failed_condition".into(), json!(c));
        }
        if let Some(t) = &self.h_alpha_table {
            obj.insert("h_alpha_table".into(), t.to_json());
        }
        if let Some(s) = &self.ratio_sum {
            obj.insert("ratio_sum".into(), s.to_json());
        }
        if let Some(w) = &self.weights {
            obj.insert(
                "weights".into(),
                Value::Array(
                    w.weights
                        .iter()
                        .map(|(a, om)| json!({"alpha_star": a, "omega": to_fraction_string(om)}))
                        .collect(),
                ),
            );
            obj.insert(
                "epsilon".into(),
                json!({
                    "lo": to_fraction_string(&w.epsilon_lo),
                    "hi": to_fraction_string(&w.epsilon_hi),
                }),
            );
        }
        if let Some(c) = &self.circuit {
            obj.insert("circuit".into(), c.to_json());
        }
        if let Some(m) = &self.map {
            obj.insert("map".into(), serde_json::to_value(m.to_json()).expect("map json"));
        }
        Value::Object(obj)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub theorem: Option<Theorem>,
    /// True when the verdict was reached in pure rational arithmetic.
    pub exact: bool,
    pub witness: Witness,
    pub precision_bits: u32,
}

impl Certificate {
    pub fn new(
        verdict: Verdict,
        theorem: Option<Theorem>,
        exact: bool,
        witness: Witness,
        precision_bits: u32,
    ) -> Self {
        Certificate {
            verdict,
            theorem,
            exact,
            witness,
            precision_bits,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict,
            "theorem": self.theorem,
            "exact": self.exact,
            "witness": self.witness.to_json(),
            "meta": {"precision_bits": self.precision_bits, "tool_version": TOOL_VERSION},
        })
    }

    /// One-line summary, e.g. `Coercive (CircuitChar)`.
    pub fn summary(&self) -> String {
        let mut s = self.verdict.as_str().to_string();
        match (self.theorem, &self.witness.failed_condition) {
            (Some(Theorem::NecessaryConditions), Some(c)) => s += &format!(" ({c})"),
            (Some(t), Some(c)) => s += &format!(" ({}: {c})", t.as_str()),
            (Some(t), None) => s += &format!(" ({})", t.as_str()),
            (None, _) => {}
        }
        s
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

pub fn check_necessary(analysis: &NewtonAnalysis) -> Result<(), Condition> {
    match analysis.first_failed_condition() {
        Some(c) => Err(c),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainCheck {
    pub holds: bool,
    pub table: HAlphaTable,
}

/// `f_α > h_α` for every vertex at infinity, with
/// `h_α = Σ_{odd α*∈D} |f_{α*}| λ(α*, α) - Σ_{even α*∈D} min(0, f_{α*}) λ(α*, α)`.
pub fn theorem_main_check(
    f: &Polynomial,
    analysis: &NewtonAnalysis,
    map: &BarycentricMap,
) -> MainCheck {
    let mut rows: BTreeMap<Exponent, HAlphaRow> = analysis
        .v
        .iter()
        .map(|a| {
            let row = HAlphaRow {
                f_alpha: f.coeff_or_zero(a),
                h: Rational::zero(),
            };
            (a.clone(), row)
        })
        .collect();
    for star in &analysis.d {
        let Some(c) = degenerate_contribution(star, &f.coeff_or_zero(star)) else {
            continue;
        };
        if let Some(rep) = map.get(star) {
            for (alpha, lambda) in rep.pairs() {
                if let Some(row) = rows.get_mut(alpha) {
                    row.h += &c * lambda;
                }
            }
        }
    }
    let table = HAlphaTable { rows };
    MainCheck {
        holds: table.holds(),
        table,
    }
}

/// `|f*|` for odd `α*`, `-min(0, f*)` for even ones; `None` when that is 0.
fn degenerate_contribution(star: &Exponent, coeff: &Rational) -> Option<Rational> {
    let c = if star.is_even() {
        if coeff.is_negative() {
            -coeff.clone()
        } else {
            Rational::zero()
        }
    } else {
        coeff.abs()
    };
    (!c.is_zero()).then_some(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PosyOutcome {
    Holds,
    Fails,
    Borderline,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosyTerm {
    pub alpha_star: Exponent,
    /// `|f*|` (or `-f*` for even `α*`).
    pub coefficient: Rational,
    pub log_theta: LogValue,
    /// Dyadic bounds of `coefficient / Θ`; `hi = None` when out of range.
    pub ratio_lo: Rational,
    pub ratio_hi: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosynomialCheck {
    pub outcome: PosyOutcome,
    pub sum: RatioSum,
    pub terms: Vec<PosyTerm>,
    pub exact: bool,
}

/// Log-ratios above this are not exponentiated.
const LOG_RATIO_CAP: i64 = 16;

pub fn posynomial_check(
    f: &Polynomial,
    analysis: &NewtonAnalysis,
    map: &BarycentricMap,
    precision_bits: u32,
    policy: MarginPolicy,
) -> PosynomialCheck {
    let bits = precision_bits + GUARD_BITS;
    let mut terms = Vec::new();
    let mut lo = Rational::zero();
    let mut hi = Some(Rational::zero());
    let mut pairs_of_terms = Vec::new();
    for star in &analysis.d {
        let Some(c) = degenerate_contribution(star, &f.coeff_or_zero(star)) else {
            continue;
        };
        let pairs = weighted_coefficients(f, map, star)
            .expect("vertex coefficients are positive under the necessary conditions");
        let log_theta = crate::circuit::log_circuit_number(&pairs, precision_bits);
        let log_ratio = Interval::ln_rational(&c, bits).sub(log_theta.interval());
        let capped = log_ratio.min_int(LOG_RATIO_CAP).exp();
        let ratio_lo = capped.lo_rational();
        let ratio_hi = (log_ratio.hi_rational() <= Rational::from_integer(LOG_RATIO_CAP.into()))
            .then(|| capped.hi_rational());
        lo += &ratio_lo;
        hi = match (hi, &ratio_hi) {
            (Some(h), Some(r)) => Some(h + r),
            _ => None,
        };
        terms.push(PosyTerm {
            alpha_star: star.clone(),
            coefficient: c.clone(),
            log_theta,
            ratio_lo,
            ratio_hi,
        });
        pairs_of_terms.push((c, pairs));
    }
    let one = Rational::one();
    let mut exact = false;
    let outcome = if hi.as_ref().is_some_and(|h| *h < one) {
        PosyOutcome::Holds
    } else if lo >= one {
        PosyOutcome::Fails
    } else if policy == MarginPolicy::ExactFallback && pairs_of_terms.len() == 1 {
        // a single ratio c/Θ against 1 is a comparison of c with Θ
        let (c, pairs) = &pairs_of_terms[0];
        match exact_compare_with_theta(c, pairs) {
            Some(Ordering::Less) => {
                exact = true;
                PosyOutcome::Holds
            }
            Some(_) => {
                exact = true;
                PosyOutcome::Fails
            }
            None => PosyOutcome::Borderline,
        }
    } else {
        PosyOutcome::Borderline
    };
    PosynomialCheck {
        outcome,
        sum: RatioSum {
            lo,
            hi,
            precision_bits,
        },
        terms,
        exact,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("the posynomial check did not hold with a certified positive slack")]
    SlackNonpositive,
}

/// Splits `D(f)` into `Δ₁` (odd, or even with negative coefficient) and
/// `Δ₂` (even with positive coefficient).
pub fn delta_split(f: &Polynomial, analysis: &NewtonAnalysis) -> (BTreeSet<Exponent>, BTreeSet<Exponent>) {
    analysis
        .d
        .iter()
        .cloned()
        .partition(|a| !a.is_even() || f.coeff_or_zero(a).is_negative())
}

/// Rational weights from the enclosure bounds: `Δ₁` members get
/// `ratio_hi + ε_lo/|Δ₁|` (or half the slack when `Δ₂ ≠ ∅`), `Δ₂` members
/// share the other half. With `ε_lo = 1 - S_hi` the weights sum to exactly 1.
pub fn construct_weights(
    f: &Polynomial,
    analysis: &NewtonAnalysis,
    posy: &PosynomialCheck,
) -> Result<WeightCertificate, WeightError> {
    let (delta1, delta2) = delta_split(f, analysis);
    let one = Rational::one();
    let mut weights = BTreeMap::new();
    if delta1.is_empty() {
        if delta2.is_empty() {
            return Err(WeightError::SlackNonpositive);
        }
        let w = Rational::new(1.into(), (delta2.len() as i64).into());
        for a in &delta2 {
            weights.insert(a.clone(), w.clone());
        }
        return Ok(WeightCertificate {
            weights,
            epsilon_lo: one.clone(),
            epsilon_hi: one,
            delta1,
            delta2,
        });
    }
    if posy.outcome != PosyOutcome::Holds {
        return Err(WeightError::SlackNonpositive);
    }
    let s_hi = posy.sum.hi.clone().ok_or(WeightError::SlackNonpositive)?;
    let eps_lo = &one - &s_hi;
    let eps_hi = &one - &posy.sum.lo;
    if !eps_lo.is_positive() {
        return Err(WeightError::SlackNonpositive);
    }
    let d1 = Rational::from_integer((delta1.len() as i64).into());
    let share1 = if delta2.is_empty() {
        &eps_lo / &d1
    } else {
        &eps_lo / (d1 * Rational::from_integer(2.into()))
    };
    for t in &posy.terms {
        let r = t.ratio_hi.clone().ok_or(WeightError::SlackNonpositive)?;
        weights.insert(t.alpha_star.clone(), r + &share1);
    }
    if !delta2.is_empty() {
        let share2 = &eps_lo / Rational::from_integer((2 * delta2.len() as i64).into());
        for a in &delta2 {
            weights.insert(a.clone(), share2.clone());
        }
    }
    Ok(WeightCertificate {
        weights,
        epsilon_lo: eps_lo,
        epsilon_hi: eps_hi,
        delta1,
        delta2,
    })
}

/// Checks `Σω ≤ 1`, `ω > 0`, and the strict per-exponent inequalities
/// against fresh circuit-number enclosures.
pub fn verify_weights(
    f: &Polynomial,
    analysis: &NewtonAnalysis,
    map: &BarycentricMap,
    wc: &WeightCertificate,
    precision_bits: u32,
) -> bool {
    if wc.total() > Rational::one() || wc.weights.values().any(|w| !w.is_positive()) {
        return false;
    }
    if wc.weights.keys().cloned().collect::<BTreeSet<_>>() != analysis.d {
        return false;
    }
    for (star, omega) in &wc.weights {
        let coeff = f.coeff_or_zero(star);
        if star.is_even() && coeff.is_positive() {
            continue;
        }
        let Ok(pairs) = weighted_coefficients(f, map, star) else {
            return false;
        };
        let q = coeff.abs() / omega;
        let cmp = compare_with_theta(&q, &pairs, precision_bits, MarginPolicy::ExactFallback);
        if cmp.ordering != Some(Ordering::Less) {
            return false;
        }
    }
    true
}

/// Which sufficiency tests hold on some map, for comparing the two tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SufficiencyReport {
    pub theorem_main: bool,
    pub posynomial: PosyOutcome,
}

impl SufficiencyReport {
    pub fn label(&self) -> &'static str {
        match (self.theorem_main, self.posynomial == PosyOutcome::Holds) {
            (true, true) => "TheoremMain+Posynomial",
            (true, false) => "TheoremMain",
            (false, true) => "Posynomial",
            (false, false) => "none",
        }
    }
}

/// Canonical map followed by the seeded ones, skipping duplicates.
pub fn candidate_maps(
    f: &Polynomial,
    analysis: &NewtonAnalysis,
    seeds: &[u64],
) -> Vec<BarycentricMap> {
    let mut maps: Vec<BarycentricMap> = Vec::new();
    // over a simplex every representation is unique, so seeds change nothing
    let v0: Vec<Exponent> = analysis.v0.iter().cloned().collect();
    let seeds = if lifted_rank(&v0) == v0.len() { &[][..] } else { seeds };
    for seed in std::iter::once(None).chain(seeds.iter().copied().map(Some)) {
        let m = build_map(f, analysis, seed).expect("support lies in the Newton polytope");
        if !maps.iter().any(|old| old.entries == m.entries) {
            maps.push(m);
        }
    }
    maps
}

/// Runs both sufficiency tests over all candidate maps. `None` when the
/// necessary conditions fail.
pub fn sufficiency_report(f: &Polynomial, options: &CertifyOptions) -> Option<SufficiencyReport> {
    let analysis = analyze(f);
    if check_necessary(&analysis).is_err() || f.n_vars() == 0 {
        return None;
    }
    let maps = candidate_maps(f, &analysis, &options.map_seeds);
    let theorem_main = maps.iter().any(|m| theorem_main_check(f, &analysis, m).holds);
    let mut posynomial = PosyOutcome::Fails;
    for m in &maps {
        let p = posynomial_check(f, &analysis, m, options.precision_bits, options.margin_policy);
        match p.outcome {
            PosyOutcome::Holds => {
                posynomial = PosyOutcome::Holds;
                break;
            }
            PosyOutcome::Borderline => posynomial = PosyOutcome::Borderline,
            PosyOutcome::Fails => {}
        }
    }
    Some(SufficiencyReport {
        theorem_main,
        posynomial,
    })
}

pub fn certify(f: &Polynomial, options: &CertifyOptions) -> Certificate {
    let bits = options.precision_bits;
    let analysis = analyze(f);

    if let Err(cond) = check_necessary(&analysis) {
        let witness = Witness {
            failed_condition: Some(cond.name().to_string()),
            ..Witness::default()
        };
        return Certificate::new(
            Verdict::NotCoercive,
            Some(Theorem::NecessaryConditions),
            true,
            witness,
            bits,
        );
    }

    if analysis.gem_regular {
        return Certificate::new(
            Verdict::Coercive,
            Some(Theorem::GemRegularChar),
            true,
            Witness::default(),
            bits,
        );
    }

    if let Ok(cs) = recognize_circuit(f) {
        return circuit_coercive(f, &cs, &analysis, bits, options.margin_policy);
    }

    let maps = candidate_maps(f, &analysis, &options.map_seeds);
    let mut first_table = None;
    for m in &maps {
        let check = theorem_main_check(f, &analysis, m);
        if check.holds {
            let witness = Witness {
                h_alpha_table: Some(check.table),
                map: Some(m.clone()),
                ..Witness::default()
            };
            return Certificate::new(
                Verdict::Coercive,
                Some(Theorem::TheoremMain),
                true,
                witness,
                bits,
            );
        }
        first_table.get_or_insert(check.table);
    }

    let mut borderline: Option<(RatioSum, BarycentricMap)> = None;
    let mut first_sum = None;
    for m in &maps {
        let posy = posynomial_check(f, &analysis, m, bits, options.margin_policy);
        match posy.outcome {
            PosyOutcome::Holds => {
                let weights = construct_weights(f, &analysis, &posy).ok();
                let exact = posy.exact;
                let witness = Witness {
                    ratio_sum: Some(posy.sum),
                    weights,
                    map: Some(m.clone()),
                    ..Witness::default()
                };
                return Certificate::new(
                    Verdict::Coercive,
                    Some(Theorem::Posynomial),
                    exact,
                    witness,
                    bits,
                );
            }
            PosyOutcome::Borderline => {
                borderline.get_or_insert((posy.sum, m.clone()));
            }
            PosyOutcome::Fails => {
                first_sum.get_or_insert(posy.sum);
            }
        }
    }

    match borderline {
        Some((sum, m)) => Certificate::new(
            Verdict::Borderline,
            Some(Theorem::Posynomial),
            false,
            Witness {
                ratio_sum: Some(sum),
                map: Some(m),
                ..Witness::default()
            },
            bits,
        ),
        None => Certificate::new(
            Verdict::Unknown,
            None,
            false,
            Witness {
                h_alpha_table: first_table,
                ratio_sum: first_sum,
                map: maps.first().cloned(),
                ..Witness::default()
            },
            bits,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, VarSpec};
    use crate::rational::{int, parse_rational, ratio};

    fn xy(text: &str) -> Polynomial {
        parse_polynomial(text, &VarSpec::Explicit(vec!["x".into(), "y".into()])).unwrap()
    }

    fn g(a: &str, b: &str) -> Polynomial {
        xy(&format!("x^4 + {a}*x^3*y + {b}*x*y^3 + y^4"))
    }

    fn canonical(f: &Polynomial) -> (NewtonAnalysis, BarycentricMap) {
        let an = analyze(f);
        let m = build_map(f, &an, None).unwrap();
        (an, m)
    }

    fn e(v: [u32; 2]) -> Exponent {
        Exponent::from(v)
    }

    #[test]
    fn necessary_examples() {
        assert_eq!(check_necessary(&analyze(&xy("x^2 + y^2"))), Ok(()));
        assert_eq!(
            check_necessary(&analyze(&xy("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1"))),
            Err(Condition::C3)
        );
        assert_eq!(check_necessary(&analyze(&xy("-x^2 + y^2"))), Err(Condition::C2));
    }

    #[test]
    fn main_check_examples() {
        let f = g("0.95", "0.95");
        let (an, m) = canonical(&f);
        let c = theorem_main_check(&f, &an, &m);
        assert!(c.holds);
        assert_eq!(c.table.h(&e([4, 0])), Some(&ratio(19, 20)));
        assert_eq!(c.table.h(&e([0, 4])), Some(&ratio(19, 20)));
        assert_eq!(c.table.margin(&e([4, 0])), Some(ratio(1, 20)));

        let f = g("1.6", "0");
        let (an, m) = canonical(&f);
        let c = theorem_main_check(&f, &an, &m);
        assert!(!c.holds);
        assert_eq!(c.table.h(&e([4, 0])), Some(&ratio(6, 5)));
        assert_eq!(c.table.h(&e([0, 4])), Some(&ratio(2, 5)));

        let f = xy("x^4 + x^2*y^2 + y^4");
        let (an, m) = canonical(&f);
        let c = theorem_main_check(&f, &an, &m);
        assert!(c.holds);
        assert!(c.table.rows.values().all(|r| r.h.is_zero()));
    }

    #[test]
    fn posynomial_examples() {
        let theta = 4.0 * 3f64.powf(-0.75);
        let f = g("0.95", "0.95");
        let (an, m) = canonical(&f);
        let p = posynomial_check(&f, &an, &m, 192, MarginPolicy::ExactFallback);
        assert_eq!(p.outcome, PosyOutcome::Fails);
        let s = crate::rational::to_f64(&p.sum.lo);
        assert!((s - 1.9 / theta).abs() < 1e-12);

        let f = g("1.6", "0");
        let (an, m) = canonical(&f);
        let p = posynomial_check(&f, &an, &m, 192, MarginPolicy::ExactFallback);
        assert_eq!(p.outcome, PosyOutcome::Holds);
        assert!((crate::rational::to_f64(p.sum.hi.as_ref().unwrap()) - 1.6 / theta).abs() < 1e-12);

        let f = xy("x^2 + y^2");
        let (an, m) = canonical(&f);
        let p = posynomial_check(&f, &an, &m, 192, MarginPolicy::ExactFallback);
        assert_eq!(p.outcome, PosyOutcome::Holds);
        assert_eq!(p.sum.hi, Some(int(0)));
    }

    #[test]
    fn weights_for_small_coefficients() {
        let f = g("0.4", "0.4");
        let (an, m) = canonical(&f);
        let p = posynomial_check(&f, &an, &m, 192, MarginPolicy::ExactFallback);
        let w = construct_weights(&f, &an, &p).unwrap();
        assert_eq!(w.total(), int(1));
        assert!(w.delta2.is_empty());
        let theta = 4.0 * 3f64.powf(-0.75);
        let ratio_f = 0.4 / theta;
        assert!((ratio_f - 0.22795).abs() < 1e-5);
        let eps = crate::rational::to_f64(&w.epsilon_lo);
        assert!((eps - (1.0 - 2.0 * ratio_f)).abs() < 1e-12);
        assert!((eps - 0.54409).abs() < 1e-5);
        for om in w.weights.values() {
            assert!((crate::rational::to_f64(om) - 0.5).abs() < 1e-12);
        }
        assert!(verify_weights(&f, &an, &m, &w, 192));
    }

    #[test]
    fn weights_with_only_positive_even_members() {
        // (2,2) lies on the edge from (4,0) to (0,4)
        let f = xy("x^4 + 3*x^2*y^2 + y^4");
        let (an, m) = canonical(&f);
        assert_eq!(an.d.len(), 1);
        let p = posynomial_check(&f, &an, &m, 192, MarginPolicy::ExactFallback);
        let w = construct_weights(&f, &an, &p).unwrap();
        assert_eq!(w.weights.get(&e([2, 2])), Some(&int(1)));
        assert!(verify_weights(&f, &an, &m, &w, 192));
    }

    #[test]
    fn weights_with_mixed_split() {
        // D = {(3,1), (2,2), (1,3)}: two in Δ₁, the positive even one in Δ₂
        let f = xy("x^4 + 1/2*x^3*y + x^2*y^2 - 1/3*x*y^3 + y^4");
        let (an, m) = canonical(&f);
        assert_eq!(an.d.len(), 3);
        let p = posynomial_check(&f, &an, &m, 192, MarginPolicy::ExactFallback);
        assert_eq!(p.outcome, PosyOutcome::Holds);
        let w = construct_weights(&f, &an, &p).unwrap();
        assert_eq!(w.delta1.len(), 2);
        assert_eq!(w.delta2.len(), 1);
        assert_eq!(w.total(), int(1));
        assert!(verify_weights(&f, &an, &m, &w, 192));
        // shrinking a Δ₁ weight below its ratio breaks the certificate
        let mut bad = w.clone();
        bad.weights.insert(e([3, 1]), ratio(1, 100));
        assert!(!verify_weights(&f, &an, &m, &bad, 192));
    }

    #[test]
    fn weights_refused_without_slack() {
        let f = g("0.95", "0.95");
        let (an, m) = canonical(&f);
        let p = posynomial_check(&f, &an, &m, 192, MarginPolicy::ExactFallback);
        assert_eq!(construct_weights(&f, &an, &p), Err(WeightError::SlackNonpositive));
    }

    #[test]
    fn cascade_examples() {
        let opts = CertifyOptions::default();
        let c = certify(&g("0.95", "0.95"), &opts);
        assert_eq!((c.verdict, c.theorem), (Verdict::Coercive, Some(Theorem::TheoremMain)));
        assert!(c.exact);

        let c = certify(&xy("x^4 + 1.6*x^3*y + y^4"), &opts);
        assert_eq!((c.verdict, c.theorem), (Verdict::Coercive, Some(Theorem::CircuitChar)));
        let c = certify(&xy("x^4 + 2*x^3*y + y^4"), &opts);
        assert_eq!((c.verdict, c.theorem), (Verdict::NotCoercive, Some(Theorem::CircuitChar)));

        let c = certify(&xy("x^2 + y^2"), &opts);
        assert_eq!((c.verdict, c.theorem), (Verdict::Coercive, Some(Theorem::GemRegularChar)));
        assert!(c.exact);

        let c = certify(&xy("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1"), &opts);
        assert_eq!(c.verdict, Verdict::NotCoercive);
        assert_eq!(c.summary(), "NotCoercive (C3)");
    }

    #[test]
    fn posynomial_route_and_unknown() {
        let opts = CertifyOptions::default();
        // outside the hexagon, inside the rhombus
        let c = certify(&g("1.5", "0.1"), &opts);
        assert_eq!((c.verdict, c.theorem), (Verdict::Coercive, Some(Theorem::Posynomial)));
        assert!(!c.exact);
        assert!(c.witness.weights.is_some());
        // outside both
        let c = certify(&g("1.5", "1.5"), &opts);
        assert_eq!(c.verdict, Verdict::Unknown);
        assert_eq!(c.theorem, None);
    }

    #[test]
    fn constants_are_not_coercive() {
        let opts = CertifyOptions::default();
        for text in ["5", "0", "x^2 - x^2"] {
            assert_eq!(certify(&xy(text), &opts).verdict, Verdict::NotCoercive);
        }
        let p = parse_polynomial("7", &VarSpec::Explicit(vec![])).unwrap();
        assert_eq!(certify(&p, &opts).verdict, Verdict::NotCoercive);
    }

    #[test]
    fn json_shape() {
        let c = certify(&g("1.5", "0.1"), &CertifyOptions::default());
        let v = c.to_json();
        assert_eq!(v["verdict"], "Coercive");
        assert_eq!(v["theorem"], "Posynomial");
        assert_eq!(v["exact"], false);
        assert_eq!(v["meta"]["precision_bits"], 192);
        assert!(v["witness"]["ratio_sum"]["lo"].is_string());
        assert!(v["witness"]["epsilon"]["lo"].is_string());
        assert!(v["witness"]["map"]["entries"].is_array());
        let om = v["witness"]["weights"][0]["omega"].as_str().unwrap();
        assert!(parse_rational(om).is_some());
    }
}
