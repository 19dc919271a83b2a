//! Circuit numbers and circuit polynomials.
//!
//! `Θ(f, λ, α*) = Π_{α ∈ W} (f_α / λ_α)^{λ_α}` is carried in the log domain as
//! a certified [`LogValue`]. Comparisons of a rational against `Θ` are issued
//! only when the rational lies strictly outside the enclosure; otherwise an
//! exact comparison of integer powers is attempted (see
//! [`exact_compare_with_theta`]) before giving up as undecided.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::barycentric::{lifted_rank, minimal_barycentric, BarycentricMap};
use crate::certify::{Certificate, CircuitWitness, MarginPolicy, Theorem, Verdict, Witness};
use crate::enclosure::{Interval, LogValue, GUARD_BITS};
use crate::geometry::{vertex_set, NewtonAnalysis};
use crate::poly::{Exponent, Polynomial};
use crate::rational::{self, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("coefficient of {0:?} is not positive; the circuit number is undefined")]
    NonpositiveVertexCoefficient(Exponent),
    #[error("{0:?} has no entry in the barycentric map")]
    NotInMap(Exponent),
}

/// `(f_α, λ_α)` pairs of a representation.
pub type WeightedCoefficients = Vec<(Rational, Rational)>;

/// `ln Θ = Σ λ_α · ln(f_α / λ_α)` with all `f_α > 0`.
pub fn log_circuit_number(pairs: &[(Rational, Rational)], precision_bits: u32) -> LogValue {
    let bits = precision_bits + GUARD_BITS;
    let mut acc = Interval::zero(bits);
    for (coeff, lambda) in pairs {
        let term = Interval::ln_rational(&(coeff / lambda), bits).mul_rational(lambda);
        acc = acc.add(&term);
    }
    LogValue::from_interval(acc)
}

/// The `(f_α, λ_α)` pairs for `α*` under `map`.
pub fn weighted_coefficients(
    f: &Polynomial,
    map: &BarycentricMap,
    alpha_star: &Exponent,
) -> Result<WeightedCoefficients, CircuitError> {
    let rep = map
        .get(alpha_star)
        .ok_or_else(|| CircuitError::NotInMap(alpha_star.clone()))?;
    rep.pairs()
        .map(|(alpha, lambda)| {
            let c = f.coeff_or_zero(alpha);
            if c.is_positive() {
                Ok((c, lambda.clone()))
            } else {
                Err(CircuitError::NonpositiveVertexCoefficient(alpha.clone()))
            }
        })
        .collect()
}

pub fn circuit_number(
    f: &Polynomial,
    map: &BarycentricMap,
    alpha_star: &Exponent,
    precision_bits: u32,
) -> Result<LogValue, CircuitError> {
    let pairs = weighted_coefficients(f, map, alpha_star)?;
    Ok(log_circuit_number(&pairs, precision_bits))
}

/// Largest `L · bits` we are willing to expand for the exact comparison.
const EXACT_BIT_BUDGET: u64 = 1 << 22;
const EXACT_MAX_LCM: u64 = 1 << 16;

/// Exact comparison of `q > 0` with `Θ`, via `q^L` vs `Π (f_α/λ_α)^{Lλ_α}`
/// where `L` is the common denominator of the weights. `None` when the
/// integer powers would exceed the size budget.
pub fn exact_compare_with_theta(q: &Rational, pairs: &[(Rational, Rational)]) -> Option<Ordering> {
    debug_assert!(q.is_positive());
    let l = rational::lcm_of_denominators(pairs.iter().map(|(_, lam)| lam));
    let l_small: u64 = u64::try_from(&l).ok().filter(|&v| v <= EXACT_MAX_LCM)?;
    let qbits = q.numer().bits() + q.denom().bits();
    let mut budget = l_small * qbits;
    let mut exps = Vec::with_capacity(pairs.len());
    for (c, lam) in pairs {
        let e = lam * Rational::from_integer(l.clone());
        debug_assert!(e.is_integer());
        let e = u32::try_from(e.to_integer()).ok()?;
        let base = c / lam;
        budget += u64::from(e) * (base.numer().bits() + base.denom().bits());
        exps.push((base, e));
    }
    if budget > EXACT_BIT_BUDGET {
        return None;
    }
    let l32 = u32::try_from(l_small).ok()?;
    // q^L = qn^L / qd^L and Θ^L = Π bn^e / Π bd^e, compare by cross-multiplying
    let mut lhs = q.numer().pow(l32);
    let mut rhs = q.denom().pow(l32);
    let mut theta_num = BigInt::one();
    let mut theta_den = BigInt::one();
    for (base, e) in &exps {
        theta_num *= base.numer().pow(*e);
        theta_den *= base.denom().pow(*e);
    }
    lhs *= theta_den;
    rhs *= theta_num;
    Some(lhs.cmp(&rhs))
}

/// How a comparison against `Θ` was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonRoute {
    /// No circuit number needed (sign argument).
    Trivial,
    Enclosure,
    ExactPower,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaComparison {
    /// Ordering of `q` relative to `Θ`; `None` when undecided.
    pub ordering: Option<Ordering>,
    pub route: ComparisonRoute,
    pub log_theta: LogValue,
}

impl ThetaComparison {
    pub fn exact(&self) -> bool {
        matches!(self.route, ComparisonRoute::Trivial | ComparisonRoute::ExactPower)
    }
}

/// Compares rational `q > 0` with `Θ` of `pairs`.
pub fn compare_with_theta(
    q: &Rational,
    pairs: &[(Rational, Rational)],
    precision_bits: u32,
    policy: MarginPolicy,
) -> ThetaComparison {
    let log_theta = log_circuit_number(pairs, precision_bits);
    let log_q = Interval::ln_rational(q, precision_bits + GUARD_BITS);
    if let Some(ord) = log_q.compare(log_theta.interval()) {
        return ThetaComparison {
            ordering: Some(ord),
            route: ComparisonRoute::Enclosure,
            log_theta,
        };
    }
    if policy == MarginPolicy::ExactFallback {
        if let Some(ord) = exact_compare_with_theta(q, pairs) {
            return ThetaComparison {
                ordering: Some(ord),
                route: ComparisonRoute::ExactPower,
                log_theta,
            };
        }
    }
    ThetaComparison {
        ordering: None,
        route: ComparisonRoute::Undecided,
        log_theta,
    }
}

/// A recognized circuit polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitStructure {
    /// `(α(j), f_{α(j)})`, `j = 0..=r`.
    pub outer: Vec<(Exponent, Rational)>,
    /// `(α*, f_{α*})`.
    pub inner: (Exponent, Rational),
    /// Barycentric coordinates of `α*`, aligned with `outer`.
    pub lambdas: Vec<Rational>,
    pub r: usize,
    pub n_vars: usize,
}

impl CircuitStructure {
    pub fn pairs(&self) -> WeightedCoefficients {
        self.outer
            .iter()
            .zip(&self.lambdas)
            .map(|((_, c), l)| (c.clone(), l.clone()))
            .collect()
    }

    pub fn log_theta(&self, precision_bits: u32) -> LogValue {
        log_circuit_number(&self.pairs(), precision_bits)
    }

    pub fn inner_is_even(&self) -> bool {
        self.inner.0.is_even()
    }
}

/// First violated part of the circuit definition.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
pub enum NotACircuit {
    #[error("expected exactly one non-vertex exponent of the Newton polytope, found {0}")]
    NonVertexCount(usize),
    #[error("condition i: vertex {0:?} is not in 2N^n")]
    OddVertex(Exponent),
    #[error("condition ii: vertex coefficient of {0:?} is not positive")]
    NonpositiveVertex(Exponent),
    #[error("condition iii: the vertices are affinely dependent")]
    AffinelyDependent,
    #[error("condition iv: the inner exponent is not a strictly positive combination of all vertices")]
    NotStrictlyInterior,
}

pub fn recognize_circuit(f: &Polynomial) -> Result<CircuitStructure, NotACircuit> {
    let support: std::collections::BTreeSet<Exponent> = f.support().cloned().collect();
    let vertices = vertex_set(&support);
    let inner: Vec<&Exponent> = support.iter().filter(|a| !vertices.contains(*a)).collect();
    if inner.len() != 1 {
        return Err(NotACircuit::NonVertexCount(inner.len()));
    }
    let alpha_star = inner[0].clone();
    for v in &vertices {
        if !v.is_even() {
            return Err(NotACircuit::OddVertex(v.clone()));
        }
    }
    for v in &vertices {
        if !f.coeff_or_zero(v).is_positive() {
            return Err(NotACircuit::NonpositiveVertex(v.clone()));
        }
    }
    let outer: Vec<Exponent> = vertices.iter().cloned().collect();
    if lifted_rank(&outer) != outer.len() {
        return Err(NotACircuit::AffinelyDependent);
    }
    let rep = minimal_barycentric(&alpha_star, &outer).map_err(|_| NotACircuit::NotStrictlyInterior)?;
    if rep.support.len() != outer.len() {
        return Err(NotACircuit::NotStrictlyInterior);
    }
    let lambdas = outer
        .iter()
        .map(|a| rep.weight_of(a).cloned().unwrap_or_else(Rational::zero))
        .collect();
    Ok(CircuitStructure {
        r: outer.len() - 1,
        outer: outer
            .iter()
            .map(|a| (a.clone(), f.coeff_or_zero(a)))
            .collect(),
        inner: (alpha_star.clone(), f.coeff_or_zero(&alpha_star)),
        lambdas,
        n_vars: f.n_vars(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Nonnegativity {
    Nonnegative,
    NotNonnegative,
    Borderline,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonnegDecision {
    pub verdict: Nonnegativity,
    pub route: ComparisonRoute,
    pub log_theta: LogValue,
}

/// Global nonnegativity of a circuit polynomial: `f* ≥ -Θ` for even `α*`,
/// `|f*| ≤ Θ` otherwise.
pub fn circuit_nonnegative(
    cs: &CircuitStructure,
    precision_bits: u32,
    policy: MarginPolicy,
) -> NonnegDecision {
    let f_star = &cs.inner.1;
    if cs.inner_is_even() && f_star.is_positive() {
        return NonnegDecision {
            verdict: Nonnegativity::Nonnegative,
            route: ComparisonRoute::Trivial,
            log_theta: cs.log_theta(precision_bits),
        };
    }
    let cmp = compare_with_theta(&f_star.abs(), &cs.pairs(), precision_bits, policy);
    let verdict = match cmp.ordering {
        Some(Ordering::Less | Ordering::Equal) => Nonnegativity::Nonnegative,
        Some(Ordering::Greater) => Nonnegativity::NotNonnegative,
        None => Nonnegativity::Borderline,
    };
    NonnegDecision {
        verdict,
        route: cmp.route,
        log_theta: cmp.log_theta,
    }
}

/// Coercivity decision for a circuit polynomial.
///
/// With C1–C3 in place, only `r ∈ {n-1, n}` can be coercive; `r = n` always
/// is, and `r = n-1` is exactly when `f* > -Θ` (even `α*`) or `|f*| < Θ`.
pub fn circuit_coercive(
    f: &Polynomial,
    cs: &CircuitStructure,
    analysis: &NewtonAnalysis,
    precision_bits: u32,
    policy: MarginPolicy,
) -> Certificate {
    let n = f.n_vars();
    let mut witness = Witness::default();
    let mut cw = CircuitWitness::new(cs, precision_bits);

    if let Some(cond) = analysis.first_failed_condition() {
        witness.failed_condition = Some(cond.name().to_string());
        return Certificate::new(
            Verdict::NotCoercive,
            Some(Theorem::NecessaryConditions),
            true,
            witness,
            precision_bits,
        );
    }
    if cs.r + 2 <= n {
        cw.case = "vertex-count".into();
        witness.failed_condition = Some("vertex-count".into());
        witness.circuit = Some(cw);
        return Certificate::new(
            Verdict::NotCoercive,
            Some(Theorem::CircuitChar),
            true,
            witness,
            precision_bits,
        );
    }
    if cs.r == n {
        cw.case = "a".into();
        witness.circuit = Some(cw);
        return Certificate::new(
            Verdict::Coercive,
            Some(Theorem::CircuitChar),
            true,
            witness,
            precision_bits,
        );
    }

    cw.case = "b".into();
    let f_star = &cs.inner.1;
    let (verdict, route) = if cs.inner_is_even() && f_star.is_positive() {
        (Verdict::Coercive, ComparisonRoute::Trivial)
    } else {
        let cmp = compare_with_theta(&f_star.abs(), &cs.pairs(), precision_bits, policy);
        let v = match cmp.ordering {
            Some(Ordering::Less) => Verdict::Coercive,
            Some(Ordering::Equal | Ordering::Greater) => Verdict::NotCoercive,
            None => Verdict::Borderline,
        };
        (v, cmp.route)
    };
    cw.comparison = route;
    witness.circuit = Some(cw);
    let exact = matches!(route, ComparisonRoute::Trivial | ComparisonRoute::ExactPower);
    Certificate::new(verdict, Some(Theorem::CircuitChar), exact, witness, precision_bits)
}
