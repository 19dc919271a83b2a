//! Numeric sanity checks. Nothing here feeds into a verdict.
//!
//! Sphere minima are taken over a deterministic direction grid plus seeded
//! Gaussian directions. Evaluation uses double-double arithmetic so that the
//! heavy cancellation of near-boundary polynomials at large radii does not
//! drown the signal.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::CircuitStructure;
use crate::poly::Polynomial;
use crate::rational::{to_f64, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("circuit geometry does not match: {0}")]
    GeometryMismatch(String),
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from_rational(q: &Rational) -> Dd {
        let hi = to_f64(q);
        let rest = q - Rational::from_float(hi).unwrap_or_default();
        Dd { hi, lo: to_f64(&rest) }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn powi(self, mut e: u32) -> Dd {
        let mut base = self;
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// A polynomial prepared for repeated double-double evaluation.
#[derive(Debug, Clone)]
pub struct AccurateEvaluator {
    n: usize,
    terms: Vec<(Dd, Vec<u32>)>,
}

impl AccurateEvaluator {
    pub fn new(f: &Polynomial) -> Self {
        AccurateEvaluator {
            n: f.n_vars(),
            terms: f
                .terms()
                .map(|(a, c)| (Dd::from_rational(c), a.entries().to_vec()))
                .collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "point dimension");
        let mut acc = Dd::ZERO;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t.mul(Dd { hi: *xi, lo: 0.0 }.powi(k));
                }
            }
            acc = acc.add(t);
        }
        acc.value()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub radii: Vec<f64>,
    pub minima: Vec<f64>,
}

impl RadialProfile {
    /// Heuristic divergence: the second half of the minima is strictly
    /// increasing and the last one exceeds the first by more than 1.
    pub fn diverges(&self) -> bool {
        let m = &self.minima;
        if m.len() < 2 {
            return false;
        }
        let tail = &m[m.len() / 2..];
        tail.windows(2).all(|w| w[1] > w[0]) && m[m.len() - 1] > m[0] + 1.0
    }
}

pub fn default_samples(n: usize) -> usize {
    if n <= 2 {
        4096
    } else {
        20_000
    }
}

/// Unit directions: half from a deterministic grid, the rest seeded random.
pub fn directions(n: usize, samples: usize, seed: u64) -> Vec<Vec<f64>> {
    match n {
        0 => return vec![Vec::new()],
        1 => return vec![vec![1.0], vec![-1.0]],
        _ => {}
    }
    let samples = samples.max(2);
    let grid = if n <= 3 { samples / 2 } else { 0 };
    let mut dirs = Vec::with_capacity(samples);
    if n == 2 {
        for k in 0..grid {
            let th = std::f64::consts::TAU * k as f64 / grid as f64;
            dirs.push(vec![th.cos(), th.sin()]);
        }
    } else if n == 3 {
        // Fibonacci sphere
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        for k in 0..grid {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / grid as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            dirs.push(vec![rho * phi.cos(), rho * phi.sin(), z]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while dirs.len() < samples {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-12 {
            dirs.push(v.into_iter().map(|c| c / norm).collect());
        }
    }
    dirs
}

/// Sampled minimum of `f` over spheres of the given radii.
pub fn radial_scan(f: &Polynomial, radii: &[f64], samples: usize, seed: u64) -> RadialProfile {
    assert!(
        radii.iter().all(|r| *r > 0.0) && radii.windows(2).all(|w| w[0] < w[1]),
        "radii must be positive and strictly increasing"
    );
    let ev = AccurateEvaluator::new(f);
    let dirs = directions(f.n_vars(), samples, seed);
    let minima = radii
        .iter()
        .map(|&r| {
            dirs.par_iter()
                .map(|d| {
                    let x: Vec<f64> = d.iter().map(|c| c * r).collect();
                    ev.eval(&x)
                })
                .reduce(|| f64::INFINITY, f64::min)
        })
        .collect();
    RadialProfile {
        radii: radii.to_vec(),
        minima,
    }
}

/// Minimum of `f` over the grid `{-bound, …, bound}^n` with `steps` points
/// per axis.
pub fn grid_minimum(f: &Polynomial, bound: f64, steps: usize) -> f64 {
    let n = f.n_vars();
    let ev = AccurateEvaluator::new(f);
    let steps = steps.max(2);
    let total = steps.pow(n as u32);
    (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut x = vec![0.0; n];
            for xi in x.iter_mut() {
                let k = idx % steps;
                idx /= steps;
                *xi = -bound + 2.0 * bound * k as f64 / (steps - 1) as f64;
            }
            ev.eval(&x)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Point `x(t)` in the positive orthant on which the AM–GM estimate of an
/// `r = n-1` circuit with axis-power outer vertices is tight:
/// `x_i = (t λ_j / f_{α(j)})^{1/(2k_j)}` where `α(j) = 2k_j e_i`.
pub fn equality_manifold_point(cs: &CircuitStructure, t: f64) -> Result<Vec<f64>, OracleError> {
    let n = cs.n_vars;
    if cs.outer.len() != n {
        return Err(OracleError::GeometryMismatch(format!(
            "expected {n} outer vertices, found {}",
            cs.outer.len()
        )));
    }
    let mut x = vec![f64::NAN; n];
    for ((alpha, coeff), lambda) in cs.outer.iter().zip(&cs.lambdas) {
        let Some((i, two_k)) = alpha.as_axis_power() else {
            return Err(OracleError::GeometryMismatch(format!(
                "{alpha:?} is not an axis power"
            )));
        };
        if two_k % 2 != 0 || !x[i].is_nan() {
            return Err(OracleError::GeometryMismatch(format!(
                "{alpha:?} is not an even power of a fresh axis"
            )));
        }
        let base = t * to_f64(&(lambda / coeff));
        x[i] = base.powf(1.0 / two_k as f64);
    }
    Ok(x)
}

/// [`equality_manifold_point`] with the sign of the first coordinate where
/// `α*` is odd flipped, which turns `x^{α*}` negative.
pub fn flipped_manifold_point(cs: &CircuitStructure, t: f64) -> Result<Vec<f64>, OracleError> {
    let s = cs
        .inner
        .0
        .entries()
        .iter()
        .position(|e| e % 2 == 1)
        .ok_or_else(|| OracleError::GeometryMismatch("inner exponent is even".into()))?;
    let mut x = equality_manifold_point(cs, t)?;
    x[s] = -x[s];
    Ok(x)
}
