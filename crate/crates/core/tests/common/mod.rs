#![allow(dead_code)]

use std::collections::BTreeSet;

use coercheck::rational::{int, ratio};
use coercheck::{parse_polynomial, Exponent, Polynomial, Rational, VarSpec};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn xy(text: &str) -> Polynomial {
    parse_polynomial(text, &VarSpec::Explicit(vec!["x".into(), "y".into()])).unwrap()
}

pub fn xyz(text: &str) -> Polynomial {
    parse_polynomial(
        text,
        &VarSpec::Explicit(vec!["x".into(), "y".into(), "z".into()]),
    )
    .unwrap()
}

/// Polynomials quoted as examples, used for exactness and golden checks.
pub const EXAMPLE_SUITE: &[&str] = &[
    "x^2 + y^2",
    "x^4 + x^3*y + y^4",
    "2*x^4 - 3*x^3*y + 5*y^4",
    "x^4 + 1.6*x^3*y + y^4",
    "x^4 + 2*x^3*y + y^4",
    "x^4 + 0.95*x^3*y + 0.95*x*y^3 + y^4",
    "x^4 + 1.6*x^3*y + y^4",
    "x^4 + 0.4*x^3*y + 0.4*x*y^3 + y^4",
    "x^4 + 2*x^3*y - 5*x*y^3 + y^4",
    "x^4 + x^2*y^2 + y^4",
    "x^4 + 1/2*x^3*y + x^2*y^2 - 1/3*x*y^3 + y^4",
    "1 + x^4 + y^4 - 5*x*y^2",
    "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1",
    "-x^2 + y^2",
    "x^4 + y^4 + z^4 - x*y*z^2 + 1/2*x^2*y^2 - 1/4*x^3*z",
    "x^6 + y^6 + z^6 + x^2*y^2*z^2 - 2*x^3*y^3 + x*y*z",
];

pub fn example(text: &str) -> Polynomial {
    if text.contains('z') {
        xyz(text)
    } else {
        xy(text)
    }
}

fn lifted(a: &Exponent) -> Vec<Rational> {
    a.entries()
        .iter()
        .map(|&v| int(v as i64))
        .chain([int(1)])
        .collect()
}

/// Solves `Σ λ_w (w;1) = (p;1)` for affinely independent `w`; `None` when
/// `w` is dependent or the system is inconsistent.
fn solve_lifted(w: &[&Exponent], p: &Exponent) -> Option<Vec<Rational>> {
    let rows = p.len() + 1;
    let cols = w.len();
    let target = lifted(p);
    let cols_lifted: Vec<Vec<Rational>> = w.iter().map(|a| lifted(a)).collect();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<Rational> = (0..cols).map(|j| cols_lifted[j][i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            return None; // dependent columns
        };
        m.swap(row, p);
        let pv = m[row][col].clone();
        for v in m[row].iter_mut() {
            *v /= &pv;
        }
        let prow = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (v, q) in r.iter_mut().zip(&prow) {
                    *v -= &f * q;
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    if (row..rows).any(|i| !m[i][cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|j| m[pivots[j]][cols].clone()).collect())
}

fn subsets<T: Clone>(items: &[T], max_size: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for it in items {
        let mut extra = Vec::new();
        for s in &out {
            if s.len() < max_size {
                let mut t = s.clone();
                t.push(it.clone());
                extra.push(t);
            }
        }
        out.extend(extra);
    }
    out.retain(|s| !s.is_empty());
    out
}

/// All convex representations of `p` over affinely independent subsets of
/// `pool` (Carathéodory), as `(subset, weights)`.
pub fn brute_representations<'a>(
    p: &Exponent,
    pool: &[&'a Exponent],
) -> Vec<(Vec<&'a Exponent>, Vec<Rational>)> {
    let d = p.len();
    subsets(pool, d + 1)
        .into_iter()
        .filter_map(|w| {
            let lam = solve_lifted(&w, p)?;
            lam.iter().all(|l| !l.is_negative()).then_some((w, lam))
        })
        .collect()
}

/// Vertices of `conv(points)` by exhaustive search.
pub fn brute_vertex_set(points: &BTreeSet<Exponent>) -> BTreeSet<Exponent> {
    let all: Vec<&Exponent> = points.iter().collect();
    all.iter()
        .filter(|p| {
            let others: Vec<&Exponent> = all.iter().copied().filter(|q| q != *p).collect();
            brute_representations(p, &others).is_empty()
        })
        .map(|p| (*p).clone())
        .collect()
}

/// Largest origin weight over the basic representations of `p` over `v0`.
pub fn brute_max_origin_weight(p: &Exponent, v0: &BTreeSet<Exponent>) -> Option<Rational> {
    let pool: Vec<&Exponent> = v0.iter().collect();
    brute_representations(p, &pool)
        .into_iter()
        .map(|(w, lam)| {
            w.iter()
                .zip(&lam)
                .find(|(a, _)| a.is_origin())
                .map_or_else(Rational::zero, |(_, l)| l.clone())
        })
        .max()
}

pub fn random_support(rng: &mut ChaCha8Rng, n: usize, max_points: usize, max_entry: u32) -> BTreeSet<Exponent> {
    let k = rng.gen_range(1..=max_points);
    (0..k)
        .map(|_| Exponent::new((0..n).map(|_| rng.gen_range(0..=max_entry)).collect()))
        .collect()
}

pub fn random_coefficient(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(1..=6);
    let den = rng.gen_range(1..=3);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    ratio(sign * num, den)
}

/// Random polynomial of degree ≤ `max_degree` with at most `max_terms`
/// terms. With probability `axis_bias` it starts from positive even axis
/// powers so that the necessary conditions hold fairly often.
pub fn random_polynomial(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_degree: u32,
    max_terms: usize,
    axis_bias: f64,
) -> Polynomial {
    let mut terms: Vec<(Exponent, Rational)> = Vec::new();
    if rng.gen_bool(axis_bias) {
        for i in 0..n {
            let k = rng.gen_range(1..=max_degree / 2);
            terms.push((Exponent::axis(n, i, 2 * k), ratio(rng.gen_range(1..=6), rng.gen_range(1..=3))));
        }
    }
    while terms.len() < max_terms && rng.gen_bool(0.8) {
        let deg = rng.gen_range(0..=max_degree);
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        let e = Exponent::new(e);
        if terms.iter().all(|(a, _)| *a != e) {
            terms.push((e, random_coefficient(rng)));
        }
    }
    Polynomial::with_default_names(n, terms).unwrap()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}
