//! Maps of minimal barycentric coordinates.
//!
//! For every non-vertex exponent `α*` we pick an affinely independent subset
//! `W ⊆ V₀(f)` and strictly positive weights with `Σ λ_α (α; 1) = (α*; 1)`.
//! A basic feasible solution of that system has linearly independent lifted
//! columns in its positive support, so phase one of the simplex yields such a
//! representation directly.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::NewtonAnalysis;
use crate::lp::StandardForm;
use crate::poly::{Exponent, Polynomial};
use crate::rational::{self, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaryError {
    #[error("exponent {0:?} is not in the convex hull of the vertex set")]
    NotInHull(Exponent),
}

/// Positive weights over an affinely independent vertex subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub support: Vec<Exponent>,
    pub weights: Vec<Rational>,
}

impl Representation {
    pub fn weight_of(&self, alpha: &Exponent) -> Option<&Rational> {
        self.support
            .iter()
            .position(|a| a == alpha)
            .map(|i| &self.weights[i])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.support.iter().zip(&self.weights)
    }

    /// Exact check of positivity, `Σλ = 1`, `Σλα = α*` and affine
    /// independence of the support.
    pub fn verify(&self, alpha_star: &Exponent) -> bool {
        if self.support.is_empty() || self.support.len() != self.weights.len() {
            return false;
        }
        if self.weights.iter().any(|w| !w.is_positive()) {
            return false;
        }
        let target = alpha_star.lifted();
        let mut acc = vec![Rational::zero(); target.len()];
        for (a, w) in self.pairs() {
            for (s, v) in acc.iter_mut().zip(a.lifted()) {
                *s += w * v;
            }
        }
        acc == target && lifted_rank(&self.support) == self.support.len()
    }
}

/// Rank of the lifted vectors `(α; 1)`, by exact Gaussian elimination.
pub fn lifted_rank(points: &[Exponent]) -> usize {
    let mut rows: Vec<Vec<Rational>> = points.iter().map(Exponent::lifted).collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            if r[col].is_zero() {
                continue;
            }
            let factor = &r[col] / &pivot[col];
            for (v, pv) in r.iter_mut().zip(&pivot) {
                *v -= &factor * pv;
            }
        }
        rank += 1;
    }
    rank
}

/// Basic feasible representation of `alpha_star` over `columns`, in the given
/// column order.
pub fn minimal_barycentric(
    alpha_star: &Exponent,
    columns: &[Exponent],
) -> Result<Representation, BaryError> {
    if let Some(pos) = columns.iter().position(|c| c == alpha_star) {
        return Ok(Representation {
            support: vec![columns[pos].clone()],
            weights: vec![Rational::one()],
        });
    }
    let lifted: Vec<Vec<Rational>> = columns.iter().map(Exponent::lifted).collect();
    let sol = StandardForm::from_columns(&lifted, &alpha_star.lifted())
        .feasible_point()
        .ok_or_else(|| BaryError::NotInHull(alpha_star.clone()))?;
    let mut pairs: Vec<(Exponent, Rational)> = columns
        .iter()
        .zip(sol.values)
        .filter(|(_, w)| w.is_positive())
        .map(|(a, w)| (a.clone(), w))
        .collect();
    pairs.sort_by(|x, y| x.0.cmp(&y.0));
    let (support, weights) = pairs.into_iter().unzip();
    Ok(Representation { support, weights })
}

/// `λ_f`: a representation for every `α* ∈ V₀^c(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarycentricMap {
    /// `None` for the canonical graded-lex column order.
    pub seed: Option<u64>,
    pub entries: BTreeMap<Exponent, Representation>,
}

impl BarycentricMap {
    pub fn get(&self, alpha_star: &Exponent) -> Option<&Representation> {
        self.entries.get(alpha_star)
    }

    /// `λ_f(α*, α)`, zero outside the support.
    pub fn weight(&self, alpha_star: &Exponent, alpha: &Exponent) -> Rational {
        self.get(alpha_star)
            .and_then(|r| r.weight_of(alpha))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn verify(&self) -> bool {
        self.entries.iter().all(|(a, r)| r.verify(a))
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            seed: self.seed,
            entries: self
                .entries
                .iter()
                .map(|(a, r)| MapEntryJson {
                    alpha_star: a.clone(),
                    support: r
                        .pairs()
                        .map(|(alpha, w)| WeightJson {
                            alpha: alpha.clone(),
                            weight: rational::to_fraction_string(w),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MapJson {
    pub seed: Option<u64>,
    pub entries: Vec<MapEntryJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapEntryJson {
    pub alpha_star: Exponent,
    pub support: Vec<WeightJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightJson {
    pub alpha: Exponent,
    pub weight: String,
}

/// Column order for a map: graded-lex, or a seeded shuffle of it.
pub fn column_order(v0: &BTreeSet<Exponent>, seed: Option<u64>) -> Vec<Exponent> {
    let mut cols: Vec<Exponent> = v0.iter().cloned().collect();
    if let Some(s) = seed {
        cols.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
    }
    cols
}

pub fn build_map(
    f: &Polynomial,
    analysis: &NewtonAnalysis,
    seed: Option<u64>,
) -> Result<BarycentricMap, BaryError> {
    let cols = column_order(&analysis.v0, seed);
    let mut entries = BTreeMap::new();
    for alpha_star in analysis.non_vertices(f) {
        let rep = minimal_barycentric(alpha_star, &cols)?;
        debug_assert!(
            !(analysis.c3
                && analysis.d.contains(alpha_star)
                && rep.support.iter().any(Exponent::is_origin)),
            "gem degenerate exponent represented with the origin"
        );
        entries.insert(alpha_star.clone(), rep);
    }
    Ok(BarycentricMap { seed, entries })
}
