//! Vertex structure of the Newton polytope at infinity and the partition
//! `A(f) = V ∪̇ D ∪̇ R`.
//!
//! Everything here is decided by exact linear programs over the rationals:
//!
//! * `p` is a vertex of `conv(P)` iff `p` is not a convex combination of
//!   `P \ {p}`;
//! * a non-vertex exponent `α*` is gem degenerate iff every convex
//!   representation of `α*` over `V₀(f)` puts weight zero on the origin, i.e.
//!   the maximal origin weight is zero. Equivalently the smallest face of
//!   `new_∞(f)` containing `α*` avoids the origin.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::lp::{LpOutcome, StandardForm};
use crate::poly::{Exponent, Polynomial};
use crate::rational::Rational;

/// Points of `points` that are vertices of their convex hull.
///
/// Output keeps the input's graded-lexicographic order.
pub fn vertex_set(points: &BTreeSet<Exponent>) -> BTreeSet<Exponent> {
    let all: Vec<&Exponent> = points.iter().collect();
    all.par_iter()
        .enumerate()
        .filter(|(k, p)| {
            if strictly_extreme(&all, p) {
                return true;
            }
            let others: Vec<Vec<Rational>> = all
                .iter()
                .enumerate()
                .filter(|(j, _)| j != k)
                .map(|(_, q)| q.lifted())
                .collect();
            !in_convex_hull(&others, p)
        })
        .map(|(_, p)| (*p).clone())
        .collect()
}

/// `p` is the unique maximizer or minimizer of a coordinate or of the
/// coordinate sum, which already makes it a vertex.
fn strictly_extreme(all: &[&Exponent], p: &Exponent) -> bool {
    let sum = |e: &Exponent| e.entries().iter().map(|&v| v as u64).sum::<u64>();
    let unique = |key: &dyn Fn(&Exponent) -> u64| {
        let kp = key(p);
        let others = all.iter().filter(|q| **q != p).map(|q| key(q));
        let (mut above, mut below) = (true, true);
        for kq in others {
            above &= kp > kq;
            below &= kp < kq;
        }
        above || below
    };
    (0..p.len()).any(|i| unique(&|e: &Exponent| e.entries()[i] as u64)) || unique(&sum)
}

fn in_convex_hull(lifted_columns: &[Vec<Rational>], p: &Exponent) -> bool {
    if lifted_columns.is_empty() {
        return false;
    }
    StandardForm::from_columns(lifted_columns, &p.lifted())
        .feasible_point()
        .is_some()
}

/// Largest weight the origin can carry in a convex representation of
/// `alpha_star` over `v0`. `None` when `alpha_star ∉ conv(v0)`.
pub fn max_origin_weight(alpha_star: &Exponent, v0: &BTreeSet<Exponent>) -> Option<Rational> {
    let columns: Vec<Vec<Rational>> = v0.iter().map(Exponent::lifted).collect();
    let objective: Vec<Rational> = v0
        .iter()
        .map(|a| if a.is_origin() { Rational::one() } else { Rational::zero() })
        .collect();
    match StandardForm::from_columns(&columns, &alpha_star.lifted()).maximize(&objective) {
        LpOutcome::Optimal(s) => Some(s.objective),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("convex weights are bounded"),
    }
}

/// `D(f)`: non-vertex, nonzero exponents whose maximal origin weight is zero.
///
/// `v0` must be `vertex_set(A(f) ∪ {0})`.
pub fn gem_degenerate_set(f: &Polynomial, v0: &BTreeSet<Exponent>) -> BTreeSet<Exponent> {
    let candidates: Vec<&Exponent> = f
        .support()
        .filter(|a| !a.is_origin() && !v0.contains(*a))
        .collect();
    candidates
        .par_iter()
        .filter(|a| {
            let w = max_origin_weight(a, v0)
                .expect("support points lie in the Newton polytope at infinity");
            w.is_zero()
        })
        .map(|a| (*a).clone())
        .collect()
}

/// Which of the necessary conditions failed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    C1,
    C2,
    C3,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::C1 => "C1",
            Condition::C2 => "C2",
            Condition::C3 => "C3",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonAnalysis {
    /// Vertices of `new_∞(f)`; always contains the origin.
    pub v0: BTreeSet<Exponent>,
    /// `V(f) = V₀(f) \ {0}`.
    pub v: BTreeSet<Exponent>,
    /// Gem degenerate exponents.
    pub d: BTreeSet<Exponent>,
    /// Remaining exponents.
    pub r: BTreeSet<Exponent>,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    /// Axis vertex `2k_i e_i` per variable; filled only when `c3` holds.
    pub v_ess: BTreeMap<usize, Exponent>,
    pub gem_regular: bool,
}

impl NewtonAnalysis {
    /// `V₀^c(f) = A(f) \ V₀(f)`.
    pub fn non_vertices<'a>(&'a self, f: &'a Polynomial) -> impl Iterator<Item = &'a Exponent> {
        f.support().filter(move |a| !self.v0.contains(*a))
    }

    pub fn first_failed_condition(&self) -> Option<Condition> {
        if !self.c1 {
            Some(Condition::C1)
        } else if !self.c2 {
            Some(Condition::C2)
        } else if !self.c3 {
            Some(Condition::C3)
        } else {
            None
        }
    }
}

pub fn analyze(f: &Polynomial) -> NewtonAnalysis {
    let n = f.n_vars();
    let mut a0: BTreeSet<Exponent> = f.support().cloned().collect();
    a0.insert(Exponent::zero(n));
    let v0 = vertex_set(&a0);
    let v: BTreeSet<Exponent> = v0.iter().filter(|a| !a.is_origin()).cloned().collect();
    let d = gem_degenerate_set(f, &v0);
    let r: BTreeSet<Exponent> = f
        .support()
        .filter(|a| !v.contains(*a) && !d.contains(*a))
        .cloned()
        .collect();

    let nonempty = !v.is_empty() && n > 0;
    let c1 = nonempty && v.iter().all(Exponent::is_even);
    let c2 = nonempty
        && v
            .iter()
            .all(|a| f.coefficient(a).is_some_and(|c| c.is_positive()));
    let mut axis: BTreeMap<usize, Exponent> = BTreeMap::new();
    for a in &v {
        if let Some((i, k)) = a.as_axis_power() {
            if k % 2 == 0 {
                axis.insert(i, a.clone());
            }
        }
    }
    let c3 = nonempty && axis.len() == n;
    let v_ess = if c3 { axis } else { BTreeMap::new() };
    let gem_regular = d.is_empty();
    NewtonAnalysis {
        v0,
        v,
        d,
        r,
        c1,
        c2,
        c3,
        v_ess,
        gem_regular,
    }
}
