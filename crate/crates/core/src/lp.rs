//! Exact rational two-phase simplex for problems in standard form
//! `A x = b, x ≥ 0`.
//!
//! Dense tableau, Bland's rule for both entering and leaving variables. The
//! column order supplied by the caller is the tie-breaking order, so results
//! are fully determined by the input.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Values of the structural variables.
    pub values: Vec<Rational>,
    /// Objective value (zero for pure feasibility problems).
    pub objective: Rational,
    /// Structural columns in the final basis.
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(Solution),
}

impl LpOutcome {
    pub fn optimal(self) -> Option<Solution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// Equality-constrained problem; `rows[i][j]` is the coefficient of `x_j`
/// in constraint `i`.
#[derive(Debug, Clone)]
pub struct StandardForm {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    n_cols: usize,
}

impl StandardForm {
    pub fn new(n_cols: usize) -> Self {
        StandardForm {
            rows: Vec::new(),
            rhs: Vec::new(),
            n_cols,
        }
    }

    /// Builds `Σ_j x_j · columns[j] = target`.
    pub fn from_columns(columns: &[Vec<Rational>], target: &[Rational]) -> Self {
        let mut lp = StandardForm::new(columns.len());
        for (i, t) in target.iter().enumerate() {
            lp.push_row(columns.iter().map(|c| c[i].clone()).collect(), t.clone());
        }
        lp
    }

    pub fn push_row(&mut self, row: Vec<Rational>, rhs: Rational) {
        assert_eq!(row.len(), self.n_cols, "row length");
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Any basic feasible solution, or `None` when infeasible.
    pub fn feasible_point(&self) -> Option<Solution> {
        let mut t = Tableau::phase_one(self);
        t.solve_phase_one()?;
        Some(t.solution(&Rational::zero()))
    }

    /// Maximizes `objective · x`.
    pub fn maximize(&self, objective: &[Rational]) -> LpOutcome {
        assert_eq!(objective.len(), self.n_cols, "objective length");
        let mut t = Tableau::phase_one(self);
        if t.solve_phase_one().is_none() {
            return LpOutcome::Infeasible;
        }
        match t.solve_phase_two(objective) {
            Some(value) => LpOutcome::Optimal(t.solution(&value)),
            None => LpOutcome::Unbounded,
        }
    }
}

struct Tableau {
    /// m constraint rows, each with `width` entries followed by the rhs.
    a: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    n_struct: usize,
    width: usize,
}

impl Tableau {
    fn phase_one(lp: &StandardForm) -> Self {
        let m = lp.rows.len();
        let width = lp.n_cols + m;
        let mut a = Vec::with_capacity(m);
        for (i, (row, b)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
            let flip = b.is_negative();
            let mut r: Vec<Rational> = row
                .iter()
                .map(|v| if flip { -v.clone() } else { v.clone() })
                .collect();
            r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            r.push(if flip { -b.clone() } else { b.clone() });
            a.push(r);
        }
        Tableau {
            a,
            basis: (lp.n_cols..width).collect(),
            n_struct: lp.n_cols,
            width,
        }
    }

    fn rhs(&self, i: usize) -> &Rational {
        &self.a[i][self.width]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.a[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Minimizes `cost · x` over the current basis with Bland's rule,
    /// restricted to columns `< allowed`. Returns false when unbounded.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            // reduced cost d_j = c_j - c_B · column_j
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.a[i][j].is_zero() {
                        d -= &cost[b] * &self.a[i][j];
                    }
                }
                d.is_negative()
            });
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                let coef = &self.a[i][col];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / coef;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn solve_phase_one(&mut self) -> Option<()> {
        let m = self.a.len();
        let mut cost = vec![Rational::zero(); self.width];
        for c in cost.iter_mut().skip(self.n_struct) {
            *c = Rational::one();
        }
        let bounded = self.run(&cost, self.width);
        debug_assert!(bounded, "phase one is bounded below by zero");
        let infeasible = (0..m).any(|i| self.basis[i] >= self.n_struct && !self.rhs(i).is_zero());
        if infeasible {
            return None;
        }
        // drive zero-valued artificials out of the basis; drop redundant rows
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= self.n_struct {
                match (0..self.n_struct).find(|&j| !self.a[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.a.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        Some(())
    }

    fn solve_phase_two(&mut self, objective: &[Rational]) -> Option<Rational> {
        let mut cost: Vec<Rational> = objective.iter().map(|c| -c.clone()).collect();
        cost.resize(self.width, Rational::zero());
        if !self.run(&cost, self.n_struct) {
            return None;
        }
        Some(
            self.basis
                .iter()
                .enumerate()
                .map(|(i, &b)| &objective[b] * self.rhs(i))
                .fold(Rational::zero(), |acc, v| acc + v),
        )
    }

    fn solution(&self, objective: &Rational) -> Solution {
        let mut values = vec![Rational::zero(); self.n_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            values[b] = self.rhs(i).clone();
        }
        let mut basis = self.basis.clone();
        basis.sort_unstable();
        Solution {
            values,
            objective: objective.clone(),
            basis,
        }
    }
}
