//! Dense two-phase primal simplex over exact rationals with Bland's rule,
//! so pivoting never cycles and every reported optimum is a basic (hence
//! extreme-point) solution. No floating point anywhere.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Minimized objective, one coefficient per structural variable.
    pub objective: Vec<Rational>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimplexOutcome {
    Optimal {
        values: Vec<Rational>,
        objective: Rational,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    cols: usize,
    artificial_start: usize,
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    obj: Vec<Rational>,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        debug_assert!(!piv.is_zero());
        for x in self.rows[row].iter_mut() {
            *x = x.clone() / piv.clone();
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        if !self.obj[col].is_zero() {
            let factor = self.obj[col].clone();
            for (x, p) in self.obj.iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering = lowest-index column with negative reduced
    /// cost, leaving = lexicographically lowest basis variable among the
    /// minimum ratios. Returns false at optimality.
    fn step(&mut self, allowed: impl Fn(usize) -> bool) -> Result<bool, ()> {
        let entering = (0..self.cols).find(|&j| allowed(j) && self.obj[j].is_negative());
        let Some(col) = entering else {
            return Ok(false);
        };
        let mut leaving: Option<(usize, Rational)> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][col];
            if a.is_positive() {
                let ratio = self.rhs(i).clone() / a.clone();
                let better = match &leaving {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_i])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leaving else {
            return Err(()); // unbounded
        };
        self.pivot(row, col);
        Ok(true)
    }
}

pub fn solve(lp: &LinearProgram) -> SimplexOutcome {
    let n = lp.num_vars;
    let r = lp.rows.len();
    // Normalize to nonnegative rhs; count slack and artificial columns.
    let mut norm: Vec<(Vec<(usize, Rational)>, Cmp, Rational)> = Vec::with_capacity(r);
    for row in &lp.rows {
        debug_assert!(row.coeffs.iter().all(|&(j, _)| j < n));
        if row.rhs.is_negative() {
            let coeffs = row.coeffs.iter().map(|(j, c)| (*j, -c.clone())).collect();
            let cmp = match row.cmp {
                Cmp::Le => Cmp::Ge,
                Cmp::Eq => Cmp::Eq,
                Cmp::Ge => Cmp::Le,
            };
            norm.push((coeffs, cmp, -row.rhs.clone()));
        } else {
            norm.push((row.coeffs.clone(), row.cmp, row.rhs.clone()));
        }
    }
    let slack_count = norm.iter().filter(|(_, c, _)| *c != Cmp::Eq).count();
    let art_count = norm.iter().filter(|(_, c, _)| *c != Cmp::Le).count();
    let artificial_start = n + slack_count;
    let cols = n + slack_count + art_count;

    let mut rows = vec![vec![Rational::zero(); cols + 1]; r];
    let mut basis = vec![usize::MAX; r];
    let mut slack_at = n;
    let mut art_at = artificial_start;
    for (i, (coeffs, cmp, rhs)) in norm.iter().enumerate() {
        for (j, c) in coeffs {
            rows[i][*j] = rows[i][*j].clone() + c.clone();
        }
        rows[i][cols] = rhs.clone();
        match cmp {
            Cmp::Le => {
                rows[i][slack_at] = Rational::one();
                basis[i] = slack_at;
                slack_at += 1;
            }
            Cmp::Ge => {
                rows[i][slack_at] = -Rational::one();
                slack_at += 1;
                rows[i][art_at] = Rational::one();
                basis[i] = art_at;
                art_at += 1;
            }
            Cmp::Eq => {
                rows[i][art_at] = Rational::one();
                basis[i] = art_at;
                art_at += 1;
            }
        }
    }

    let mut tab = Tableau {
        cols,
        artificial_start,
        rows,
        basis,
        obj: vec![Rational::zero(); cols + 1],
    };

    // Phase 1: minimize the sum of artificials.
    if art_count > 0 {
        for j in artificial_start..cols {
            tab.obj[j] = Rational::one();
        }
        for i in 0..tab.rows.len() {
            if tab.basis[i] >= artificial_start {
                let row = tab.rows[i].clone();
                for (x, p) in tab.obj.iter_mut().zip(&row) {
                    *x = x.clone() - p.clone();
                }
            }
        }
        loop {
            match tab.step(|_| true) {
                Ok(true) => {}
                Ok(false) => break,
                Err(()) => unreachable!("phase-1 objective is bounded below by zero"),
            }
        }
        // Objective row stores -(current value) in the rhs slot.
        if tab.obj[cols].is_negative() {
            return SimplexOutcome::Infeasible;
        }
        // Drive remaining artificials out of the basis; a row where no
        // structural/slack pivot exists is redundant and gets dropped.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= artificial_start {
                let col = (0..artificial_start).find(|&j| !tab.rows[i][j].is_zero());
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase 2: original objective, artificial columns banned.
    let art_start = tab.artificial_start;
    tab.obj = vec![Rational::zero(); cols + 1];
    for (j, c) in lp.objective.iter().enumerate() {
        tab.obj[j] = c.clone();
    }
    for i in 0..tab.rows.len() {
        let b = tab.basis[i];
        if !tab.obj[b].is_zero() {
            let factor = tab.obj[b].clone();
            let row = tab.rows[i].clone();
            for (x, p) in tab.obj.iter_mut().zip(&row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
    }
    loop {
        match tab.step(|j| j < art_start) {
            Ok(true) => {}
            Ok(false) => break,
            Err(()) => return SimplexOutcome::Unbounded,
        }
    }

    let mut values = vec![Rational::zero(); lp.num_vars];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < lp.num_vars {
            values[b] = tab.rhs(i).clone();
        }
    }
    let objective = lp
        .objective
        .iter()
        .zip(&values)
        .map(|(c, v)| c.clone() * v.clone())
        .fold(Rational::zero(), |a, b| a + b);
    SimplexOutcome::Optimal { values, objective }
}
