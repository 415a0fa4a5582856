//! Dense two-phase simplex over `BigRational`.
//!
//! Entering columns follow Dantzig's rule until a run of degenerate pivots, after
//! which Bland's rule takes over for the rest of the phase, so the method cannot cycle.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{FeasibilityResult, LinearSystem};
use crate::error::{Error, Result};
use crate::util::{one, zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptResult {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
    Aborted { pivots: usize },
}

enum Step {
    Optimal,
    Unbounded,
    Aborted,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    cost: Vec<BigRational>,
    cost_rhs: BigRational,
    allowed: Vec<bool>,
    pivots: usize,
    pivot_limit: usize,
}

const DEGENERATE_RUN: usize = 50;

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        self.pivots += 1;
        let mut prow = std::mem::take(&mut self.rows[r]);
        let inv = one() / &prow[e];
        let nz: Vec<usize> = (0..prow.len()).filter(|&k| !prow[k].is_zero()).collect();
        for &k in &nz {
            prow[k] *= &inv;
        }
        self.rhs[r] *= &inv;
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for &k in &nz {
                let delta = &f * &prow[k];
                self.rows[i][k] -= delta;
            }
            if !prhs.is_zero() {
                self.rhs[i] -= &f * &prhs;
            }
        }
        if !self.cost[e].is_zero() {
            let f = self.cost[e].clone();
            for &k in &nz {
                let delta = &f * &prow[k];
                self.cost[k] -= delta;
            }
            self.cost_rhs -= &f * &prhs;
        }
        self.rows[r] = prow;
        self.basis[r] = e;
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let mut candidates = (0..self.cost.len()).filter(|&j| self.allowed[j] && self.cost[j].is_negative());
        if bland {
            return candidates.next();
        }
        candidates.min_by(|&a, &b| self.cost[a].cmp(&self.cost[b]).then(a.cmp(&b)))
    }

    fn run(&mut self) -> Step {
        let mut bland = false;
        let mut degenerate = 0;
        loop {
            let Some(e) = self.entering(bland) else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Step::Unbounded;
            };
            if self.pivots >= self.pivot_limit {
                return Step::Aborted;
            }
            if self.rhs[r].is_zero() {
                degenerate += 1;
                bland |= degenerate >= DEGENERATE_RUN;
            } else {
                degenerate = 0;
            }
            self.pivot(r, e);
        }
    }
}

/// Column layout of the standard form `A x = b, x ≥ 0`.
struct Layout {
    pos: Vec<usize>,
    neg: Vec<Option<usize>>,
    structural: usize,
}

fn build(sys: &LinearSystem, pivot_limit: usize) -> (Tableau, Layout) {
    let mut pos = Vec::with_capacity(sys.num_vars());
    let mut neg = Vec::with_capacity(sys.num_vars());
    let mut n = 0;
    for j in 0..sys.num_vars() {
        pos.push(n);
        n += 1;
        if sys.is_nonneg(j) {
            neg.push(None);
        } else {
            neg.push(Some(n));
            n += 1;
        }
    }
    let surplus_start = n;
    let structural = n + sys.inequalities().len();
    let m = sys.num_constraints();
    let width = structural + m;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let all = sys.equalities().iter().map(|c| (c, None)).chain(
        sys.inequalities().iter().enumerate().map(|(i, c)| (c, Some(surplus_start + i))),
    );
    for (i, (c, surplus)) in all.enumerate() {
        let mut row = vec![zero(); width];
        for (j, coef) in &c.terms {
            row[pos[*j]] += coef;
            if let Some(nj) = neg[*j] {
                row[nj] -= coef;
            }
        }
        if let Some(s) = surplus {
            row[s] = -one();
        }
        let mut b = c.rhs.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -std::mem::take(v);
            }
            b = -b;
        }
        row[structural + i] = one();
        rows.push(row);
        rhs.push(b);
    }
    let mut cost = vec![zero(); width];
    let mut cost_rhs = zero();
    for (row, b) in rows.iter().zip(&rhs) {
        for j in 0..structural {
            if !row[j].is_zero() {
                cost[j] -= &row[j];
            }
        }
        cost_rhs -= b;
    }
    let tab = Tableau {
        rows,
        rhs,
        basis: (structural..width).collect(),
        cost,
        cost_rhs,
        allowed: vec![true; width],
        pivots: 0,
        pivot_limit,
    };
    (tab, Layout { pos, neg, structural })
}

enum Phase1 {
    Feasible,
    Infeasible,
    Aborted,
}

fn phase_one(tab: &mut Tableau, layout: &Layout) -> Phase1 {
    match tab.run() {
        Step::Aborted => return Phase1::Aborted,
        Step::Unbounded => unreachable!("phase one objective is bounded below by zero"),
        Step::Optimal => {}
    }
    if !tab.cost_rhs.is_zero() {
        return Phase1::Infeasible;
    }
    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= layout.structural {
            match (0..layout.structural).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j),
                None => {
                    tab.rows.swap_remove(r);
                    tab.rhs.swap_remove(r);
                    tab.basis.swap_remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    for j in layout.structural..tab.allowed.len() {
        tab.allowed[j] = false;
    }
    Phase1::Feasible
}

fn extract(tab: &Tableau, layout: &Layout) -> Vec<BigRational> {
    let mut std_x = vec![zero(); tab.allowed.len()];
    for (i, &b) in tab.basis.iter().enumerate() {
        std_x[b] = tab.rhs[i].clone();
    }
    layout
        .pos
        .iter()
        .zip(&layout.neg)
        .map(|(&p, n)| match n {
            Some(n) => &std_x[p] - &std_x[*n],
            None => std_x[p].clone(),
        })
        .collect()
}

/// Phase-one simplex; a feasible answer is a basic solution, re-checked exactly.
pub fn solve_feasibility(sys: &LinearSystem, pivot_limit: usize) -> FeasibilityResult {
    let (mut tab, layout) = build(sys, pivot_limit);
    match phase_one(&mut tab, &layout) {
        Phase1::Aborted => FeasibilityResult::Aborted { pivots: tab.pivots },
        Phase1::Infeasible => FeasibilityResult::Infeasible,
        Phase1::Feasible => {
            let x = extract(&tab, &layout);
            assert!(sys.is_satisfied_by(&x), "simplex returned a point violating the system");
            FeasibilityResult::Feasible(x)
        }
    }
}

/// Minimizes `c·x` over the system.
pub fn minimize(sys: &LinearSystem, c: &[BigRational], pivot_limit: usize) -> Result<OptResult> {
    if c.len() != sys.num_vars() {
        return Err(Error::Invalid(format!("objective has {} entries for {} variables", c.len(), sys.num_vars())));
    }
    let (mut tab, layout) = build(sys, pivot_limit);
    match phase_one(&mut tab, &layout) {
        Phase1::Aborted => return Ok(OptResult::Aborted { pivots: tab.pivots }),
        Phase1::Infeasible => return Ok(OptResult::Infeasible),
        Phase1::Feasible => {}
    }
    let width = tab.allowed.len();
    let mut col_cost = vec![zero(); width];
    for (j, cj) in c.iter().enumerate() {
        col_cost[layout.pos[j]] = cj.clone();
        if let Some(n) = layout.neg[j] {
            col_cost[n] = -cj;
        }
    }
    tab.cost = col_cost.clone();
    tab.cost_rhs = zero();
    for i in 0..tab.rows.len() {
        let cb = col_cost[tab.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..width {
            if !tab.rows[i][j].is_zero() {
                let delta = &cb * &tab.rows[i][j];
                tab.cost[j] -= delta;
            }
        }
        tab.cost_rhs -= &cb * &tab.rhs[i];
    }
    match tab.run() {
        Step::Aborted => Ok(OptResult::Aborted { pivots: tab.pivots }),
        Step::Unbounded => Ok(OptResult::Unbounded),
        Step::Optimal => {
            let x = extract(&tab, &layout);
            if !sys.is_satisfied_by(&x) {
                return Err(Error::Internal("optimal point violates the system".into()));
            }
            let value = x.iter().zip(c).fold(zero(), |acc, (a, b)| acc + a * b);
            Ok(OptResult::Optimal { x, value })
        }
    }
}
