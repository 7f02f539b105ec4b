//! Exact revised simplex on the bounded dual of a max-margin feasibility problem.
//!
//! For constraints `a_p·y + c_p >= 0` with weights `w_p > 0` we solve
//!
//! ```text
//! min  Σ c_p μ_p + ν
//! s.t. Σ a_p μ_p = 0,   Σ w_p μ_p + ν = 1,   μ, ν >= 0
//! ```
//!
//! whose LP dual is `max t` subject to `a_p·y + c_p >= w_p t`, `t <= 1`.
//! Both sides are always feasible, so the optimum exists. A negative optimum
//! leaves `μ` as a Farkas vector; otherwise the duals give `y` and the margin `t`.
//! The first `m` rows start on artificial columns held at zero: any incoming
//! column touching an artificial row is pivoted in immediately, which is a
//! degenerate pivot since those rows have right-hand side zero.
//! Pivoting follows Bland's rule, so the method terminates.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::rat::{self, Rat};

struct Column {
    a: Vec<Rat>,
    cost: Rat,
}

/// Optimal data of a [`MarginLp`].
#[derive(Debug, Clone)]
pub(crate) struct MarginSolution {
    /// Optimal margin `t`, which equals the objective by duality.
    pub objective: Rat,
    /// `y` in `a_p·y + c_p >= w_p t`.
    pub y: Vec<Rat>,
    /// One multiplier per constraint, in insertion order.
    pub mu: Vec<Rat>,
}

/// Incremental solver: constraints can be added between solves and the
/// previous basis is kept as a warm start.
pub(crate) struct MarginLp {
    m: usize,
    cols: Vec<Column>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<Vec<Rat>>,
    xb: Vec<Rat>,
    exec: Execution,
}

impl MarginLp {
    pub fn new(m: usize, exec: Execution) -> Self {
        let rows = m + 1;
        let unit = |r: usize| {
            let mut a = vec![Rat::zero(); rows];
            a[r] = Rat::one();
            a
        };
        // the last unit column is ν, the others are artificial
        let cols = (0..rows)
            .map(|r| Column {
                a: unit(r),
                cost: if r == m { Rat::one() } else { Rat::zero() },
            })
            .collect();
        MarginLp {
            m,
            cols,
            basis: (0..rows).collect(),
            in_basis: vec![true; rows],
            binv: (0..rows).map(unit).collect(),
            xb: unit(m),
            exec,
        }
    }

    pub fn constraint_count(&self) -> usize {
        self.cols.len() - self.m - 1
    }

    fn rows(&self) -> usize {
        self.m + 1
    }

    fn is_artificial(&self, j: usize) -> bool {
        j < self.m
    }

    /// Adds `a·y + c >= w t`.
    pub fn add_constraint(&mut self, a: &[Rat], c: Rat, w: Rat) -> Result<()> {
        if a.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: a.len(),
            });
        }
        let mut col = a.to_vec();
        col.push(w);
        let j = self.cols.len();
        self.cols.push(Column { a: col, cost: c });
        self.in_basis.push(false);
        let u = self.ftran(j);
        if let Some(r) = self.artificial_row(&u) {
            self.pivot(r, j, &u);
        }
        Ok(())
    }

    /// First basic artificial row where `u` is nonzero.
    fn artificial_row(&self, u: &[Rat]) -> Option<usize> {
        (0..self.rows()).find(|&r| self.is_artificial(self.basis[r]) && !u[r].is_zero())
    }

    fn ftran(&self, j: usize) -> Vec<Rat> {
        let a = &self.cols[j].a;
        self.binv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(a)
                    .filter(|(_, x)| !x.is_zero())
                    .fold(Rat::zero(), |acc, (b, x)| acc + b * x)
            })
            .collect()
    }

    fn duals(&self) -> Vec<Rat> {
        let mut pi = vec![Rat::zero(); self.rows()];
        for (r, &j) in self.basis.iter().enumerate() {
            let c = &self.cols[j].cost;
            if c.is_zero() {
                continue;
            }
            for (p, b) in pi.iter_mut().zip(&self.binv[r]) {
                if !b.is_zero() {
                    *p += c * b;
                }
            }
        }
        pi
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[Rat]) {
        let piv = u[r].clone();
        for b in self.binv[r].iter_mut() {
            *b /= &piv;
        }
        self.xb[r] /= &piv;
        let pivot_row = self.binv[r].clone();
        let pivot_x = self.xb[r].clone();
        for (i, f) in u.iter().enumerate() {
            if i == r || f.is_zero() {
                continue;
            }
            for (b, p) in self.binv[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *b -= f * p;
                }
            }
            self.xb[i] -= f * &pivot_x;
        }
        let leaving = self.basis[r];
        self.in_basis[leaving] = false;
        self.basis[r] = j;
        self.in_basis[j] = true;
    }

    /// Reduced costs of ν followed by the constraint columns; `None` when basic.
    fn reduced_costs(&self, pi: &[Rat]) -> Vec<Option<Rat>> {
        let first = self.m;
        par::map_range(self.exec, self.cols.len() - first, |k| {
            let j = first + k;
            if self.in_basis[j] {
                return None;
            }
            let col = &self.cols[j];
            let dot = col
                .a
                .iter()
                .zip(pi)
                .filter(|(x, _)| !x.is_zero())
                .fold(Rat::zero(), |acc, (x, p)| acc + x * p);
            Some(&col.cost - dot)
        })
    }

    /// Minimum ratio, ties to the lowest column index. A basic artificial
    /// sits at zero and leaves first.
    fn leaving_row(&self, u: &[Rat]) -> Option<usize> {
        if let Some(r) = self.artificial_row(u) {
            return Some(r);
        }
        let mut leave: Option<(usize, Rat)> = None;
        for r in (0..self.rows()).filter(|&r| u[r].is_positive()) {
            let ratio = &self.xb[r] / &u[r];
            let better = match &leave {
                None => true,
                Some((lr, best)) => {
                    ratio < *best || ratio == *best && self.basis[r] < self.basis[*lr]
                }
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        leave.map(|(r, _)| r)
    }

    pub fn solve(&mut self) -> Result<MarginSolution> {
        loop {
            let pi = self.duals();
            let d = self.reduced_costs(&pi);
            let Some(k) = d
                .iter()
                .position(|v| v.as_ref().is_some_and(Signed::is_negative))
            else {
                return Ok(self.solution(pi));
            };
            let j = self.m + k;
            let u = self.ftran(j);
            let Some(r) = self.leaving_row(&u) else {
                return Err(Error::Invariant("margin LP reported unbounded".into()));
            };
            self.pivot(r, j, &u);
        }
    }

    fn solution(&self, pi: Vec<Rat>) -> MarginSolution {
        let mut mu = vec![Rat::zero(); self.constraint_count()];
        let mut objective = Rat::zero();
        for (r, &j) in self.basis.iter().enumerate() {
            objective += &self.cols[j].cost * &self.xb[r];
            if j > self.m {
                mu[j - self.m - 1] = self.xb[r].clone();
            }
        }
        MarginSolution {
            objective,
            y: pi[..self.m].iter().map(|p| -p).collect(),
            mu,
        }
    }
}

/// One constraint `a·y + c >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub a: Vec<Rat>,
    pub c: Rat,
}

impl LinearConstraint {
    pub fn new(a: Vec<Rat>, c: Rat) -> Self {
        LinearConstraint { a, c }
    }

    pub fn value(&self, y: &[Rat]) -> Rat {
        self.a
            .iter()
            .zip(y)
            .fold(self.c.clone(), |acc, (a, y)| acc + a * y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// A point satisfying every constraint.
    Feasible(Vec<Rat>),
    /// Primitive nonnegative integer multipliers with `Σ μ_p a_p = 0` and
    /// `Σ μ_p c_p < 0`.
    Infeasible(Vec<Rat>),
}

/// Decides `{y : a_p·y + c_p >= 0 for all p}` exactly (Bland's rule).
pub fn lp_feasible(constraints: &[LinearConstraint]) -> Result<LpOutcome> {
    lp_feasible_with(constraints, Execution::default())
}

pub(crate) fn lp_feasible_with(
    constraints: &[LinearConstraint],
    exec: Execution,
) -> Result<LpOutcome> {
    let Some(first) = constraints.first() else {
        return Ok(LpOutcome::Feasible(Vec::new()));
    };
    let m = first.a.len();
    let mut lp = MarginLp::new(m, exec);
    for c in constraints {
        lp.add_constraint(&c.a, c.c.clone(), Rat::one())?;
    }
    let sol = lp.solve()?;
    if sol.objective.is_negative() {
        let mu = rat::primitive_integer(&sol.mu);
        check_farkas(constraints, &mu)?;
        Ok(LpOutcome::Infeasible(mu))
    } else {
        if let Some(p) = constraints
            .iter()
            .position(|c| c.value(&sol.y).is_negative())
        {
            return Err(Error::Invariant(format!(
                "feasible witness violates constraint {p}"
            )));
        }
        Ok(LpOutcome::Feasible(sol.y))
    }
}

pub(crate) fn check_farkas(constraints: &[LinearConstraint], mu: &[Rat]) -> Result<()> {
    let m = constraints.first().map_or(0, |c| c.a.len());
    let mut combo = vec![Rat::zero(); m];
    let mut constant = Rat::zero();
    for (c, w) in constraints.iter().zip(mu) {
        if w.is_negative() {
            return Err(Error::Invariant("negative Farkas multiplier".into()));
        }
        if w.is_zero() {
            continue;
        }
        for (acc, a) in combo.iter_mut().zip(&c.a) {
            *acc += a * w;
        }
        constant += &c.c * w;
    }
    if combo.iter().any(|x| !x.is_zero()) || !constant.is_negative() {
        return Err(Error::Invariant(
            "Farkas combination does not certify infeasibility".into(),
        ));
    }
    Ok(())
}
