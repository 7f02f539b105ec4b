//! Cutting-plane search for Farkas certificates of `f ∉ C_i`.
//!
//! Each round solves the max-margin LP over the current points in floating
//! point, takes the best Gram matrix `A`, and looks for new points of `V_i`
//! where `q_A` is most negative: for every grid value of `x'` the head
//! `(m_0, …, m_{n+i})(1, x')` is fixed and the free tail is chosen along
//! negative curvature of the tail block of `A`, at the minimizer of `q_A`
//! when that block is positive semidefinite, or one coordinate at a time
//! starting from the full Veronese point. Once the float margin turns
//! negative, the supporting points are handed to the exact LP. Points are
//! exact dyadic rationals throughout; floats only rank candidates.

use std::collections::HashSet;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::fiber::{eval_upper, eval_upper_f64, gram_fiber, GramFiber};
use super::sampler::{veronese, SampleSchedule};
use super::verify::{verify_certificate, Certificate, FarkasCertificate};
use crate::error::{Error, Result};
use crate::exact_linalg::{lp_feasible_with, LinearConstraint, LpOutcome};
use crate::monomial_basis::MonomialBasis;
use crate::par;
use crate::polyforms::Form;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchSummary {
    pub rounds: usize,
    pub points: usize,
    /// Best normalized margin reached by the float LP (nonnegative means no
    /// separating Gram matrix was ruled out).
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NonMembership {
    Certificate(FarkasCertificate, SearchSummary),
    Unknown(SearchSummary),
}

const MARGIN_EPS: f64 = 1e-7;
const SUPPORT_EPS: f64 = 1e-12;
const CANDIDATE_EPS: f64 = 1e-8;
const CURVATURE_EPS: f64 = 1e-8;
const SCALES: [f64; 4] = [1.0, 4.0, 16.0, 64.0];
const SIMPLEX_SECONDS: f64 = 60.0;
const IPM_SECONDS: f64 = 300.0;

/// Grid value of `x'` with its exact and float Veronese vectors.
struct GridPoint {
    exact: Vec<Rat>,
    float: Vec<f64>,
}

enum Tail {
    Full(Vec<f64>),
    Coordinate(usize, f64),
}

struct Candidate {
    score: f64,
    grid: usize,
    tail: Tail,
}

/// Float LP `max t` over `a_p·y + c_p >= t`, `t <= 1`. It only steers the
/// search; nothing it returns reaches a certificate unchecked.
struct SteeringLp {
    m: usize,
    rows: Vec<(Vec<f64>, f64)>,
}

struct Steer {
    t: f64,
    y: Vec<f64>,
    mu: Vec<f64>,
}

impl SteeringLp {
    fn new(m: usize) -> Self {
        SteeringLp {
            m,
            rows: Vec::new(),
        }
    }

    fn add(&mut self, a: &[f64], c: f64) {
        self.rows.push((a.to_vec(), c));
    }

    /// Dual simplex first; interior point if that stalls. `None` when both give up.
    fn solve(&self) -> Option<Steer> {
        self.solve_with(&[("presolve", "off")], SIMPLEX_SECONDS)
            .or_else(|| self.solve_with(&[("solver", "ipm")], IPM_SECONDS))
    }

    fn solve_with(&self, options: &[(&str, &str)], seconds: f64) -> Option<Steer> {
        let mut problem = highs::RowProblem::default();
        let cols: Vec<highs::Col> = (0..self.m)
            .map(|_| problem.add_column(0.0, f64::NEG_INFINITY..f64::INFINITY))
            .collect();
        let t = problem.add_column(1.0, f64::NEG_INFINITY..=1.0);
        for (a, c) in &self.rows {
            let row = cols
                .iter()
                .zip(a)
                .filter(|(_, v)| **v != 0.0)
                .map(|(col, v)| (*col, *v));
            problem.add_row(-c.., row.chain([(t, -1.0)]));
        }
        let mut model = problem.optimise(highs::Sense::Maximise);
        model.make_quiet();
        model.set_option("time_limit", seconds);
        for (k, v) in options {
            model.set_option(*k, *v);
        }
        let solved = model.try_solve().ok()?;
        if solved.status() != highs::HighsModelStatus::Optimal {
            return None;
        }
        let sol = solved.get_solution();
        let (t, y) = sol.columns().split_last()?;
        Some(Steer {
            t: *t,
            y: y.to_vec(),
            mu: sol.dual_rows().iter().map(|d| d.abs()).collect(),
        })
    }
}

struct Search<'a> {
    form: &'a Form,
    schedule: &'a SampleSchedule,
    basis: MonomialBasis,
    level: usize,
    head: usize,
    fiber: GramFiber,
    particular_f: Vec<(usize, usize, f64)>,
    kernel_f: Vec<Vec<(usize, usize, f64)>>,
    points: Vec<Vec<Rat>>,
    seen: HashSet<Vec<Rat>>,
    lp: SteeringLp,
}

/// Tries to prove `f ∉ C_level` from finitely many points of `V_level`.
pub fn non_membership(f: &Form, level: usize, schedule: &SampleSchedule) -> Result<NonMembership> {
    let fiber = gram_fiber(f)?;
    let (n, k) = (fiber.n, fiber.k);
    if level == 0 || level + n + 1 > k {
        return Err(Error::LevelOutOfRange {
            level,
            min: 1,
            max: k - n - 1,
        });
    }
    let basis = MonomialBasis::new(n, fiber.d)?;
    let to_f = |terms: &[(usize, usize, Rat)]| -> Vec<(usize, usize, f64)> {
        terms
            .iter()
            .map(|(s, t, w)| (*s, *t, rat::to_f64(w)))
            .collect()
    };
    let particular_f = to_f(&fiber.particular_terms);
    let kernel_f = fiber.kernel_terms.iter().map(|t| to_f(t)).collect();
    let lp = SteeringLp::new(fiber.dimension());
    let mut search = Search {
        form: f,
        schedule,
        basis,
        level,
        head: n + level + 1,
        fiber,
        particular_f,
        kernel_f,
        points: Vec::new(),
        seen: HashSet::new(),
        lp,
    };
    search.run()
}

impl Search<'_> {
    fn n(&self) -> usize {
        self.basis.n()
    }

    fn k(&self) -> usize {
        self.basis.k()
    }

    fn grid(&self, step_exp: u32) -> Vec<GridPoint> {
        let mut xs = self.schedule.grid(self.n(), step_exp);
        xs.extend(self.schedule.random_grid(self.n()));
        let basis = &self.basis;
        par::map(self.schedule.exec, &xs, |x| {
            let exact = veronese(basis, x);
            let float = exact.iter().map(rat::to_f64).collect();
            GridPoint { exact, float }
        })
    }

    fn add_point(&mut self, z: Vec<Rat>) -> Result<bool> {
        if !self.seen.insert(z.clone()) {
            return Ok(false);
        }
        let zf: Vec<f64> = z.iter().map(rat::to_f64).collect();
        let norm: f64 = zf.iter().map(|v| v * v).sum();
        let a: Vec<f64> = self
            .kernel_f
            .iter()
            .map(|t| eval_upper_f64(t, &zf) / norm)
            .collect();
        let c = eval_upper_f64(&self.particular_f, &zf) / norm;
        self.lp.add(&a, c);
        self.points.push(z);
        Ok(true)
    }

    /// Veronese points, their zero-tail truncations, and large tails at a few directions.
    fn seed(&mut self, grid: &[GridPoint], tail_exp: u32) -> Result<()> {
        for g in grid {
            self.add_point(g.exact.clone())?;
            let mut z = g.exact.clone();
            for v in &mut z[self.head..] {
                *v = Rat::zero();
            }
            self.add_point(z)?;
        }
        self.seed_tails(tail_exp)
    }

    fn seed_tails(&mut self, tail_exp: u32) -> Result<()> {
        let values = SampleSchedule::tail_values(tail_exp);
        for x in SampleSchedule::directions(self.n()) {
            let mut base = veronese(&self.basis, &x);
            for v in &mut base[self.head..] {
                *v = Rat::zero();
            }
            for j in self.head..=self.k() {
                for v in &values {
                    let mut z = base.clone();
                    z[j] = v.clone();
                    self.add_point(z)?;
                }
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<NonMembership> {
        let mut step_exp = self.schedule.grid_step_exp;
        let mut refinements_left = self.schedule.refinements;
        let mut tail_exp = self.schedule.max_tail_exp;
        let mut grid = self.grid(step_exp);
        self.seed(&grid, tail_exp)?;
        let mut best = f64::INFINITY;
        // margin at the last failed exact attempt; retry only once it has doubled
        let mut attempted = 0.0f64;
        for round in 0..self.schedule.rounds {
            let Some(sol) = self.lp.solve() else {
                return Ok(NonMembership::Unknown(self.summary(round, best)));
            };
            best = best.min(sol.t);
            if sol.t < -MARGIN_EPS && sol.t < 2.0 * attempted {
                attempted = sol.t;
                let support: Vec<usize> = (0..sol.mu.len())
                    .filter(|&p| sol.mu[p] > SUPPORT_EPS)
                    .collect();
                if let Some(cert) = self.exact(&support)? {
                    return Ok(NonMembership::Certificate(
                        cert,
                        self.summary(round + 1, best),
                    ));
                }
            }
            if self.separate(&grid, &sol.y)? > 0 {
                continue;
            }
            if refinements_left > 0 {
                refinements_left -= 1;
                step_exp += 1;
                grid = self.grid(step_exp);
            } else if tail_exp < 64 {
                tail_exp = (tail_exp * 2).clamp(8, 64);
                self.seed_tails(tail_exp)?;
            } else {
                return Ok(NonMembership::Unknown(self.summary(round + 1, best)));
            }
        }
        Ok(NonMembership::Unknown(
            self.summary(self.schedule.rounds, best),
        ))
    }

    fn summary(&self, rounds: usize, margin: f64) -> SearchSummary {
        SearchSummary {
            rounds,
            points: self.points.len(),
            margin,
        }
    }

    /// Float Gram matrix `A_0 + Σ y_m B_m`, dense.
    fn gram_f64(&self, y: &[f64]) -> DMatrix<f64> {
        let size = self.k() + 1;
        let mut a = DMatrix::zeros(size, size);
        let mut put = |terms: &[(usize, usize, f64)], scale: f64| {
            for &(s, t, w) in terms {
                if s == t {
                    a[(s, s)] += scale * w;
                } else {
                    a[(s, t)] += scale * w / 2.0;
                    a[(t, s)] += scale * w / 2.0;
                }
            }
        };
        put(&self.particular_f, 1.0);
        for (terms, &c) in self.kernel_f.iter().zip(y) {
            if c != 0.0 {
                put(terms, c);
            }
        }
        a
    }

    /// Adds the most violated candidate points; returns how many were new.
    fn separate(&mut self, grid: &[GridPoint], y: &[f64]) -> Result<usize> {
        let a = self.gram_f64(y);
        let (head, size) = (self.head, self.k() + 1);
        let tail_len = size - head;
        let c = a.view((head, head), (tail_len, tail_len)).into_owned();
        let eig = SymmetricEigen::new(c.clone());
        let negative: Vec<Vec<f64>> = (0..tail_len)
            .filter(|&e| eig.eigenvalues[e] < -CURVATURE_EPS)
            .map(|e| eig.eigenvectors.column(e).iter().copied().collect())
            .collect();
        // pseudo-inverse of the tail block, used when it has no negative direction
        let pinv = {
            let mut p = DMatrix::zeros(tail_len, tail_len);
            for e in 0..tail_len {
                let w = eig.eigenvalues[e];
                if w > CURVATURE_EPS {
                    let u = eig.eigenvectors.column(e);
                    p += u * u.transpose() / w;
                }
            }
            p
        };
        let quad = |z: &[f64]| -> f64 {
            let zv = nalgebra::DVector::from_column_slice(z);
            let norm = zv.norm_squared();
            zv.dot(&(&a * &zv)) / norm
        };
        let per_grid = par::map_range(self.schedule.exec, grid.len(), |g| {
            let v = &grid[g].float;
            let h = &v[..head];
            let b: Vec<f64> = (0..tail_len)
                .map(|j| (0..head).map(|i| h[i] * a[(i, head + j)]).sum())
                .collect();
            let mut out = Vec::new();
            let with_tail = |tail: &[f64]| {
                let mut z = h.to_vec();
                z.extend_from_slice(tail);
                z
            };
            if negative.is_empty() {
                let bv = nalgebra::DVector::from_vec(b.clone());
                let tail: Vec<f64> = (-(&pinv * bv)).iter().copied().collect();
                let score = quad(&with_tail(&tail));
                out.push(Candidate {
                    score,
                    grid: g,
                    tail: Tail::Full(tail),
                });
            } else {
                for dir in &negative {
                    let dot: f64 = dir.iter().zip(&b).map(|(x, y)| x * y).sum();
                    let sign = if dot > 0.0 { -1.0 } else { 1.0 };
                    for sc in SCALES {
                        let tail: Vec<f64> = dir.iter().map(|x| sign * sc * x).collect();
                        let score = quad(&with_tail(&tail));
                        out.push(Candidate {
                            score,
                            grid: g,
                            tail: Tail::Full(tail),
                        });
                    }
                }
            }
            for j in head..size {
                let mut z = v.clone();
                let rest: f64 = (0..size)
                    .filter(|&i| i != j)
                    .map(|i| a[(j, i)] * z[i])
                    .sum();
                let ajj = a[(j, j)];
                z[j] = if ajj > 1e-12 {
                    -rest / ajj
                } else if rest > 0.0 {
                    -1e3
                } else {
                    1e3
                };
                let value = z[j];
                out.push(Candidate {
                    score: quad(&z),
                    grid: g,
                    tail: Tail::Coordinate(j, value),
                });
            }
            out.retain(|c| c.score < -CANDIDATE_EPS && c.score.is_finite());
            out
        });
        let mut candidates: Vec<Candidate> = per_grid.into_iter().flatten().collect();
        candidates.sort_by(|x, y| x.score.total_cmp(&y.score).then(x.grid.cmp(&y.grid)));
        let mut added = 0;
        for cand in candidates {
            if added == self.schedule.points_per_round {
                break;
            }
            let exact = &grid[cand.grid].exact;
            let z: Vec<Rat> = match cand.tail {
                Tail::Full(tail) => exact[..head]
                    .iter()
                    .cloned()
                    .chain(
                        tail.iter()
                            .map(|&v| rat::dyadic(v, self.schedule.tail_bits)),
                    )
                    .collect(),
                Tail::Coordinate(j, v) => {
                    let mut z = exact.clone();
                    z[j] = rat::dyadic(v, self.schedule.tail_bits);
                    z
                }
            };
            if self.add_point(z)? {
                added += 1;
            }
        }
        Ok(added)
    }

    /// Exact LP over the chosen points; a verified certificate or `None`.
    fn exact(&self, chosen: &[usize]) -> Result<Option<FarkasCertificate>> {
        let (fiber, points) = (&self.fiber, &self.points);
        let constraints: Vec<LinearConstraint> = par::map(self.schedule.exec, chosen, |&p| {
            let z = &points[p];
            LinearConstraint::new(
                fiber
                    .kernel_terms
                    .iter()
                    .map(|t| eval_upper(t, z))
                    .collect(),
                eval_upper(&fiber.particular_terms, z),
            )
        });
        match lp_feasible_with(&constraints, self.schedule.exec)? {
            LpOutcome::Feasible(_) => Ok(None),
            LpOutcome::Infeasible(mu) => {
                let (points, multipliers) = chosen
                    .iter()
                    .zip(mu)
                    .filter(|(_, m)| m.is_positive())
                    .map(|(&p, m)| (self.points[p].clone(), m))
                    .unzip();
                let cert = FarkasCertificate {
                    level: self.level,
                    points,
                    multipliers,
                };
                let check = verify_certificate(self.form, &Certificate::Nonmember(cert.clone()));
                if !check.valid {
                    return Err(Error::Invariant(format!(
                        "produced certificate failed replay: {}",
                        check.reason.unwrap_or_default()
                    )));
                }
                Ok(Some(cert))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separating_generators::base_motzkin;

    #[test]
    fn motzkin_leaves_level_six() {
        let sched = SampleSchedule::default();
        match non_membership(&base_motzkin(), 6, &sched).unwrap() {
            NonMembership::Certificate(cert, summary) => {
                assert_eq!(cert.level, 6);
                assert!(summary.margin < 0.0);
                let v = verify_certificate(&base_motzkin(), &Certificate::Nonmember(cert));
                assert!(v.valid, "{:?}", v.reason);
            }
            NonMembership::Unknown(s) => panic!("no certificate: {s:?}"),
        }
    }

    #[test]
    fn squares_are_never_separated() {
        let f = Form::from_int_terms(2, &[(&[6, 0, 0], 1), (&[0, 2, 4], 3)]).unwrap();
        let sched = SampleSchedule {
            rounds: 5,
            ..SampleSchedule::default()
        };
        assert!(matches!(
            non_membership(&f, 1, &sched).unwrap(),
            NonMembership::Unknown(_)
        ));
        let pure = Form::from_int_terms(2, &[(&[6, 0, 0], 1)]).unwrap();
        for level in [1, 3, 6] {
            assert!(matches!(
                non_membership(&pure, level, &sched).unwrap(),
                NonMembership::Unknown(_)
            ));
        }
    }

    #[test]
    fn level_range() {
        let sched = SampleSchedule::default();
        assert!(non_membership(&base_motzkin(), 0, &sched).is_err());
        assert!(non_membership(&base_motzkin(), 7, &sched).is_err());
    }
}
