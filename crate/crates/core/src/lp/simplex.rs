//! Two-phase bounded-variable primal simplex.
//!
//! Every row becomes an equality by adding a slack (`<=`: `+s`, `>=`:
//! `-s`, `s >= 0`). Rows whose slack cannot absorb the initial residual get
//! an artificial column; phase one drives the artificials to zero, after
//! which they are fixed at zero. Pricing is Dantzig's rule, switching to
//! Bland's rule after a run of degenerate pivots.

use super::factor::Factor;
use super::{LinearProgram, LpOutcome, LpSolution, Sense, Tolerances};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum State {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable held at zero.
    Free,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

pub(super) struct Simplex<'a> {
    tol: &'a Tolerances,
    rows: usize,
    structural: usize,
    first_artificial: usize,
    columns: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    basis: Vec<usize>,
    factor: Option<Factor>,
    iterations: usize,
    max_iterations: usize,
}

impl<'a> Simplex<'a> {
    pub(super) fn new(lp: &LinearProgram, tol: &'a Tolerances) -> Self {
        let rows = lp.constraints.len();
        let structural = lp.num_vars();
        let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); structural];
        for (i, c) in lp.constraints.iter().enumerate() {
            for &(j, v) in &c.coeffs {
                match columns[j].last_mut() {
                    Some((r, acc)) if *r == i => *acc += v,
                    _ => columns[j].push((i, v)),
                }
            }
        }
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        let mut x: Vec<f64> = lower
            .iter()
            .zip(&upper)
            .map(|(&l, &u)| {
                if l.is_finite() {
                    l
                } else if u.is_finite() {
                    u
                } else {
                    0.0
                }
            })
            .collect();
        let mut state: Vec<State> = lower
            .iter()
            .zip(&upper)
            .map(|(&l, &u)| {
                if l.is_finite() {
                    State::AtLower
                } else if u.is_finite() {
                    State::AtUpper
                } else {
                    State::Free
                }
            })
            .collect();

        let mut residual: Vec<f64> = lp.constraints.iter().map(|c| c.rhs).collect();
        for (j, col) in columns.iter().enumerate() {
            if x[j] != 0.0 {
                for &(r, v) in col {
                    residual[r] -= v * x[j];
                }
            }
        }

        let mut slack_of_row = vec![None; rows];
        for (i, c) in lp.constraints.iter().enumerate() {
            let sign = match c.sense {
                Sense::Le => 1.0,
                Sense::Ge => -1.0,
                Sense::Eq => continue,
            };
            slack_of_row[i] = Some((columns.len(), sign));
            columns.push(vec![(i, sign)]);
            lower.push(0.0);
            upper.push(f64::INFINITY);
            x.push(0.0);
            state.push(State::AtLower);
        }

        let first_artificial = columns.len();
        let mut basis = Vec::with_capacity(rows);
        for (i, &r) in residual.iter().enumerate() {
            match slack_of_row[i] {
                Some((s, sign)) if r * sign >= 0.0 => {
                    x[s] = r * sign;
                    state[s] = State::Basic;
                    basis.push(s);
                }
                _ => {
                    let sign = if r >= 0.0 { 1.0 } else { -1.0 };
                    basis.push(columns.len());
                    columns.push(vec![(i, sign)]);
                    lower.push(0.0);
                    upper.push(f64::INFINITY);
                    x.push(r.abs());
                    state.push(State::Basic);
                }
            }
        }

        let total = columns.len();
        let max_iterations = 100 * (rows + total) + 10_000;
        Self {
            tol,
            rows,
            structural,
            first_artificial,
            columns,
            rhs: lp.constraints.iter().map(|c| c.rhs).collect(),
            lower,
            upper,
            cost: vec![0.0; total],
            x,
            state,
            basis,
            factor: None,
            iterations: 0,
            max_iterations,
        }
    }

    pub(super) fn solve(mut self, objective: &[f64]) -> Result<LpOutcome> {
        if self.first_artificial < self.columns.len() {
            for c in self.first_artificial..self.columns.len() {
                self.cost[c] = 1.0;
            }
            self.refactor()?;
            self.run()?;
            let infeasibility: f64 = (self.first_artificial..self.columns.len()).map(|c| self.x[c]).sum();
            if infeasibility > self.tol.optimality {
                return Ok(LpOutcome::Infeasible);
            }
            for c in self.first_artificial..self.columns.len() {
                self.upper[c] = 0.0;
                self.cost[c] = 0.0;
                if self.state[c] != State::Basic {
                    self.x[c] = 0.0;
                    self.state[c] = State::AtLower;
                }
            }
        }
        self.cost[..self.structural].copy_from_slice(objective);
        self.refactor()?;
        match self.run()? {
            PhaseEnd::Unbounded => Ok(LpOutcome::Unbounded),
            PhaseEnd::Optimal => self.certify(objective).map(LpOutcome::Optimal),
        }
    }

    fn factor(&self) -> &Factor {
        self.factor.as_ref().expect("factorized")
    }

    fn refactor(&mut self) -> Result<()> {
        let cols: Vec<&[(usize, f64)]> = self.basis.iter().map(|&c| self.columns[c].as_slice()).collect();
        self.factor = Some(Factor::new(self.rows, &cols)?);
        self.recompute_basics();
        Ok(())
    }

    fn recompute_basics(&mut self) {
        let mut v = self.rhs.clone();
        for (j, col) in self.columns.iter().enumerate() {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                for &(r, a) in col {
                    v[r] -= a * self.x[j];
                }
            }
        }
        let xb = self.factor().ftran(v);
        for (pos, &c) in self.basis.iter().enumerate() {
            self.x[c] = xb[pos];
        }
    }

    fn duals(&self) -> Vec<f64> {
        let cb = self.basis.iter().map(|&c| self.cost[c]).collect();
        self.factor().btran(cb)
    }

    fn reduced_cost(&self, j: usize, pi: &[f64]) -> f64 {
        self.cost[j] - self.columns[j].iter().map(|&(r, a)| pi[r] * a).sum::<f64>()
    }

    /// Entering column and direction (+1 increase, -1 decrease).
    fn price(&self, pi: &[f64], bland: bool) -> Option<(usize, f64, f64)> {
        let tol = self.tol.pricing;
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.columns.len() {
            let dir = match self.state[j] {
                State::Basic => continue,
                _ if self.lower[j] == self.upper[j] => continue,
                State::AtLower => 1.0,
                State::AtUpper => -1.0,
                State::Free => 0.0,
            };
            let d = self.reduced_cost(j, pi);
            let dir = if dir == 0.0 { -d.signum() } else { dir };
            if d * dir >= -tol {
                continue;
            }
            if bland {
                return Some((j, dir, d));
            }
            if best.is_none_or(|(_, _, bd)| d.abs() > bd.abs()) {
                best = Some((j, dir, d));
            }
        }
        best
    }

    fn column_dense(&self, j: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.rows];
        for &(r, a) in &self.columns[j] {
            v[r] = a;
        }
        v
    }

    fn run(&mut self) -> Result<PhaseEnd> {
        let mut fresh = true;
        let mut stalled = 0usize;
        let stall_limit = 3 * self.structural.max(1);
        loop {
            if self.factor().updates() >= self.tol.refactor_interval {
                self.refactor()?;
                fresh = true;
            }
            let pi = self.duals();
            let Some((q, dir, d)) = self.price(&pi, stalled >= stall_limit) else {
                if fresh {
                    return Ok(PhaseEnd::Optimal);
                }
                self.refactor()?;
                fresh = true;
                continue;
            };
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(Error::Numerical(format!(
                    "simplex iteration limit {} reached",
                    self.max_iterations
                )));
            }
            let bland = stalled >= stall_limit;
            let alpha = self.factor().ftran(self.column_dense(q));

            // ratio test; a basic variable moves by -dir * alpha * t
            let mut step = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, f64)> = None;
            for (pos, &a) in alpha.iter().enumerate() {
                if a.abs() <= self.tol.pivot {
                    continue;
                }
                let c = self.basis[pos];
                let rate = -dir * a;
                let room = if rate < 0.0 {
                    self.x[c] - self.lower[c]
                } else {
                    self.upper[c] - self.x[c]
                };
                if !room.is_finite() {
                    continue;
                }
                let t = room.max(0.0) / rate.abs();
                let better = match leave {
                    None => t < step,
                    Some((lp, _)) => {
                        let cur = step;
                        if t < cur - 1e-12 {
                            true
                        } else if t <= cur + 1e-12 {
                            if bland {
                                c < self.basis[lp]
                            } else {
                                a.abs() > alpha[lp].abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    step = t;
                    leave = Some((pos, rate));
                }
            }
            if !step.is_finite() {
                return Ok(PhaseEnd::Unbounded);
            }

            for (pos, &a) in alpha.iter().enumerate() {
                if a != 0.0 {
                    let c = self.basis[pos];
                    self.x[c] -= dir * a * step;
                }
            }
            self.x[q] += dir * step;
            match leave {
                None => {
                    // bound flip
                    if dir > 0.0 {
                        self.x[q] = self.upper[q];
                        self.state[q] = State::AtUpper;
                    } else {
                        self.x[q] = self.lower[q];
                        self.state[q] = State::AtLower;
                    }
                }
                Some((pos, rate)) => {
                    let c = self.basis[pos];
                    if rate < 0.0 {
                        self.x[c] = self.lower[c];
                        self.state[c] = State::AtLower;
                    } else {
                        self.x[c] = self.upper[c];
                        self.state[c] = State::AtUpper;
                    }
                    self.state[q] = State::Basic;
                    self.basis[pos] = q;
                    self.factor.as_mut().unwrap().update(pos, &alpha);
                }
            }
            fresh = false;
            if step * d.abs() > 1e-12 {
                stalled = 0;
            } else {
                stalled += 1;
            }
        }
    }

    /// Checks primal feasibility, dual feasibility and the duality gap
    /// from a fresh factorization.
    fn certify(&mut self, objective: &[f64]) -> Result<LpSolution> {
        self.refactor()?;
        let pi = self.duals();

        let mut primal_violation: f64 = 0.0;
        for j in 0..self.columns.len() {
            let v = self.x[j];
            primal_violation = primal_violation.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        let mut activity = vec![0.0; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, a) in col {
                activity[r] += a * self.x[j];
            }
        }
        for (act, rhs) in activity.iter().zip(&self.rhs) {
            primal_violation = primal_violation.max((act - rhs).abs());
        }

        let mut dual_violation: f64 = 0.0;
        let mut dual_objective: f64 = pi.iter().zip(&self.rhs).map(|(p, b)| p * b).sum();
        for j in 0..self.columns.len() {
            let d = self.reduced_cost(j, &pi);
            let fixed = self.lower[j] == self.upper[j];
            let v = match self.state[j] {
                State::Basic => d.abs(),
                _ if fixed => 0.0,
                State::AtLower => (-d).max(0.0),
                State::AtUpper => d.max(0.0),
                State::Free => d.abs(),
            };
            dual_violation = dual_violation.max(v);
            if self.state[j] != State::Basic {
                dual_objective += d * self.x[j];
            }
        }

        let x: Vec<f64> = self.x[..self.structural].to_vec();
        let primal_objective: f64 = x.iter().zip(objective).map(|(a, c)| a * c).sum();
        let gap = (primal_objective - dual_objective).abs();
        if primal_violation > self.tol.feasibility {
            return Err(Error::Numerical(format!(
                "primal violation {primal_violation:e} exceeds tolerance"
            )));
        }
        if dual_violation > self.tol.optimality || gap > self.tol.optimality * (1.0 + primal_objective.abs()) {
            return Err(Error::Numerical(format!(
                "optimality not certified: dual violation {dual_violation:e}, gap {gap:e}"
            )));
        }
        Ok(LpSolution {
            x,
            objective: primal_objective,
            duals: pi,
            dual_objective,
            primal_violation,
            dual_violation,
            iterations: self.iterations,
        })
    }
}
