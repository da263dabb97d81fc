//! Bounded-variable linear programs, the simplex solver behind them, and
//! the relaxed hard-limit program.

mod factor;
mod simplex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{author_loads, FractionalSolution, Instance, SolveReport, Variant, FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// `sum coeffs (sense) rhs`, with coefficients as `(variable, value)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Minimize `objective . x` subject to the constraints and
/// `lower <= x <= upper`. Infinite bounds mean unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Solver tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Largest accepted bound or row violation of the returned point.
    pub feasibility: f64,
    /// Largest accepted dual infeasibility and (relative) duality gap.
    pub optimality: f64,
    /// Reduced-cost threshold for an improving column.
    pub pricing: f64,
    /// Smallest usable pivot element.
    pub pivot: f64,
    /// Basis updates between refactorizations.
    pub refactor_interval: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feasibility: 1e-9,
            optimality: 1e-7,
            pricing: 1e-9,
            pivot: 1e-9,
            refactor_interval: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row duals of the final basis.
    pub duals: Vec<f64>,
    pub dual_objective: f64,
    pub primal_violation: f64,
    pub dual_violation: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// `k` variables with zero cost and bounds `[0, inf)`.
    pub fn new(k: usize) -> Self {
        Self {
            objective: vec![0.0; k],
            constraints: Vec::new(),
            lower: vec![0.0; k],
            upper: vec![f64::INFINITY; k],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        self.constraints.push(Constraint { coeffs, sense, rhs });
    }

    pub fn check(&self) -> Result<()> {
        let k = self.num_vars();
        if self.lower.len() != k || self.upper.len() != k {
            return Err(Error::MalformedLp("bound vectors do not match variable count".into()));
        }
        for (j, (&l, &u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if l.is_nan() || u.is_nan() || l > u || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return Err(Error::MalformedLp(format!("variable {j} has bounds [{l}, {u}]")));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::MalformedLp("non-finite objective coefficient".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(Error::MalformedLp(format!("row {i} has a non-finite rhs")));
            }
            for &(j, v) in &c.coeffs {
                if j >= k || !v.is_finite() {
                    return Err(Error::MalformedLp(format!("row {i} has a bad entry ({j}, {v})")));
                }
            }
            let mut seen: Vec<usize> = c.coeffs.iter().map(|&(j, _)| j).collect();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedLp(format!("row {i} repeats a variable")));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest bound or constraint violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for ((&v, &l), &u) in x.iter().zip(&self.lower).zip(&self.upper) {
            worst = worst.max(l - v).max(v - u);
        }
        for c in &self.constraints {
            let act: f64 = c.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            let viol = match c.sense {
                Sense::Le => act - c.rhs,
                Sense::Ge => c.rhs - act,
                Sense::Eq => (act - c.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }

    pub fn to_json_string(&self) -> String {
        let bound = |v: &f64| v.is_finite().then_some(*v);
        let file = LpFile {
            format: FORMAT_VERSION,
            num_vars: self.num_vars(),
            objective: &self.objective,
            constraints: &self.constraints,
            lower: self.lower.iter().map(bound).collect(),
            upper: self.upper.iter().map(bound).collect(),
        };
        let mut s = serde_json::to_string(&file).expect("lp serializes");
        s.push('\n');
        s
    }
}

#[derive(Serialize)]
struct LpFile<'a> {
    format: u32,
    num_vars: usize,
    objective: &'a [f64],
    constraints: &'a [Constraint],
    lower: Vec<Option<f64>>,
    upper: Vec<Option<f64>>,
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    solve_lp_with(lp, &Tolerances::default())
}

pub fn solve_lp_with(lp: &LinearProgram, tol: &Tolerances) -> Result<LpOutcome> {
    lp.check()?;
    simplex::Simplex::new(lp, tol).solve(&lp.objective)
}

/// Relaxed hard-limit program over the incident pairs only: variable `k`
/// is the `k`-th pair in paper-major order, with cost `p_j` and bounds
/// `[0, 1]`; one equality per paper and one `<= b` row per author.
pub fn build_hard_lp(instance: &Instance, b: usize) -> Result<LinearProgram> {
    instance.ensure_valid()?;
    if b == 0 {
        return Err(Error::InvalidParameter("b must be at least 1".into()));
    }
    let k = instance.nnz();
    let mut lp = LinearProgram::new(k);
    lp.upper = vec![1.0; k];
    let p = instance.p();
    let mut by_author: Vec<Vec<(usize, f64)>> = vec![Vec::new(); instance.m()];
    for (idx, (_, j)) in instance.pairs().enumerate() {
        lp.objective[idx] = p[j];
        by_author[j].push((idx, 1.0));
    }
    for i in 0..instance.n() {
        let start = instance.pair_offset(i);
        let row = (start..start + instance.authors(i).len()).map(|v| (v, 1.0)).collect();
        lp.add_constraint(row, Sense::Eq, 1.0);
    }
    for row in by_author {
        lp.add_constraint(row, Sense::Le, b as f64);
    }
    Ok(lp)
}

/// Values within this distance of 0 or 1 count as integral.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-9;

/// Solves the relaxed hard-limit program. The report flags whether the
/// optimum happens to be integral; `None` means the program is infeasible.
pub fn solve_hard_relaxed(instance: &Instance, b: usize) -> Result<(Option<FractionalSolution>, SolveReport)> {
    let lp = build_hard_lp(instance, b)?;
    let variant = Variant::Hard { b };
    match solve_lp(&lp)? {
        LpOutcome::Optimal(sol) => {
            let frac = FractionalSolution { x: sol.x, y: None };
            let integral = frac.is_integral(INTEGRALITY_TOLERANCE);
            let mut report = SolveReport::for_fractional(instance, &frac, variant, "lp", integral);
            if integral {
                let a = crate::soft::round_soft(instance, &frac)?;
                report.loads = Some(author_loads(instance, &a)?);
                report.nominee = Some(a.to_one_based());
            }
            Ok((Some(frac), report))
        }
        LpOutcome::Infeasible => Ok((None, SolveReport::infeasible(variant, "lp"))),
        LpOutcome::Unbounded => Err(Error::Numerical("bounded program reported unbounded".into())),
    }
}
