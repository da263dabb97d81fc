//! Soft-limit pipeline: the epigraph linear program, its relaxed solve,
//! row-argmax rounding, and an exact integral solver on the nomination
//! network.
//!
//! Penalties `max(0, load_j - b)` become variables `y_j >= 0` with
//! `y_j >= load_j - b`; at an optimum each `y_j` sits exactly on
//! `max(0, load_j - b)` because its cost `lambda` is positive.

use crate::error::{Error, Result};
use crate::flow::{author_vertex, build_hard_network, min_cost_circulation, NominationNetwork, SOURCE};
use crate::lp::{solve_lp, LinearProgram, LpOutcome, Sense, INTEGRALITY_TOLERANCE};
use crate::model::{
    fractional_loads, Assignment, FractionalSolution, Instance, Solution, SolveReport, Status, Variant,
    REPORT_TOLERANCE,
};

/// Largest accepted gap between `y_j` and `max(0, load_j - b)` at an LP
/// optimum.
pub const EPIGRAPH_TOLERANCE: f64 = 1e-7;

/// The epigraph program. Variables `0..nnz` are the pair values `x`
/// (paper-major order), variables `nnz..nnz + m` are the penalties `y`.
#[derive(Debug, Clone)]
pub struct SoftLp {
    pub lp: LinearProgram,
    pub y_offset: usize,
}

fn check_params(instance: &Instance, b: usize, lambda: f64) -> Result<()> {
    instance.ensure_valid()?;
    if b == 0 {
        return Err(Error::InvalidParameter("b must be at least 1".into()));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(())
}

pub fn build_soft_lp(instance: &Instance, b: usize, lambda: f64) -> Result<SoftLp> {
    check_params(instance, b, lambda)?;
    let nnz = instance.nnz();
    let m = instance.m();
    let mut lp = LinearProgram::new(nnz + m);
    let p = instance.p();
    let mut by_author: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for (k, (_, j)) in instance.pairs().enumerate() {
        lp.objective[k] = p[j];
        lp.upper[k] = 1.0;
        by_author[j].push((k, -1.0));
    }
    for j in 0..m {
        lp.objective[nnz + j] = lambda;
    }
    for i in 0..instance.n() {
        let start = instance.pair_offset(i);
        let row = (start..start + instance.authors(i).len()).map(|k| (k, 1.0)).collect();
        lp.add_constraint(row, Sense::Eq, 1.0);
    }
    // y_j - sum_i x_ij >= -b
    for (j, mut row) in by_author.into_iter().enumerate() {
        row.push((nnz + j, 1.0));
        lp.add_constraint(row, Sense::Ge, -(b as f64));
    }
    Ok(SoftLp { lp, y_offset: nnz })
}

/// Solves the epigraph program and checks that every `y_j` equals
/// `max(0, load_j - b)`.
pub fn solve_soft_relaxed(instance: &Instance, b: usize, lambda: f64) -> Result<(FractionalSolution, SolveReport)> {
    let soft = build_soft_lp(instance, b, lambda)?;
    let sol = match solve_lp(&soft.lp)? {
        LpOutcome::Optimal(s) => s,
        other => {
            return Err(Error::Numerical(format!(
                "soft program is always feasible and bounded, solver said {other:?}"
            )))
        }
    };
    let frac = FractionalSolution {
        x: sol.x[..soft.y_offset].to_vec(),
        y: Some(sol.x[soft.y_offset..].to_vec()),
    };
    let loads = fractional_loads(instance, &frac);
    let y = frac.y.as_ref().unwrap();
    for (j, (&yj, &load)) in y.iter().zip(&loads).enumerate() {
        let want = (load - b as f64).max(0.0);
        if (yj - want).abs() > EPIGRAPH_TOLERANCE {
            return Err(Error::Numerical(format!(
                "penalty of author {} is {yj}, expected {want}",
                j + 1
            )));
        }
    }
    let integral = frac.is_integral(INTEGRALITY_TOLERANCE);
    let report = SolveReport::for_fractional(instance, &frac, Variant::Soft { b, lambda }, "lp", integral);
    Ok((frac, report))
}

/// Nominates, for every paper, the author with the largest relaxed value
/// (smallest index on ties).
pub fn round_soft(instance: &Instance, fractional: &FractionalSolution) -> Result<Assignment> {
    if fractional.x.len() != instance.nnz() {
        return Err(Error::InvalidParameter(format!(
            "{} relaxed values for {} incident pairs",
            fractional.x.len(),
            instance.nnz()
        )));
    }
    let nominee = (0..instance.n())
        .map(|i| {
            let row = fractional.row(instance, i);
            let mut best = 0;
            for (k, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = k;
                }
            }
            instance.authors(i)[best]
        })
        .collect();
    Ok(Assignment::new(nominee))
}

/// Relaxed solve followed by rounding. The report carries the rounded
/// objective, the LP lower bound and their gap.
pub fn solve_soft(instance: &Instance, b: usize, lambda: f64) -> Result<Solution> {
    let (frac, relaxed) = solve_soft_relaxed(instance, b, lambda)?;
    let assignment = round_soft(instance, &frac)?;
    let mut report = SolveReport::for_assignment(
        instance,
        &assignment,
        Variant::Soft { b, lambda },
        "lp-round",
        None,
        Status::Feasible,
    )?;
    let bound = relaxed.objective.expect("optimal relaxed report has an objective");
    let rounded = report.objective.expect("integral report has an objective");
    report.lp_bound = Some(bound);
    report.rounded_objective = Some(rounded);
    report.gap = Some(rounded - bound);
    report.integral = relaxed.integral;
    if rounded - bound <= REPORT_TOLERANCE {
        report.status = Status::Optimal;
    }
    Ok(Solution {
        assignment: Some(assignment),
        report,
    })
}

/// Nomination network plus, per author, a parallel source edge of
/// capacity `n` and cost `lambda` carrying the nominations beyond `b`.
#[derive(Debug, Clone)]
pub struct SoftNetwork {
    pub base: NominationNetwork,
    pub penalty_edges: Vec<usize>,
}

pub fn build_soft_network(instance: &Instance, b: usize, lambda: f64) -> Result<SoftNetwork> {
    check_params(instance, b, lambda)?;
    let mut base = build_hard_network(instance, b)?;
    let n = instance.n() as i64;
    let penalty_edges = (0..instance.m())
        .map(|j| base.network.add_edge(SOURCE, author_vertex(j), 0, n, lambda))
        .collect();
    Ok(SoftNetwork { base, penalty_edges })
}

/// Exact integral optimum of the soft-limit problem.
pub fn solve_soft_exact(instance: &Instance, b: usize, lambda: f64) -> Result<Solution> {
    let net = build_soft_network(instance, b, lambda)?;
    let circ = min_cost_circulation(&net.base.network)?
        .ok_or_else(|| Error::Numerical("soft network reported infeasible".into()))?;
    let assignment = net.base.extract(instance, &circ)?;
    let report = SolveReport::for_assignment(
        instance,
        &assignment,
        Variant::Soft { b, lambda },
        "exact-flow",
        None,
        Status::Optimal,
    )?;
    Ok(Solution {
        assignment: Some(assignment),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forced() -> Instance {
        Instance::new(vec![vec![0]; 2], vec![0.1]).unwrap()
    }

    #[test]
    fn soft_lp_shape() {
        let s = 1.0 / 6.0;
        let inst = Instance::new(vec![vec![0, 1]; 2], vec![s, s]).unwrap();
        let soft = build_soft_lp(&inst, 1, 1.0).unwrap();
        assert_eq!(soft.lp.num_vars(), 6);
        assert_eq!(soft.y_offset, 4);
        assert_eq!(soft.lp.objective[4..], [1.0, 1.0]);
        assert!(build_soft_lp(&inst, 1, 0.0).is_err());
        assert!(build_soft_lp(&inst, 1, -2.0).is_err());
    }

    #[test]
    fn forced_relaxation() {
        let (frac, report) = solve_soft_relaxed(&forced(), 1, 0.5).unwrap();
        assert!((report.objective.unwrap() - 0.7).abs() < 1e-9);
        assert!((frac.y.unwrap()[0] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn relaxation_without_binding_limit() {
        let s = 1.0 / 6.0;
        let inst = Instance::new(vec![vec![0, 1]; 2], vec![s, s]).unwrap();
        let (frac, report) = solve_soft_relaxed(&inst, 1, 1.0).unwrap();
        assert!((report.objective.unwrap() - 1.0 / 3.0).abs() < 1e-7);
        assert!(frac.y.unwrap().iter().all(|&y| y <= 1e-7));
    }

    #[test]
    fn rounding_rules() {
        let inst = Instance::new(vec![vec![0, 1], vec![0, 1], vec![1]], vec![0.1, 0.2]).unwrap();
        let frac = FractionalSolution {
            x: vec![0.7, 0.3, 0.5, 0.5, 1.0],
            y: None,
        };
        assert_eq!(round_soft(&inst, &frac).unwrap().nominee(), &[0, 0, 1]);
        let integral = FractionalSolution {
            x: vec![0.0, 1.0, 1.0, 0.0, 1.0],
            y: None,
        };
        assert_eq!(round_soft(&inst, &integral).unwrap().nominee(), &[1, 0, 1]);
        let short = FractionalSolution { x: vec![1.0], y: None };
        assert!(round_soft(&inst, &short).is_err());
    }

    #[test]
    fn forced_pipeline_is_lossless() {
        let s = solve_soft(&forced(), 1, 0.5).unwrap();
        let r = &s.report;
        assert!((r.rounded_objective.unwrap() - 0.7).abs() < 1e-12);
        assert!((r.lp_bound.unwrap() - 0.7).abs() < 1e-9);
        assert_eq!(r.status, Status::Optimal);
    }

    #[test]
    fn exact_forced_value() {
        let inst = Instance::new(vec![vec![0]; 5], vec![0.1]).unwrap();
        let s = solve_soft_exact(&inst, 2, 0.4).unwrap();
        // 5 * 0.1 + 0.4 * 3
        assert!((s.report.objective.unwrap() - 1.7).abs() < 1e-12);
        assert_eq!(s.report.loads, Some(vec![5]));
    }
}
