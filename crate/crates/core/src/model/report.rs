use serde::{Deserialize, Serialize};

use super::assignment::{
    author_loads, fractional_objective, soft_objective_with, Assignment, FractionalSolution, SoftValue,
};
use super::instance::{Instance, FORMAT_VERSION};
use crate::error::Result;

/// Which problem is being solved, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    Basic,
    Hard { b: usize },
    Soft { b: usize, lambda: f64 },
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Basic => "basic",
            Variant::Hard { .. } => "hard",
            Variant::Soft { .. } => "soft",
        }
    }

    pub fn limit(&self) -> Option<usize> {
        match *self {
            Variant::Basic => None,
            Variant::Hard { b } | Variant::Soft { b, .. } => Some(b),
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            Variant::Soft { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    /// Objective of an integral nomination under this variant. The hard
    /// variant's objective is the basic one; feasibility is separate.
    pub fn evaluate(&self, instance: &Instance, assignment: &Assignment) -> Result<SoftValue> {
        match *self {
            Variant::Soft { b, lambda } => soft_objective_with(instance, assignment, b, lambda),
            _ => {
                let expected_rejections = super::basic_objective(instance, assignment)?;
                Ok(SoftValue {
                    objective: expected_rejections,
                    expected_rejections,
                    penalty: 0.0,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    /// Certified optimal for the variant.
    Optimal,
    /// A valid solution with no optimality certificate (baselines, rounding).
    Feasible,
    Infeasible,
    /// A run that produced no trustworthy solution, e.g. a hard-limit
    /// baseline that had to exceed the limit.
    Error,
}

/// Outcome of one solver run. All objective numbers are computed by the
/// evaluators in this module, never by the solver itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub format: u32,
    pub status: Status,
    pub variant: String,
    pub b: Option<usize>,
    pub lambda: Option<f64>,
    pub solver: String,
    pub seed: Option<u64>,
    pub objective: Option<f64>,
    pub expected_rejections: Option<f64>,
    pub penalty: Option<f64>,
    pub loads: Option<Vec<usize>>,
    /// 1-based author per paper.
    pub nominee: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rounded_objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub err: Option<bool>,
    /// Nonzero relaxed values as 1-based `[paper, author, value]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fractional: Option<Vec<(usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl SolveReport {
    fn empty(status: Status, variant: Variant, solver: &str, seed: Option<u64>) -> Self {
        Self {
            format: FORMAT_VERSION,
            status,
            variant: variant.name().to_string(),
            b: variant.limit(),
            lambda: variant.lambda(),
            solver: solver.to_string(),
            seed,
            objective: None,
            expected_rejections: None,
            penalty: None,
            loads: None,
            nominee: None,
            lp_bound: None,
            rounded_objective: None,
            gap: None,
            integral: None,
            err: None,
            fractional: None,
            y: None,
            message: None,
        }
    }

    pub fn infeasible(variant: Variant, solver: &str) -> Self {
        Self::empty(Status::Infeasible, variant, solver, None)
    }

    /// Report for an integral nomination, evaluated under `variant`.
    pub fn for_assignment(
        instance: &Instance,
        assignment: &Assignment,
        variant: Variant,
        solver: &str,
        seed: Option<u64>,
        status: Status,
    ) -> Result<Self> {
        let value = variant.evaluate(instance, assignment)?;
        let mut r = Self::empty(status, variant, solver, seed);
        r.objective = Some(value.objective);
        r.expected_rejections = Some(value.expected_rejections);
        r.penalty = Some(value.penalty);
        r.loads = Some(author_loads(instance, assignment)?);
        r.nominee = Some(assignment.to_one_based());
        Ok(r)
    }

    /// Report for a relaxed solution. `penalty` is `lambda * sum(y)` when
    /// `y` is present.
    pub fn for_fractional(
        instance: &Instance,
        frac: &FractionalSolution,
        variant: Variant,
        solver: &str,
        integral: bool,
    ) -> Self {
        let expected = fractional_objective(instance, frac);
        let penalty = match (&frac.y, variant.lambda()) {
            (Some(y), Some(l)) => l * y.iter().sum::<f64>(),
            _ => 0.0,
        };
        let mut r = Self::empty(Status::Optimal, variant, solver, None);
        r.objective = Some(expected + penalty);
        r.expected_rejections = Some(expected);
        r.penalty = Some(penalty);
        r.integral = Some(integral);
        r.fractional = Some(
            instance
                .pairs()
                .zip(&frac.x)
                .filter(|(_, &v)| v != 0.0)
                .map(|((i, j), &v)| (i + 1, j + 1, v))
                .collect(),
        );
        r.y = frac.y.clone();
        r
    }

    pub fn with_message(mut self, msg: impl Into<String>) -> Self {
        self.message = Some(msg.into());
        self
    }

    /// Nominee as an in-memory assignment, if the report carries one.
    pub fn assignment(&self) -> Option<Assignment> {
        self.nominee.as_ref().and_then(|n| Assignment::from_one_based(n).ok())
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// A solver's nomination (absent when infeasible) and its report.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub assignment: Option<Assignment>,
    pub report: SolveReport,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_terms_add_up() {
        let inst = Instance::new(vec![vec![0], vec![0]], vec![0.1]).unwrap();
        let a = Assignment::new(vec![0, 0]);
        let r = SolveReport::for_assignment(
            &inst,
            &a,
            Variant::Soft { b: 1, lambda: 0.5 },
            "test",
            None,
            Status::Optimal,
        )
        .unwrap();
        assert_eq!(
            r.objective.unwrap(),
            r.expected_rejections.unwrap() + r.penalty.unwrap()
        );
        assert_eq!(r.loads, Some(vec![2]));
        assert_eq!(r.nominee, Some(vec![1, 1]));
        let back = SolveReport::from_json_str(&r.to_json_string()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn infeasible_report_has_no_solution_fields() {
        let r = SolveReport::infeasible(Variant::Hard { b: 2 }, "flow");
        assert!(r.objective.is_none() && r.loads.is_none() && r.nominee.is_none());
        let s = r.to_json_string();
        assert!(s.contains("\"status\": \"Infeasible\""));
        assert!(s.contains("\"objective\": null"));
    }
}
