use serde::{Deserialize, Serialize};

use super::instance::{check_lambda, Instance, FORMAT_VERSION};
use crate::error::{Error, Result};

/// One nominated author per paper (0-based in memory).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    nominee: Vec<usize>,
}

impl Assignment {
    pub fn new(nominee: Vec<usize>) -> Self {
        Self { nominee }
    }

    pub fn from_one_based(nominee: &[usize]) -> Result<Self> {
        nominee
            .iter()
            .map(|&j| {
                j.checked_sub(1)
                    .ok_or_else(|| Error::InvalidAssignment("author ids are 1-based".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn nominee(&self) -> &[usize] {
        &self.nominee
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.nominee.iter().map(|j| j + 1).collect()
    }

    /// Checks that every paper nominates one of its own authors.
    pub fn check(&self, instance: &Instance) -> Result<()> {
        if self.nominee.len() != instance.n() {
            return Err(Error::InvalidAssignment(format!(
                "{} nominees for {} papers",
                self.nominee.len(),
                instance.n()
            )));
        }
        for (i, &j) in self.nominee.iter().enumerate() {
            if !instance.is_incident(i, j) {
                return Err(Error::InvalidAssignment(format!(
                    "paper {} nominates author {} who is not on it",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: AssignmentFile = serde_json::from_str(s)?;
        if file.format != FORMAT_VERSION {
            return Err(Error::UnsupportedFormat(file.format));
        }
        Self::from_one_based(&file.nominee)
    }

    pub fn to_json_string(&self) -> String {
        let file = AssignmentFile {
            format: FORMAT_VERSION,
            nominee: self.to_one_based(),
        };
        let mut s = serde_json::to_string(&file).expect("assignment serializes");
        s.push('\n');
        s
    }
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

#[derive(Serialize, Deserialize)]
struct AssignmentFile {
    #[serde(default = "default_format")]
    format: u32,
    nominee: Vec<usize>,
}

/// Per-author nomination counts.
pub fn author_loads(instance: &Instance, assignment: &Assignment) -> Result<Vec<usize>> {
    assignment.check(instance)?;
    Ok(loads_unchecked(instance.m(), assignment.nominee()))
}

pub(crate) fn loads_unchecked(m: usize, nominee: &[usize]) -> Vec<usize> {
    let mut loads = vec![0; m];
    for &j in nominee {
        loads[j] += 1;
    }
    loads
}

/// Expected number of desk-rejected papers, `sum_i p[nominee[i]]`.
pub fn basic_objective(instance: &Instance, assignment: &Assignment) -> Result<f64> {
    assignment.check(instance)?;
    Ok(expected_rejections(instance, assignment.nominee()))
}

fn expected_rejections(instance: &Instance, nominee: &[usize]) -> f64 {
    let p = instance.p();
    nominee.iter().map(|&j| p[j]).sum()
}

/// Soft-limit objective split into its two terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftValue {
    pub objective: f64,
    pub expected_rejections: f64,
    pub penalty: f64,
}

/// Soft objective using the instance's own `b` and `lambda`.
pub fn soft_objective(instance: &Instance, assignment: &Assignment) -> Result<SoftValue> {
    let b = instance.b().ok_or(Error::MissingParameter("b"))?;
    let lambda = instance.lambda().ok_or(Error::MissingParameter("lambda"))?;
    soft_objective_with(instance, assignment, b, lambda)
}

/// `sum_i p[nominee[i]] + lambda * sum_j max(0, load_j - b)`.
pub fn soft_objective_with(instance: &Instance, assignment: &Assignment, b: usize, lambda: f64) -> Result<SoftValue> {
    check_lambda(lambda)?;
    let loads = author_loads(instance, assignment)?;
    let excess: usize = loads.iter().map(|&l| l.saturating_sub(b)).sum();
    let expected_rejections = expected_rejections(instance, assignment.nominee());
    let penalty = lambda * excess as f64;
    Ok(SoftValue {
        objective: expected_rejections + penalty,
        expected_rejections,
        penalty,
    })
}

/// Relaxed solution: `x` holds one value per incident pair in paper-major
/// order (see [`Instance::pairs`]); `y` holds the per-author penalty
/// variables of the soft epigraph program.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    pub y: Option<Vec<f64>>,
}

impl FractionalSolution {
    /// Row `i` of `x`, aligned with `instance.authors(i)`.
    pub fn row<'a>(&'a self, instance: &Instance, i: usize) -> &'a [f64] {
        let start = instance.pair_offset(i);
        &self.x[start..start + instance.authors(i).len()]
    }

    /// Largest deviation of a per-paper sum from 1.
    pub fn row_sum_error(&self, instance: &Instance) -> f64 {
        (0..instance.n())
            .map(|i| (self.row(instance, i).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// True when every value is within `tol` of 0 or 1.
    pub fn is_integral(&self, tol: f64) -> bool {
        self.x.iter().all(|&v| v.abs() <= tol || (v - 1.0).abs() <= tol)
    }
}

pub fn fractional_loads(instance: &Instance, x: &FractionalSolution) -> Vec<f64> {
    let mut loads = vec![0.0; instance.m()];
    for ((_, j), v) in instance.pairs().zip(&x.x) {
        loads[j] += v;
    }
    loads
}

/// `sum_{(i,j)} p_j x_ij`.
pub fn fractional_objective(instance: &Instance, x: &FractionalSolution) -> f64 {
    let p = instance.p();
    instance.pairs().zip(&x.x).map(|((_, j), v)| p[j] * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(papers: Vec<Vec<usize>>, p: Vec<f64>) -> Instance {
        Instance::new(papers, p).unwrap()
    }

    #[test]
    fn loads_count_nominations() {
        let five = inst(vec![vec![0]; 5], vec![0.1]);
        assert_eq!(author_loads(&five, &Assignment::new(vec![0; 5])).unwrap(), vec![5]);

        let perm = inst(vec![vec![0, 1], vec![0, 1]], vec![0.1, 0.2]);
        assert_eq!(author_loads(&perm, &Assignment::new(vec![1, 0])).unwrap(), vec![1, 1]);

        let three = inst(vec![vec![0], vec![0, 1], vec![1]], vec![0.1, 0.2]);
        assert_eq!(
            author_loads(&three, &Assignment::new(vec![0, 0, 1])).unwrap(),
            vec![2, 1]
        );
    }

    #[test]
    fn invalid_assignment_is_an_error() {
        let i = inst(vec![vec![0], vec![0, 1]], vec![0.1, 0.2]);
        assert!(author_loads(&i, &Assignment::new(vec![1, 0])).is_err());
        assert!(basic_objective(&i, &Assignment::new(vec![0])).is_err());
    }

    #[test]
    fn basic_objective_sums_nominee_probabilities() {
        let sixth = 1.0 / 6.0;
        let i = inst(vec![vec![0, 1], vec![0, 1]], vec![sixth, sixth]);
        for nominee in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let v = basic_objective(&i, &Assignment::new(nominee.to_vec())).unwrap();
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        let z = inst(vec![vec![0]], vec![0.0]);
        assert_eq!(basic_objective(&z, &Assignment::new(vec![0])).unwrap(), 0.0);
    }

    #[test]
    fn soft_objective_forced_case() {
        let i = inst(vec![vec![0], vec![0]], vec![0.1]).with_limit(1).with_lambda(0.5);
        let v = soft_objective(&i, &Assignment::new(vec![0, 0])).unwrap();
        assert!((v.objective - 0.7).abs() < 1e-12);
        assert!((v.expected_rejections - 0.2).abs() < 1e-12);
        assert!((v.penalty - 0.5).abs() < 1e-12);
    }

    #[test]
    fn soft_objective_requires_parameters() {
        let i = inst(vec![vec![0]], vec![0.1]);
        let a = Assignment::new(vec![0]);
        assert!(matches!(soft_objective(&i, &a), Err(Error::MissingParameter("b"))));
        let i = i.with_limit(1);
        assert!(matches!(soft_objective(&i, &a), Err(Error::MissingParameter("lambda"))));
        assert!(soft_objective_with(&i, &a, 1, 0.0).is_err());
    }

    #[test]
    fn no_penalty_under_limit() {
        let i = inst(vec![vec![0, 1], vec![0, 1]], vec![0.3, 0.4]);
        let a = Assignment::new(vec![0, 1]);
        let v = soft_objective_with(&i, &a, 1, 2.0).unwrap();
        assert_eq!(v.penalty, 0.0);
        assert_eq!(v.objective, basic_objective(&i, &a).unwrap());
    }

    #[test]
    fn assignment_json_is_one_based() {
        let a = Assignment::new(vec![1, 0]);
        let s = a.to_json_string();
        assert_eq!(s, "{\"format\":1,\"nominee\":[2,1]}\n");
        assert_eq!(Assignment::from_json_str(&s).unwrap(), a);
        assert!(Assignment::from_json_str("{\"nominee\":[0]}").is_err());
    }
}
