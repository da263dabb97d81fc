//! Sequential random and greedy baselines. Papers are processed in order
//! and each nomination is final, so under a hard limit they can paint
//! themselves into a corner on instances that do have feasible
//! nominations; `err` records that.

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance, Solution, SolveReport, Status, Variant};
use crate::rng::{pick, NominationRng};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineResult {
    pub assignment: Assignment,
    /// Some paper had no author below the limit and nominated one anyway.
    pub err: bool,
}

fn check(instance: &Instance, b: usize) -> Result<()> {
    instance.ensure_valid()?;
    if b == 0 {
        return Err(Error::InvalidParameter("b must be at least 1".into()));
    }
    Ok(())
}

/// Uniform choice among authors with `load + 1 <= b`; if none, uniform
/// among all the paper's authors and `err` is raised.
fn sequential_random(instance: &Instance, b: usize, seed: u64) -> BaselineResult {
    let mut rng = NominationRng::new(seed);
    let mut loads = vec![0usize; instance.m()];
    let mut err = false;
    let mut below = Vec::new();
    let nominee = instance
        .papers()
        .iter()
        .map(|authors| {
            below.clear();
            below.extend(authors.iter().copied().filter(|&j| loads[j] < b));
            let k = if below.is_empty() {
                err = true;
                rng.choose(authors)
            } else {
                rng.choose(&below)
            };
            loads[k] += 1;
            k
        })
        .collect();
    BaselineResult {
        assignment: Assignment::new(nominee),
        err,
    }
}

pub fn rand_assign_hard(instance: &Instance, b: usize, seed: u64) -> Result<BaselineResult> {
    check(instance, b)?;
    Ok(sequential_random(instance, b, seed))
}

/// Same draws as [`rand_assign_hard`]; exceeding the limit is allowed and
/// simply costs penalty.
pub fn rand_assign_soft(instance: &Instance, b: usize, seed: u64) -> Result<Assignment> {
    check(instance, b)?;
    Ok(sequential_random(instance, b, seed).assignment)
}

/// Among authors with `load + 1 <= b`, nominate one of minimum `p`. Ties
/// and the stuck case pick the smallest index, or draw with `seed`.
pub fn greedy_assign_hard(instance: &Instance, b: usize, seed: Option<u64>) -> Result<BaselineResult> {
    check(instance, b)?;
    let p = instance.p();
    let mut rng = seed.map(NominationRng::new);
    let mut loads = vec![0usize; instance.m()];
    let mut err = false;
    let mut below = Vec::new();
    let mut minimizers = Vec::new();
    let nominee = instance
        .papers()
        .iter()
        .map(|authors| {
            below.clear();
            below.extend(authors.iter().copied().filter(|&j| loads[j] < b));
            let k = if below.is_empty() {
                err = true;
                pick(rng.as_mut(), authors)
            } else {
                let best = below.iter().map(|&j| p[j]).fold(f64::INFINITY, f64::min);
                minimizers.clear();
                minimizers.extend(below.iter().copied().filter(|&j| p[j] == best));
                pick(rng.as_mut(), &minimizers)
            };
            loads[k] += 1;
            k
        })
        .collect();
    Ok(BaselineResult {
        assignment: Assignment::new(nominee),
        err,
    })
}

/// Nominates an author minimizing the marginal cost
/// `p_j + lambda * max(0, load_j + 1 - b)`.
pub fn greedy_assign_soft(instance: &Instance, b: usize, lambda: f64, seed: Option<u64>) -> Result<Assignment> {
    check(instance, b)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
    }
    let p = instance.p();
    let mut rng = seed.map(NominationRng::new);
    let mut loads = vec![0usize; instance.m()];
    let mut minimizers = Vec::new();
    let marginal = |j: usize, loads: &[usize]| p[j] + lambda * (loads[j] + 1).saturating_sub(b) as f64;
    let nominee = instance
        .papers()
        .iter()
        .map(|authors| {
            let best = authors
                .iter()
                .map(|&j| marginal(j, &loads))
                .fold(f64::INFINITY, f64::min);
            minimizers.clear();
            minimizers.extend(authors.iter().copied().filter(|&j| marginal(j, &loads) == best));
            let k = pick(rng.as_mut(), &minimizers);
            loads[k] += 1;
            k
        })
        .collect();
    Ok(Assignment::new(nominee))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Random,
    Greedy,
}

impl Baseline {
    pub fn name(self) -> &'static str {
        match self {
            Baseline::Random => "baseline-rand",
            Baseline::Greedy => "baseline-greedy",
        }
    }
}

/// Runs a baseline and wraps it in a report. The random baseline always
/// needs a seed; `None` means seed 0.
pub fn run_baseline(instance: &Instance, variant: Variant, kind: Baseline, seed: Option<u64>) -> Result<Solution> {
    let seed = match kind {
        Baseline::Random => Some(seed.unwrap_or(0)),
        Baseline::Greedy => seed,
    };
    let (assignment, err) = match (variant, kind) {
        (Variant::Hard { b }, Baseline::Random) => {
            let r = rand_assign_hard(instance, b, seed.unwrap())?;
            (r.assignment, Some(r.err))
        }
        (Variant::Hard { b }, Baseline::Greedy) => {
            let r = greedy_assign_hard(instance, b, seed)?;
            (r.assignment, Some(r.err))
        }
        (Variant::Soft { b, .. }, Baseline::Random) => (rand_assign_soft(instance, b, seed.unwrap())?, None),
        (Variant::Soft { b, lambda }, Baseline::Greedy) => (greedy_assign_soft(instance, b, lambda, seed)?, None),
        (Variant::Basic, _) => {
            return Err(Error::InvalidParameter(
                "baselines apply to the hard and soft variants".into(),
            ))
        }
    };
    let status = if err == Some(true) {
        Status::Error
    } else {
        Status::Feasible
    };
    let mut report = SolveReport::for_assignment(instance, &assignment, variant, kind.name(), seed, status)?;
    report.err = err;
    if err == Some(true) {
        report = report.with_message("nomination limit exceeded: a paper had no author below the limit");
    }
    Ok(Solution {
        assignment: Some(assignment),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stranded(p: [f64; 2]) -> Instance {
        Instance::new(vec![vec![0, 1], vec![0]], p.to_vec()).unwrap()
    }

    /// First seed whose first draw from a two-element set is `idx`.
    fn seed_drawing(idx: usize) -> u64 {
        (0..).find(|&s| NominationRng::new(s).index(2) == idx).unwrap()
    }

    #[test]
    fn random_hard_both_branches() {
        let inst = stranded([0.5, 0.5]);
        let bad = rand_assign_hard(&inst, 1, seed_drawing(0)).unwrap();
        assert!(bad.err);
        assert_eq!(bad.assignment.nominee(), &[0, 0]);
        let good = rand_assign_hard(&inst, 1, seed_drawing(1)).unwrap();
        assert!(!good.err);
        assert_eq!(good.assignment.nominee(), &[1, 0]);
    }

    #[test]
    fn random_hard_never_errs_when_limit_is_slack() {
        let inst = Instance::new(vec![vec![0], vec![1], vec![0], vec![2]], vec![0.1; 3]).unwrap();
        for seed in 0..20 {
            assert!(!rand_assign_hard(&inst, 4, seed).unwrap().err);
        }
    }

    #[test]
    fn greedy_hard_fails_on_tie_and_without_tie() {
        assert!(greedy_assign_hard(&stranded([0.5, 0.5]), 1, None).unwrap().err);
        let distinct = greedy_assign_hard(&stranded([0.1, 0.9]), 1, None).unwrap();
        assert!(distinct.err);
        assert_eq!(distinct.assignment.nominee(), &[0, 0]);
        for seed in 0..10 {
            assert!(greedy_assign_hard(&stranded([0.1, 0.9]), 1, Some(seed)).unwrap().err);
        }
    }

    #[test]
    fn greedy_hard_limits_to_under_limit_minimizers() {
        // S_min is taken over the under-limit authors only
        let inst = Instance::new(vec![vec![0, 1], vec![0, 1, 2]], vec![0.1, 0.3, 0.1]).unwrap();
        let r = greedy_assign_hard(&inst, 1, None).unwrap();
        assert_eq!(r.assignment.nominee(), &[0, 2]);
        assert!(!r.err);
    }

    #[test]
    fn soft_baselines() {
        let forced = Instance::new(vec![vec![0]; 2], vec![0.1]).unwrap();
        assert_eq!(rand_assign_soft(&forced, 1, 3).unwrap().nominee(), &[0, 0]);
        let g = greedy_assign_soft(&forced, 1, 0.5, None).unwrap();
        let v = crate::model::soft_objective_with(&forced, &g, 1, 0.5).unwrap();
        assert!((v.objective - 0.7).abs() < 1e-12);
        assert!(greedy_assign_soft(&forced, 1, 0.0, None).is_err());
    }

    #[test]
    fn greedy_soft_spreads_load_when_penalty_dominates() {
        let inst = Instance::new(vec![vec![0, 1, 2]; 6], vec![0.1, 0.2, 0.3]).unwrap();
        let a = greedy_assign_soft(&inst, 2, 1e6, None).unwrap();
        assert_eq!(a.nominee(), &[0, 0, 1, 1, 2, 2]);
        let tiny = greedy_assign_soft(&inst, 2, 1e-12, None).unwrap();
        assert_eq!(tiny.nominee(), &[0; 6]);
    }

    #[test]
    fn baseline_reports() {
        let inst = stranded([0.1, 0.9]);
        let s = run_baseline(&inst, Variant::Hard { b: 1 }, Baseline::Greedy, None).unwrap();
        assert_eq!(s.report.status, Status::Error);
        assert_eq!(s.report.err, Some(true));
        let s = run_baseline(&inst, Variant::Soft { b: 1, lambda: 1.0 }, Baseline::Random, None).unwrap();
        assert_eq!(s.report.seed, Some(0));
        assert_eq!(s.report.status, Status::Feasible);
        assert!(run_baseline(&inst, Variant::Basic, Baseline::Greedy, None).is_err());
    }
}
