//! Exact solver for the unconstrained problem: the objective separates
//! across papers, so each paper independently nominates an author of
//! minimum irresponsibility probability.

use crate::error::Result;
use crate::model::{Assignment, Instance, Solution, SolveReport, Status, Variant};
use crate::rng::{pick, NominationRng};

/// Per-paper argmin of `p`. Ties go to the smallest author index, or to a
/// seeded uniform draw among the minimizers when `seed` is given.
pub fn greedy_assign_basic(instance: &Instance, seed: Option<u64>) -> Result<Solution> {
    instance.ensure_valid()?;
    let assignment = greedy_nominees(instance, seed);
    let report = SolveReport::for_assignment(instance, &assignment, Variant::Basic, "greedy", seed, Status::Optimal)?;
    Ok(Solution {
        assignment: Some(assignment),
        report,
    })
}

pub(crate) fn greedy_nominees(instance: &Instance, seed: Option<u64>) -> Assignment {
    let p = instance.p();
    let mut rng = seed.map(NominationRng::new);
    let mut minimizers = Vec::new();
    let nominee = instance
        .papers()
        .iter()
        .map(|authors| {
            let best = authors.iter().map(|&j| p[j]).fold(f64::INFINITY, f64::min);
            minimizers.clear();
            minimizers.extend(authors.iter().copied().filter(|&j| p[j] == best));
            pick(rng.as_mut(), &minimizers)
        })
        .collect();
    Assignment::new(nominee)
}
