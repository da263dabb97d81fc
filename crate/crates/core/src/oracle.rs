//! Brute-force enumeration of every nomination. Deliberately naive: it is
//! the ground truth the real solvers are tested against.

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance};

/// Default limit on the number of enumerated assignments.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// Every feasible nomination of the basic problem, in lexicographic order
/// of the nominee vector.
pub struct Assignments<'a> {
    instance: &'a Instance,
    cursor: Vec<usize>,
    done: bool,
}

impl Iterator for Assignments<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let current = Assignment::new(self.nominee());
        self.done = !advance(self.instance, &mut self.cursor);
        Some(current)
    }
}

impl Assignments<'_> {
    fn nominee(&self) -> Vec<usize> {
        self.cursor
            .iter()
            .enumerate()
            .map(|(i, &c)| self.instance.authors(i)[c])
            .collect()
    }
}

/// Odometer step over per-paper author positions; false once exhausted.
fn advance(instance: &Instance, cursor: &mut [usize]) -> bool {
    for i in (0..cursor.len()).rev() {
        cursor[i] += 1;
        if cursor[i] < instance.authors(i).len() {
            return true;
        }
        cursor[i] = 0;
    }
    false
}

fn check_cap(instance: &Instance, cap: u128) -> Result<()> {
    instance.ensure_valid()?;
    let size = instance.assignment_count();
    if size > cap {
        return Err(Error::EnumerationCap { size, cap });
    }
    Ok(())
}

pub fn enumerate_assignments(instance: &Instance, cap: u128) -> Result<Assignments<'_>> {
    check_cap(instance, cap)?;
    Ok(Assignments {
        instance,
        cursor: vec![0; instance.n()],
        done: false,
    })
}

/// Visits every nominee vector without allocating, scoring each with
/// `score` (None = excluded) and keeping the first strict minimum.
fn minimize<F>(instance: &Instance, cap: u128, mut score: F) -> Result<Option<OracleResult>>
where
    F: FnMut(&[usize]) -> Option<f64>,
{
    check_cap(instance, cap)?;
    let mut cursor = vec![0; instance.n()];
    let mut nominee: Vec<usize> = (0..instance.n()).map(|i| instance.authors(i)[0]).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        if let Some(v) = score(&nominee) {
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, nominee.clone()));
            }
        }
        if !advance(instance, &mut cursor) {
            break;
        }
        for (i, &c) in cursor.iter().enumerate() {
            nominee[i] = instance.authors(i)[c];
        }
    }
    Ok(best.map(|(objective, nominee)| OracleResult {
        assignment: Assignment::new(nominee),
        objective,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub assignment: Assignment,
    pub objective: f64,
}

fn expected(p: &[f64], nominee: &[usize]) -> f64 {
    nominee.iter().map(|&j| p[j]).sum()
}

fn loads(m: usize, nominee: &[usize]) -> Vec<usize> {
    let mut l = vec![0; m];
    for &j in nominee {
        l[j] += 1;
    }
    l
}

/// Exact minimum of the basic objective.
pub fn oracle_basic(instance: &Instance, cap: u128) -> Result<OracleResult> {
    let p = instance.p();
    let best = minimize(instance, cap, |x| Some(expected(p, x)))?;
    Ok(best.expect("a valid instance has at least one nomination"))
}

/// Exact minimum under the hard limit; `None` when no nomination respects it.
pub fn oracle_hard(instance: &Instance, b: usize, cap: u128) -> Result<Option<OracleResult>> {
    let p = instance.p();
    let m = instance.m();
    minimize(instance, cap, |x| {
        loads(m, x).iter().all(|&l| l <= b).then(|| expected(p, x))
    })
}

/// Exact minimum of the soft-limit objective.
pub fn oracle_soft(instance: &Instance, b: usize, lambda: f64, cap: u128) -> Result<OracleResult> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
    }
    let p = instance.p();
    let m = instance.m();
    let best = minimize(instance, cap, |x| {
        let excess: usize = loads(m, x).iter().map(|&l| l.saturating_sub(b)).sum();
        Some(expected(p, x) + lambda * excess as f64)
    })?;
    Ok(best.expect("a valid instance has at least one nomination"))
}
