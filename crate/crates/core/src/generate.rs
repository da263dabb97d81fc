//! Seeded random instances.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::rng::NominationRng;

/// Each paper draws its author count uniformly from
/// `authors_min..=authors_max` and then that many distinct authors
/// uniformly; each `p_j` is uniform on `[p_lo, p_hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub m: usize,
    pub authors_min: usize,
    pub authors_max: usize,
    pub p_lo: f64,
    pub p_hi: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn check(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidParameter("n and m must be positive".into()));
        }
        if !(1 <= self.authors_min && self.authors_min <= self.authors_max && self.authors_max <= self.m) {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= amin <= amax <= m, got amin={} amax={} m={}",
                self.authors_min, self.authors_max, self.m
            )));
        }
        if !(0.0 <= self.p_lo && self.p_lo <= self.p_hi && self.p_hi <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= plo <= phi <= 1, got plo={} phi={}",
                self.p_lo, self.p_hi
            )));
        }
        Ok(())
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    spec.check()?;
    let mut rng = NominationRng::new(spec.seed);
    let rng = rng.inner_mut();
    let papers = (0..spec.n)
        .map(|_| {
            let size = rng.gen_range(spec.authors_min..=spec.authors_max);
            let mut authors = index::sample(rng, spec.m, size).into_vec();
            authors.sort_unstable();
            authors
        })
        .collect();
    let width = spec.p_hi - spec.p_lo;
    let p = (0..spec.m)
        .map(|_| (spec.p_lo + width * rng.gen::<f64>()).min(spec.p_hi))
        .collect();
    Instance::from_parts(spec.n, spec.m, papers, p, None, None).checked()
}
