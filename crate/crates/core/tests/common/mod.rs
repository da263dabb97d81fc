#![allow(dead_code)]

use std::path::PathBuf;

use nominate_core::generate::{generate, GeneratorSpec};
use nominate_core::Instance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// Small random instance: n, m <= 6, 1..=m authors per paper. Half of the
/// seeds snap probabilities to a coarse grid so ties are common.
pub fn small_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(1..=6);
    let m = rng.gen_range(1..=6);
    let inst = generate(&GeneratorSpec {
        n,
        m,
        authors_min: 1,
        authors_max: m,
        p_lo: 0.0,
        p_hi: 1.0,
        seed,
    })
    .unwrap();
    if seed.is_multiple_of(2) {
        let p = inst.p().iter().map(|v| (v * 4.0).round() / 4.0).collect();
        Instance::from_parts(n, m, inst.papers().to_vec(), p, None, None)
            .checked()
            .unwrap()
    } else {
        inst
    }
}

/// Dense 0/1 authorship matrix.
pub fn dense_authorship(inst: &Instance) -> Vec<Vec<u8>> {
    let mut a = vec![vec![0u8; inst.m()]; inst.n()];
    for (i, j) in inst.pairs() {
        a[i][j] = 1;
    }
    a
}

/// Dense 0/1 nomination matrix for a nominee vector.
pub fn dense_nomination(inst: &Instance, nominee: &[usize]) -> Vec<Vec<f64>> {
    let mut x = vec![vec![0.0; inst.m()]; inst.n()];
    for (i, &j) in nominee.iter().enumerate() {
        x[i][j] = 1.0;
    }
    x
}
