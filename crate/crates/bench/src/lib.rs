//! Shared inputs for the kernel benchmarks.

use jkron_core::{generate, DenseMatrix, Family, GeneratorSpec, Params};

/// Full-rank symmetric pair of size `n`, fixed by `seed`.
pub fn symmetric_pair(n: usize, seed: u64) -> (DenseMatrix, DenseMatrix) {
    let mut spec = GeneratorSpec::new(Family::RankK, n, seed);
    spec.params = Params { k: Some(n), m: Some(n), ..Params::default() };
    let pair = generate(&spec).expect("full-rank spec is valid");
    (pair.a, pair.b)
}

pub const SIZES: [usize; 4] = [3, 5, 8, 12];
