//! Shared generators for unit tests.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::intlinalg::IntMatrix;
use crate::presentation::Presentation;
use crate::randgen::sample_word;

pub(crate) fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, max_abs: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let mut m = IntMatrix::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, BigInt::from(rng.gen_range(-max_abs..=max_abs)));
        }
    }
    m
}

pub(crate) fn random_presentation(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_m: usize,
    max_len: u32,
) -> Presentation {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=max_m);
    let names: Vec<_> = (0..n).map(|i| format!("g{}", i + 1)).collect();
    let relators = (0..m)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            sample_word(n, len, rng)
        })
        .collect();
    Presentation::new(names, relators).unwrap()
}
