//! The few-relators random model: uniform relator sampling and an exact
//! small-parameter oracle for the probability that a random presentation has
//! full rank.
//!
//! A relator of length `ell` over `n` generators is a uniform draw from the
//! `(2n)^ell` raw letter sequences (no cyclic-reduction or no-cancellation
//! conditioning), freely reduced afterwards; reduction does not change
//! exponent vectors, so it does not change the full-rank property either.
//! Duplicate relators across draws are kept.
//!
//! Seeding contract: every trial uses its own ChaCha stream derived from
//! `(master_seed, ell, trial)`, so batch results are independent of thread
//! scheduling and replayable relator by relator.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::presentation::Presentation;
use crate::words::{free_reduce, GroupWord, Letter, Sign};

/// The generator for one Monte Carlo trial, derived from
/// `(master_seed, ell, trial)`. Distinct parameter triples give independent
/// ChaCha streams.
pub fn trial_rng(master_seed: u64, ell: u32, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((ell as u64) << 32) | trial as u64);
    rng
}

/// A uniform raw letter sequence of length exactly `ell`: each of the
/// `(2n)^ell` sequences is equally likely.
pub fn sample_letters<R: Rng + ?Sized>(n: usize, ell: u32, rng: &mut R) -> Vec<Letter> {
    assert!(n >= 1, "alphabet must be nonempty");
    (0..ell)
        .map(|_| {
            let pick = rng.gen_range(0..2 * n);
            if pick < n {
                Letter::new(pick, Sign::Plus)
            } else {
                Letter::new(pick - n, Sign::Minus)
            }
        })
        .collect()
}

/// A uniform length-`ell` word, freely reduced.
pub fn sample_word<R: Rng + ?Sized>(n: usize, ell: u32, rng: &mut R) -> GroupWord {
    free_reduce(sample_letters(n, ell, rng))
}

/// `m` independent relator draws over generators named `a1 ... an`.
pub fn sample_presentation<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    ell: u32,
    rng: &mut R,
) -> Presentation {
    let names = (0..n).map(|i| format!("a{}", i + 1)).collect();
    let relators = (0..m).map(|_| sample_word(n, ell, rng)).collect();
    Presentation::new(names, relators).expect("sampled presentation is valid")
}

/// Size limits for the exact oracle; the dynamic program is dense over the
/// cube `[-ell, ell]^n` and the rank summation enumerates its support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleGuards {
    pub max_generators: usize,
    pub max_relators: usize,
    pub max_length: u32,
}

impl Default for OracleGuards {
    fn default() -> Self {
        OracleGuards {
            max_generators: 3,
            max_relators: 3,
            max_length: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    GuardExceeded {
        parameter: &'static str,
        value: u64,
        bound: u64,
    },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::GuardExceeded {
                parameter,
                value,
                bound,
            } => write!(
                f,
                "exact oracle guard exceeded: {} = {} > {}",
                parameter, value, bound
            ),
        }
    }
}

impl core::error::Error for OracleError {}

/// Counts of raw length-`ell` words by exponent vector: `count_at(v)` is the
/// number of the `(2n)^ell` letter sequences whose net exponent vector is
/// `v`. Computed by `ell` convolution steps of the `2n`-step lattice walk.
pub struct WalkDistribution {
    n: usize,
    ell: i64,
    side: usize,
    counts: Vec<BigInt>,
}

impl WalkDistribution {
    pub fn new(n: usize, ell: u32) -> Self {
        assert!(n >= 1);
        let ell = ell as i64;
        let side = (2 * ell + 1) as usize;
        let total = side.pow(n as u32);
        let mut counts = vec![BigInt::zero(); total];
        let origin = Self::index_of(&vec![0; n], ell, side);
        counts[origin] = BigInt::one();
        let mut dist = WalkDistribution {
            n,
            ell,
            side,
            counts,
        };
        for _ in 0..ell {
            dist.step();
        }
        dist
    }

    fn index_of(v: &[i64], ell: i64, side: usize) -> usize {
        let mut idx = 0usize;
        for &c in v {
            idx = idx * side + (c + ell) as usize;
        }
        idx
    }

    fn decode(&self, mut idx: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.n];
        for j in (0..self.n).rev() {
            v[j] = (idx % self.side) as i64 - self.ell;
            idx /= self.side;
        }
        v
    }

    fn step(&mut self) {
        let mut next = vec![BigInt::zero(); self.counts.len()];
        for idx in 0..self.counts.len() {
            if self.counts[idx].is_zero() {
                continue;
            }
            let v = self.decode(idx);
            let mut stride = 1usize;
            for j in (0..self.n).rev() {
                if v[j] < self.ell {
                    next[idx + stride] += &self.counts[idx];
                }
                if v[j] > -self.ell {
                    next[idx - stride] += &self.counts[idx];
                }
                stride *= self.side;
            }
        }
        self.counts = next;
    }

    /// Count for one exponent vector; zero outside the cube.
    pub fn count_at(&self, v: &[i64]) -> BigInt {
        assert_eq!(v.len(), self.n);
        if v.iter().any(|&c| c.abs() > self.ell) {
            return BigInt::zero();
        }
        self.counts[Self::index_of(v, self.ell, self.side)].clone()
    }

    /// Vectors with nonzero count, in lexicographic index order.
    pub fn support(&self) -> Vec<(Vec<i64>, BigInt)> {
        (0..self.counts.len())
            .filter(|&i| !self.counts[i].is_zero())
            .map(|i| (self.decode(i), self.counts[i].clone()))
            .collect()
    }
}

/// Exact probability that a uniform `S(n, m, ell)` presentation has full
/// rank, under the default guards.
pub fn exact_full_rank_probability(
    n: usize,
    m: usize,
    ell: u32,
) -> Result<BigRational, OracleError> {
    exact_full_rank_probability_with_guards(n, m, ell, &OracleGuards::default())
}

pub fn exact_full_rank_probability_with_guards(
    n: usize,
    m: usize,
    ell: u32,
    guards: &OracleGuards,
) -> Result<BigRational, OracleError> {
    assert!(n >= 1, "alphabet must be nonempty");
    if n > guards.max_generators {
        return Err(OracleError::GuardExceeded {
            parameter: "generators",
            value: n as u64,
            bound: guards.max_generators as u64,
        });
    }
    if m > guards.max_relators {
        return Err(OracleError::GuardExceeded {
            parameter: "relators",
            value: m as u64,
            bound: guards.max_relators as u64,
        });
    }
    if ell > guards.max_length {
        return Err(OracleError::GuardExceeded {
            parameter: "length",
            value: ell as u64,
            bound: guards.max_length as u64,
        });
    }

    if m == 0 {
        // rank 0 = min(n, 0): vacuously full rank.
        return Ok(BigRational::one());
    }

    let dist = WalkDistribution::new(n, ell);
    let total = BigInt::from(2 * n).pow(ell);
    let p0 = dist.count_at(&vec![0; n]);

    let probability = if n == 1 {
        // Full rank iff some relator has nonzero exponent sum.
        let num = total.pow(m as u32) - p0.pow(m as u32);
        BigRational::new(num, total.pow(m as u32))
    } else if m == 1 {
        BigRational::new(&total - &p0, total)
    } else if m == 2 {
        // Rows independent: group the first row by its primitive direction.
        let mut acc = BigInt::zero();
        for d in directions(&dist) {
            let line = line_mass(&dist, &d);
            acc += (&line - &p0) * (&total - &line);
        }
        BigRational::new(acc, total.pow(2))
    } else if m == 3 && n == 2 {
        // rank 2 = 1 - P(all three rows on one line through the origin).
        let mut collinear = p0.pow(3);
        for d in directions(&dist) {
            let line = line_mass(&dist, &d);
            collinear += line.pow(3) - p0.pow(3);
        }
        let t3 = total.pow(3);
        BigRational::new(&t3 - &collinear, t3)
    } else {
        // m == 3, n == 3 (the guards admit nothing else): sum over
        // independent ordered pairs, grouping the third row by the plane
        // they span.
        debug_assert!(m == 3 && n == 3);
        let support: Vec<(Vec<i64>, BigInt)> = dist
            .support()
            .into_iter()
            .filter(|(v, _)| v.iter().any(|&c| c != 0))
            .collect();
        let mut plane_cache: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        let mut acc = BigInt::zero();
        for (v1, c1) in &support {
            for (v2, c2) in &support {
                let q = cross3(v1, v2);
                if q.iter().all(|&c| c == 0) {
                    continue; // dependent pair
                }
                let qp = primitive(&q);
                let plane = plane_cache
                    .entry(qp.clone())
                    .or_insert_with(|| plane_mass(&dist, &qp));
                acc += c1 * c2 * (&total - &*plane);
            }
        }
        BigRational::new(acc, total.pow(3))
    };
    Ok(probability)
}

/// Primitive directions (gcd 1, sign-normalized) spanned by the support.
fn directions(dist: &WalkDistribution) -> BTreeSet<Vec<i64>> {
    dist.support()
        .into_iter()
        .filter(|(v, _)| v.iter().any(|&c| c != 0))
        .map(|(v, _)| primitive(&v))
        .collect()
}

fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &c| acc.gcd(&c));
    debug_assert!(g > 0);
    let mut out: Vec<i64> = v.iter().map(|&c| c / g).collect();
    if let Some(first) = out.iter().find(|&&c| c != 0) {
        if *first < 0 {
            for c in &mut out {
                *c = -*c;
            }
        }
    }
    out
}

/// Total count of support vectors on the line through `d` (origin included).
fn line_mass(dist: &WalkDistribution, d: &[i64]) -> BigInt {
    let mut mass = dist.count_at(&vec![0; d.len()]);
    let max_step = d.iter().map(|c| c.abs()).max().unwrap_or(0);
    if max_step == 0 {
        return mass;
    }
    let mut t = 1i64;
    while t * max_step <= dist.ell {
        let plus: Vec<i64> = d.iter().map(|&c| c * t).collect();
        let minus: Vec<i64> = d.iter().map(|&c| -c * t).collect();
        mass += dist.count_at(&plus);
        mass += dist.count_at(&minus);
        t += 1;
    }
    mass
}

/// Total count of support vectors orthogonal to `q` (the plane it normals).
fn plane_mass(dist: &WalkDistribution, q: &[i64]) -> BigInt {
    let mut mass = BigInt::zero();
    for (v, c) in dist.support() {
        let dot: i64 = v.iter().zip(q).map(|(&a, &b)| a * b).sum();
        if dot == 0 {
            mass += c;
        }
    }
    mass
}

fn cross3(a: &[i64], b: &[i64]) -> Vec<i64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::{rank, IntMatrix};
    use rand::RngCore;

    fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn zero_length_word_is_identity() {
        let mut rng = trial_rng(1, 0, 0);
        assert!(sample_word(2, 0, &mut rng).is_empty());
    }

    #[test]
    fn single_letter_words_over_one_generator() {
        let mut rng = trial_rng(2, 1, 0);
        let mut seen = BTreeSet::new();
        for _ in 0..200 {
            let w = sample_word(1, 1, &mut rng);
            assert_eq!(w.len(), 1);
            seen.insert(w.letters()[0].sign);
        }
        assert_eq!(seen.len(), 2, "both a and a^-1 should occur");
    }

    #[test]
    fn raw_sequences_have_exact_length() {
        let mut rng = trial_rng(3, 7, 0);
        for _ in 0..50 {
            assert_eq!(sample_letters(2, 7, &mut rng).len(), 7);
        }
    }

    #[test]
    fn sample_presentation_shape_and_determinism() {
        let mut rng = trial_rng(42, 5, 9);
        let p = sample_presentation(3, 2, 5, &mut rng);
        assert_eq!(p.generator_count(), 3);
        assert_eq!(p.relator_count(), 2);

        let mut replay = trial_rng(42, 5, 9);
        assert_eq!(sample_presentation(3, 2, 5, &mut replay), p);

        let free = sample_presentation(2, 0, 4, &mut rng);
        assert_eq!(free.relator_count(), 0);
        assert!(free.is_full_rank());
    }

    #[test]
    fn streams_differ_between_trials() {
        let a = trial_rng(7, 4, 0).next_u64();
        let b = trial_rng(7, 4, 1).next_u64();
        let c = trial_rng(7, 5, 0).next_u64();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn letter_draws_are_uniform_chi_square() {
        // 10^5 raw (n=2, ell=2) draws over 16 equally likely sequences.
        // Chi-square with 15 degrees of freedom: 45 is far beyond the 0.999
        // quantile (~37.7), so a correct sampler passes with huge margin.
        let mut rng = trial_rng(1234, 2, 0);
        let mut buckets = [0u32; 16];
        let draws = 100_000;
        for _ in 0..draws {
            let seq = sample_letters(2, 2, &mut rng);
            let code = seq
                .iter()
                .fold(0usize, |acc, l| {
                    let idx = l.generator.index
                        + if l.sign == Sign::Minus { 2 } else { 0 };
                    acc * 4 + idx
                });
            buckets[code] += 1;
        }
        let expected = draws as f64 / 16.0;
        let chi2: f64 = buckets
            .iter()
            .map(|&o| {
                let d = o as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 45.0, "chi-square statistic too large: {}", chi2);
    }

    #[test]
    fn walk_distribution_matches_enumeration() {
        // n = 2, ell = 2: 16 sequences; 4 return to the origin.
        let dist = WalkDistribution::new(2, 2);
        assert_eq!(dist.count_at(&[0, 0]), BigInt::from(4));
        assert_eq!(dist.count_at(&[2, 0]), BigInt::from(1));
        assert_eq!(dist.count_at(&[1, 1]), BigInt::from(2));
        assert_eq!(dist.count_at(&[1, 0]), BigInt::zero());
        let total: BigInt = dist.support().into_iter().map(|(_, c)| c).sum();
        assert_eq!(total, BigInt::from(16));
    }

    #[test]
    fn walk_distribution_is_exchangeable_across_coordinates() {
        let dist = WalkDistribution::new(3, 5);
        for (v, c) in dist.support() {
            let swapped = vec![v[1], v[0], v[2]];
            assert_eq!(dist.count_at(&swapped), c);
            let flipped = vec![-v[0], v[1], v[2]];
            assert_eq!(dist.count_at(&flipped), c);
        }
    }

    #[test]
    fn exact_probability_fixtures() {
        assert_eq!(exact_full_rank_probability(1, 1, 2).unwrap(), ratio(1, 2));
        assert_eq!(exact_full_rank_probability(1, 1, 1).unwrap(), ratio(1, 1));
        assert_eq!(exact_full_rank_probability(2, 1, 2).unwrap(), ratio(3, 4));
    }

    #[test]
    fn odd_length_single_generator_is_certain() {
        // Parity: a length-ell walk on Z ends at a point of ell's parity, so
        // odd ell cannot return to 0.
        for ell in [1, 3, 5, 7, 9] {
            assert_eq!(
                exact_full_rank_probability(1, 1, ell).unwrap(),
                BigRational::one()
            );
        }
    }

    #[test]
    fn guards_are_enforced() {
        assert!(matches!(
            exact_full_rank_probability(4, 1, 2),
            Err(OracleError::GuardExceeded { parameter: "generators", .. })
        ));
        assert!(matches!(
            exact_full_rank_probability(2, 4, 2),
            Err(OracleError::GuardExceeded { parameter: "relators", .. })
        ));
        assert!(matches!(
            exact_full_rank_probability(2, 2, 11),
            Err(OracleError::GuardExceeded { parameter: "length", .. })
        ));
        let loose = OracleGuards {
            max_generators: 3,
            max_relators: 3,
            max_length: 12,
        };
        assert!(exact_full_rank_probability_with_guards(2, 2, 11, &loose).is_ok());
    }

    /// Brute-force oracle: enumerate every m-tuple of raw length-ell
    /// sequences and count the full-rank relation matrices directly.
    fn brute_force_probability(n: usize, m: usize, ell: u32) -> BigRational {
        let letters_per_relator = 2 * n;
        let seqs_per_relator = (letters_per_relator as u64).pow(ell);
        let tuples = seqs_per_relator.pow(m as u32);
        let mut hits = 0u64;
        for code in 0..tuples {
            let mut c = code;
            let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(m);
            for _ in 0..m {
                let mut seq_code = c % seqs_per_relator;
                c /= seqs_per_relator;
                let mut v = vec![0i64; n];
                for _ in 0..ell {
                    let letter = (seq_code % letters_per_relator as u64) as usize;
                    seq_code /= letters_per_relator as u64;
                    if letter < n {
                        v[letter] += 1;
                    } else {
                        v[letter - n] -= 1;
                    }
                }
                rows.push(v.into_iter().map(BigInt::from).collect());
            }
            let matrix = IntMatrix::from_rows(rows);
            if rank(&matrix) == n.min(m) {
                hits += 1;
            }
        }
        BigRational::new(BigInt::from(hits), BigInt::from(tuples))
    }

    #[test]
    fn exact_oracle_matches_brute_force_enumeration() {
        // Covers every formula branch: n = 1, m = 1, m = 2, (n, m) = (2, 3),
        // and (n, m) = (3, 3).
        let cases: &[(usize, usize, u32)] = &[
            (1, 1, 3),
            (1, 2, 2),
            (1, 3, 2),
            (2, 1, 2),
            (2, 2, 2),
            (2, 2, 3),
            (2, 2, 4),
            (3, 2, 2),
            (2, 3, 2),
            (2, 3, 3),
            (3, 3, 2),
            (3, 1, 2),
        ];
        for &(n, m, ell) in cases {
            let exact = exact_full_rank_probability(n, m, ell).unwrap();
            let brute = brute_force_probability(n, m, ell);
            assert_eq!(exact, brute, "mismatch at (n, m, ell) = ({}, {}, {})", n, m, ell);
        }
    }

    #[test]
    fn sampled_parity_invariant() {
        let mut rng = trial_rng(99, 0, 0);
        for &(n, ell) in &[(1usize, 5u32), (2, 6), (3, 7), (2, 1)] {
            for _ in 0..200 {
                let w = sample_word(n, ell, &mut rng);
                let total: i64 = w.exponent_vector(n).iter().sum();
                assert_eq!(total.rem_euclid(2), (ell as i64).rem_euclid(2));
            }
        }
    }
}
