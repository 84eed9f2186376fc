//! Cross-module pipeline checks through the public API only.

use metabelian::classify::{classify, DiophantineVerdict};
use metabelian::intlinalg::{rank, smith_normal_form, verify_decomposition, IntMatrix};
use metabelian::presentation::{parse_presentation, Presentation};
use metabelian::randgen::sample_word;
use metabelian::tietze::{check_isomorphism_record, normalize_to_snf};
use metabelian::words::GroupWord;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_presentation(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize, max_len: u32) -> Presentation {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=max_m);
    let names = (0..n).map(|i| format!("x{}", i + 1)).collect();
    let relators = (0..m)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            sample_word(n, len, rng)
        })
        .collect();
    Presentation::new(names, relators).unwrap()
}

/// Everything in the crate is plain immutable data, safe to share across
/// threads.
#[test]
fn public_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<GroupWord>();
    assert_send_sync::<Presentation>();
    assert_send_sync::<IntMatrix>();
    assert_send_sync::<metabelian::SmithDecomposition>();
    assert_send_sync::<metabelian::NormalizedPresentation>();
    assert_send_sync::<metabelian::StructureReport>();
}

/// Normalized full-rank presentations have the diagonal relator shape: the
/// i-th relator is `a_i^{d_i}` times a word with zero exponent sums.
#[test]
fn normalized_relators_have_diagonal_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut full_rank_seen = 0;
    for _ in 0..60 {
        let p = random_presentation(&mut rng, 4, 3, 10);
        let norm = normalize_to_snf(&p).unwrap();
        assert_eq!(norm.presentation.generator_count(), p.generator_count());
        assert_eq!(norm.presentation.relator_count(), p.relator_count());
        assert_eq!(norm.presentation.relation_matrix(), norm.snf.d);
        assert!(check_isomorphism_record(&norm.iso));
        if !p.is_full_rank() || p.relator_count() > p.generator_count() {
            continue;
        }
        full_rank_seen += 1;
        for (i, d) in norm.snf.invariant_factors.iter().enumerate() {
            let d = i64::try_from(d).unwrap();
            let relator = &norm.presentation.relators()[i];
            let tail = GroupWord::generator(i).pow(-d).concat(relator);
            assert!(tail.is_commutator_word(), "relator {} is not a_i^d_i * c_i", i);
        }
    }
    assert!(full_rank_seen > 10, "too few full-rank samples: {}", full_rank_seen);
}

/// Rank is preserved by the unimodular transforms and equals the number of
/// nonzero invariant factors.
#[test]
fn rank_is_preserved_through_the_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    for _ in 0..50 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let mut m = IntMatrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, BigInt::from(rng.gen_range(-15i64..=15)));
            }
        }
        let s = smith_normal_form(&m);
        assert!(verify_decomposition(&m, &s));
        let transported = s.u.mul(&m).mul(&s.v);
        assert_eq!(rank(&transported), rank(&m));
        assert_eq!(rank(&m), s.invariant_factors.len());
    }
}

/// A full run from file-format text to a report.
#[test]
fn file_text_to_report() {
    let text = "\
# two commuting squares
gens: x, y, z
x^2 = [x, y]
z^3
";
    let p = parse_presentation(text).unwrap();
    assert_eq!(p.generator_count(), 3);
    assert_eq!(p.relator_count(), 2);
    let report = classify(&p).unwrap();
    assert!(report.full_rank);
    assert_eq!(report.deficiency, 1);
    assert_eq!(report.diophantine, DiophantineVerdict::OpenDeficiencyOne);
    let basis = report.h_basis.expect("full rank with m <= n");
    assert_eq!(basis.len(), 1);
    // y is untouched by normalization here: the matrix diag(2, 3) over
    // columns (x, z) never mixes in column y.
    assert_eq!(basis[0].render(p.generator_names()), "y");
}

/// Inline rendering round-trips through the parser, words and all.
#[test]
fn inline_render_round_trips_randomly() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    for _ in 0..40 {
        let p = random_presentation(&mut rng, 4, 4, 12);
        let back = parse_presentation(&p.render_inline()).unwrap();
        assert_eq!(back, p);
        let back = parse_presentation(&p.render_file()).unwrap();
        assert_eq!(back, p);
    }
}
