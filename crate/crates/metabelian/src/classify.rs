//! Structural classification of a presentation: full-rank status, the
//! subgroup data of the Smith-normal-form decomposition, the Diophantine
//! verdict keyed on `(|A|, |R|)`, the direct-decomposition verdict, and
//! abelianization invariants.
//!
//! For a full-rank presentation with `m <= n` relators, normalization yields
//! relators `a_1^{d_1} c_1, ..., a_m^{d_m} c_m` (each `c_i` with zero
//! exponent sums). The last `n - m` new generators freely generate a free
//! metabelian subgroup `H`; the first `m` generate a virtually abelian
//! subgroup `K` whose normal closure `L` is again virtually abelian and
//! `G = HL`. Both generator families are pulled back to the original
//! generators through the recorded isomorphism. `L` is reported only as a
//! note: it need not be finitely generated, so it is not materialized.
//!
//! Freeness of `<h_basis>` is not re-verified computationally; the only
//! executable sanity check (exercised in tests) is that the exponent vectors
//! of `h_basis` stay independent modulo the row space of the relation matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::intlinalg::{self, smith_normal_form};
use crate::presentation::Presentation;
use crate::tietze::{self, TietzeError};
use crate::words::GroupWord;

/// Diophantine-problem verdict for a presentation, keyed strictly on
/// `(n, m) = (|A|, |R|)` for full-rank presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiophantineVerdict {
    /// Full rank with `m <= n - 2`: the ring of integers is e-interpretable
    /// in the group, so its Diophantine problem is undecidable.
    UndecidableZEInterpretable,
    /// Full rank with `m >= n`: the group is virtually abelian and its
    /// first-order theory (hence Diophantine problem) is decidable.
    DecidableVirtuallyAbelian,
    /// Full rank with `m = n - 1`: open in general.
    OpenDeficiencyOne,
    /// The presentation is not of full rank; the classification does not
    /// apply.
    NotApplicableNotFullRank,
}

impl DiophantineVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            DiophantineVerdict::UndecidableZEInterpretable => "UNDECIDABLE_Z_EINTERPRETABLE",
            DiophantineVerdict::DecidableVirtuallyAbelian => "DECIDABLE_VIRTUALLY_ABELIAN",
            DiophantineVerdict::OpenDeficiencyOne => "OPEN_DEFICIENCY_ONE",
            DiophantineVerdict::NotApplicableNotFullRank => "NOT_APPLICABLE_NOT_FULL_RANK",
        }
    }
}

/// Direct-decomposition verdict string for full-rank presentations with
/// `m <= n - 1`: in any direct decomposition, all but one factor are
/// virtually abelian. Reported, not verified computationally.
pub const DIRECT_DECOMPOSITION_VERDICT: &str = "ALL_BUT_ONE_DIRECT_FACTOR_VIRTUALLY_ABELIAN";

/// Abelianization of the presented group: free rank plus torsion invariant
/// factors (the invariant factors greater than 1, in divisibility order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianizationInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Relator length bookkeeping for the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RelatorLengthStats {
    pub original_max: usize,
    pub original_total: usize,
    /// Lengths after normalization; zero when normalization did not run.
    pub normalized_max: usize,
    pub normalized_total: usize,
}

/// Everything the analysis produces for one presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub generator_names: Vec<String>,
    pub generators: usize,
    pub relators: usize,
    pub matrix_rank: usize,
    pub full_rank: bool,
    /// Raw `n - m`; negative values mean the deficiency is undefined.
    pub deficiency: i64,
    pub deficiency_defined: bool,
    /// `max(n - m, 0)`: the rank of the free metabelian subgroup when the
    /// presentation has full rank.
    pub h_rank: usize,
    /// Free basis of `H` in the original generators; present only when
    /// full rank and `m <= n`.
    pub h_basis: Option<Vec<GroupWord>>,
    /// Generators of the virtually abelian subgroup `K` in the original
    /// generators; present only when full rank and `m <= n`.
    pub k_generators: Option<Vec<GroupWord>>,
    pub diophantine: DiophantineVerdict,
    /// Present iff full rank and `m <= n - 1`.
    pub direct_decomposition: Option<&'static str>,
    pub abelianization: AbelianizationInvariants,
    pub invariant_factors: Vec<BigInt>,
    /// Number of elementary operations replayed on the presentation.
    pub op_count: usize,
    pub relator_lengths: RelatorLengthStats,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

/// Free rank and torsion factors of the abelianization, read off the Smith
/// normal form of the relation matrix.
pub fn abelianization_invariants(p: &Presentation) -> AbelianizationInvariants {
    let snf = smith_normal_form(&p.relation_matrix());
    abelianization_from_factors(p.generator_count(), &snf.invariant_factors)
}

fn abelianization_from_factors(n: usize, factors: &[BigInt]) -> AbelianizationInvariants {
    AbelianizationInvariants {
        free_rank: n - factors.len(),
        torsion: factors.iter().filter(|d| !d.is_one()).cloned().collect(),
    }
}

/// Classify a presentation. Full-rank presentations are normalized to Smith
/// normal form first, which can fail on the relator length ceiling; that
/// failure is propagated.
pub fn classify(p: &Presentation) -> Result<StructureReport, TietzeError> {
    classify_with_limit(p, tietze::DEFAULT_RELATOR_LENGTH_LIMIT)
}

pub fn classify_with_limit(
    p: &Presentation,
    limit: usize,
) -> Result<StructureReport, TietzeError> {
    let n = p.generator_count();
    let m = p.relator_count();
    let matrix = p.relation_matrix();
    let matrix_rank = intlinalg::rank(&matrix);
    let full_rank = matrix_rank == n.min(m);
    let deficiency = p.deficiency();
    let h_rank = deficiency.max(0) as usize;

    let original_lengths: Vec<usize> = p.relators().iter().map(GroupWord::len).collect();
    let mut stats = RelatorLengthStats {
        original_max: original_lengths.iter().copied().max().unwrap_or(0),
        original_total: original_lengths.iter().sum(),
        normalized_max: 0,
        normalized_total: 0,
    };

    let mut notes = Vec::new();
    if !p.deficiency_defined() {
        notes.push(format!(
            "deficiency undefined (|R| > |A|); raw difference n - m = {}",
            deficiency
        ));
    }
    if m == 0 {
        notes.push(format!(
            "no relators: G is the free metabelian group of rank {}",
            n
        ));
        if n == 1 {
            notes.push(String::from(
                "G is the infinite cyclic group Z; its Diophantine problem is classically decidable",
            ));
        }
    }

    let mut h_basis = None;
    let mut k_generators = None;
    let mut op_count = 0;
    let invariant_factors;

    if full_rank {
        let norm = tietze::normalize_to_snf_with_limit(p, limit)?;
        op_count = norm.snf.op_log.len();
        let normalized_lengths: Vec<usize> = norm
            .presentation
            .relators()
            .iter()
            .map(GroupWord::len)
            .collect();
        stats.normalized_max = normalized_lengths.iter().copied().max().unwrap_or(0);
        stats.normalized_total = normalized_lengths.iter().sum();
        invariant_factors = norm.snf.invariant_factors.clone();
        if m <= n {
            h_basis = Some(norm.iso.backward[m..n].to_vec());
            k_generators = Some(norm.iso.backward[..m].to_vec());
            notes.push(String::from(
                "the normal closure L of <k_generators> is again virtually abelian and G = HL; \
                 L need not be finitely generated and is not listed",
            ));
        } else {
            notes.push(String::from(
                "full rank with |R| > |A|: G is a quotient of the zero-deficiency full-rank group \
                 on the first |A| relators, hence virtually abelian",
            ));
        }
        if m == n {
            notes.push(String::from("full rank with |R| = |A|: G is virtually abelian"));
        }
    } else {
        invariant_factors = smith_normal_form(&matrix).invariant_factors;
    }

    let diophantine = if !full_rank {
        DiophantineVerdict::NotApplicableNotFullRank
    } else if m + 2 <= n {
        DiophantineVerdict::UndecidableZEInterpretable
    } else if m + 1 == n {
        DiophantineVerdict::OpenDeficiencyOne
    } else {
        DiophantineVerdict::DecidableVirtuallyAbelian
    };

    let direct_decomposition = if full_rank && m < n {
        Some(DIRECT_DECOMPOSITION_VERDICT)
    } else {
        None
    };

    Ok(StructureReport {
        generator_names: p.generator_names().to_vec(),
        generators: n,
        relators: m,
        matrix_rank,
        full_rank,
        deficiency,
        deficiency_defined: p.deficiency_defined(),
        h_rank,
        h_basis,
        k_generators,
        diophantine,
        direct_decomposition,
        abelianization: abelianization_from_factors(n, &invariant_factors),
        invariant_factors,
        op_count,
        relator_lengths: stats,
        warnings: p.warnings(),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use alloc::vec;

    fn report(text: &str) -> StructureReport {
        classify(&parse_presentation(text).unwrap()).unwrap()
    }

    fn torsion_i64(r: &StructureReport) -> Vec<i64> {
        r.abelianization
            .torsion
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn bs13_report() {
        let r = report("< a, b | a^2 [a,b]^-1 >");
        assert!(r.full_rank);
        assert_eq!(r.deficiency, 1);
        assert_eq!(r.h_rank, 1);
        assert_eq!(r.diophantine, DiophantineVerdict::OpenDeficiencyOne);
        assert!(r.direct_decomposition.is_some());
        assert_eq!(r.abelianization.free_rank, 1);
        assert_eq!(torsion_i64(&r), vec![2]);
        // Already in Smith normal form: the pulled-back basis is b itself.
        assert_eq!(r.h_basis, Some(vec![GroupWord::generator(1)]));
        assert_eq!(r.k_generators, Some(vec![GroupWord::generator(0)]));
    }

    #[test]
    fn two_baumslag_solitar_factors_report() {
        let r = report("< a1, a2, a3, a4 | a1^2 [a1,a3]^-1, a2^3 [a2,a4]^-1 >");
        assert!(r.full_rank);
        assert_eq!(r.deficiency, 2);
        assert_eq!(r.h_rank, 2);
        assert_eq!(
            r.diophantine,
            DiophantineVerdict::UndecidableZEInterpretable
        );
        assert_eq!(
            r.direct_decomposition,
            Some(DIRECT_DECOMPOSITION_VERDICT)
        );
        // The matrix diag(2, 3) is not yet in Smith form (2 does not divide
        // 3); normalization mixes a1 and a2 but never touches a3 and a4, so
        // the free basis pulls back to exactly {a3, a4}.
        assert_eq!(
            r.h_basis,
            Some(vec![GroupWord::generator(2), GroupWord::generator(3)])
        );
        let k = r.k_generators.as_ref().unwrap();
        assert_eq!(k.len(), 2);
        for w in k {
            assert!(w.max_generator_index().unwrap() <= 1);
        }
        assert_eq!(
            r.invariant_factors,
            vec![BigInt::from(1), BigInt::from(6)]
        );
        assert_eq!(r.abelianization.free_rank, 2);
        assert_eq!(torsion_i64(&r), vec![6]);
    }

    #[test]
    fn rem2_not_full_rank() {
        let r = report("< a1, a2, a3, a4 | [a1,a3], [a2,a4] >");
        assert!(!r.full_rank);
        assert_eq!(
            r.diophantine,
            DiophantineVerdict::NotApplicableNotFullRank
        );
        assert!(r.h_basis.is_none());
        assert!(r.k_generators.is_none());
        assert!(r.direct_decomposition.is_none());
        assert_eq!(r.abelianization.free_rank, 4);
        assert!(r.abelianization.torsion.is_empty());
        assert_eq!(r.op_count, 0);
    }

    #[test]
    fn free_rank_one_is_open_by_the_table() {
        // Verdicts key on (n, m) = (1, 0): m = n - 1 holds, so the table says
        // OPEN_DEFICIENCY_ONE, with a note that Z itself is decidable.
        let r = report("< a | >");
        assert!(r.full_rank);
        assert_eq!(r.deficiency, 1);
        assert_eq!(r.h_rank, 1);
        assert_eq!(r.diophantine, DiophantineVerdict::OpenDeficiencyOne);
        assert!(r.notes.iter().any(|n| n.contains("classically decidable")));
        assert_eq!(r.h_basis, Some(vec![GroupWord::generator(0)]));
        assert_eq!(r.k_generators, Some(vec![]));
    }

    #[test]
    fn verdict_trichotomy_on_full_rank_inputs() {
        for (text, expected) in [
            ("< a, b, c | a >", DiophantineVerdict::UndecidableZEInterpretable),
            ("< a, b | a >", DiophantineVerdict::OpenDeficiencyOne),
            ("< a, b | a, b >", DiophantineVerdict::DecidableVirtuallyAbelian),
            ("< a | a^2, a^3 >", DiophantineVerdict::DecidableVirtuallyAbelian),
        ] {
            let r = report(text);
            assert!(r.full_rank, "{}", text);
            assert_eq!(r.diophantine, expected, "{}", text);
        }
    }

    #[test]
    fn m_exceeding_n_full_rank_is_virtually_abelian() {
        let r = report("< a | a^2, a^3 >");
        assert!(r.full_rank);
        assert!(!r.deficiency_defined);
        assert_eq!(r.deficiency, -1);
        assert_eq!(r.h_rank, 0);
        assert!(r.h_basis.is_none());
        assert!(r.k_generators.is_none());
        assert!(r.notes.iter().any(|n| n.contains("virtually abelian")));
        // gcd(2,3) = 1: trivial abelianization.
        assert_eq!(r.abelianization.free_rank, 0);
        assert!(r.abelianization.torsion.is_empty());
    }

    #[test]
    fn abelianization_examples() {
        let free2 = abelianization_invariants(&parse_presentation("< a, b | >").unwrap());
        assert_eq!(free2.free_rank, 2);
        assert!(free2.torsion.is_empty());

        let c2 = abelianization_invariants(&parse_presentation("< a | a^2 >").unwrap());
        assert_eq!(c2.free_rank, 0);
        assert_eq!(c2.torsion, vec![BigInt::from(2)]);

        // SNF of [[2,2],[4,0]] via the minor oracle: D_1 = 2, D_2 = 8,
        // factors (2, 4).
        let mixed = abelianization_invariants(
            &parse_presentation("< a, b | a^2 b^2, a^4 >").unwrap(),
        );
        assert_eq!(mixed.free_rank, 0);
        assert_eq!(mixed.torsion, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn h_rank_is_clamped_deficiency() {
        for text in [
            "< a, b | a^2 [a,b]^-1 >",
            "< a | a^2, a^3 >",
            "< a1, a2, a3, a4 | [a1,a3], [a2,a4] >",
            "< a, b, c | >",
        ] {
            let r = report(text);
            assert_eq!(r.h_rank as i64, r.deficiency.max(0), "{}", text);
        }
    }

    #[test]
    fn h_basis_exponent_vectors_independent_mod_row_space() {
        use crate::intlinalg::{rank, IntMatrix};
        use num_bigint::BigInt;
        for text in [
            "< a, b | a^2 [a,b]^-1 >",
            "< a1, a2, a3, a4 | a1^2 [a1,a3]^-1, a2^3 [a2,a4]^-1 >",
            "< a, b | a^2 b^2 >",
            "< a, b, c | a b c >",
        ] {
            let p = parse_presentation(text).unwrap();
            let r = classify(&p).unwrap();
            let basis = r.h_basis.as_ref().unwrap();
            let n = p.generator_count();
            let mut rows: Vec<Vec<BigInt>> = (0..p.relator_count())
                .map(|i| {
                    p.relators()[i]
                        .exponent_vector(n)
                        .into_iter()
                        .map(BigInt::from)
                        .collect()
                })
                .collect();
            let base_rank = rank(&p.relation_matrix());
            for w in basis {
                rows.push(w.exponent_vector(n).into_iter().map(BigInt::from).collect());
            }
            let stacked = IntMatrix::from_rows(rows);
            assert_eq!(rank(&stacked), base_rank + r.h_rank, "{}", text);
        }
    }

    #[test]
    fn classify_agrees_with_normalized_presentation() {
        use crate::tietze::normalize_to_snf;
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(91);
        for _ in 0..30 {
            let p = crate::testutil::random_presentation(&mut rng, 4, 4, 8);
            let a = classify(&p).unwrap();
            let b = classify(&normalize_to_snf(&p).unwrap().presentation).unwrap();
            assert_eq!(a.full_rank, b.full_rank);
            assert_eq!(a.deficiency, b.deficiency);
            assert_eq!(a.h_rank, b.h_rank);
            assert_eq!(a.diophantine, b.diophantine);
            assert_eq!(a.direct_decomposition, b.direct_decomposition);
            assert_eq!(a.abelianization, b.abelianization);
            assert_eq!(a.invariant_factors, b.invariant_factors);
        }
    }
}
