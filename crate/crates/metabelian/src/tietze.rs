//! Nielsen/Tietze mirroring of elementary matrix operations: brings a
//! presentation to Smith normal form while tracking an explicit isomorphism.
//!
//! Row operations act on the relator tuple (swap, invert, multiply into); a
//! column operation is an elementary free-group automorphism whose induced
//! action on exponent vectors is exactly that column operation:
//!
//! * `swap_cols(j, k)`  ->  exchange `a_j <-> a_k`
//! * `negate_col(j)`    ->  `a_j -> a_j^-1`
//! * `add_col_multiple(dst = k, src = j, t)` (i.e. `col_k += t * col_j`)
//!   ->  `a_j -> a_j a_k^t`
//!
//! The correspondence is not taken on faith: the commutation-square tests
//! recompute the relation matrix after every replayed operation and compare
//! it with the matrix-side replay.
//!
//! Substitutions act at the free-group level and are then freely reduced; no
//! metabelian rewriting is involved, since exponent vectors and the
//! variety-level isomorphism statement are insensitive to it. Word growth
//! under repeated substitution can be severe, so every word-building step is
//! checked against a configurable length ceiling.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::intlinalg::{smith_normal_form, ElementaryOp, SmithDecomposition};
use crate::presentation::Presentation;
use crate::words::{GroupWord, SubstError};

/// Default ceiling on any relator or substitution-image length (letters).
pub const DEFAULT_RELATOR_LENGTH_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TietzeError {
    IndexOutOfRange { index: usize, count: usize },
    WrongOpKind { expected: &'static str },
    LengthLimitExceeded { limit: usize },
}

impl fmt::Display for TietzeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TietzeError::IndexOutOfRange { index, count } => {
                write!(f, "index {} out of range (count {})", index, count)
            }
            TietzeError::WrongOpKind { expected } => {
                write!(f, "expected a {} operation", expected)
            }
            TietzeError::LengthLimitExceeded { limit } => {
                write!(f, "relator length limit {} exceeded during normalization", limit)
            }
        }
    }
}

impl core::error::Error for TietzeError {}

impl From<SubstError> for TietzeError {
    fn from(e: SubstError) -> Self {
        match e {
            SubstError::LengthLimit { limit } => TietzeError::LengthLimitExceeded { limit },
            SubstError::MissingImage { generator } => TietzeError::IndexOutOfRange {
                index: generator,
                count: 0,
            },
        }
    }
}

/// A generator substitution `a_i -> images[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    images: Vec<GroupWord>,
}

impl Substitution {
    pub fn identity(n: usize) -> Self {
        Substitution {
            images: (0..n).map(GroupWord::generator).collect(),
        }
    }

    pub fn new(images: Vec<GroupWord>) -> Self {
        Substitution { images }
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    pub fn apply(&self, word: &GroupWord, limit: usize) -> Result<GroupWord, TietzeError> {
        Ok(word.substitute(&self.images, limit)?)
    }
}

/// An elementary column substitution together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionPair {
    pub map: Substitution,
    pub inverse: Substitution,
}

/// The composed change of generators recorded by a normalization run:
/// `forward[i]` is the image of old generator `i` as a word in the new
/// generators, `backward[i]` the image of new generator `i` in the old ones.
/// Composing either way round-trips to the identity in the free group, hence
/// in any variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismRecord {
    pub forward: Vec<GroupWord>,
    pub backward: Vec<GroupWord>,
}

impl IsomorphismRecord {
    pub fn identity(n: usize) -> Self {
        IsomorphismRecord {
            forward: Substitution::identity(n).images,
            backward: Substitution::identity(n).images,
        }
    }

    pub fn is_identity(&self) -> bool {
        let id = Substitution::identity(self.forward.len()).images;
        self.forward == id && self.backward == id
    }
}

/// True iff `forward` and `backward` are mutually inverse on generators,
/// up to free reduction.
pub fn check_isomorphism_record(iso: &IsomorphismRecord) -> bool {
    let n = iso.forward.len();
    if iso.backward.len() != n {
        return false;
    }
    let fwd = Substitution::new(iso.forward.clone());
    let bwd = Substitution::new(iso.backward.clone());
    for i in 0..n {
        let gen = GroupWord::generator(i);
        match bwd.apply(&iso.forward[i], usize::MAX) {
            Ok(w) if w == gen => {}
            _ => return false,
        }
        match fwd.apply(&iso.backward[i], usize::MAX) {
            Ok(w) if w == gen => {}
            _ => return false,
        }
    }
    true
}

/// A presentation whose relation matrix is in Smith normal form, plus the
/// isomorphism back to the source presentation and the decomposition that
/// produced it. Generator and relator counts match the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedPresentation {
    pub presentation: Presentation,
    pub iso: IsomorphismRecord,
    pub snf: SmithDecomposition,
}

/// Apply a row-kind elementary operation to the relator tuple.
///
/// `swap_rows` exchanges relators, `negate_row` inverts one, and
/// `add_row_multiple(dst, src, t)` replaces `r_dst` by `r_dst * r_src^t`; the
/// relation matrix changes by exactly the same elementary row operation.
pub fn apply_row_op(
    p: &Presentation,
    op: &ElementaryOp,
    limit: usize,
) -> Result<Presentation, TietzeError> {
    let m = p.relator_count();
    let check = |i: usize| -> Result<(), TietzeError> {
        if i < m {
            Ok(())
        } else {
            Err(TietzeError::IndexOutOfRange { index: i, count: m })
        }
    };
    let mut relators = p.relators().to_vec();
    match op {
        ElementaryOp::SwapRows { i, j } => {
            check(*i)?;
            check(*j)?;
            relators.swap(*i, *j);
        }
        ElementaryOp::NegateRow { i } => {
            check(*i)?;
            relators[*i] = relators[*i].inverse();
        }
        ElementaryOp::AddRowMultiple {
            dst,
            src,
            multiplier,
        } => {
            check(*dst)?;
            check(*src)?;
            let t = small_multiplier(multiplier, limit)?;
            let grown = relators[*dst]
                .len()
                .saturating_add(relators[*src].len().saturating_mul(t.unsigned_abs() as usize));
            if grown > limit {
                return Err(TietzeError::LengthLimitExceeded { limit });
            }
            relators[*dst] = relators[*dst].concat(&relators[*src].pow(t));
        }
        _ => return Err(TietzeError::WrongOpKind { expected: "row" }),
    }
    Ok(p.with_relators(relators))
}

/// Apply a column-kind elementary operation by rewriting every relator under
/// the corresponding elementary free-group automorphism. Returns the new
/// presentation and the substitution together with its inverse.
pub fn apply_col_op(
    p: &Presentation,
    op: &ElementaryOp,
    limit: usize,
) -> Result<(Presentation, SubstitutionPair), TietzeError> {
    let n = p.generator_count();
    let check = |i: usize| -> Result<(), TietzeError> {
        if i < n {
            Ok(())
        } else {
            Err(TietzeError::IndexOutOfRange { index: i, count: n })
        }
    };
    let pair = match op {
        ElementaryOp::SwapCols { i, j } => {
            check(*i)?;
            check(*j)?;
            let mut images = Substitution::identity(n).images;
            images.swap(*i, *j);
            let sub = Substitution::new(images);
            SubstitutionPair {
                inverse: sub.clone(),
                map: sub,
            }
        }
        ElementaryOp::NegateCol { i } => {
            check(*i)?;
            let mut images = Substitution::identity(n).images;
            images[*i] = images[*i].inverse();
            let sub = Substitution::new(images);
            SubstitutionPair {
                inverse: sub.clone(),
                map: sub,
            }
        }
        ElementaryOp::AddColMultiple {
            dst,
            src,
            multiplier,
        } => {
            // col_dst += t * col_src corresponds to a_src -> a_src a_dst^t.
            check(*dst)?;
            check(*src)?;
            let t = small_multiplier(multiplier, limit)?;
            let mut fwd = Substitution::identity(n).images;
            fwd[*src] = GroupWord::generator(*src).concat(&GroupWord::generator(*dst).pow(t));
            let mut bwd = Substitution::identity(n).images;
            bwd[*src] = GroupWord::generator(*src).concat(&GroupWord::generator(*dst).pow(-t));
            SubstitutionPair {
                map: Substitution::new(fwd),
                inverse: Substitution::new(bwd),
            }
        }
        _ => return Err(TietzeError::WrongOpKind { expected: "column" }),
    };
    let relators = p
        .relators()
        .iter()
        .map(|r| pair.map.apply(r, limit))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((p.with_relators(relators), pair))
}

fn small_multiplier(t: &BigInt, limit: usize) -> Result<i64, TietzeError> {
    match i64::try_from(t) {
        Ok(v) if v.unsigned_abs() <= limit as u64 => Ok(v),
        _ => Err(TietzeError::LengthLimitExceeded { limit }),
    }
}

/// Bring `p` to a Smith-normal-form presentation: compute the SNF of its
/// relation matrix, replay the op log as Nielsen transformations, and compose
/// the per-step generator substitutions into an [`IsomorphismRecord`].
/// Generator and relator counts are preserved.
pub fn normalize_to_snf(p: &Presentation) -> Result<NormalizedPresentation, TietzeError> {
    normalize_to_snf_with_limit(p, DEFAULT_RELATOR_LENGTH_LIMIT)
}

pub fn normalize_to_snf_with_limit(
    p: &Presentation,
    limit: usize,
) -> Result<NormalizedPresentation, TietzeError> {
    let snf = smith_normal_form(&p.relation_matrix());
    let n = p.generator_count();
    let mut current = p.clone();
    let mut forward = Substitution::identity(n).images;
    let mut backward = Substitution::identity(n).images;
    for op in &snf.op_log {
        if op.is_row_op() {
            current = apply_row_op(&current, op, limit)?;
        } else {
            let (next, pair) = apply_col_op(&current, op, limit)?;
            current = next;
            for w in &mut forward {
                *w = pair.map.apply(w, limit)?;
            }
            let prev = Substitution::new(backward);
            backward = pair
                .inverse
                .images()
                .iter()
                .map(|w| prev.apply(w, limit))
                .collect::<Result<Vec<_>, _>>()?;
        }
    }
    debug_assert_eq!(current.relation_matrix(), snf.d);
    Ok(NormalizedPresentation {
        presentation: current,
        iso: IsomorphismRecord { forward, backward },
        snf,
    })
}
