//! The presentation data model `< A | R >`, its relation matrix, deficiency,
//! and full-rank predicate.
//!
//! Two text formats are accepted:
//!
//! * a line-oriented file: `gens: a, b` followed by one relation per line
//!   (either a word or `word = word`), with `#` starting a comment;
//! * a single-line angle-bracket form `< a, b | a^2 [a,b]^-1, [a,b] >` with
//!   relators separated by top-level commas.
//!
//! Relations written as equations `u = v` are stored as the single relator
//! `u v^-1`, freely reduced. Relators equal to the empty word are retained
//! (they contribute a zero row to the relation matrix) and reported through
//! [`Presentation::warnings`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::intlinalg::{self, IntMatrix};
use crate::words::{self, GroupWord, WordParseError};

/// A finite presentation: named generators plus an ordered relator list.
///
/// Relator order is kept because it is the row order of the relation matrix;
/// duplicate relators are allowed and kept as duplicate rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<GroupWord>,
}

/// Construction-time validation failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresentationError {
    NoGenerators,
    InvalidGeneratorName(String),
    DuplicateGeneratorName(String),
    RelatorOutOfAlphabet { relator: usize, index: usize },
}

impl fmt::Display for PresentationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationError::NoGenerators => {
                write!(f, "a presentation needs at least one generator")
            }
            PresentationError::InvalidGeneratorName(n) => {
                write!(f, "invalid generator name `{}`", n)
            }
            PresentationError::DuplicateGeneratorName(n) => {
                write!(f, "duplicate generator name `{}`", n)
            }
            PresentationError::RelatorOutOfAlphabet { relator, index } => write!(
                f,
                "relator {} uses generator index {} outside the alphabet",
                relator, index
            ),
        }
    }
}

impl core::error::Error for PresentationError {}

impl Presentation {
    pub fn new(
        generator_names: Vec<String>,
        relators: Vec<GroupWord>,
    ) -> Result<Self, PresentationError> {
        if generator_names.is_empty() {
            return Err(PresentationError::NoGenerators);
        }
        for name in &generator_names {
            if !words::is_valid_generator_name(name) {
                return Err(PresentationError::InvalidGeneratorName(name.clone()));
            }
        }
        for (i, name) in generator_names.iter().enumerate() {
            if generator_names[..i].contains(name) {
                return Err(PresentationError::DuplicateGeneratorName(name.clone()));
            }
        }
        let n = generator_names.len();
        for (i, r) in relators.iter().enumerate() {
            if let Some(max) = r.max_generator_index() {
                if max >= n {
                    return Err(PresentationError::RelatorOutOfAlphabet {
                        relator: i,
                        index: max,
                    });
                }
            }
        }
        Ok(Presentation {
            generator_names,
            relators,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[GroupWord] {
        &self.relators
    }

    /// Replace the relator list, keeping the alphabet. Internal to the
    /// Nielsen-transformation machinery.
    pub(crate) fn with_relators(&self, relators: Vec<GroupWord>) -> Presentation {
        debug_assert!(relators
            .iter()
            .all(|r| r.max_generator_index().is_none_or(|m| m < self.generator_count())));
        Presentation {
            generator_names: self.generator_names.clone(),
            relators,
        }
    }

    /// The m x n relation matrix: row i is the exponent vector of relator i.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generator_count();
        IntMatrix::from_rows(
            self.relators
                .iter()
                .map(|r| {
                    r.exponent_vector(n)
                        .into_iter()
                        .map(BigInt::from)
                        .collect()
                })
                .collect::<Vec<_>>(),
        )
        .resized_cols(n)
    }

    /// `|A| - |R|`; may be negative, in which case the deficiency is
    /// conventionally undefined but the raw difference is still useful.
    pub fn deficiency(&self) -> i64 {
        self.generator_count() as i64 - self.relator_count() as i64
    }

    /// True iff `|A| >= |R|`, i.e. the deficiency is defined.
    pub fn deficiency_defined(&self) -> bool {
        self.generator_count() >= self.relator_count()
    }

    /// True iff the relation matrix has rank `min(|A|, |R|)`. A presentation
    /// with no relators is vacuously full rank.
    pub fn is_full_rank(&self) -> bool {
        let m = self.relation_matrix();
        intlinalg::rank(&m) == m.rows().min(m.cols())
    }

    /// Non-fatal oddities worth surfacing: currently, empty-word relators.
    pub fn warnings(&self) -> Vec<String> {
        self.relators
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_empty())
            .map(|(i, _)| {
                format!(
                    "relator {} is the empty word (contributes a zero row to the relation matrix)",
                    i + 1
                )
            })
            .collect()
    }

    // The empty relator renders as the grammar's empty group `()`; a bare
    // empty string would vanish on re-parse.
    fn render_relator(&self, r: &GroupWord) -> String {
        let text = r.render(&self.generator_names);
        if text.is_empty() {
            "()".to_string()
        } else {
            text
        }
    }

    /// Single-line `< a, b | r1, r2 >` rendering.
    pub fn render_inline(&self) -> String {
        let gens = self.generator_names.join(", ");
        let rels: Vec<String> = self.relators.iter().map(|r| self.render_relator(r)).collect();
        if rels.is_empty() {
            format!("< {} | >", gens)
        } else {
            format!("< {} | {} >", gens, rels.join(", "))
        }
    }

    /// Line-oriented `gens:` rendering (the file format).
    pub fn render_file(&self) -> String {
        let mut out = format!("gens: {}\n", self.generator_names.join(", "));
        for r in &self.relators {
            out.push_str(&self.render_relator(r));
            out.push('\n');
        }
        out
    }
}

// from_rows on zero relators loses the column count; fix it up.
trait ResizedCols {
    fn resized_cols(self, cols: usize) -> IntMatrix;
}

impl ResizedCols for IntMatrix {
    fn resized_cols(self, cols: usize) -> IntMatrix {
        if self.rows() == 0 {
            IntMatrix::zero(0, cols)
        } else {
            debug_assert_eq!(self.cols(), cols);
            self
        }
    }
}

/// Parse failure for either presentation text format, with location info.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresentationParseError {
    /// The file format did not start with a `gens:` line.
    MissingGensHeader,
    /// Inline form structure problems (missing `<`, `|`, `>`).
    MalformedInline(String),
    /// A relation contained more than one `=`.
    MultipleEquals { line: usize },
    /// Word-level syntax error; `line` is 1-based, 0 for inline input.
    Word { line: usize, error: WordParseError },
    Invalid(PresentationError),
}

impl fmt::Display for PresentationParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationParseError::MissingGensHeader => {
                write!(f, "expected a `gens: ...` header line")
            }
            PresentationParseError::MalformedInline(msg) => {
                write!(f, "malformed inline presentation: {}", msg)
            }
            PresentationParseError::MultipleEquals { line } => {
                write!(f, "line {}: more than one `=` in relation", line)
            }
            PresentationParseError::Word { line, error } => {
                if *line == 0 {
                    write!(f, "{}", error)
                } else {
                    write!(f, "line {}: {}", line, error)
                }
            }
            PresentationParseError::Invalid(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for PresentationParseError {}

impl From<PresentationError> for PresentationParseError {
    fn from(e: PresentationError) -> Self {
        PresentationParseError::Invalid(e)
    }
}

/// Parse either format, auto-detected: inline if the first non-space
/// character is `<`, the `gens:` file format otherwise.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationParseError> {
    parse_presentation_with_limit(text, words::DEFAULT_WORD_LENGTH_LIMIT)
}

pub fn parse_presentation_with_limit(
    text: &str,
    limit: usize,
) -> Result<Presentation, PresentationParseError> {
    if text.trim_start().starts_with('<') {
        parse_inline_with_limit(text, limit)
    } else {
        parse_file_with_limit(text, limit)
    }
}

/// Parse the single-line angle-bracket form.
pub fn parse_inline(text: &str) -> Result<Presentation, PresentationParseError> {
    parse_inline_with_limit(text, words::DEFAULT_WORD_LENGTH_LIMIT)
}

fn parse_inline_with_limit(
    text: &str,
    limit: usize,
) -> Result<Presentation, PresentationParseError> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .ok_or_else(|| {
            PresentationParseError::MalformedInline("expected `< ... >`".to_string())
        })?;
    let (gens_part, rels_part) = match split_once_top_level(inner, '|') {
        Some(parts) => parts,
        None => {
            return Err(PresentationParseError::MalformedInline(
                "expected `|` separating generators from relators".to_string(),
            ))
        }
    };
    if split_once_top_level(rels_part, '|').is_some() {
        return Err(PresentationParseError::MalformedInline(
            "more than one `|`".to_string(),
        ));
    }
    let names: Vec<String> = gens_part
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let mut relators = Vec::new();
    for chunk in split_top_level_commas(rels_part) {
        if chunk.trim().is_empty() {
            continue;
        }
        relators.push(parse_relation(chunk, &names, 0, limit)?);
    }
    Ok(Presentation::new(names, relators)?)
}

/// Parse the line-oriented `gens:` file format.
pub fn parse_file(text: &str) -> Result<Presentation, PresentationParseError> {
    parse_file_with_limit(text, words::DEFAULT_WORD_LENGTH_LIMIT)
}

fn parse_file_with_limit(
    text: &str,
    limit: usize,
) -> Result<Presentation, PresentationParseError> {
    let mut names: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match &names {
            None => {
                let Some(rest) = line.strip_prefix("gens:") else {
                    return Err(PresentationParseError::MissingGensHeader);
                };
                names = Some(
                    rest.split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect(),
                );
            }
            Some(ns) => {
                relators.push(parse_relation(line, ns, lineno + 1, limit)?);
            }
        }
    }
    let names = names.ok_or(PresentationParseError::MissingGensHeader)?;
    Ok(Presentation::new(names, relators)?)
}

/// A relation is a word, or an equation `u = v` stored as `u v^-1`.
fn parse_relation(
    text: &str,
    names: &[String],
    line: usize,
    limit: usize,
) -> Result<GroupWord, PresentationParseError> {
    let parts: Vec<&str> = text.split('=').collect();
    match parts.len() {
        1 => words::parse_word_with_limit(parts[0], names, limit)
            .map_err(|error| PresentationParseError::Word { line, error }),
        2 => {
            let u = words::parse_word_with_limit(parts[0], names, limit)
                .map_err(|error| PresentationParseError::Word { line, error })?;
            let v = words::parse_word_with_limit(parts[1], names, limit)
                .map_err(|error| PresentationParseError::Word { line, error })?;
            Ok(u.concat(&v.inverse()))
        }
        _ => Err(PresentationParseError::MultipleEquals { line }),
    }
}

/// Split at the first occurrence of `sep` not inside `()` or `[]`.
fn split_once_top_level(text: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            _ if c == sep && depth == 0 => {
                return Some((&text[..i], &text[i + c.len_utf8()..]));
            }
            _ => {}
        }
    }
    None
}

fn split_top_level_commas(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}
