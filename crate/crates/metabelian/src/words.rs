//! Words in a free group alphabet: parsing, free reduction, and exponent sums.
//!
//! Generators are identified by their 0-based index in the ambient alphabet
//! `{a_1, ..., a_n}`; names only exist at the parsing/rendering boundary.
//! Every [`GroupWord`] is kept freely reduced at all times, so equality of
//! group elements of the free group is plain sequence equality. Raw
//! (unreduced) letter sequences appear only transiently inside parsers and
//! samplers.
//!
//! Commutator convention: `[x, y] = x^-1 y^-1 x y`. Exponent vectors are
//! insensitive to this choice (a commutator always has exponent sum zero in
//! every generator), but rendered words are not, so the convention is fixed
//! here once.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Default cap on the length of any word built by parsing or substitution.
pub const DEFAULT_WORD_LENGTH_LIMIT: usize = 1_000_000;

/// A generator of the ambient free group, identified by alphabet position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub index: usize,
}

impl Generator {
    pub fn new(index: usize) -> Self {
        Generator { index }
    }
}

/// The sign of a letter: a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// +1 or -1.
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A single symbol from `A ∪ A^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub sign: Sign,
}

impl Letter {
    pub fn new(index: usize, sign: Sign) -> Self {
        Letter {
            generator: Generator::new(index),
            sign,
        }
    }

    pub fn positive(index: usize) -> Self {
        Letter::new(index, Sign::Plus)
    }

    pub fn negative(index: usize) -> Self {
        Letter::new(index, Sign::Minus)
    }

    pub fn inverse(self) -> Letter {
        Letter {
            generator: self.generator,
            sign: self.sign.flip(),
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.sign != other.sign
    }
}

/// A freely reduced word over the ambient alphabet. The empty word is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

/// Freely reduce a raw letter sequence. The result is the unique reduced
/// form; reducing twice is the same as reducing once.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> GroupWord {
    let mut stack: Vec<Letter> = Vec::new();
    for letter in letters {
        match stack.last() {
            Some(&top) if top.cancels(letter) => {
                stack.pop();
            }
            _ => stack.push(letter),
        }
    }
    GroupWord { letters: stack }
}

impl GroupWord {
    /// The empty word.
    pub fn identity() -> Self {
        GroupWord::default()
    }

    /// A single positive generator letter.
    pub fn generator(index: usize) -> Self {
        GroupWord {
            letters: alloc::vec![Letter::positive(index)],
        }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        free_reduce(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index occurring in the word, if any.
    pub fn max_generator_index(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator.index).max()
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        // Only the seam can cancel; both inputs are already reduced.
        let mut stack = self.letters.clone();
        for &letter in &other.letters {
            match stack.last() {
                Some(&top) if top.cancels(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        GroupWord { letters: stack }
    }

    /// Reversed, sign-flipped word. Reduced inputs stay reduced.
    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self^k` for any integer `k` (negative powers invert first).
    pub fn pow(&self, k: i64) -> GroupWord {
        if self.is_empty() || k == 0 {
            return GroupWord::identity();
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupWord::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Commutator `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &GroupWord) -> GroupWord {
        self.inverse()
            .concat(&other.inverse())
            .concat(self)
            .concat(other)
    }

    /// Net exponent of each generator in an alphabet of size `n`.
    ///
    /// Component `j` counts occurrences of `a_j` minus occurrences of
    /// `a_j^-1`; it is invariant under free reduction and any reordering of
    /// the letters. All letters must lie within the alphabet.
    pub fn exponent_vector(&self, n: usize) -> Vec<i64> {
        let mut v = alloc::vec![0i64; n];
        for letter in &self.letters {
            assert!(
                letter.generator.index < n,
                "letter index {} outside alphabet of size {}",
                letter.generator.index,
                n
            );
            v[letter.generator.index] += letter.sign.as_i64();
        }
        v
    }

    /// True iff every generator has net exponent zero, i.e. the word lies in
    /// the derived subgroup of the ambient free group.
    pub fn is_commutator_word(&self) -> bool {
        let mut tally: BTreeMap<usize, i64> = BTreeMap::new();
        for letter in &self.letters {
            *tally.entry(letter.generator.index).or_insert(0) += letter.sign.as_i64();
        }
        tally.values().all(|&e| e == 0)
    }

    /// Replace every letter `a_j^±` by `images[j]^±` and reduce.
    ///
    /// Errors if the raw substituted length would exceed `limit`, or if a
    /// letter has no image.
    pub fn substitute(&self, images: &[GroupWord], limit: usize) -> Result<GroupWord, SubstError> {
        let mut raw_len: usize = 0;
        for letter in &self.letters {
            let image = images
                .get(letter.generator.index)
                .ok_or(SubstError::MissingImage {
                    generator: letter.generator.index,
                })?;
            raw_len = raw_len.saturating_add(image.len());
            if raw_len > limit {
                return Err(SubstError::LengthLimit { limit });
            }
        }
        let mut stack: Vec<Letter> = Vec::new();
        for letter in &self.letters {
            let image = &images[letter.generator.index];
            match letter.sign {
                Sign::Plus => push_reducing(&mut stack, image.letters.iter().copied()),
                Sign::Minus => {
                    push_reducing(&mut stack, image.letters.iter().rev().map(|l| l.inverse()))
                }
            }
        }
        Ok(GroupWord { letters: stack })
    }

    /// Canonical rendering: maximal runs of one letter collapse to `name^k`.
    /// `parse_word(render(w)) == w`.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.letters.is_empty() {
            return String::new();
        }
        let mut out = String::new();
        let mut run_start = 0;
        for i in 1..=self.letters.len() {
            if i == self.letters.len() || self.letters[i] != self.letters[run_start] {
                let letter = self.letters[run_start];
                let count = (i - run_start) as i64 * letter.sign.as_i64();
                if !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(names[letter.generator.index].as_ref());
                if count != 1 {
                    out.push_str(&alloc::format!("^{}", count));
                }
                run_start = i;
            }
        }
        out
    }
}

fn push_reducing<I: Iterator<Item = Letter>>(stack: &mut Vec<Letter>, letters: I) {
    for letter in letters {
        match stack.last() {
            Some(&top) if top.cancels(letter) => {
                stack.pop();
            }
            _ => stack.push(letter),
        }
    }
}

/// Substitution failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstError {
    MissingImage { generator: usize },
    LengthLimit { limit: usize },
}

impl fmt::Display for SubstError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstError::MissingImage { generator } => {
                write!(f, "no image for generator index {}", generator)
            }
            SubstError::LengthLimit { limit } => {
                write!(f, "substituted word exceeds length limit {}", limit)
            }
        }
    }
}

impl core::error::Error for SubstError {}

/// What went wrong while parsing a word, and the byte offset where.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordParseError {
    pub kind: WordParseErrorKind,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordParseErrorKind {
    UnknownGenerator(String),
    MalformedExponent,
    UnbalancedBracket,
    UnexpectedCharacter(char),
    LengthLimit { limit: usize },
    NestingTooDeep,
}

impl fmt::Display for WordParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WordParseErrorKind::UnknownGenerator(name) => {
                write!(f, "unknown generator `{}` at position {}", name, self.position)
            }
            WordParseErrorKind::MalformedExponent => {
                write!(f, "malformed exponent at position {}", self.position)
            }
            WordParseErrorKind::UnbalancedBracket => {
                write!(f, "unbalanced bracket at position {}", self.position)
            }
            WordParseErrorKind::UnexpectedCharacter(c) => {
                write!(f, "unexpected character `{}` at position {}", c, self.position)
            }
            WordParseErrorKind::LengthLimit { limit } => {
                write!(
                    f,
                    "word exceeds length limit {} (at position {})",
                    limit, self.position
                )
            }
            WordParseErrorKind::NestingTooDeep => {
                write!(f, "brackets nested too deeply at position {}", self.position)
            }
        }
    }
}

impl core::error::Error for WordParseError {}

/// Parse a word over the named alphabet.
///
/// Grammar: `word := term*`, `term := atom ("^" integer)?`,
/// `atom := name | "(" word ")" | "[" word "," word "]"`,
/// `integer := "-"? digit+`. Whitespace separates terms and is otherwise
/// ignored. Names match `[A-Za-z_][A-Za-z0-9_]*`.
pub fn parse_word<S: AsRef<str>>(text: &str, alphabet: &[S]) -> Result<GroupWord, WordParseError> {
    parse_word_with_limit(text, alphabet, DEFAULT_WORD_LENGTH_LIMIT)
}

pub fn parse_word_with_limit<S: AsRef<str>>(
    text: &str,
    alphabet: &[S],
    limit: usize,
) -> Result<GroupWord, WordParseError> {
    let names: BTreeMap<&str, usize> = alphabet
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_ref(), i))
        .collect();
    let mut parser = WordParser {
        bytes: text.as_bytes(),
        pos: 0,
        names,
        limit,
    };
    let word = parser.parse_sequence(0, &[])?;
    parser.skip_ws();
    if parser.pos < parser.bytes.len() {
        return Err(parser.err_here(WordParseErrorKind::UnexpectedCharacter(
            parser.bytes[parser.pos] as char,
        )));
    }
    Ok(word)
}

const MAX_NESTING: usize = 128;

struct WordParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    names: BTreeMap<&'a str, usize>,
    limit: usize,
}

impl<'a> WordParser<'a> {
    fn err_here(&self, kind: WordParseErrorKind) -> WordParseError {
        WordParseError {
            kind,
            position: self.pos,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Parse `term*` until end of input or one of `stops`.
    fn parse_sequence(&mut self, depth: usize, stops: &[u8]) -> Result<GroupWord, WordParseError> {
        let mut word = GroupWord::identity();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(word),
                Some(c) if stops.contains(&c) => return Ok(word),
                Some(_) => {
                    let term = self.parse_term(depth)?;
                    if word.len().saturating_add(term.len()) > self.limit {
                        return Err(self.err_here(WordParseErrorKind::LengthLimit {
                            limit: self.limit,
                        }));
                    }
                    word = word.concat(&term);
                }
            }
        }
    }

    fn parse_term(&mut self, depth: usize) -> Result<GroupWord, WordParseError> {
        let atom = self.parse_atom(depth)?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exponent = self.parse_integer()?;
            let raw = atom.len().saturating_mul(exponent.unsigned_abs() as usize);
            if raw > self.limit {
                return Err(self.err_here(WordParseErrorKind::LengthLimit { limit: self.limit }));
            }
            Ok(atom.pow(exponent))
        } else {
            Ok(atom)
        }
    }

    fn parse_atom(&mut self, depth: usize) -> Result<GroupWord, WordParseError> {
        if depth > MAX_NESTING {
            return Err(self.err_here(WordParseErrorKind::NestingTooDeep));
        }
        match self.peek() {
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = self.parse_sequence(depth + 1, b")],")?;
                if self.peek() != Some(b')') {
                    return Err(WordParseError {
                        kind: WordParseErrorKind::UnbalancedBracket,
                        position: open,
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'[') => {
                let open = self.pos;
                self.pos += 1;
                let left = self.parse_sequence(depth + 1, b",)]")?;
                if self.peek() != Some(b',') {
                    return Err(WordParseError {
                        kind: WordParseErrorKind::UnbalancedBracket,
                        position: open,
                    });
                }
                self.pos += 1;
                let right = self.parse_sequence(depth + 1, b"]),")?;
                if self.peek() != Some(b']') {
                    return Err(WordParseError {
                        kind: WordParseErrorKind::UnbalancedBracket,
                        position: open,
                    });
                }
                self.pos += 1;
                Ok(left.commutator(&right))
            }
            Some(c) if c == b'_' || c.is_ascii_alphabetic() => self.parse_name(),
            Some(c) => Err(self.err_here(WordParseErrorKind::UnexpectedCharacter(c as char))),
            None => Err(self.err_here(WordParseErrorKind::UnexpectedCharacter(' '))),
        }
    }

    fn parse_name(&mut self) -> Result<GroupWord, WordParseError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c == b'_' || c.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        match self.names.get(name) {
            Some(&index) => Ok(GroupWord::generator(index)),
            None => Err(WordParseError {
                kind: WordParseErrorKind::UnknownGenerator(name.to_owned()),
                position: start,
            }),
        }
    }

    fn parse_integer(&mut self) -> Result<i64, WordParseError> {
        let start = self.pos;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(WordParseError {
                kind: WordParseErrorKind::MalformedExponent,
                position: start,
            });
        }
        let digits = core::str::from_utf8(&self.bytes[digits_start..self.pos]).expect("ascii");
        let magnitude: i64 = digits.parse().map_err(|_| WordParseError {
            kind: WordParseErrorKind::MalformedExponent,
            position: start,
        })?;
        Ok(if negative { -magnitude } else { magnitude })
    }
}

/// True iff `name` is a legal generator identifier.
pub fn is_valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c == '_' || c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c == '_' || c.is_ascii_alphanumeric())
}
