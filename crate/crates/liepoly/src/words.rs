//! Words over the two-letter alphabet {u, v} and the regular (Shirshov) words
//! among them.
//!
//! The letter order is v > u. Words are compared by concatenation: `w1` is
//! wreath-greater than `w2` when `w1 w2 > w2 w1` lexicographically. A word is
//! regular when it beats the rotation `b a` for every proper split `w = a b`.
//! Every regular word of length >= 2 factors uniquely as `c d` where `d` is
//! its longest regular proper ending; that factoring drives the bracketing of
//! the free Lie algebra in `freelie`.

use std::fmt;
use std::str::FromStr;

/// A generator of the free algebra side. The ordering is u < v.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    U,
    V,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::U => 'u',
            Letter::V => 'v',
        }
    }
}

/// Result of comparing two words letter by letter. Words of different length
/// that agree on the shorter one are related by `ProperPrefix` rather than by
/// an order: plain lexicographic comparison does not resolve that case.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LexCmp {
    Less,
    Equal,
    Greater,
    ProperPrefix,
}

/// How a word sits relative to the generating sets used by the presentation:
/// `InD` matches v u^n (n >= 1), `InC` matches v u^m v u^n (m < n).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WordClass {
    Generator,
    InD,
    InC,
    OtherRegular,
    NotRegular,
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum WordError {
    #[error("operation undefined on the empty word")]
    Empty,
    #[error("word `{0}` is not regular")]
    NotRegular(Word),
    #[error("word `{0}` is too short to factor")]
    TooShort(Word),
}

/// A finite word over {u, v}. Ordered by length first, then lexicographically
/// with v > u, which is the canonical term order used by every sparse
/// element type in this crate.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// The word v u^n. For n = 0 this is just v.
    pub fn vun(n: usize) -> Self {
        let mut letters = Vec::with_capacity(n + 1);
        letters.push(Letter::V);
        letters.extend(std::iter::repeat(Letter::U).take(n));
        Word(letters)
    }

    /// The word v u^m v u^n.
    pub fn vum_vun(m: usize, n: usize) -> Self {
        let mut w = Self::vun(m);
        w.0.extend_from_slice(&Self::vun(n).0);
        w
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// If the word is v u^n, return n.
    pub fn as_vun(&self) -> Option<usize> {
        if self.0.first() == Some(&Letter::V) && self.0[1..].iter().all(|&l| l == Letter::U) {
            Some(self.len() - 1)
        } else {
            None
        }
    }

    /// If the word is v u^m v u^n with m < n, return (m, n).
    pub fn as_vum_vun(&self) -> Option<(usize, usize)> {
        if self.0.first() != Some(&Letter::V) {
            return None;
        }
        let second_v = self.0[1..].iter().position(|&l| l == Letter::V)? + 1;
        let m = second_v - 1;
        let rest = &self.0[second_v + 1..];
        if rest.iter().all(|&l| l == Letter::U) {
            let n = rest.len();
            if m < n {
                return Some((m, n));
            }
        }
        None
    }
}

impl fmt::Display for Word {
    /// Runs of three or more equal letters print in caret form (`vu^3` for
    /// vuuu); shorter runs print literally. The empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let letter = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == letter {
                run += 1;
            }
            match run {
                1 => write!(f, "{}", letter.as_char())?,
                2 => write!(f, "{}{}", letter.as_char(), letter.as_char())?,
                _ => write!(f, "{}^{}", letter.as_char(), run)?,
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = crate::parse::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::parse::parse_free_word(s)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Letter-by-letter comparison with v > u, undecided on proper prefixes.
pub fn lex_compare(w1: &Word, w2: &Word) -> LexCmp {
    for (a, b) in w1.letters().iter().zip(w2.letters()) {
        match a.cmp(b) {
            std::cmp::Ordering::Less => return LexCmp::Less,
            std::cmp::Ordering::Greater => return LexCmp::Greater,
            std::cmp::Ordering::Equal => {}
        }
    }
    match w1.len().cmp(&w2.len()) {
        std::cmp::Ordering::Equal => LexCmp::Equal,
        _ => LexCmp::ProperPrefix,
    }
}

/// Whether `w1 w2 > w2 w1` lexicographically. Total on distinct words that do
/// not commute as words; both concatenations have equal length, so the
/// comparison always resolves to Less, Equal, or Greater.
pub fn wreath_greater(w1: &Word, w2: &Word) -> Result<bool, WordError> {
    if w1.is_empty() || w2.is_empty() {
        return Err(WordError::Empty);
    }
    Ok(lex_compare(&w1.concat(w2), &w2.concat(w1)) == LexCmp::Greater)
}

/// A word is regular when for every proper split `w = a b` the word beats the
/// rotation: `w` wreath-greater than `b a`. Single letters are regular.
pub fn is_regular(w: &Word) -> Result<bool, WordError> {
    if w.is_empty() {
        return Err(WordError::Empty);
    }
    let n = w.len();
    for i in 1..n {
        let rotated = w.slice(i..n).concat(&w.slice(0..i));
        // |w| = |rotated|, so the concatenation comparison reduces to a
        // direct comparison unless the words coincide.
        if lex_compare(w, &rotated) != LexCmp::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Split a regular word of length >= 2 as `c d` where `d` is the longest
/// regular proper ending. Both parts are regular and `c` is wreath-greater
/// than `d`; the split is unique.
pub fn regular_factoring(w: &Word) -> Result<(Word, Word), WordError> {
    if w.len() < 2 {
        return Err(WordError::TooShort(w.clone()));
    }
    if !is_regular(w)? {
        return Err(WordError::NotRegular(w.clone()));
    }
    for i in 1..w.len() {
        let d = w.slice(i..w.len());
        if is_regular(&d).expect("nonempty ending") {
            return Ok((w.slice(0..i), d));
        }
    }
    unreachable!("the final letter of a word is a regular ending")
}

/// All regular words of length 1..=max_len, sorted by (length, lex).
pub fn enumerate_regular(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        // Ascending bitmask order with u = 0, v = 1, most significant bit
        // first, is exactly ascending lex order at fixed length.
        for mask in 0u64..(1u64 << len) {
            let letters: Vec<Letter> = (0..len)
                .map(|j| {
                    if mask >> (len - 1 - j) & 1 == 1 {
                        Letter::V
                    } else {
                        Letter::U
                    }
                })
                .collect();
            let w = Word::new(letters);
            if is_regular(&w).expect("nonempty") {
                out.push(w);
            }
        }
    }
    out
}

pub fn classify(w: &Word) -> WordClass {
    if w.len() == 1 {
        return WordClass::Generator;
    }
    if let Some(n) = w.as_vun() {
        if n >= 1 {
            return WordClass::InD;
        }
    }
    if w.as_vum_vun().is_some() {
        return WordClass::InC;
    }
    match is_regular(w) {
        Ok(true) => WordClass::OtherRegular,
        _ => WordClass::NotRegular,
    }
}
