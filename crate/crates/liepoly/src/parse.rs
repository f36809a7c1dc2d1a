//! Text grammar shared by the CLI and the C bindings.
//!
//! Elements are sums of terms `[rational *] atom` where an atom is a bracketed
//! regular word `[vu^3]`, a word over {u, v}, a word over {x, y}, or `1`.
//! Caret powers abbreviate letter runs on both sides, so `vu^3` is vuuu and
//! `x^2*y` is the normally ordered monomial x x y. The side of an expression
//! is inferred from its alphabet; mixing alphabets is an error.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::enveloping::{PbwMonomial, UElement};
use crate::freealg::{NCPoly, Rational};
use crate::freelie::LieElement;
use crate::words::{is_regular, Letter, Word};

/// Parse failure with a 1-based character position for the offending token.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

/// A word over either alphabet, tagged by side.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AnyWord {
    /// Word over {u, v}; the empty word parses from `1`.
    Free(Word),
    /// Word over {x, y}, as written (not normally ordered).
    Env(Vec<crate::enveloping::Generator>),
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
}

impl Scanner {
    fn new(src: &str) -> Self {
        Scanner { chars: src.chars().collect(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    /// 1-based position of the next character.
    fn here(&self) -> usize {
        self.pos + 1
    }

    fn error_here(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.here(), msg.into())
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error_here(format!("unexpected `{c}`"))),
        }
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        let start = self.here();
        let mut digits = String::new();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(self.error_here("expected a number"));
        }
        digits
            .parse()
            .map_err(|_| ParseError::new(start, format!("number `{digits}` out of range")))
    }

    /// `^ n` suffix; defaults to 1 when absent.
    fn power(&mut self) -> Result<u64, ParseError> {
        if self.peek() == Some('^') {
            self.bump();
            self.integer()
        } else {
            Ok(1)
        }
    }

    /// Word over one alphabet starting at the current position. `sep_star`
    /// permits `*` between letters, which the {x, y} monomial form uses.
    /// Each letter occurrence carries the source position of the character
    /// it expands from, so caret powers keep error positions exact.
    fn word_letters(&mut self, sep_star: bool) -> Result<Vec<(char, usize)>, ParseError> {
        let mut letters = Vec::new();
        loop {
            match self.peek() {
                Some(c @ ('u' | 'v' | 'x' | 'y')) => {
                    let at = self.here();
                    self.bump();
                    let count = self.power()?;
                    for _ in 0..count {
                        letters.push((c, at));
                    }
                    if sep_star && self.peek() == Some('*') {
                        // Only consume the star when a letter follows; a
                        // trailing star belongs to the expression level.
                        if matches!(self.chars.get(self.pos + 1), Some('u' | 'v' | 'x' | 'y')) {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        if letters.is_empty() {
            return Err(self.error_here("expected a word"));
        }
        Ok(letters)
    }
}

fn letters_to_any(letters: &[(char, usize)]) -> Result<AnyWord, ParseError> {
    let free = letters.iter().all(|&(c, _)| c == 'u' || c == 'v');
    let env = letters.iter().all(|&(c, _)| c == 'x' || c == 'y');
    if free {
        Ok(AnyWord::Free(Word::new(
            letters
                .iter()
                .map(|&(c, _)| if c == 'v' { Letter::V } else { Letter::U })
                .collect(),
        )))
    } else if env {
        Ok(AnyWord::Env(
            letters
                .iter()
                .map(|&(c, _)| {
                    if c == 'x' {
                        crate::enveloping::Generator::X
                    } else {
                        crate::enveloping::Generator::Y
                    }
                })
                .collect(),
        ))
    } else {
        // Report the first letter that breaks the alphabet of the first one.
        let first_env = matches!(letters[0].0, 'x' | 'y');
        let seen = letters
            .iter()
            .find(|&&(c, _)| matches!(c, 'x' | 'y') != first_env)
            .map(|&(_, at)| at)
            .unwrap_or(letters[0].1);
        Err(ParseError::new(seen, "mixed alphabets in one word"))
    }
}

/// Parse a word over {u, v} or {x, y}; `1` is the empty free word.
pub fn parse_word(input: &str) -> Result<AnyWord, ParseError> {
    let mut sc = Scanner::new(input);
    sc.skip_ws();
    if sc.peek() == Some('1') {
        sc.bump();
        sc.expect_end()?;
        return Ok(AnyWord::Free(Word::empty()));
    }
    if sc.peek().is_none() {
        return Err(sc.error_here("empty input"));
    }
    match sc.peek() {
        Some('u' | 'v' | 'x' | 'y') => {}
        Some(c) => return Err(sc.error_here(format!("unexpected `{c}`"))),
        None => unreachable!(),
    }
    let letters = sc.word_letters(true)?;
    let word = letters_to_any(&letters)?;
    sc.expect_end()?;
    Ok(word)
}

/// Parse a word over {u, v} only.
pub fn parse_free_word(input: &str) -> Result<Word, ParseError> {
    match parse_word(input)? {
        AnyWord::Free(w) => Ok(w),
        AnyWord::Env(_) => Err(ParseError::new(1, "expected a word over {u, v}")),
    }
}

/// An element on one of the three sides, classified by its atoms: bracketed
/// regular words are Lie basis vectors, plain {u, v} words multiply in the
/// free associative algebra, and {x, y} words denote their products in U.
/// Purely numeric input parses as a constant free-algebra element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParsedElement {
    Free(NCPoly),
    Lie(LieElement),
    Env(UElement),
}

impl ParsedElement {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedElement::Free(_) => "free",
            ParsedElement::Lie(_) => "lie",
            ParsedElement::Env(_) => "env",
        }
    }

    /// The value of a constant free-algebra element, if that is what this is.
    pub fn scalar(&self) -> Option<Rational> {
        match self {
            ParsedElement::Free(p) if p.is_zero() => Some(Rational::zero()),
            ParsedElement::Free(p) if p.num_terms() == 1 => {
                let c = p.coeff(&Word::empty());
                (!c.is_zero()).then_some(c)
            }
            _ => None,
        }
    }

    /// Uniform JSON shape across the three sides: an object with `kind`,
    /// `display`, and a `terms` array whose entries pair a word or monomial
    /// with its coefficient rendered as a `p/q` string.
    pub fn to_json(&self) -> serde_json::Value {
        let terms = match self {
            ParsedElement::Free(p) => crate::freealg::nc_terms_json(p),
            ParsedElement::Lie(f) => crate::freelie::lie_terms_json(f),
            ParsedElement::Env(f) => crate::enveloping::u_terms_json(f),
        };
        serde_json::json!({"kind": self.kind(), "display": self.to_string(), "terms": terms})
    }
}

impl fmt::Display for ParsedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParsedElement::Free(p) => p.fmt(f),
            ParsedElement::Lie(e) => e.fmt(f),
            ParsedElement::Env(e) => e.fmt(f),
        }
    }
}

enum Atom {
    /// The unit `1`, or a bare scalar term; carries the term's position.
    Unit(usize),
    FreeWord(Word, usize),
    EnvWord(Vec<crate::enveloping::Generator>, usize),
    LieWord(Word, usize),
}

struct Term {
    coeff: Rational,
    atom: Atom,
}

impl Scanner {
    fn big_integer(&mut self) -> Result<BigInt, ParseError> {
        let mut digits = String::new();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(self.error_here("expected a number"));
        }
        Ok(digits.parse().expect("ascii digits"))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let numer = self.big_integer()?;
        if self.peek() == Some('/') {
            self.bump();
            let at = self.here();
            let denom = self.big_integer()?;
            if denom.is_zero() {
                return Err(ParseError::new(at, "denominator is zero"));
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from_integer(numer))
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                self.bump();
                self.skip_ws();
                let start = self.here();
                let letters = self.word_letters(false)?;
                if let Some(&(_, at)) = letters.iter().find(|&&(c, _)| c == 'x' || c == 'y') {
                    return Err(ParseError::new(at, "expected a word over {u, v} inside brackets"));
                }
                let word = match letters_to_any(&letters)? {
                    AnyWord::Free(w) => w,
                    AnyWord::Env(_) => unreachable!("x and y rejected above"),
                };
                self.skip_ws();
                if self.peek() != Some(']') {
                    return Err(self.error_here("expected `]`"));
                }
                self.bump();
                if !is_regular(&word).expect("nonempty word") {
                    return Err(ParseError::new(
                        start,
                        format!("word `{word}` is not a regular basis word"),
                    ));
                }
                Ok(Atom::LieWord(word, start))
            }
            Some('u' | 'v' | 'x' | 'y') => {
                let start = self.here();
                let letters = self.word_letters(true)?;
                match letters_to_any(&letters)? {
                    AnyWord::Free(w) => Ok(Atom::FreeWord(w, start)),
                    AnyWord::Env(g) => Ok(Atom::EnvWord(g, start)),
                }
            }
            Some('1') => {
                let at = self.here();
                self.bump();
                Ok(Atom::Unit(at))
            }
            Some(c) => Err(self.error_here(format!("unexpected `{c}`"))),
            None => Err(self.error_here("expected a term")),
        }
    }
}

/// Parse a sum of terms `[+|-] [rational [*]] atom` into an element of the
/// side its atoms determine.
pub fn parse_element(input: &str) -> Result<ParsedElement, ParseError> {
    let mut sc = Scanner::new(input);
    sc.skip_ws();
    if sc.peek().is_none() {
        return Err(sc.error_here("empty input"));
    }
    let mut terms: Vec<Term> = Vec::new();
    let mut first = true;
    loop {
        sc.skip_ws();
        let negative = match sc.peek() {
            None if first => unreachable!("empty input rejected above"),
            None => break,
            Some('+') => {
                sc.bump();
                false
            }
            Some('-') => {
                sc.bump();
                true
            }
            Some(_) if first => false,
            Some(c) => return Err(sc.error_here(format!("expected `+` or `-`, found `{c}`"))),
        };
        sc.skip_ws();
        let term_at = sc.here();
        let (coeff, had_coeff) = if sc.peek().is_some_and(|c| c.is_ascii_digit()) {
            (sc.rational()?, true)
        } else {
            (Rational::one(), false)
        };
        let atom = if had_coeff {
            sc.skip_ws();
            if sc.peek() == Some('*') {
                sc.bump();
                sc.atom()?
            } else if matches!(sc.peek(), Some('[' | 'u' | 'v' | 'x' | 'y')) {
                sc.atom()?
            } else {
                Atom::Unit(term_at)
            }
        } else {
            sc.atom()?
        };
        let coeff = if negative { -coeff } else { coeff };
        terms.push(Term { coeff, atom });
        first = false;
    }

    let first_at = |pick: fn(&Atom) -> Option<usize>| terms.iter().find_map(|t| pick(&t.atom));
    let lie_at = first_at(|a| match a {
        Atom::LieWord(_, at) => Some(*at),
        _ => None,
    });
    let free_at = first_at(|a| match a {
        Atom::FreeWord(_, at) => Some(*at),
        _ => None,
    });
    let env_at = first_at(|a| match a {
        Atom::EnvWord(_, at) => Some(*at),
        _ => None,
    });

    if let Some(lie) = lie_at {
        if let Some(other) = free_at.into_iter().chain(env_at).next() {
            return Err(ParseError::new(
                lie.max(other),
                "cannot mix plain words with bracketed basis words",
            ));
        }
        let mut out = LieElement::zero();
        for t in terms {
            match t.atom {
                Atom::LieWord(w, _) => out.add_term(w, t.coeff),
                Atom::Unit(at) => {
                    if !t.coeff.is_zero() {
                        return Err(ParseError::new(at, "a Lie element cannot carry a constant term"));
                    }
                }
                _ => unreachable!("mixing rejected above"),
            }
        }
        return Ok(ParsedElement::Lie(out));
    }
    if let Some(env) = env_at {
        if let Some(free) = free_at {
            return Err(ParseError::new(env.max(free), "mixed alphabets in one element"));
        }
        let mut out = UElement::zero();
        for t in terms {
            match t.atom {
                Atom::EnvWord(g, _) => {
                    for (m, c) in crate::enveloping::word_product(&g).iter() {
                        out.add_term(*m, c * &t.coeff);
                    }
                }
                Atom::Unit(_) => out.add_term(PbwMonomial { k: 0, l: 0 }, t.coeff),
                _ => unreachable!("mixing rejected above"),
            }
        }
        return Ok(ParsedElement::Env(out));
    }
    let mut out = NCPoly::zero();
    for t in terms {
        match t.atom {
            Atom::FreeWord(w, _) => out.add_term(w, t.coeff),
            Atom::Unit(_) => out.add_term(Word::empty(), t.coeff),
            _ => unreachable!("lie and env handled above"),
        }
    }
    Ok(ParsedElement::Free(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_parse() {
        assert_eq!(parse_free_word("vu^2").unwrap().to_string(), "vuu");
        assert_eq!(parse_free_word("vuu").unwrap(), parse_free_word("vu^2").unwrap());
        assert_eq!(parse_free_word("1").unwrap(), Word::empty());
        assert_eq!(parse_free_word("v^2u").unwrap().to_string(), "vvu");
        assert_eq!(parse_free_word(" vu ").unwrap().to_string(), "vu");
    }

    #[test]
    fn word_errors_carry_positions() {
        let err = parse_word("vw").unwrap_err();
        assert_eq!(err.pos, 2);
        let err = parse_word("vx").unwrap_err();
        assert_eq!(err.pos, 2);
        assert!(err.msg.contains("mixed"));
        let err = parse_word("").unwrap_err();
        assert_eq!(err.pos, 1);
        let err = parse_free_word("xy").unwrap_err();
        assert!(err.msg.contains("{u, v}"));
    }

    #[test]
    fn env_words_parse() {
        use crate::enveloping::Generator::{X, Y};
        assert_eq!(parse_word("xy").unwrap(), AnyWord::Env(vec![X, Y]));
        assert_eq!(parse_word("x^2*y").unwrap(), AnyWord::Env(vec![X, X, Y]));
        assert_eq!(parse_word("y^2x").unwrap(), AnyWord::Env(vec![Y, Y, X]));
    }

    #[test]
    fn lie_elements_parse() {
        let e = parse_element("-[vvu] + 1/6*[vu^3]").unwrap();
        assert_eq!(e.kind(), "lie");
        match e {
            ParsedElement::Lie(f) => assert_eq!(f.to_string(), "-[vvu] + 1/6*[vu^3]"),
            _ => panic!("expected a Lie element"),
        }
        assert!(matches!(
            parse_element("0*[vu] + 0").unwrap(),
            ParsedElement::Lie(f) if f.is_zero()
        ));
    }

    #[test]
    fn free_elements_parse() {
        let e = parse_element("uv - vu + 2").unwrap();
        match e {
            ParsedElement::Free(p) => {
                assert_eq!(p.to_string(), "2 + uv - vu");
                assert_eq!(p.num_terms(), 3);
            }
            _ => panic!("expected a free element"),
        }
        assert_eq!(parse_element("3/2").unwrap().scalar(), Some(Rational::new(3.into(), 2.into())));
        assert_eq!(parse_element("vu").unwrap().scalar(), None);
        assert_eq!(parse_element("0").unwrap().scalar(), Some(Rational::zero()));
    }

    #[test]
    fn env_elements_parse() {
        match parse_element("x*y^2 - 2*x*y + x").unwrap() {
            ParsedElement::Env(f) => assert_eq!(f.to_string(), "x*y^2 - 2*x*y + x"),
            _ => panic!("expected an element of U"),
        }
        // Input words are rewritten into normal order.
        match parse_element("yx").unwrap() {
            ParsedElement::Env(f) => assert_eq!(f.to_string(), "x*y - x"),
            _ => panic!("expected an element of U"),
        }
    }

    #[test]
    fn element_errors_carry_positions() {
        let err = parse_element("[uv]").unwrap_err();
        assert_eq!(err.pos, 2);
        assert!(err.msg.contains("not a regular basis word"), "{}", err.msg);
        let err = parse_element("[vu] + vu").unwrap_err();
        assert_eq!(err.pos, 8);
        let err = parse_element("vu + xy").unwrap_err();
        assert_eq!(err.pos, 6);
        let err = parse_element("[vu] + 1").unwrap_err();
        assert_eq!(err.pos, 8);
        assert!(err.msg.contains("constant"), "{}", err.msg);
        let err = parse_element("1/0").unwrap_err();
        assert_eq!(err.pos, 3);
        let err = parse_element("[xy]").unwrap_err();
        assert_eq!(err.pos, 2);
        let err = parse_element("2*").unwrap_err();
        assert_eq!(err.pos, 3);
        let err = parse_element("vu vu").unwrap_err();
        assert_eq!(err.pos, 4);
        let err = parse_element("[vu").unwrap_err();
        assert_eq!(err.pos, 4);
        assert!(parse_element("").is_err());
    }

    #[test]
    fn printing_stabilizes_after_one_normalization() {
        // Parsing an element and printing it may reorder and combine terms,
        // but reparsing the printed form must reproduce it verbatim.
        let inputs = [
            "uv - vu + 2",
            "2 + u - 3*u + uv",
            "-[vu] + 1/6*[vu^3] - [vvu]",
            "[vu] - [vu]",
            "3*x^2*y - y*x + 1/2",
            "yx*yx",
            "-7/3",
            "0",
            "1",
        ];
        let render = |e: &ParsedElement| match e {
            ParsedElement::Free(p) => p.to_string(),
            ParsedElement::Lie(f) => f.to_string(),
            ParsedElement::Env(f) => f.to_string(),
        };
        for input in inputs {
            let once = render(&parse_element(input).unwrap());
            let twice = render(&parse_element(&once).unwrap());
            assert_eq!(once, twice, "printing `{input}` drifted");
        }
    }
}
