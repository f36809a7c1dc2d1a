//! The free associative algebra on {u, v} with rational coefficients:
//! finitely supported maps from words to nonzero rationals, with the
//! concatenation product. The empty word is the unit.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::words::Word;

pub type Rational = num_rational::BigRational;

/// Exact rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Exact rational p/q.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Print without a denominator when the value is an integer.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shared display logic for sparse sums: signs between terms, coefficient 1
/// suppressed except on the unit atom.
pub(crate) fn fmt_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (String, &'a Rational)>,
{
    let mut first = true;
    let mut empty = true;
    for (atom, coeff) in terms {
        empty = false;
        let mag = coeff.abs();
        if first {
            if coeff.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if coeff.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if mag.is_one() && atom != "1" {
            write!(f, "{atom}")?;
        } else if atom == "1" {
            write!(f, "{}", fmt_rational(&mag))?;
        } else {
            write!(f, "{}*{}", fmt_rational(&mag), atom)?;
        }
    }
    if empty {
        write!(f, "0")?;
    }
    Ok(())
}

/// A noncommutative polynomial in u and v. Zero coefficients are never
/// stored, so structural equality is coefficientwise equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Rational>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::monomial(Word::empty())
    }

    pub fn monomial(w: Word) -> Self {
        NCPoly::term(w, rat(1))
    }

    pub fn term(w: Word, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, k)| (w.clone(), k * c)).collect(),
        }
    }

    /// The greatest supported word in the (length, lex) order; within a
    /// homogeneous component this is the lex-greatest word.
    pub fn max_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    /// fg - gf.
    pub fn commutator(&self, other: &NCPoly) -> NCPoly {
        self * other - other * self
    }

    /// Split by word length, ascending. Only nonzero components appear.
    pub fn homogeneous_components(&self) -> BTreeMap<usize, NCPoly> {
        let mut out: BTreeMap<usize, NCPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.len())
                .or_default()
                .add_term(w.clone(), c.clone());
        }
        out
    }
}

impl FromIterator<(Word, Rational)> for NCPoly {
    fn from_iter<T: IntoIterator<Item = (Word, Rational)>>(iter: T) -> Self {
        let mut p = NCPoly::zero();
        for (w, c) in iter {
            p.add_term(w, c);
        }
        p
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_value_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use forward_value_ops;

forward_value_ops!(NCPoly);

/// Terms as JSON objects, one `{"word", "coeff"}` pair per term.
pub fn nc_terms_json(f: &NCPoly) -> Vec<serde_json::Value> {
    f.iter()
        .map(|(w, c)| {
            serde_json::json!({
                "word": w.to_string(),
                "coeff": fmt_rational(c),
            })
        })
        .collect()
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().map(|(w, c)| (w.to_string(), c)))
    }
}
