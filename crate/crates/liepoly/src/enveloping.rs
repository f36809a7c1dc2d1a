//! The algebra U generated by x and y subject to xy - yx = x, with the
//! normally ordered monomials x^k y^l as a linear basis.
//!
//! The defining relation rewrites yx as xy - x; iterating it gives the closed
//! form for a product of basis monomials, and everything else here (brackets,
//! iterated ad, the subspace tests, the filtration by y-degree) is built on
//! that product.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::freealg::{fmt_rational, fmt_terms, forward_value_ops, rat, Rational};

/// A generator of U: x or y, subject to xy - yx = x.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    X,
    Y,
}

impl Generator {
    pub fn as_char(self) -> char {
        match self {
            Generator::X => 'x',
            Generator::Y => 'y',
        }
    }
}

/// A normally ordered monomial x^k y^l. Ordered by (l, k) so that the last
/// key of a sparse element has the top y-degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PbwMonomial {
    pub k: u32,
    pub l: u32,
}

impl PbwMonomial {
    pub fn new(k: u32, l: u32) -> Self {
        PbwMonomial { k, l }
    }

    pub fn one() -> Self {
        PbwMonomial { k: 0, l: 0 }
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.l, self.k).cmp(&(other.l, other.k))
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.l) {
            (0, 0) => write!(f, "1"),
            (k, 0) => write_power(f, 'x', k),
            (0, l) => write_power(f, 'y', l),
            (k, l) => {
                write_power(f, 'x', k)?;
                write!(f, "*")?;
                write_power(f, 'y', l)
            }
        }
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, c: char, p: u32) -> fmt::Result {
    if p == 1 {
        write!(f, "{c}")
    } else {
        write!(f, "{c}^{p}")
    }
}

/// Degree within the filtration of U by y-degree; the zero element sits
/// below every finite degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum FiltrationDegree {
    Bottom,
    Finite(u32),
}

/// An element of U in the normally ordered basis. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UElement {
    terms: BTreeMap<PbwMonomial, Rational>,
}

impl UElement {
    pub fn zero() -> Self {
        UElement::default()
    }

    pub fn one() -> Self {
        UElement::monomial(PbwMonomial::one())
    }

    pub fn monomial(m: PbwMonomial) -> Self {
        UElement::term(m, rat(1))
    }

    /// x^k y^l as an element.
    pub fn xy_pow(k: u32, l: u32) -> Self {
        UElement::monomial(PbwMonomial::new(k, l))
    }

    pub fn term(m: PbwMonomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        UElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&PbwMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn scale(&self, c: &Rational) -> UElement {
        if c.is_zero() {
            return UElement::zero();
        }
        UElement {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }
}

impl FromIterator<(PbwMonomial, Rational)> for UElement {
    fn from_iter<T: IntoIterator<Item = (PbwMonomial, Rational)>>(iter: T) -> Self {
        let mut e = UElement::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }
}

impl Add for &UElement {
    type Output = UElement;
    fn add(self, rhs: &UElement) -> UElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &UElement {
    type Output = UElement;
    fn sub(self, rhs: &UElement) -> UElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Neg for &UElement {
    type Output = UElement;
    fn neg(self) -> UElement {
        UElement {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul for &UElement {
    type Output = UElement;
    fn mul(self, rhs: &UElement) -> UElement {
        mul_u(self, rhs)
    }
}

forward_value_ops!(UElement);

impl fmt::Display for UElement {
    /// Terms print from the top of the filtration down: descending y-degree,
    /// then descending x-degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().rev().map(|(m, c)| (m.to_string(), c)))
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Move y^l across x^m: y^l x^m = sum over t of C(l, t) (-m)^(l - t) x^m y^t.
pub fn normal_order_yx(l: u32, m: u32) -> UElement {
    let mut out = UElement::zero();
    for t in 0..=l {
        let coeff = binomial(l, t) * (-BigInt::from(m)).pow(l - t);
        out.add_term(PbwMonomial::new(m, t), Rational::from_integer(coeff));
    }
    out
}

/// Product of two basis elements: x^k y^l x^m y^n expands through the normal
/// ordering of y^l across x^m.
pub fn mul_u(f: &UElement, g: &UElement) -> UElement {
    let mut out = UElement::zero();
    for (a, ca) in f.iter() {
        for (b, cb) in g.iter() {
            let c = ca * cb;
            for t in 0..=a.l {
                let coeff = binomial(a.l, t) * (-BigInt::from(b.k)).pow(a.l - t);
                out.add_term(
                    PbwMonomial::new(a.k + b.k, t + b.l),
                    &c * Rational::from_integer(coeff),
                );
            }
        }
    }
    out
}

/// fg - gf in U.
pub fn bracket_u(f: &UElement, g: &UElement) -> UElement {
    &mul_u(f, g) - &mul_u(g, f)
}

/// (ad a)^n applied to b: bracket with a, n times.
pub fn ad_pow(a: &UElement, n: u32, b: &UElement) -> UElement {
    let mut out = b.clone();
    for _ in 0..n {
        out = bracket_u(a, &out);
    }
    out
}

/// Normal ordering by term rewriting on words over {x, y}: replace some
/// occurrence of yx by xy - x until none remain. The rewriting is confluent,
/// so the position choice cannot change the result; this implementation
/// always takes the leftmost occurrence and exists as an independent check
/// on the closed-form product.
pub fn rewrite_naive(word: &[Generator]) -> UElement {
    rewrite_with(word, |_| 0)
}

/// Rewriting engine with an explicit position chooser: `pick(n)` selects
/// among the n occurrences of yx in the term currently being rewritten.
/// Exposed to tests to witness confluence by randomizing the choice.
pub(crate) fn rewrite_with(word: &[Generator], mut pick: impl FnMut(usize) -> usize) -> UElement {
    let mut pending: BTreeMap<Vec<Generator>, Rational> = BTreeMap::new();
    pending.insert(word.to_vec(), rat(1));
    let mut done = UElement::zero();
    // Both successors of a rewrite are lexicographically smaller (a Y turns
    // into an X either way), so popping the greatest pending word processes
    // every word at most once.
    while let Some((w, c)) = pending.pop_last() {
        let positions: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&i| w[i] == Generator::Y && w[i + 1] == Generator::X)
            .collect();
        if positions.is_empty() {
            // Normally ordered: all x's precede all y's.
            let k = w.iter().filter(|&&g| g == Generator::X).count() as u32;
            let l = w.len() as u32 - k;
            done.add_term(PbwMonomial::new(k, l), c);
            continue;
        }
        let i = positions[pick(positions.len()) % positions.len()];
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        let mut shortened = w.clone();
        shortened.remove(i + 1);
        shortened[i] = Generator::X;
        for (next, delta) in [(swapped, c.clone()), (shortened, -c)] {
            match pending.entry(next) {
                Entry::Occupied(mut o) => {
                    *o.get_mut() += delta;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
                Entry::Vacant(v) => {
                    v.insert(delta);
                }
            }
        }
    }
    done
}

/// The product of generators named by a word over {x, y}, as an element of
/// U. Agrees with `rewrite_naive` on every word.
pub fn word_product(word: &[Generator]) -> UElement {
    word.iter().fold(UElement::one(), |acc, g| {
        let gen = match g {
            Generator::X => UElement::xy_pow(1, 0),
            Generator::Y => UElement::xy_pow(0, 1),
        };
        mul_u(&acc, &gen)
    })
}

/// Split into the degree-one part (the span of x and y) and the rest.
pub fn decompose_l_gamma(f: &UElement) -> (UElement, UElement) {
    let mut linear = UElement::zero();
    let mut gamma = UElement::zero();
    for (m, c) in f.iter() {
        if m.k + m.l == 1 {
            linear.add_term(*m, c.clone());
        } else {
            gamma.add_term(*m, c.clone());
        }
    }
    (linear, gamma)
}

/// Whether every monomial is x^k y with k >= 1.
pub fn in_r(f: &UElement) -> bool {
    f.iter().all(|(m, _)| m.l == 1 && m.k >= 1)
}

/// Whether every monomial is either a power of x or x^k y with k >= 1.
pub fn in_fx_plus_r(f: &UElement) -> bool {
    f.iter().all(|(m, _)| m.l == 0 || (m.l == 1 && m.k >= 1))
}

/// The least n with f in the span of monomials of y-degree <= n; Bottom for
/// the zero element.
pub fn filtration_degree(f: &UElement) -> FiltrationDegree {
    match f.terms.last_key_value() {
        None => FiltrationDegree::Bottom,
        Some((m, _)) => FiltrationDegree::Finite(m.l),
    }
}

impl fmt::Display for FiltrationDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationDegree::Bottom => write!(f, "bottom"),
            FiltrationDegree::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// Render as JSON-ready term list: [{"monomial": "x^2*y", "coeff": "-1/6"}].
pub fn u_terms_json(f: &UElement) -> Vec<serde_json::Value> {
    f.iter()
        .rev()
        .map(|(m, c)| {
            serde_json::json!({
                "monomial": m.to_string(),
                "coeff": fmt_rational(c),
            })
        })
        .collect()
}
