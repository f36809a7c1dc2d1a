//! The free Lie algebra on {u, v} in the basis indexed by regular words.
//!
//! Each regular word w carries a bracketing: recursively bracket the two
//! halves of the regular factoring. Expanding a bracketing into the free
//! associative algebra is triangular, with the word itself as the greatest
//! term at coefficient 1, so Lie elements of the free algebra project back
//! onto basis coordinates by eliminating greatest words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::freealg::{fmt_terms, forward_value_ops, rat, NCPoly, Rational};
use crate::words::{
    classify, is_regular, regular_factoring, wreath_greater, Letter, Word, WordClass, WordError,
};

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum LieError {
    #[error("element has a constant term")]
    ConstantTerm,
    #[error("not a Lie element: component has greatest word `{0}`, which is not regular")]
    NotLieElement(Word),
    #[error("word `{0}` is not a generator or a word v u^n")]
    SmallBracketDomain(Word),
}

/// The bracketing of a regular word, e.g. `[v,[v,u]]` for vvu.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BracketTree {
    Leaf(Letter),
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketTree::Leaf(l) => write!(f, "{}", l.as_char()),
            BracketTree::Node(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// Bracket a regular word along its regular factoring.
pub fn bracketing(w: &Word) -> Result<BracketTree, WordError> {
    if w.is_empty() {
        return Err(WordError::Empty);
    }
    if !is_regular(w)? {
        return Err(WordError::NotRegular(w.clone()));
    }
    if w.len() == 1 {
        return Ok(BracketTree::Leaf(w.letters()[0]));
    }
    let (c, d) = regular_factoring(w)?;
    Ok(BracketTree::Node(
        Box::new(bracketing(&c)?),
        Box::new(bracketing(&d)?),
    ))
}

fn expand_cache() -> &'static Mutex<HashMap<Word, Arc<NCPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, Arc<NCPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn expand_arc(w: &Word) -> Arc<NCPoly> {
    if let Some(hit) = expand_cache().lock().unwrap().get(w) {
        return hit.clone();
    }
    let value = if w.len() == 1 {
        NCPoly::monomial(w.clone())
    } else {
        let (c, d) = regular_factoring(w).expect("regular word of length >= 2");
        expand_arc(&c).commutator(&expand_arc(&d))
    };
    let value = Arc::new(value);
    expand_cache()
        .lock()
        .unwrap()
        .entry(w.clone())
        .or_insert(value)
        .clone()
}

/// Expand the bracketing of a regular word in the free associative algebra.
/// Memoized; the cache only ever stores values that equal the uncached
/// computation, so results are independent of call order and thread timing.
pub fn expand(w: &Word) -> Result<NCPoly, WordError> {
    if w.is_empty() {
        return Err(WordError::Empty);
    }
    if !is_regular(w)? {
        return Err(WordError::NotRegular(w.clone()));
    }
    Ok((*expand_arc(w)).clone())
}

/// An element of the free Lie algebra: coordinates on the regular-word basis.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LieElement {
    coords: BTreeMap<Word, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    /// The basis element of a regular word.
    pub fn basis(w: Word) -> Self {
        LieElement::term(w, rat(1))
    }

    pub fn term(w: Word, c: Rational) -> Self {
        assert!(
            is_regular(&w) == Ok(true),
            "basis coordinates must be regular words, got `{w}`"
        );
        let mut coords = BTreeMap::new();
        if !c.is_zero() {
            coords.insert(w, c);
        }
        LieElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.coords.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.coords.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.coords.iter()
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(is_regular(&w) == Ok(true), "non-regular coordinate `{w}`");
        use std::collections::btree_map::Entry;
        match self.coords.entry(w) {
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

    pub fn scale(&self, c: &Rational) -> LieElement {
        if c.is_zero() {
            return LieElement::zero();
        }
        LieElement {
            coords: self.coords.iter().map(|(w, k)| (w.clone(), k * c)).collect(),
        }
    }

    /// The image in the free associative algebra.
    pub fn expand_element(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.coords {
            for (word, k) in expand_arc(w).iter() {
                out.add_term(word.clone(), k * c);
            }
        }
        out
    }
}

impl FromIterator<(Word, Rational)> for LieElement {
    fn from_iter<T: IntoIterator<Item = (Word, Rational)>>(iter: T) -> Self {
        let mut e = LieElement::zero();
        for (w, c) in iter {
            e.add_term(w, c);
        }
        e
    }
}

impl Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (w, c) in &rhs.coords {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (w, c) in &rhs.coords {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        LieElement {
            coords: self.coords.iter().map(|(w, c)| (w.clone(), -c.clone())).collect(),
        }
    }
}

/// The Lie bracket, so that `&f * &g` is [f, g].
impl Mul for &LieElement {
    type Output = LieElement;
    fn mul(self, rhs: &LieElement) -> LieElement {
        lie_bracket(self, rhs)
    }
}

forward_value_ops!(LieElement);

/// Coordinates as JSON objects, one `{"word", "coeff"}` pair per basis word.
pub fn lie_terms_json(f: &LieElement) -> Vec<serde_json::Value> {
    f.iter()
        .map(|(w, c)| {
            serde_json::json!({
                "word": w.to_string(),
                "coeff": crate::freealg::fmt_rational(c),
            })
        })
        .collect()
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.coords.iter().map(|(w, c)| (format!("[{w}]"), c)))
    }
}

/// Project a Lie element of the free algebra onto basis coordinates by
/// repeatedly stripping the greatest word of each homogeneous component.
/// Fails with `NotLieElement` when a greatest word is not regular, which is
/// exactly when the input is outside the Lie subalgebra.
pub fn to_basis(p: &NCPoly) -> Result<LieElement, LieError> {
    let mut out = LieElement::zero();
    for (len, component) in p.homogeneous_components() {
        if len == 0 {
            return Err(LieError::ConstantTerm);
        }
        let mut residual = component;
        while let Some(g) = residual.max_word().cloned() {
            if is_regular(&g) != Ok(true) {
                return Err(LieError::NotLieElement(g));
            }
            let c = residual.coeff(&g);
            residual = &residual - &expand_arc(&g).scale(&c);
            out.add_term(g.clone(), c);
            // Triangularity guarantees strict descent; treat any violation
            // as a non-Lie input rather than looping.
            if let Some(m) = residual.max_word() {
                if *m >= g {
                    return Err(LieError::NotLieElement(m.clone()));
                }
            }
        }
    }
    Ok(out)
}

fn bracket_cache() -> &'static Mutex<HashMap<(Word, Word), Arc<LieElement>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Word, Word), Arc<LieElement>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// [basis(a), basis(b)] for regular words with a wreath-greater than b.
///
/// When the concatenation's regular factoring is exactly (a, b) the bracket
/// is the basis element of ab. Otherwise a splits as (a1, a2) and the Jacobi
/// identity rewrites the bracket through strictly smaller inner brackets:
/// [[a1, a2], b] = [a1, [a2, b]] - [a2, [a1, b]].
fn bracket_basis(a: &Word, b: &Word, depth: u32) -> Arc<LieElement> {
    assert!(depth < 4096, "bracket rewriting recursed too deep");
    let key = (a.clone(), b.clone());
    if let Some(hit) = bracket_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    let ab = a.concat(b);
    debug_assert_eq!(is_regular(&ab), Ok(true));
    let (c, d) = regular_factoring(&ab).expect("product of ordered regular words");
    let value = if c == *a && d == *b {
        LieElement::basis(ab)
    } else {
        let (a1, a2) = regular_factoring(a)
            .expect("a single letter always gives the standard factoring");
        let inner1 = bracket_basis_signed(&a2, b, depth + 1);
        let inner2 = bracket_basis_signed(&a1, b, depth + 1);
        let mut out = LieElement::zero();
        for (x, cx) in inner1.iter() {
            for (z, cz) in bracket_basis_signed(&a1, x, depth + 1).iter() {
                out.add_term(z.clone(), cx * cz);
            }
        }
        for (y, cy) in inner2.iter() {
            for (z, cz) in bracket_basis_signed(&a2, y, depth + 1).iter() {
                out.add_term(z.clone(), -(cy * cz));
            }
        }
        out
    };
    let value = Arc::new(value);
    bracket_cache()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert(value)
        .clone()
}

fn bracket_basis_signed(a: &Word, b: &Word, depth: u32) -> LieElement {
    if a == b {
        return LieElement::zero();
    }
    if wreath_greater(a, b).expect("basis words are nonempty") {
        (*bracket_basis(a, b, depth)).clone()
    } else {
        -&*bracket_basis(b, a, depth)
    }
}

/// The Lie bracket in basis coordinates. Agrees with expanding both sides in
/// the free algebra, taking the commutator there, and projecting back.
pub fn lie_bracket(f: &LieElement, g: &LieElement) -> LieElement {
    let mut out = LieElement::zero();
    for (a, ca) in f.iter() {
        for (b, cb) in g.iter() {
            let prod = bracket_basis_signed(a, b, 0);
            for (z, cz) in prod.iter() {
                out.add_term(z.clone(), ca * cb * cz);
            }
        }
    }
    out
}

/// Closed form for [basis(w1), basis(w2)] when both words are generators or
/// words v u^n: the bracket is epsilon times a single basis word, with
/// epsilon in {-1, 0, 1}. By convention the zero case reports the word vu.
pub fn bracket_small(w1: &Word, w2: &Word) -> Result<(i8, Word), LieError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Small {
        GenU,
        /// v or v u^n, tracking n (v itself is n = 0).
        VPow(usize),
    }
    let small = |w: &Word| -> Result<Small, LieError> {
        match classify(w) {
            WordClass::Generator if w.letters() == [Letter::U] => Ok(Small::GenU),
            WordClass::Generator | WordClass::InD => {
                Ok(Small::VPow(w.as_vun().expect("v or v u^n")))
            }
            _ => Err(LieError::SmallBracketDomain(w.clone())),
        }
    };
    let (s1, s2) = (small(w1)?, small(w2)?);
    let convention = Word::vun(1);
    Ok(match (s1, s2) {
        (Small::GenU, Small::GenU) => (0, convention),
        (Small::GenU, Small::VPow(0)) => (-1, convention),
        (Small::VPow(0), Small::GenU) => (1, convention),
        (Small::GenU, Small::VPow(n)) => (-1, Word::vun(n + 1)),
        (Small::VPow(n), Small::GenU) => (1, Word::vun(n + 1)),
        (Small::VPow(n1), Small::VPow(n2)) => match n1.cmp(&n2) {
            std::cmp::Ordering::Equal => (0, convention),
            std::cmp::Ordering::Less => (1, w1.concat(w2)),
            std::cmp::Ordering::Greater => (-1, w2.concat(w1)),
        },
    })
}

/// ((ad v)^(m-1) compose (-ad u)^n)(v) for m, n >= 1. Equals the basis
/// element of the word v^m u^n.
pub fn ad_identity_vmun(m: usize, n: usize) -> LieElement {
    assert!(m >= 1 && n >= 1, "both exponents must be positive");
    let u = LieElement::basis(Word::letter(Letter::U));
    let v = LieElement::basis(Word::letter(Letter::V));
    let mut f = v.clone();
    for _ in 0..n {
        // (-ad u)(f) = [f, u]
        f = lie_bracket(&f, &u);
    }
    for _ in 0..(m - 1) {
        f = lie_bracket(&v, &f);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::enumerate_regular;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn mono(s: &str) -> NCPoly {
        NCPoly::monomial(w(s))
    }

    #[test]
    fn bracketing_trees() {
        assert_eq!(bracketing(&w("vuu")).unwrap().to_string(), "[[v,u],u]");
        assert_eq!(bracketing(&w("vvu")).unwrap().to_string(), "[v,[v,u]]");
        assert_eq!(bracketing(&w("v")).unwrap().to_string(), "v");
        assert_eq!(
            bracketing(&w("vuuvuuu")).unwrap().to_string(),
            "[[[v,u],u],[[[v,u],u],u]]"
        );
        assert_eq!(bracketing(&w("uv")), Err(WordError::NotRegular(w("uv"))));
    }

    #[test]
    fn expand_small_words() {
        assert_eq!(expand(&w("vu")).unwrap(), mono("vu") - mono("uv"));
        assert_eq!(
            expand(&w("vvu")).unwrap(),
            mono("vvu") - mono("vuv").scale(&rat(2)) + mono("uvv")
        );
        assert_eq!(expand(&w("u")).unwrap(), mono("u"));
        assert_eq!(expand(&w("vuvu")), Err(WordError::NotRegular(w("vuvu"))));
    }

    #[test]
    fn expansion_is_triangular() {
        for word in enumerate_regular(10) {
            let p = expand(&word).unwrap();
            assert_eq!(p.max_word(), Some(&word), "greatest word of {word}");
            assert_eq!(p.coeff(&word), rat(1), "leading coefficient of {word}");
            for (supported, _) in p.iter() {
                assert_eq!(supported.len(), word.len(), "homogeneous support of {word}");
            }
        }
    }

    #[test]
    fn to_basis_cases() {
        assert_eq!(to_basis(&mono("uv")), Err(LieError::NotLieElement(w("uv"))));
        assert_eq!(
            to_basis(&(mono("uv") - mono("vu"))).unwrap(),
            -LieElement::basis(w("vu"))
        );
        assert_eq!(to_basis(&NCPoly::one()), Err(LieError::ConstantTerm));
        assert_eq!(to_basis(&NCPoly::zero()).unwrap(), LieElement::zero());
        // uv + vu is not a Lie element: after stripping vu the residual
        // still has uv as its greatest word.
        assert!(to_basis(&(mono("uv") + mono("vu"))).is_err());
    }

    #[test]
    fn to_basis_round_trip() {
        for word in enumerate_regular(8) {
            let back = to_basis(&expand(&word).unwrap()).unwrap();
            assert_eq!(back, LieElement::basis(word.clone()), "{word}");
        }
    }

    #[test]
    fn bracket_agrees_with_free_algebra_route() {
        // Dual route: the basis-level bracket against expand, commutator,
        // and projection, over every ordered pair at small total length.
        let words = enumerate_regular(6);
        for a in &words {
            for b in &words {
                if a.len() + b.len() > 7 {
                    continue;
                }
                let fast = lie_bracket(&LieElement::basis(a.clone()), &LieElement::basis(b.clone()));
                let oracle =
                    to_basis(&expand(a).unwrap().commutator(&expand(b).unwrap())).unwrap();
                assert_eq!(fast, oracle, "[{a}, {b}]");
            }
        }
    }

    #[test]
    fn bracket_small_table() {
        let table = [
            ("vu", "vuu", 1, "vuvuu"),
            ("vuu", "vu", -1, "vuvuu"),
            ("u", "vu", -1, "vuu"),
            ("vu", "u", 1, "vuu"),
            ("v", "vu", 1, "vvu"),
            ("vu", "v", -1, "vvu"),
            ("v", "u", 1, "vu"),
            ("u", "v", -1, "vu"),
            ("u", "u", 0, "vu"),
            ("vuu", "vuu", 0, "vu"),
            ("v", "vu^4", 1, "vvu^4"),
        ];
        for (a, b, eps, word) in table {
            assert_eq!(
                bracket_small(&w(a), &w(b)).unwrap(),
                (eps, w(word)),
                "[{a}, {b}]"
            );
        }
        assert_eq!(
            bracket_small(&w("vvu"), &w("u")),
            Err(LieError::SmallBracketDomain(w("vvu")))
        );
        assert_eq!(
            bracket_small(&w("uv"), &w("u")),
            Err(LieError::SmallBracketDomain(w("uv")))
        );
    }

    #[test]
    fn bracket_small_matches_lie_bracket() {
        let mut domain: Vec<Word> = vec![w("u"), w("v")];
        domain.extend((1..=6).map(Word::vun));
        for a in &domain {
            for b in &domain {
                let (eps, word) = bracket_small(a, b).unwrap();
                let expect = LieElement::basis(word).scale(&rat(eps as i64));
                let got = lie_bracket(&LieElement::basis(a.clone()), &LieElement::basis(b.clone()));
                assert_eq!(got, expect, "[{a}, {b}]");
            }
        }
    }

    #[test]
    fn ad_identity_matches_basis_words() {
        for m in 1..=4usize {
            for n in 1..=4usize {
                let mut letters = vec![Letter::V; m];
                letters.extend(vec![Letter::U; n]);
                let word = Word::new(letters);
                assert_eq!(
                    ad_identity_vmun(m, n),
                    LieElement::basis(word.clone()),
                    "v^{m} u^{n}"
                );
            }
        }
    }

    #[test]
    fn c_and_d_recursion_identities() {
        let basis = |word: Word| LieElement::basis(word);
        let u = basis(w("u"));
        // [basis(vu^m), basis(vu^n)] = basis(vu^m vu^n) for m < n.
        for m in 0..4 {
            for n in (m + 1)..6 {
                assert_eq!(
                    lie_bracket(&basis(Word::vun(m)), &basis(Word::vun(n))),
                    basis(Word::vum_vun(m, n)),
                    "m={m} n={n}"
                );
            }
        }
        // basis(v^2 u^(n+1)) = [basis(v^2 u^n), u] - basis(vu vu^n), n >= 2.
        for n in 2..6 {
            assert_eq!(
                lie_bracket(&basis(Word::vum_vun(0, n)), &u) - basis(Word::vum_vun(1, n)),
                basis(Word::vum_vun(0, n + 1)),
                "n={n}"
            );
        }
        // basis(vu^m vu^(n+1)) = [basis(vu^m vu^n), u] - basis(vu^(m+1) vu^n)
        // for m <= n - 2.
        for n in 2..6 {
            for m in 0..=(n - 2) {
                assert_eq!(
                    lie_bracket(&basis(Word::vum_vun(m, n)), &u) - basis(Word::vum_vun(m + 1, n)),
                    basis(Word::vum_vun(m, n + 1)),
                    "m={m} n={n}"
                );
            }
        }
        // Adjacent case has no correction: basis(vu^(n-1) vu^(n+1)) =
        // [basis(vu^(n-1) vu^n), u].
        for n in 2..6 {
            assert_eq!(
                lie_bracket(&basis(Word::vum_vun(n - 1, n)), &u),
                basis(Word::vum_vun(n - 1, n + 1)),
                "n={n}"
            );
        }
    }

    #[test]
    fn display_forms() {
        let e = LieElement::basis(w("vvu"))
            + LieElement::term(w("vuuu"), crate::freealg::ratio(1, 6));
        assert_eq!(e.to_string(), "[vvu] + 1/6*[vu^3]");
        assert_eq!(LieElement::zero().to_string(), "0");
    }

    mod laws {
        use super::*;
        use proptest::prelude::*;

        fn arb_lie() -> impl Strategy<Value = LieElement> {
            let words = enumerate_regular(5);
            proptest::collection::vec((0..words.len(), -3i64..=3), 0..3).prop_map(move |picks| {
                picks
                    .into_iter()
                    .map(|(i, c)| (words[i].clone(), rat(c)))
                    .collect()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn bracket_skew(f in arb_lie(), g in arb_lie()) {
                prop_assert_eq!(lie_bracket(&f, &g), -lie_bracket(&g, &f));
            }

            #[test]
            fn bracket_jacobi(f in arb_lie(), g in arb_lie(), h in arb_lie()) {
                let total = lie_bracket(&lie_bracket(&f, &g), &h)
                    + lie_bracket(&lie_bracket(&g, &h), &f)
                    + lie_bracket(&lie_bracket(&h, &f), &g);
                prop_assert!(total.is_zero());
            }

            #[test]
            fn bracket_matches_expansion(f in arb_lie(), g in arb_lie()) {
                let direct = lie_bracket(&f, &g);
                let via_algebra =
                    to_basis(&f.expand_element().commutator(&g.expand_element())).unwrap();
                prop_assert_eq!(direct, via_algebra);
            }
        }
    }
}
