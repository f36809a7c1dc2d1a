//! The presented Lie subalgebra of U spanned by the elements x^(n+2) y.
//!
//! The map phi sends u to xy and v to x^2 y; it carries the basis word v u^n
//! to n! x^(n+2) y. Its kernel is the ideal generated by the relation
//! elements alpha_n, and reduction modulo that ideal rewrites any Lie element
//! onto the span of u, v, and the words v u^n with an auditable step trace.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::enveloping::{bracket_u, UElement};
use crate::freealg::{fmt_rational, rat, Rational};
use crate::freelie::{bracket_small, lie_bracket, LieElement};
use crate::words::{classify, enumerate_regular, is_regular, regular_factoring, Letter, Word,
    WordClass, WordError};

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum PresentationError {
    #[error("relation index must be at least 1")]
    IndexZero,
}

pub fn factorial(n: usize) -> BigInt {
    let mut out = BigInt::one();
    for k in 2..=n {
        out *= BigInt::from(k);
    }
    out
}

/// a_n = n! (n-1)! / (2n+1)!.
pub fn a_coeff(n: usize) -> Result<Rational, PresentationError> {
    if n == 0 {
        return Err(PresentationError::IndexZero);
    }
    Ok(Rational::new(
        factorial(n) * factorial(n - 1),
        factorial(2 * n + 1),
    ))
}

/// The n-th relation element: basis(v u^(n-1) v u^n) + a_n basis(v u^(2n+1)).
/// Every one of these lies in the kernel of phi.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaRelation {
    pub n: usize,
    pub a_n: Rational,
    pub element: LieElement,
}

pub fn alpha(n: usize) -> Result<AlphaRelation, PresentationError> {
    let a_n = a_coeff(n)?;
    let mut element = LieElement::basis(Word::vum_vun(n - 1, n));
    element.add_term(Word::vun(2 * n + 1), a_n.clone());
    Ok(AlphaRelation { n, a_n, element })
}

fn eval_cache() -> &'static Mutex<HashMap<Word, Arc<UElement>>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, Arc<UElement>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Image of a basis word along its bracketing: letters map to their
/// generator images and a factored word maps to the commutator of its legs'
/// images. Agrees with substituting into the full free-algebra expansion
/// (the tests check that), at a fraction of the cost. Memoized.
fn eval_regular_arc(w: &Word) -> Arc<UElement> {
    if let Some(hit) = eval_cache().lock().unwrap().get(w) {
        return hit.clone();
    }
    let out = match w.letters() {
        [Letter::U] => UElement::xy_pow(1, 1),
        [Letter::V] => UElement::xy_pow(2, 1),
        _ => {
            let (c, d) = regular_factoring(w).expect("regular and length >= 2");
            bracket_u(&eval_regular_arc(&c), &eval_regular_arc(&d))
        }
    };
    let out = Arc::new(out);
    eval_cache()
        .lock()
        .unwrap()
        .entry(w.clone())
        .or_insert(out)
        .clone()
}

/// phi of a single basis word.
pub fn eval_regular(w: &Word) -> Result<UElement, WordError> {
    if w.is_empty() {
        return Err(WordError::Empty);
    }
    if !is_regular(w)? {
        return Err(WordError::NotRegular(w.clone()));
    }
    Ok((*eval_regular_arc(w)).clone())
}

/// The Lie homomorphism into U determined by u -> xy, v -> x^2 y.
pub fn phi(f: &LieElement) -> UElement {
    let mut out = UElement::zero();
    for (w, c) in f.iter() {
        for (m, k) in eval_regular_arc(w).iter() {
            out.add_term(*m, k * c);
        }
    }
    out
}

/// Whether phi kills the element.
pub fn in_kernel(f: &LieElement) -> bool {
    phi(f).is_zero()
}

/// Which rewriting justified a reduction step.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionRule {
    /// Substitute through a relation element alpha_n.
    DefiningRelation,
    /// Bracket the previous column word with u; no correction term.
    UStep,
    /// Bracket the previous column word with u and subtract the
    /// shifted word.
    UStepCorrected,
    /// The leading v^2 variant of the corrected step.
    VSquaredStep,
    /// Recurse through the regular factoring of the word.
    Factor,
    /// Factor recursion whose cross brackets expand bilinearly.
    Bilinear,
}

impl ReductionRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionRule::DefiningRelation => "defining-relation",
            ReductionRule::UStep => "u-step",
            ReductionRule::UStepCorrected => "u-step-corrected",
            ReductionRule::VSquaredStep => "v-squared-step",
            ReductionRule::Factor => "factor",
            ReductionRule::Bilinear => "bilinear",
        }
    }
}

impl fmt::Display for ReductionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// One rewrite: wherever the current element has a coordinate on `target`,
/// replace that coordinate with the same multiple of `replacement`. Each
/// step is a congruence modulo the relation ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionStep {
    pub rule: ReductionRule,
    pub target: Word,
    pub replacement: LieElement,
}

/// Ordered log of the rewrites behind a reduction. Replaying the steps from
/// the original input reproduces the normal form exactly.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn replay(&self, input: &LieElement) -> LieElement {
        let mut current = input.clone();
        for step in &self.steps {
            let c = current.coeff(&step.target);
            if c.is_zero() {
                continue;
            }
            current.add_term(step.target.clone(), -c.clone());
            for (w, k) in step.replacement.iter() {
                current.add_term(w.clone(), k * &c);
            }
        }
        current
    }
}

/// JSON array with one `{rule, target, replacement}` object per step.
pub fn trace_json(trace: &ReductionTrace) -> serde_json::Value {
    let steps: Vec<serde_json::Value> = trace
        .steps
        .iter()
        .map(|s| {
            serde_json::json!({
                "rule": s.rule.as_str(),
                "target": s.target.to_string(),
                "replacement": crate::parse::ParsedElement::Lie(s.replacement.clone()).to_json(),
            })
        })
        .collect();
    serde_json::Value::Array(steps)
}

/// Words that reduction leaves alone: generators and v u^n.
fn is_normal_word(w: &Word) -> bool {
    matches!(classify(w), WordClass::Generator | WordClass::InD)
}

/// [e, u] for an element supported on normal words; closed under the small
/// bracket table, so the result is supported on normal words again.
fn bracket_nf_with_u(e: &LieElement) -> LieElement {
    let u = Word::letter(Letter::U);
    let mut out = LieElement::zero();
    for (w, c) in e.iter() {
        let (eps, z) = bracket_small(w, &u).expect("normal words stay in the small domain");
        if eps != 0 {
            out.add_term(z, c * rat(eps as i64));
        }
    }
    out
}

fn c_rule(m: usize, n: usize) -> ReductionRule {
    if m + 1 == n {
        ReductionRule::DefiningRelation
    } else if m + 2 == n {
        ReductionRule::UStep
    } else if m == 0 {
        ReductionRule::VSquaredStep
    } else {
        ReductionRule::UStepCorrected
    }
}

fn reduce_cache() -> &'static Mutex<HashMap<Word, Arc<LieElement>>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, Arc<LieElement>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Normal form of a single basis word modulo the relation ideal, supported
/// on normal words. Memoized.
fn reduce_word(w: &Word) -> Arc<LieElement> {
    if let Some(hit) = reduce_cache().lock().unwrap().get(w) {
        return hit.clone();
    }
    let value = match classify(w) {
        WordClass::Generator | WordClass::InD => LieElement::basis(w.clone()),
        WordClass::InC => {
            let (m, n) = w.as_vum_vun().expect("classified as a two-column word");
            reduce_c_word(m, n)
        }
        WordClass::OtherRegular => {
            // The word is the bracket of its factoring legs; reduce each leg,
            // cross the normal forms through the small bracket table, and
            // reduce the surfaced two-column words.
            let (c, d) = regular_factoring(w).expect("regular and length >= 2");
            let left = reduce_word(&c);
            let right = reduce_word(&d);
            let mut out = LieElement::zero();
            for (x, cx) in left.iter() {
                for (y, cy) in right.iter() {
                    let (eps, z) = bracket_small(x, y).expect("normal words");
                    if eps != 0 {
                        let coeff = cx * cy * rat(eps as i64);
                        for (t, k) in reduce_word(&z).iter() {
                            out.add_term(t.clone(), k * &coeff);
                        }
                    }
                }
            }
            out
        }
        WordClass::NotRegular => unreachable!("basis coordinates are regular"),
    };
    let value = Arc::new(value);
    reduce_cache()
        .lock()
        .unwrap()
        .entry(w.clone())
        .or_insert(value)
        .clone()
}

/// Normal form of basis(v u^m v u^n), m < n, by descent on n.
fn reduce_c_word(m: usize, n: usize) -> LieElement {
    if m + 1 == n {
        // The relation element rewrites the word directly.
        let a_n = a_coeff(n).expect("n >= 1");
        return LieElement::term(Word::vun(2 * n + 1), -a_n);
    }
    if m + 2 == n {
        // Bracketing the adjacent-column word with u raises the second
        // exponent with no correction term.
        return bracket_nf_with_u(&reduce_word(&Word::vum_vun(m, n - 1)));
    }
    // General descent: bracket the (m, n-1) word with u and correct by the
    // (m+1, n-1) word. The leading v^2 case only differs in its rule tag.
    let main = bracket_nf_with_u(&reduce_word(&Word::vum_vun(m, n - 1)));
    let correction = reduce_word(&Word::vum_vun(m + 1, n - 1));
    &main - &*correction
}

/// Append the steps that reduce `w`, derivations of subwords first. Steps
/// for words already emitted are repeated only as single rewrites when they
/// resurface inside a factor expansion.
fn emit_steps(w: &Word, visited: &mut HashSet<Word>, steps: &mut Vec<ReductionStep>) {
    if is_normal_word(w) || !visited.insert(w.clone()) {
        return;
    }
    match classify(w) {
        WordClass::InC => {
            let (m, n) = w.as_vum_vun().expect("two-column word");
            if m + 1 == n {
                // No subwords; the replacement is the relation rewrite.
            } else if m + 2 == n {
                emit_steps(&Word::vum_vun(m, n - 1), visited, steps);
            } else {
                emit_steps(&Word::vum_vun(m, n - 1), visited, steps);
                emit_steps(&Word::vum_vun(m + 1, n - 1), visited, steps);
            }
            push_c_step(w, m, n, steps);
        }
        WordClass::OtherRegular => {
            let (c, d) = regular_factoring(w).expect("regular and length >= 2");
            emit_steps(&c, visited, steps);
            emit_steps(&d, visited, steps);
            let left = reduce_word(&c);
            let right = reduce_word(&d);
            let mut replacement = LieElement::zero();
            let mut surfaced: Vec<Word> = Vec::new();
            for (x, cx) in left.iter() {
                for (y, cy) in right.iter() {
                    let (eps, z) = bracket_small(x, y).expect("normal words");
                    if eps != 0 {
                        if classify(&z) == WordClass::InC && !surfaced.contains(&z) {
                            surfaced.push(z.clone());
                        }
                        replacement.add_term(z, cx * cy * rat(eps as i64));
                    }
                }
            }
            let rule = if left.num_terms() * right.num_terms() > 1 {
                ReductionRule::Bilinear
            } else {
                ReductionRule::Factor
            };
            steps.push(ReductionStep { rule, target: w.clone(), replacement });
            surfaced.sort();
            for z in surfaced {
                if visited.contains(&z) {
                    // Already derived earlier; repeat the single rewrite so
                    // the replayed element still clears the resurfaced word.
                    let (m, n) = z.as_vum_vun().expect("two-column word");
                    push_c_step(&z, m, n, steps);
                } else {
                    emit_steps(&z, visited, steps);
                }
            }
        }
        _ => unreachable!("normal words return early"),
    }
}

fn push_c_step(w: &Word, m: usize, n: usize, steps: &mut Vec<ReductionStep>) {
    steps.push(ReductionStep {
        rule: c_rule(m, n),
        target: w.clone(),
        replacement: (*reduce_word(w)).clone(),
    });
}

/// Coordinates of an element on the normal words: u, v, and the tail map
/// n -> coefficient of basis(v u^n).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NormalForm {
    pub coeff_u: Rational,
    pub coeff_v: Rational,
    pub tail: BTreeMap<usize, Rational>,
}

impl NormalForm {
    pub fn from_element(e: &LieElement) -> NormalForm {
        let mut nf = NormalForm {
            coeff_u: Rational::zero(),
            coeff_v: Rational::zero(),
            tail: BTreeMap::new(),
        };
        for (w, c) in e.iter() {
            if w.letters() == [Letter::U] {
                nf.coeff_u = c.clone();
            } else if w.letters() == [Letter::V] {
                nf.coeff_v = c.clone();
            } else {
                let n = w.as_vun().expect("normal form supported on normal words");
                nf.tail.insert(n, c.clone());
            }
        }
        nf
    }

    pub fn to_lie_element(&self) -> LieElement {
        let mut out = LieElement::zero();
        out.add_term(Word::letter(Letter::U), self.coeff_u.clone());
        out.add_term(Word::letter(Letter::V), self.coeff_v.clone());
        for (n, c) in &self.tail {
            out.add_term(Word::vun(*n), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeff_u.is_zero() && self.coeff_v.is_zero() && self.tail.values().all(Zero::is_zero)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_lie_element())
    }
}

/// Rewrite an element onto the normal words modulo the relation ideal,
/// together with the step trace. Coordinates are processed in (length, lex)
/// order, so the result and the trace are deterministic.
pub fn reduce_mod_a(f: &LieElement) -> (NormalForm, ReductionTrace) {
    let mut nf = LieElement::zero();
    for (w, c) in f.iter() {
        for (t, k) in reduce_word(w).iter() {
            nf.add_term(t.clone(), k * c);
        }
    }
    let mut steps = Vec::new();
    let mut visited = HashSet::new();
    for (w, _) in f.iter() {
        emit_steps(w, &mut visited, &mut steps);
    }
    (NormalForm::from_element(&nf), ReductionTrace { steps })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub witness: String,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Timings {
    pub image_agreement_ms: u128,
    pub kernel_membership_ms: u128,
    pub ideal_sampling_ms: u128,
    pub total_ms: u128,
}

/// Outcome of `verify_presentation`. Failures are entries in
/// `counterexamples`, not errors.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VerificationReport {
    pub max_len: usize,
    pub samples: usize,
    pub seed: u64,
    pub words_checked: usize,
    pub image_agreements: usize,
    pub kernel_memberships: usize,
    pub ideal_samples_reduced_to_zero: usize,
    pub counterexamples: Vec<Counterexample>,
    pub timings: Timings,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "image agreement: {}/{} words up to length {}",
            self.image_agreements, self.words_checked, self.max_len
        )?;
        writeln!(
            f,
            "kernel membership: {}/{} residuals vanish under phi",
            self.kernel_memberships, self.words_checked
        )?;
        writeln!(
            f,
            "ideal sampling: {}/{} seeded elements reduce to zero (seed {})",
            self.ideal_samples_reduced_to_zero, self.samples, self.seed
        )?;
        writeln!(f, "counterexamples: {}", self.counterexamples.len())?;
        for ce in &self.counterexamples {
            writeln!(f, "counterexample [{}] {}: {}", ce.check, ce.witness, ce.detail)?;
        }
        write!(
            f,
            "result: {} ({} ms)",
            if self.passed() { "pass" } else { "FAIL" },
            self.timings.total_ms
        )
    }
}

/// Check the presentation constructively over every regular word up to
/// `max_len`: (a) reduction preserves the image under phi, (b) the residual
/// of each word against its normal form lies in the kernel, (c) seeded
/// random elements of the relation ideal reduce to zero.
pub fn verify_presentation(max_len: usize, samples: usize, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let words = enumerate_regular(max_len);
    let mut report = VerificationReport {
        max_len,
        samples,
        seed,
        words_checked: words.len(),
        image_agreements: 0,
        kernel_memberships: 0,
        ideal_samples_reduced_to_zero: 0,
        counterexamples: Vec::new(),
        timings: Timings::default(),
    };

    let phase = Instant::now();
    let mut normal_forms = Vec::with_capacity(words.len());
    for w in &words {
        let basis = LieElement::basis(w.clone());
        let (nf, _) = reduce_mod_a(&basis);
        let image = phi(&basis);
        let reduced_image = phi(&nf.to_lie_element());
        if image == reduced_image {
            report.image_agreements += 1;
        } else {
            report.counterexamples.push(Counterexample {
                check: "image-agreement".into(),
                witness: w.to_string(),
                detail: format!(
                    "phi(basis) = {image}, phi(normal form) = {reduced_image}"
                ),
            });
        }
        normal_forms.push(nf);
    }
    report.timings.image_agreement_ms = phase.elapsed().as_millis();

    let phase = Instant::now();
    for (w, nf) in words.iter().zip(&normal_forms) {
        let residual = &LieElement::basis(w.clone()) - &nf.to_lie_element();
        if in_kernel(&residual) {
            report.kernel_memberships += 1;
        } else {
            report.counterexamples.push(Counterexample {
                check: "kernel-membership".into(),
                witness: w.to_string(),
                detail: format!("phi(basis - normal form) = {}", phi(&residual)),
            });
        }
    }
    report.timings.kernel_membership_ms = phase.elapsed().as_millis();

    let phase = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let max_bracket_len = max_len.saturating_sub(3);
    let bracket_words: Vec<Word> = words
        .iter()
        .filter(|w| w.len() <= max_bracket_len)
        .cloned()
        .collect();
    for index in 0..samples {
        let mut f = LieElement::zero();
        let mut description = Vec::new();
        for _ in 0..rng.gen_range(1..=3usize) {
            let n = rng.gen_range(1..=max_len.max(1));
            let relation = alpha(n).expect("n >= 1").element;
            let scalar = {
                let c = rng.gen_range(-9i64..=9);
                rat(if c == 0 { 1 } else { c })
            };
            if !bracket_words.is_empty() && rng.gen_bool(0.7) {
                let r = &bracket_words[rng.gen_range(0..bracket_words.len())];
                let term = lie_bracket(&LieElement::basis(r.clone()), &relation);
                f = &f + &term.scale(&scalar);
                description.push(format!("{}*[basis({r}), alpha_{n}]", fmt_rational(&scalar)));
            } else {
                f = &f + &relation.scale(&scalar);
                description.push(format!("{}*alpha_{n}", fmt_rational(&scalar)));
            }
        }
        let (nf, _) = reduce_mod_a(&f);
        if nf.is_zero() {
            report.ideal_samples_reduced_to_zero += 1;
        } else {
            report.counterexamples.push(Counterexample {
                check: "ideal-sample".into(),
                witness: format!("sample {index}: {}", description.join(" + ")),
                detail: format!("normal form {nf}"),
            });
        }
    }
    report.timings.ideal_sampling_ms = phase.elapsed().as_millis();
    report.timings.total_ms = start.elapsed().as_millis();
    report
}
