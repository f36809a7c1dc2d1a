//! C ABI over the library. Elements travel as opaque handles, every
//! fallible call returns a status code, and the most recent failure message
//! is kept per thread for `liepoly_last_error_message`.
//!
//! Ownership rules for C callers: element handles returned through out
//! parameters are released with `liepoly_element_free`, strings with
//! `liepoly_string_free`. Out parameters are written only when the call
//! returns `LIEPOLY_STATUS_OK`. Panics never unwind across the boundary;
//! they surface as `LIEPOLY_STATUS_INTERNAL_PANIC`.

use std::any::Any;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use liepoly::enveloping::{bracket_u, mul_u, normal_order_yx, UElement};
use liepoly::freealg::{rat, NCPoly};
use liepoly::freelie::{bracketing, expand, lie_bracket, to_basis, LieElement};
use liepoly::parse::{parse_element, parse_free_word, ParsedElement};
use liepoly::presentation::{phi, reduce_mod_a, trace_json, verify_presentation};
use liepoly::words::{enumerate_regular, is_regular, regular_factoring};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LiepolyStatus {
    Ok = 0,
    /// The input text does not follow the element or word grammar.
    ParseError = 1,
    /// The inputs parse but the operation is not defined on them.
    DomainError = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// An internal invariant failed; the library state is still usable.
    InternalPanic = 4,
}

/// Opaque handle to an element of the free associative algebra over {u, v},
/// of the free Lie algebra in basis coordinates, or of the enveloping
/// algebra U.
pub struct LiepolyElement {
    inner: ParsedElement,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Parse(String),
    Domain(String),
    Null(&'static str),
}

impl Failure {
    fn status(&self) -> LiepolyStatus {
        match self {
            Failure::Parse(_) => LiepolyStatus::ParseError,
            Failure::Domain(_) => LiepolyStatus::DomainError,
            Failure::Null(_) => LiepolyStatus::NullPointer,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse(m) | Failure::Domain(m) => m.clone(),
            Failure::Null(name) => format!("null pointer passed for `{name}`"),
        }
    }
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).expect("message has no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn panic_text(payload: &(dyn Any + Send)) -> &str {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s
    } else {
        "unknown panic"
    }
}

/// Run a fallible body, translating failures and panics into status codes
/// and recording their message in the per-thread error slot.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> LiepolyStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LiepolyStatus::Ok,
        Ok(Err(failure)) => {
            set_error(&failure.message());
            failure.status()
        }
        Err(payload) => {
            set_error(&format!("internal panic: {}", panic_text(payload.as_ref())));
            LiepolyStatus::InternalPanic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure::Null(name));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure::Parse(format!("`{name}` is not valid UTF-8")))
}

unsafe fn read_elem<'a>(
    ptr: *const LiepolyElement,
    name: &'static str,
) -> Result<&'a ParsedElement, Failure> {
    if ptr.is_null() {
        return Err(Failure::Null(name));
    }
    Ok(&(*ptr).inner)
}

fn write_elem(
    out: *mut *mut LiepolyElement,
    name: &'static str,
    value: ParsedElement,
) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    unsafe { *out = Box::into_raw(Box::new(LiepolyElement { inner: value })) };
    Ok(())
}

fn write_string(out: *mut *mut c_char, name: &'static str, value: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    let text = CString::new(value).expect("rendered text has no interior nul");
    unsafe { *out = text.into_raw() };
    Ok(())
}

/// Message of the most recent failure on this thread, or null if every call
/// so far succeeded. The pointer stays valid until the next failing call on
/// the same thread; do not free it.
#[no_mangle]
pub extern "C" fn liepoly_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn liepoly_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned through a `char**` out parameter. Null is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn liepoly_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse an element in the shared text grammar: sums of rational multiples
/// of bracketed regular words like `[vu^3]`, plain words over {u, v}, or
/// words over {x, y} taken in U.
#[no_mangle]
pub unsafe extern "C" fn liepoly_parse(
    input: *const c_char,
    out: *mut *mut LiepolyElement,
) -> LiepolyStatus {
    guarded(|| {
        let text = read_str(input, "input")?;
        let elem = parse_element(text).map_err(|e| Failure::Parse(e.to_string()))?;
        write_elem(out, "out", elem)
    })
}

/// Deep copy of an element handle.
#[no_mangle]
pub unsafe extern "C" fn liepoly_element_clone(
    elem: *const LiepolyElement,
    out: *mut *mut LiepolyElement,
) -> LiepolyStatus {
    guarded(|| {
        let e = read_elem(elem, "elem")?;
        write_elem(out, "out", e.clone())
    })
}

/// Release an element handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn liepoly_element_free(elem: *mut LiepolyElement) {
    if !elem.is_null() {
        drop(Box::from_raw(elem));
    }
}

/// Side of the algebra the element lives on: a static string `"free"`,
/// `"lie"`, or `"env"`, or null when the handle is null. Do not free it.
#[no_mangle]
pub unsafe extern "C" fn liepoly_element_kind(elem: *const LiepolyElement) -> *const c_char {
    if elem.is_null() {
        return ptr::null();
    }
    match (*elem).inner {
        ParsedElement::Free(_) => c"free".as_ptr(),
        ParsedElement::Lie(_) => c"lie".as_ptr(),
        ParsedElement::Env(_) => c"env".as_ptr(),
    }
}

/// Canonical text form of an element; parsing it back reproduces the
/// element.
#[no_mangle]
pub unsafe extern "C" fn liepoly_element_to_string(
    elem: *const LiepolyElement,
    out: *mut *mut c_char,
) -> LiepolyStatus {
    guarded(|| {
        let e = read_elem(elem, "elem")?;
        write_string(out, "out", e.to_string())
    })
}

/// JSON form of an element: an object with `kind`, `display`, and a `terms`
/// array pairing each word or monomial with its coefficient as a `p/q`
/// string.
#[no_mangle]
pub unsafe extern "C" fn liepoly_element_to_json(
    elem: *const LiepolyElement,
    out: *mut *mut c_char,
) -> LiepolyStatus {
    guarded(|| {
        let e = read_elem(elem, "elem")?;
        write_string(out, "out", e.to_json().to_string())
    })
}

fn sides(a: &ParsedElement, b: &ParsedElement) -> String {
    format!("{} vs {}", a.kind(), b.kind())
}

fn add_elements(a: &ParsedElement, b: &ParsedElement) -> Result<ParsedElement, Failure> {
    use ParsedElement as P;
    match (a, b) {
        (P::Free(x), P::Free(y)) => Ok(P::Free(x + y)),
        (P::Lie(x), P::Lie(y)) => Ok(P::Lie(x + y)),
        (P::Env(x), P::Env(y)) => Ok(P::Env(x + y)),
        _ => {
            // One operand may be a plain scalar; fold it into the other
            // side. U has a unit, the Lie side only absorbs zero.
            let (scalar, other) =
                if a.scalar().is_some() { (a.scalar(), b) } else { (b.scalar(), a) };
            match (scalar, other) {
                (Some(c), P::Env(f)) => Ok(P::Env(f + &UElement::one().scale(&c))),
                (Some(c), P::Lie(f)) if c == rat(0) => Ok(P::Lie(f.clone())),
                (Some(_), P::Lie(_)) => {
                    Err(Failure::Domain("a Lie element cannot carry a constant term".into()))
                }
                _ => Err(Failure::Domain(format!(
                    "cannot add elements of different sides ({})",
                    sides(a, b)
                ))),
            }
        }
    }
}

fn mul_elements(a: &ParsedElement, b: &ParsedElement) -> Result<ParsedElement, Failure> {
    use ParsedElement as P;
    match (a, b) {
        (P::Free(x), P::Free(y)) => Ok(P::Free(x * y)),
        (P::Env(x), P::Env(y)) => Ok(P::Env(mul_u(x, y))),
        (P::Free(_), P::Env(f)) | (P::Env(f), P::Free(_)) => {
            let scalar = if a.scalar().is_some() { a.scalar() } else { b.scalar() };
            match scalar {
                Some(c) => Ok(P::Env(f.scale(&c))),
                None => Err(Failure::Domain(format!(
                    "cannot multiply elements of different sides ({})",
                    sides(a, b)
                ))),
            }
        }
        (P::Free(_), P::Lie(f)) | (P::Lie(f), P::Free(_)) => {
            let scalar = if a.scalar().is_some() { a.scalar() } else { b.scalar() };
            match scalar {
                Some(c) => Ok(P::Lie(f.scale(&c))),
                None => Err(Failure::Domain(
                    "products are not defined on Lie basis elements; use `bracket`".into(),
                )),
            }
        }
        (P::Lie(_), _) | (_, P::Lie(_)) => Err(Failure::Domain(
            "products are not defined on Lie basis elements; use `bracket`".into(),
        )),
    }
}

fn bracket_elements(a: &ParsedElement, b: &ParsedElement) -> Result<ParsedElement, Failure> {
    use ParsedElement as P;
    match (a, b) {
        (P::Free(x), P::Free(y)) => Ok(P::Free(x.commutator(y))),
        (P::Lie(x), P::Lie(y)) => Ok(P::Lie(lie_bracket(x, y))),
        (P::Env(x), P::Env(y)) => Ok(P::Env(bracket_u(x, y))),
        _ => {
            // A scalar brackets to zero on whichever side the other operand
            // lives.
            let other = if a.scalar().is_some() {
                b
            } else if b.scalar().is_some() {
                a
            } else {
                return Err(Failure::Domain(format!(
                    "cannot bracket elements of different sides ({})",
                    sides(a, b)
                )));
            };
            Ok(match other {
                P::Free(_) => P::Free(NCPoly::zero()),
                P::Lie(_) => P::Lie(LieElement::zero()),
                P::Env(_) => P::Env(UElement::zero()),
            })
        }
    }
}

/// Sum of two elements. Both must live on the same side, except that a
/// plain scalar folds into an element of U through the unit.
#[no_mangle]
pub unsafe extern "C" fn liepoly_add(
    a: *const LiepolyElement,
    b: *const LiepolyElement,
    out: *mut *mut LiepolyElement,
) -> LiepolyStatus {
    guarded(|| {
        let value = add_elements(read_elem(a, "a")?, read_elem(b, "b")?)?;
        write_elem(out, "out", value)
    })
}

/// Product of two elements: free algebra product, product in U, or a scalar
/// multiple. Lie basis elements have no product; use `liepoly_bracket`.
#[no_mangle]
pub unsafe extern "C" fn liepoly_mul(
    a: *const LiepolyElement,
    b: *const LiepolyElement,
    out: *mut *mut LiepolyElement,
) -> LiepolyStatus {
    guarded(|| {
        let value = mul_elements(read_elem(a, "a")?, read_elem(b, "b")?)?;
        write_elem(out, "out", value)
    })
}

/// Lie bracket on whichever side both elements live: the commutator in the
/// free algebra or in U, and the basis-coordinate bracket on the Lie side.
#[no_mangle]
pub unsafe extern "C" fn liepoly_bracket(
    a: *const LiepolyElement,
    b: *const LiepolyElement,
    out: *mut *mut LiepolyElement,
) -> LiepolyStatus {
    guarded(|| {
        let value = bracket_elements(read_elem(a, "a")?, read_elem(b, "b")?)?;
        write_elem(out, "out", value)
    })
}

fn as_lie(e: &ParsedElement) -> Result<LieElement, Failure> {
    match e {
        ParsedElement::Lie(f) => Ok(f.clone()),
        ParsedElement::Free(p) => to_basis(p).map_err(|e| Failure::Domain(e.to_string())),
        ParsedElement::Env(_) => Err(Failure::Domain("expected a Lie element over {u, v}".into())),
    }
}

/// Rewrite a Lie element of the free algebra in basis coordinates. Elements
/// already in basis coordinates pass through unchanged.
#[no_mangle]
pub unsafe extern "C" fn liepoly_to_basis(
    elem: *const LiepolyElement,
    out: *mut *mut LiepolyElement,
) -> LiepolyStatus {
    guarded(|| {
        let f = as_lie(read_elem(elem, "elem")?)?;
        write_elem(out, "out", ParsedElement::Lie(f))
    })
}

/// Image of a Lie element under the homomorphism u -> xy, v -> x^2 y
/// into U.
#[no_mangle]
pub unsafe extern "C" fn liepoly_phi(
    elem: *const LiepolyElement,
    out: *mut *mut LiepolyElement,
) -> LiepolyStatus {
    guarded(|| {
        let f = as_lie(read_elem(elem, "elem")?)?;
        write_elem(out, "out", ParsedElement::Env(phi(&f)))
    })
}

/// Normal form of a Lie element modulo the relation ideal, supported on u,
/// v, and the words v u^n. When `out_trace_json` is not null it receives a
/// JSON array of the rewrite steps, each `{rule, target, replacement}`.
#[no_mangle]
pub unsafe extern "C" fn liepoly_reduce(
    elem: *const LiepolyElement,
    out_normal_form: *mut *mut LiepolyElement,
    out_trace_json: *mut *mut c_char,
) -> LiepolyStatus {
    guarded(|| {
        if out_normal_form.is_null() {
            return Err(Failure::Null("out_normal_form"));
        }
        let f = as_lie(read_elem(elem, "elem")?)?;
        let (nf, trace) = reduce_mod_a(&f);
        if !out_trace_json.is_null() {
            write_string(out_trace_json, "out_trace_json", trace_json(&trace).to_string())?;
        }
        write_elem(out_normal_form, "out_normal_form", ParsedElement::Lie(nf.to_lie_element()))
    })
}

/// Whether a word over {u, v}, written in the text grammar, is a regular
/// basis word.
#[no_mangle]
pub unsafe extern "C" fn liepoly_word_is_regular(
    word: *const c_char,
    out: *mut bool,
) -> LiepolyStatus {
    guarded(|| {
        let w = parse_free_word(read_str(word, "word")?)
            .map_err(|e| Failure::Parse(e.to_string()))?;
        let regular = is_regular(&w).map_err(|e| Failure::Domain(e.to_string()))?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = regular;
        Ok(())
    })
}

/// Standard factoring of a regular word of length at least two: the unique
/// split whose right factor is the longest regular proper ending.
#[no_mangle]
pub unsafe extern "C" fn liepoly_word_factor(
    word: *const c_char,
    out_left: *mut *mut c_char,
    out_right: *mut *mut c_char,
) -> LiepolyStatus {
    guarded(|| {
        if out_left.is_null() || out_right.is_null() {
            return Err(Failure::Null(if out_left.is_null() { "out_left" } else { "out_right" }));
        }
        let w = parse_free_word(read_str(word, "word")?)
            .map_err(|e| Failure::Parse(e.to_string()))?;
        let (left, right) = regular_factoring(&w).map_err(|e| Failure::Domain(e.to_string()))?;
        write_string(out_left, "out_left", left.to_string())?;
        write_string(out_right, "out_right", right.to_string())
    })
}

/// Expansion of the bracketing of a regular word in the free algebra. When
/// `out_bracketing` is not null it receives the nested bracket text, for
/// example `[v,[v,u]]`.
#[no_mangle]
pub unsafe extern "C" fn liepoly_word_expand(
    word: *const c_char,
    out: *mut *mut LiepolyElement,
    out_bracketing: *mut *mut c_char,
) -> LiepolyStatus {
    guarded(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let w = parse_free_word(read_str(word, "word")?)
            .map_err(|e| Failure::Parse(e.to_string()))?;
        let tree = bracketing(&w).map_err(|e| Failure::Domain(e.to_string()))?;
        let poly = expand(&w).map_err(|e| Failure::Domain(e.to_string()))?;
        if !out_bracketing.is_null() {
            write_string(out_bracketing, "out_bracketing", tree.to_string())?;
        }
        write_elem(out, "out", ParsedElement::Free(poly))
    })
}

/// Normally ordered form of y^l x^m in U.
#[no_mangle]
pub unsafe extern "C" fn liepoly_normal_order(
    l: u32,
    m: u32,
    out: *mut *mut LiepolyElement,
) -> LiepolyStatus {
    guarded(|| write_elem(out, "out", ParsedElement::Env(normal_order_yx(l, m))))
}

/// All regular words up to the given length, shortest first, as a JSON
/// object `{max_len, count, words}`.
#[no_mangle]
pub unsafe extern "C" fn liepoly_regular_words(
    max_len: usize,
    out_json: *mut *mut c_char,
) -> LiepolyStatus {
    guarded(|| {
        let words: Vec<String> = enumerate_regular(max_len).iter().map(|w| w.to_string()).collect();
        let value = serde_json::json!({
            "max_len": max_len,
            "count": words.len(),
            "words": words,
        });
        write_string(out_json, "out_json", value.to_string())
    })
}

/// Run the constructive presentation checks word by word up to `max_len`
/// and on `samples` seeded random elements of the relation ideal. Writes
/// whether every check passed to `out_passed`; when `out_report_json` is
/// not null it receives the full report as JSON.
#[no_mangle]
pub unsafe extern "C" fn liepoly_verify(
    max_len: usize,
    samples: usize,
    seed: u64,
    out_passed: *mut bool,
    out_report_json: *mut *mut c_char,
) -> LiepolyStatus {
    guarded(|| {
        if out_passed.is_null() {
            return Err(Failure::Null("out_passed"));
        }
        let report = verify_presentation(max_len, samples, seed);
        if !out_report_json.is_null() {
            let text = serde_json::to_string(&report)
                .expect("report serializes");
            write_string(out_report_json, "out_report_json", text)?;
        }
        *out_passed = report.passed();
        Ok(())
    })
}
