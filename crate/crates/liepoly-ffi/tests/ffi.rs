//! Drives the C ABI from Rust the way a C caller would: through raw
//! pointers, status codes, and the per-thread error message.

use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use liepoly_ffi::*;

fn parse_ok(input: &str) -> *mut LiepolyElement {
    let text = CString::new(input).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { liepoly_parse(text.as_ptr(), &mut out) };
    assert_eq!(status, LiepolyStatus::Ok, "parsing `{input}`");
    assert!(!out.is_null());
    out
}

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { liepoly_string_free(s) };
    text
}

fn text_of(elem: *const LiepolyElement) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { liepoly_element_to_string(elem, &mut s) }, LiepolyStatus::Ok);
    take_string(s)
}

fn kind_of(elem: *const LiepolyElement) -> &'static str {
    let k = unsafe { liepoly_element_kind(elem) };
    assert!(!k.is_null());
    unsafe { CStr::from_ptr(k) }.to_str().unwrap()
}

fn last_error() -> String {
    let msg = liepoly_last_error_message();
    assert!(!msg.is_null(), "a failing call should leave a message");
    unsafe { CStr::from_ptr(msg) }.to_str().unwrap().to_owned()
}

fn free_elem(elem: *mut LiepolyElement) {
    unsafe { liepoly_element_free(elem) };
}

#[test]
fn parse_kind_and_text_round_trip() {
    let cases = [
        ("uv - vu + 2", "free", "2 + uv - vu"),
        ("-[vu] + 1/6*[vu^3]", "lie", "-[vu] + 1/6*[vu^3]"),
        ("yx", "env", "x*y - x"),
    ];
    for (input, kind, display) in cases {
        let e = parse_ok(input);
        assert_eq!(kind_of(e), kind);
        assert_eq!(text_of(e), display);
        let reparsed = parse_ok(&text_of(e));
        assert_eq!(text_of(reparsed), display);
        free_elem(reparsed);
        free_elem(e);
    }
}

#[test]
fn clone_is_independent_of_the_original() {
    let e = parse_ok("[vu] + [vvu]");
    let mut copy = ptr::null_mut();
    assert_eq!(unsafe { liepoly_element_clone(e, &mut copy) }, LiepolyStatus::Ok);
    free_elem(e);
    assert_eq!(text_of(copy), "[vu] + [vvu]");
    free_elem(copy);
}

#[test]
fn json_form_carries_kind_display_and_terms() {
    let e = parse_ok("2*[vu]");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { liepoly_element_to_json(e, &mut s) }, LiepolyStatus::Ok);
    let value: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(value["kind"], "lie");
    assert_eq!(value["display"], "2*[vu]");
    assert_eq!(value["terms"][0]["word"], "vu");
    assert_eq!(value["terms"][0]["coeff"], "2");
    free_elem(e);
}

#[test]
fn parse_errors_set_the_status_and_message() {
    let text = CString::new("[uv]").unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { liepoly_parse(text.as_ptr(), &mut out) };
    assert_eq!(status, LiepolyStatus::ParseError);
    assert!(out.is_null());
    let msg = last_error();
    assert!(msg.contains("position 2"), "{msg}");
    assert!(msg.contains("not a regular basis word"), "{msg}");
}

#[test]
fn null_arguments_are_rejected_not_dereferenced() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { liepoly_parse(ptr::null(), &mut out) }, LiepolyStatus::NullPointer);
    assert!(last_error().contains("input"));
    let e = parse_ok("[vu]");
    assert_eq!(
        unsafe { liepoly_element_to_string(e, ptr::null_mut()) },
        LiepolyStatus::NullPointer
    );
    assert!(unsafe { liepoly_element_kind(ptr::null()) }.is_null());
    free_elem(e);
    // Free functions accept null without complaint.
    unsafe { liepoly_element_free(ptr::null_mut()) };
    unsafe { liepoly_string_free(ptr::null_mut()) };
}

#[test]
fn arithmetic_follows_the_side_rules() {
    let a = parse_ok("[vu]");
    let b = parse_ok("[vvu]");
    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { liepoly_add(a, b, &mut sum) }, LiepolyStatus::Ok);
    assert_eq!(text_of(sum), "[vu] + [vvu]");
    free_elem(sum);

    // A plain scalar folds into U through the unit and scales anything.
    let xy = parse_ok("x*y");
    let three = parse_ok("3");
    let mut shifted = ptr::null_mut();
    assert_eq!(unsafe { liepoly_add(xy, three, &mut shifted) }, LiepolyStatus::Ok);
    assert_eq!(text_of(shifted), "x*y + 3");
    free_elem(shifted);
    let mut scaled = ptr::null_mut();
    assert_eq!(unsafe { liepoly_mul(three, a, &mut scaled) }, LiepolyStatus::Ok);
    assert_eq!(text_of(scaled), "3*[vu]");
    free_elem(scaled);

    // The Lie side has no constant term and no associative product.
    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { liepoly_add(a, three, &mut bad) }, LiepolyStatus::DomainError);
    assert!(last_error().contains("constant term"));
    assert_eq!(unsafe { liepoly_mul(a, b, &mut bad) }, LiepolyStatus::DomainError);
    assert!(last_error().contains("bracket"));
    assert_eq!(unsafe { liepoly_add(a, xy, &mut bad) }, LiepolyStatus::DomainError);
    assert!(last_error().contains("lie vs env"), "{}", last_error());

    free_elem(three);
    free_elem(xy);
    free_elem(b);
    free_elem(a);
}

#[test]
fn bracket_matches_the_commutator_in_u() {
    let a = parse_ok("x^2*y");
    let b = parse_ok("x*y");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { liepoly_bracket(a, b, &mut out) }, LiepolyStatus::Ok);
    assert_eq!(text_of(out), "x^3*y");
    free_elem(out);
    free_elem(b);
    free_elem(a);
}

#[test]
fn to_basis_and_phi_chain_across_the_sides() {
    let comm = parse_ok("uv - vu");
    let mut basis = ptr::null_mut();
    assert_eq!(unsafe { liepoly_to_basis(comm, &mut basis) }, LiepolyStatus::Ok);
    assert_eq!(kind_of(basis), "lie");
    assert_eq!(text_of(basis), "-[vu]");
    let mut image = ptr::null_mut();
    assert_eq!(unsafe { liepoly_phi(basis, &mut image) }, LiepolyStatus::Ok);
    assert_eq!(text_of(image), "-x^3*y");
    free_elem(image);
    free_elem(basis);
    free_elem(comm);

    let env = parse_ok("x*y");
    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { liepoly_to_basis(env, &mut bad) }, LiepolyStatus::DomainError);
    assert!(last_error().contains("Lie element"));
    free_elem(env);
}

#[test]
fn reduce_returns_the_normal_form_and_a_trace() {
    let e = parse_ok("[vvu]");
    let mut nf = ptr::null_mut();
    let mut trace = ptr::null_mut();
    assert_eq!(unsafe { liepoly_reduce(e, &mut nf, &mut trace) }, LiepolyStatus::Ok);
    assert_eq!(text_of(nf), "-1/6*[vu^3]");
    let steps: serde_json::Value = serde_json::from_str(&take_string(trace)).unwrap();
    assert_eq!(steps.as_array().unwrap().len(), 1);
    assert_eq!(steps[0]["rule"], "defining-relation");
    assert_eq!(steps[0]["target"], "vvu");
    assert_eq!(steps[0]["replacement"]["display"], "-1/6*[vu^3]");
    free_elem(nf);

    // The trace out parameter is optional.
    let mut nf_only = ptr::null_mut();
    assert_eq!(
        unsafe { liepoly_reduce(e, &mut nf_only, ptr::null_mut()) },
        LiepolyStatus::Ok
    );
    assert_eq!(text_of(nf_only), "-1/6*[vu^3]");
    free_elem(nf_only);
    free_elem(e);
}

#[test]
fn word_queries_classify_factor_and_expand() {
    let query = |word: &str| {
        let text = CString::new(word).unwrap();
        let mut regular = false;
        let status = unsafe { liepoly_word_is_regular(text.as_ptr(), &mut regular) };
        assert_eq!(status, LiepolyStatus::Ok);
        regular
    };
    assert!(query("vu"));
    assert!(query("vuuvu^3"));
    assert!(!query("uv"));

    let word = CString::new("vuuvuuu").unwrap();
    let (mut left, mut right) = (ptr::null_mut(), ptr::null_mut());
    let status = unsafe { liepoly_word_factor(word.as_ptr(), &mut left, &mut right) };
    assert_eq!(status, LiepolyStatus::Ok);
    assert_eq!(take_string(left), "vuu");
    assert_eq!(take_string(right), "vu^3");

    let short = CString::new("u").unwrap();
    let status = unsafe { liepoly_word_factor(short.as_ptr(), &mut left, &mut right) };
    assert_eq!(status, LiepolyStatus::DomainError);
    assert!(last_error().contains('u'), "{}", last_error());

    let word = CString::new("vvu").unwrap();
    let mut expanded = ptr::null_mut();
    let mut tree = ptr::null_mut();
    let status = unsafe { liepoly_word_expand(word.as_ptr(), &mut expanded, &mut tree) };
    assert_eq!(status, LiepolyStatus::Ok);
    assert_eq!(take_string(tree), "[v,[v,u]]");
    assert_eq!(kind_of(expanded), "free");
    assert_eq!(text_of(expanded), "uvv - 2*vuv + vvu");
    free_elem(expanded);
}

#[test]
fn normal_order_expands_powers_of_y_times_x() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { liepoly_normal_order(2, 1, &mut out) }, LiepolyStatus::Ok);
    assert_eq!(text_of(out), "x*y^2 - 2*x*y + x");
    free_elem(out);
}

#[test]
fn regular_words_come_back_as_json() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { liepoly_regular_words(3, &mut s) }, LiepolyStatus::Ok);
    let value: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(value["max_len"], 3);
    assert_eq!(value["count"], 5);
    assert_eq!(value["words"], serde_json::json!(["u", "v", "vu", "vuu", "vvu"]));
}

#[test]
fn verify_reports_success_over_short_lengths() {
    let mut passed = false;
    let mut report = ptr::null_mut();
    let status = unsafe { liepoly_verify(4, 5, 3, &mut passed, &mut report) };
    assert_eq!(status, LiepolyStatus::Ok);
    assert!(passed);
    let value: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert_eq!(value["max_len"], 4);
    assert_eq!(value["counterexamples"], serde_json::json!([]));
}

#[test]
fn version_and_header_ship_with_the_crate() {
    let version = unsafe { CStr::from_ptr(liepoly_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/liepoly.h");
    let text = std::fs::read_to_string(header).expect("the build script writes the header");
    assert!(text.contains("liepoly_reduce"));
    assert!(text.contains("LIEPOLY_STATUS_DOMAIN_ERROR"));
}

/// Compiles tests/smoke.c against the generated header and the static
/// library, then runs it. Skipped when no C compiler is on the path.
#[test]
#[cfg(unix)]
fn the_header_links_from_c() {
    use std::process::Command;

    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    // Test binaries live in target/<profile>/deps; the static library sits
    // one level up.
    let mut lib_dir = std::env::current_exe().unwrap();
    lib_dir.pop();
    lib_dir.pop();
    let static_lib = lib_dir.join("libliepoly_ffi.a");
    assert!(static_lib.exists(), "cargo builds the staticlib alongside the tests");

    let out_dir = std::env::temp_dir().join(format!("liepoly-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let binary = out_dir.join("smoke");
    let compile = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg(format!("-I{}", manifest.join("include").display()))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&static_lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&binary)
        .output();
    let compile = match compile {
        Ok(output) => output,
        Err(_) => {
            eprintln!("skipped: no C compiler on the path");
            return;
        }
    };
    assert!(compile.status.success(), "{}", String::from_utf8_lossy(&compile.stderr));

    let run = Command::new(&binary).output().unwrap();
    std::fs::remove_dir_all(&out_dir).ok();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "C smoke test passed");
}
