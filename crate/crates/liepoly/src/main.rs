//! Command line front end. Every subcommand reads elements or words in the
//! shared text grammar, prints the result on stdout in text or JSON, and
//! reports errors on stderr with exit code 1. `verify` exits with 2 when a
//! counterexample turns up.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use liepoly::enveloping::{bracket_u, mul_u, normal_order_yx, UElement};
use liepoly::freealg::NCPoly;
use liepoly::freelie::{bracketing, expand, lie_bracket, to_basis, LieElement};
use liepoly::parse::{parse_element, parse_free_word, ParsedElement};
use liepoly::presentation::{phi, reduce_mod_a, trace_json, verify_presentation};
use liepoly::words::{enumerate_regular, regular_factoring};

#[derive(Parser)]
#[command(name = "liepoly", version, about = "Exact computation in a free Lie algebra \
and a two-generator enveloping algebra")]
struct Cli {
    /// Output format for results on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text, env = "LIEPOLY_FORMAT")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite y^l x^m into the normally ordered basis of U.
    NormalOrder { l: u32, m: u32 },
    /// Multiply two elements of the same associative side.
    Mul {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Commutator or Lie bracket of two elements of one side.
    Bracket {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// List the regular words up to a length, shortest first.
    Regular {
        #[arg(long)]
        max_len: usize,
    },
    /// Split a regular word of length at least two into its standard
    /// factoring.
    Factor { word: String },
    /// Expand the bracketing of a regular word in the free algebra.
    Expand { word: String },
    /// Rewrite a Lie element of the free algebra in basis coordinates.
    ToBasis {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Apply the homomorphism u -> xy, v -> x^2 y into U.
    Phi {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// Normal form modulo the relation ideal, optionally with the full
    /// rewrite trace.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        trace: bool,
    },
    /// Check the presentation constructively up to a word length.
    Verify {
        /// Largest word length covered by the word-by-word checks.
        #[arg(long)]
        max: usize,
        /// Seed for the randomized ideal sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random relation-ideal elements to reduce.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = i32::from(err.use_stderr());
            err.print().expect("writing a clap message");
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

fn emit(format: Format, text: impl FnOnce() -> String, json: impl FnOnce() -> Value) {
    match format {
        Format::Text => println!("{}", text()),
        Format::Json => println!("{}", json()),
    }
}

fn free_json(p: &NCPoly) -> Value {
    ParsedElement::Free(p.clone()).to_json()
}

fn lie_json(f: &LieElement) -> Value {
    ParsedElement::Lie(f.clone()).to_json()
}

fn env_json(f: &UElement) -> Value {
    ParsedElement::Env(f.clone()).to_json()
}

fn element_json(e: &ParsedElement) -> Value {
    e.to_json()
}

fn element_text(e: &ParsedElement) -> String {
    e.to_string()
}

/// Coerce an input element to the Lie side: basis sums stay as they are and
/// free-algebra elements go through the basis rewrite.
fn as_lie(e: ParsedElement) -> Result<LieElement, String> {
    match e {
        ParsedElement::Lie(f) => Ok(f),
        ParsedElement::Free(p) => to_basis(&p).map_err(|e| e.to_string()),
        ParsedElement::Env(_) => Err("expected a Lie element over {u, v}".into()),
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    let format = cli.format;
    match cli.command {
        Command::NormalOrder { l, m } => {
            let result = normal_order_yx(l, m);
            emit(
                format,
                || result.to_string(),
                || json!({"l": l, "m": m, "result": env_json(&result)}),
            );
        }
        Command::Mul { left, right } => {
            let l = parse_element(&left).map_err(|e| e.to_string())?;
            let r = parse_element(&right).map_err(|e| e.to_string())?;
            let sides = format!("{} vs {}", l.kind(), r.kind());
            let out = match (l, r) {
                (ParsedElement::Free(a), ParsedElement::Free(b)) => ParsedElement::Free(&a * &b),
                (ParsedElement::Env(a), ParsedElement::Env(b)) => ParsedElement::Env(mul_u(&a, &b)),
                (a @ ParsedElement::Free(_), ParsedElement::Env(b)) => match a.scalar() {
                    Some(c) => ParsedElement::Env(b.scale(&c)),
                    None => return Err(format!("cannot multiply elements of different sides ({sides})")),
                },
                (ParsedElement::Env(a), b @ ParsedElement::Free(_)) => match b.scalar() {
                    Some(c) => ParsedElement::Env(a.scale(&c)),
                    None => return Err(format!("cannot multiply elements of different sides ({sides})")),
                },
                (a @ ParsedElement::Free(_), ParsedElement::Lie(f)) => match a.scalar() {
                    Some(c) => ParsedElement::Lie(f.scale(&c)),
                    None => {
                        return Err(
                            "products are not defined on Lie basis elements; use `bracket`".into()
                        )
                    }
                },
                (ParsedElement::Lie(f), b @ ParsedElement::Free(_)) => match b.scalar() {
                    Some(c) => ParsedElement::Lie(f.scale(&c)),
                    None => {
                        return Err(
                            "products are not defined on Lie basis elements; use `bracket`".into()
                        )
                    }
                },
                (ParsedElement::Lie(_), _) | (_, ParsedElement::Lie(_)) => {
                    return Err(
                        "products are not defined on Lie basis elements; use `bracket`".into()
                    )
                }
            };
            emit(format, || element_text(&out), || element_json(&out));
        }
        Command::Bracket { left, right } => {
            let l = parse_element(&left).map_err(|e| e.to_string())?;
            let r = parse_element(&right).map_err(|e| e.to_string())?;
            let sides = format!("{} vs {}", l.kind(), r.kind());
            let out = match (l, r) {
                (ParsedElement::Free(a), ParsedElement::Free(b)) => {
                    ParsedElement::Free(a.commutator(&b))
                }
                (ParsedElement::Env(a), ParsedElement::Env(b)) => {
                    ParsedElement::Env(bracket_u(&a, &b))
                }
                (ParsedElement::Lie(a), ParsedElement::Lie(b)) => {
                    ParsedElement::Lie(lie_bracket(&a, &b))
                }
                // A scalar brackets to zero on whichever side the other
                // operand lives.
                (a, b) => {
                    let (scalar, other) = if a.scalar().is_some() { (a, b) } else { (b, a) };
                    if scalar.scalar().is_none() {
                        return Err(format!("cannot bracket elements of different sides ({sides})"));
                    }
                    match other {
                        ParsedElement::Free(_) => ParsedElement::Free(NCPoly::zero()),
                        ParsedElement::Lie(_) => ParsedElement::Lie(LieElement::zero()),
                        ParsedElement::Env(_) => ParsedElement::Env(UElement::zero()),
                    }
                }
            };
            emit(format, || element_text(&out), || element_json(&out));
        }
        Command::Regular { max_len } => {
            let words = enumerate_regular(max_len);
            emit(
                format,
                || {
                    let mut lines: Vec<String> = words.iter().map(ToString::to_string).collect();
                    lines.push(format!("count: {}", words.len()));
                    lines.join("\n")
                },
                || {
                    json!({
                        "max_len": max_len,
                        "count": words.len(),
                        "words": words.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })
                },
            );
        }
        Command::Factor { word } => {
            let w = parse_free_word(&word).map_err(|e| e.to_string())?;
            let (left, right) = regular_factoring(&w).map_err(|e| e.to_string())?;
            emit(
                format,
                || format!("{left} {right}"),
                || json!({"word": w.to_string(), "left": left.to_string(), "right": right.to_string()}),
            );
        }
        Command::Expand { word } => {
            let w = parse_free_word(&word).map_err(|e| e.to_string())?;
            let tree = bracketing(&w).map_err(|e| e.to_string())?;
            let poly = expand(&w).map_err(|e| e.to_string())?;
            emit(
                format,
                || poly.to_string(),
                || {
                    json!({
                        "word": w.to_string(),
                        "bracketing": tree.to_string(),
                        "result": free_json(&poly),
                    })
                },
            );
        }
        Command::ToBasis { element } => {
            let e = parse_element(&element).map_err(|e| e.to_string())?;
            let f = as_lie(e)?;
            emit(format, || f.to_string(), || lie_json(&f));
        }
        Command::Phi { element } => {
            let e = parse_element(&element).map_err(|e| e.to_string())?;
            let image = phi(&as_lie(e)?);
            emit(format, || image.to_string(), || env_json(&image));
        }
        Command::Reduce { element, trace } => {
            let e = parse_element(&element).map_err(|e| e.to_string())?;
            let f = as_lie(e)?;
            let (nf, steps) = reduce_mod_a(&f);
            emit(
                format,
                || {
                    let mut lines = Vec::new();
                    if trace {
                        for step in &steps.steps {
                            lines.push(format!(
                                "{}: [{}] -> {}",
                                step.rule, step.target, step.replacement
                            ));
                        }
                    }
                    lines.push(nf.to_string());
                    lines.join("\n")
                },
                || {
                    let nf_elem = nf.to_lie_element();
                    let mut out = json!({"normal_form": lie_json(&nf_elem)});
                    if trace {
                        out["trace"] = trace_json(&steps);
                    }
                    out
                },
            );
        }
        Command::Verify { max, seed, samples } => {
            let report = verify_presentation(max, samples, seed);
            emit(
                format,
                || report.to_string(),
                || {
                    json!({
                        "passed": report.passed(),
                        "report": serde_json::to_value(&report).expect("report serializes"),
                    })
                },
            );
            if !report.passed() {
                return Ok(2);
            }
        }
    }
    Ok(0)
}
