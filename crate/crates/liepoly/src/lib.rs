//! Exact computation around a two-generator enveloping algebra: the free
//! associative algebra on {u, v}, the free Lie algebra inside it in the
//! regular-word (Shirshov) basis, the algebra U generated by x, y subject to
//! xy - yx = x, and the presented Lie subalgebra of U spanned by x^{n+2} y.

pub mod words;
pub mod parse;
pub mod presentation;
pub mod enveloping;
pub mod freealg;
pub mod freelie;
