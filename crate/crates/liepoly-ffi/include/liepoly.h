#ifndef LIEPOLY_H
#define LIEPOLY_H

/* Generated by cbindgen from the liepoly-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum LiepolyStatus {
  LIEPOLY_STATUS_OK = 0,
  // The input text does not follow the element or word grammar.
  LIEPOLY_STATUS_PARSE_ERROR = 1,
  // The inputs parse but the operation is not defined on them.
  LIEPOLY_STATUS_DOMAIN_ERROR = 2,
  // A required pointer argument was null.
  LIEPOLY_STATUS_NULL_POINTER = 3,
  // An internal invariant failed; the library state is still usable.
  LIEPOLY_STATUS_INTERNAL_PANIC = 4,
} LiepolyStatus;

// Opaque handle to an element of the free associative algebra over {u, v},
// of the free Lie algebra in basis coordinates, or of the enveloping
// algebra U.
typedef struct LiepolyElement LiepolyElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, or null if every call
// so far succeeded. The pointer stays valid until the next failing call on
// the same thread; do not free it.
const char *liepoly_last_error_message(void);

// Library version as a static string; do not free it.
const char *liepoly_version(void);

// Release a string returned through a `char**` out parameter. Null is a
// no-op.
void liepoly_string_free(char *s);

// Parse an element in the shared text grammar: sums of rational multiples
// of bracketed regular words like `[vu^3]`, plain words over {u, v}, or
// words over {x, y} taken in U.
enum LiepolyStatus liepoly_parse(const char *input, struct LiepolyElement **out);

// Deep copy of an element handle.
enum LiepolyStatus liepoly_element_clone(const struct LiepolyElement *elem,
                                         struct LiepolyElement **out);

// Release an element handle. Null is a no-op.
void liepoly_element_free(struct LiepolyElement *elem);

// Side of the algebra the element lives on: a static string `"free"`,
// `"lie"`, or `"env"`, or null when the handle is null. Do not free it.
const char *liepoly_element_kind(const struct LiepolyElement *elem);

// Canonical text form of an element; parsing it back reproduces the
// element.
enum LiepolyStatus liepoly_element_to_string(const struct LiepolyElement *elem, char **out);

// JSON form of an element: an object with `kind`, `display`, and a `terms`
// array pairing each word or monomial with its coefficient as a `p/q`
// string.
enum LiepolyStatus liepoly_element_to_json(const struct LiepolyElement *elem, char **out);

// Sum of two elements. Both must live on the same side, except that a
// plain scalar folds into an element of U through the unit.
enum LiepolyStatus liepoly_add(const struct LiepolyElement *a,
                               const struct LiepolyElement *b,
                               struct LiepolyElement **out);

// Product of two elements: free algebra product, product in U, or a scalar
// multiple. Lie basis elements have no product; use `liepoly_bracket`.
enum LiepolyStatus liepoly_mul(const struct LiepolyElement *a,
                               const struct LiepolyElement *b,
                               struct LiepolyElement **out);

// Lie bracket on whichever side both elements live: the commutator in the
// free algebra or in U, and the basis-coordinate bracket on the Lie side.
enum LiepolyStatus liepoly_bracket(const struct LiepolyElement *a,
                                   const struct LiepolyElement *b,
                                   struct LiepolyElement **out);

// Rewrite a Lie element of the free algebra in basis coordinates. Elements
// already in basis coordinates pass through unchanged.
enum LiepolyStatus liepoly_to_basis(const struct LiepolyElement *elem, struct LiepolyElement **out);

// Image of a Lie element under the homomorphism u -> xy, v -> x^2 y
// into U.
enum LiepolyStatus liepoly_phi(const struct LiepolyElement *elem, struct LiepolyElement **out);

// Normal form of a Lie element modulo the relation ideal, supported on u,
// v, and the words v u^n. When `out_trace_json` is not null it receives a
// JSON array of the rewrite steps, each `{rule, target, replacement}`.
enum LiepolyStatus liepoly_reduce(const struct LiepolyElement *elem,
                                  struct LiepolyElement **out_normal_form,
                                  char **out_trace_json);

// Whether a word over {u, v}, written in the text grammar, is a regular
// basis word.
enum LiepolyStatus liepoly_word_is_regular(const char *word, bool *out);

// Standard factoring of a regular word of length at least two: the unique
// split whose right factor is the longest regular proper ending.
enum LiepolyStatus liepoly_word_factor(const char *word, char **out_left, char **out_right);

// Expansion of the bracketing of a regular word in the free algebra. When
// `out_bracketing` is not null it receives the nested bracket text, for
// example `[v,[v,u]]`.
enum LiepolyStatus liepoly_word_expand(const char *word,
                                       struct LiepolyElement **out,
                                       char **out_bracketing);

// Normally ordered form of y^l x^m in U.
enum LiepolyStatus liepoly_normal_order(uint32_t l, uint32_t m, struct LiepolyElement **out);

// All regular words up to the given length, shortest first, as a JSON
// object `{max_len, count, words}`.
enum LiepolyStatus liepoly_regular_words(size_t max_len, char **out_json);

// Run the constructive presentation checks word by word up to `max_len`
// and on `samples` seeded random elements of the relation ideal. Writes
// whether every check passed to `out_passed`; when `out_report_json` is
// not null it receives the full report as JSON.
enum LiepolyStatus liepoly_verify(size_t max_len,
                                  size_t samples,
                                  uint64_t seed,
                                  bool *out_passed,
                                  char **out_report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIEPOLY_H */
