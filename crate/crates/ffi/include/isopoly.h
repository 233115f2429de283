#ifndef ISOPOLY_H
#define ISOPOLY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IsopolyFlavor {
  /**
   * `T`, `->`, `|`, `&`, `all x.`, `ex x.`
   */
  ISOPOLY_FLAVOR_LOGICAL = 0,
  /**
   * `1`, `^`, `+`, `*`
   */
  ISOPOLY_FLAVOR_ALGEBRAIC = 1,
} IsopolyFlavor;

/**
 * Result of a library call.
 */
typedef enum IsopolyStatus {
  ISOPOLY_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ISOPOLY_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not UTF-8.
   */
  ISOPOLY_STATUS_INVALID_UTF8 = 2,
  /**
   * A formula did not parse.
   */
  ISOPOLY_STATUS_SYNTAX_ERROR = 3,
  /**
   * Well-formed input the operation does not accept.
   */
  ISOPOLY_STATUS_INVALID_INPUT = 4,
  /**
   * A value, set or normal form grew past its limit.
   */
  ISOPOLY_STATUS_RESOURCE_LIMIT = 5,
  /**
   * The library panicked. This is a bug.
   */
  ISOPOLY_STATUS_INTERNAL_ERROR = 6,
} IsopolyStatus;

typedef enum IsopolyVerdict {
  ISOPOLY_VERDICT_PROVED = 0,
  ISOPOLY_VERDICT_DISPROVED = 1,
  ISOPOLY_VERDICT_INCONCLUSIVE = 2,
} IsopolyVerdict;

/**
 * A parsed formula.
 */
typedef struct IsopolyFormula IsopolyFormula;

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next library call on the same thread.
 */
const char *isopoly_last_error(void);

/**
 * Library version as a static string.
 */
const char *isopoly_version(void);

/**
 * Frees a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void isopoly_string_free(char *s);

/**
 * Parses `text` and stores a new formula in `*out`.
 *
 * # Safety
 * `text` is a nul-terminated string and `out` is writable.
 */
enum IsopolyStatus isopoly_formula_parse(const char *text_,
                                         enum IsopolyFlavor syntax,
                                         struct IsopolyFormula **out);

/**
 * Frees a formula. Null is ignored.
 *
 * # Safety
 * `f` is null or was returned by this library and not yet freed.
 */
void isopoly_formula_free(struct IsopolyFormula *f);

/**
 * Prints `f` in the given syntax into a new string.
 *
 * # Safety
 * `f` is a live formula and `out` is writable.
 */
enum IsopolyStatus isopoly_formula_print(const struct IsopolyFormula *f,
                                         enum IsopolyFlavor syntax,
                                         char **out);

/**
 * Value of `f` as a decimal string. `at` assigns atoms (`a=2,P(0)=3`);
 * `domain` is null, a size (`3`), or per-variable sizes (`x=2,y=3`).
 *
 * # Safety
 * `f` is a live formula, `at` a string, `domain` null or a string, and
 * `out` writable.
 */
enum IsopolyStatus isopoly_formula_eval(const struct IsopolyFormula *f,
                                        const char *at,
                                        const char *domain,
                                        char **out);

/**
 * Exp-log normal form of `f` as a new formula.
 *
 * # Safety
 * `f` is a live formula and `out` is writable.
 */
enum IsopolyStatus isopoly_formula_enf(const struct IsopolyFormula *f, struct IsopolyFormula **out);

/**
 * Hierarchy level of `f`, such as `Σ1` or `Π2`, as a new string.
 *
 * # Safety
 * `f` is a live formula and `out` is writable.
 */
enum IsopolyStatus isopoly_formula_level(const struct IsopolyFormula *f, char **out);

/**
 * Whether the propositional formula `f` lies in the Gurevič–Levitz class.
 *
 * # Safety
 * `f` is a live formula and `out` is writable.
 */
enum IsopolyStatus isopoly_formula_gl_member(const struct IsopolyFormula *f, bool *out);

/**
 * Searches for a counterexample, then for a derivation, as `iso-check`
 * does. `budget` is null for the default or text like `B=4,D=3,N=10000`.
 *
 * # Safety
 * `lhs` and `rhs` are live formulas, `budget` null or a string, and `out`
 * writable.
 */
enum IsopolyStatus isopoly_iso_check(const struct IsopolyFormula *lhs,
                                     const struct IsopolyFormula *rhs,
                                     const char *budget,
                                     uint64_t seed,
                                     enum IsopolyVerdict *out);

#endif  /* ISOPOLY_H */
