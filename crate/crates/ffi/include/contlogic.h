#ifndef CONTLOGIC_H
#define CONTLOGIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Answer of `cl_forces_sup_leq`.
 */
typedef enum ClAnswer {
  CL_ANSWER_YES = 0,
  CL_ANSWER_NO = 1,
  CL_ANSWER_UNKNOWN = 2,
} ClAnswer;

typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_NULL_POINTER = 1,
  CL_STATUS_INVALID_UTF8 = 2,
  CL_STATUS_PARSE = 3,
  CL_STATUS_CODING = 4,
  CL_STATUS_GROUP = 5,
  CL_STATUS_EVAL = 6,
  CL_STATUS_FORCING = 7,
  CL_STATUS_INVALID_ARGUMENT = 8,
  CL_STATUS_PANIC = 99,
} ClStatus;

typedef struct ClCondition ClCondition;

typedef struct ClFormula ClFormula;

typedef struct ClGroup ClGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until
 * the next failing call on the same thread.
 */
const char *cl_last_error_message(void);

/**
 * Library version, static storage.
 */
const char *cl_version(void);

/**
 * # Safety
 * `s` is NULL or a string returned by this library and not yet freed.
 */
void cl_string_free(char *s);

/**
 * Parses `text` over the preset signature `sig` (`metric`, `cstar`,
 * `tvna`).
 *
 * # Safety
 * `text` and `sig` are NUL-terminated strings; `out` is writable.
 */
enum ClStatus cl_formula_parse(const char *text, const char *sig, struct ClFormula **out);

/**
 * # Safety
 * `code_text` and `sig` are NUL-terminated strings; `out` is writable.
 */
enum ClStatus cl_formula_decode(const char *code_text, const char *sig, struct ClFormula **out);

/**
 * # Safety
 * `f` is NULL or a live handle from `cl_formula_parse`/`cl_formula_decode`.
 */
void cl_formula_free(struct ClFormula *f);

/**
 * # Safety
 * `f` is a live handle; `out` is writable.
 */
enum ClStatus cl_formula_print(const struct ClFormula *f, char **out);

/**
 * Decimal Gödel code of the formula.
 *
 * # Safety
 * `f` is a live handle; `out` is writable.
 */
enum ClStatus cl_formula_encode(const struct ClFormula *f, char **out);

/**
 * Code of `φ_p -. 2^-n`.
 *
 * # Safety
 * `p` and `sig` are NUL-terminated strings; `out` is writable.
 */
enum ClStatus cl_code_f(const char *p, uint32_t n, const char *sig, char **out);

/**
 * Code of `φ_p -. φ_q`.
 *
 * # Safety
 * `p`, `q` and `sig` are NUL-terminated strings; `out` is writable.
 */
enum ClStatus cl_code_g(const char *p, const char *q, const char *sig, char **out);

/**
 * Group from the text of a group config.
 *
 * # Safety
 * `config` is a NUL-terminated string; `out` is writable.
 */
enum ClStatus cl_group_from_config(const char *config, struct ClGroup **out);

/**
 * # Safety
 * `g` is NULL or a live handle from `cl_group_from_config`.
 */
void cl_group_free(struct ClGroup *g);

/**
 * Dyadic lower bound on the reduced norm of `element` from the moment
 * `τ((a*a)^n)`, as exact decimal text.
 *
 * # Safety
 * `g` is a live handle, `element` a NUL-terminated string, `out` writable.
 */
enum ClStatus cl_group_lambda_lower(const struct ClGroup *g,
                                    const char *element,
                                    size_t n,
                                    uint32_t k,
                                    char **out);

/**
 * Evaluates a sentence over a presentation (`R`, `L`, `cstar`, `C2w`)
 * and writes the result record as JSON. `g` may be NULL for `R` and
 * `C2w`.
 *
 * # Safety
 * `presentation` and `sentence` are NUL-terminated strings, `g` is NULL
 * or a live handle, `out` is writable.
 */
enum ClStatus cl_eval_json(const char *presentation,
                           const struct ClGroup *g,
                           const char *sentence,
                           uint64_t points,
                           uint32_t k,
                           char **out);

/**
 * # Safety
 * `out` is writable.
 */
enum ClStatus cl_condition_new(struct ClCondition **out);

/**
 * # Safety
 * `c` is NULL or a live handle from `cl_condition_new`.
 */
void cl_condition_free(struct ClCondition *c);

/**
 * Adds the bound `phi < r` to the condition; `r` is exact text such as
 * `1/4` or `0.25`. Consistency is not checked here.
 *
 * # Safety
 * `c` is a live handle; `phi` and `r` are NUL-terminated strings.
 */
enum ClStatus cl_condition_add(struct ClCondition *c, const char *phi, const char *r);

/**
 * # Safety
 * `c` is a live handle; `out` is writable.
 */
enum ClStatus cl_condition_is_condition(const struct ClCondition *c, bool *out);

/**
 * Whether the condition forces `sup_x psi <= r`.
 *
 * # Safety
 * `c` is a live handle; `psi`, `var` and `r` are NUL-terminated strings;
 * `out` is writable.
 */
enum ClStatus cl_forces_sup_leq(const struct ClCondition *c,
                                const char *psi,
                                const char *var,
                                const char *r,
                                uint32_t budget,
                                enum ClAnswer *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONTLOGIC_H */
