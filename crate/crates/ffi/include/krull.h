#ifndef KRULL_H
#define KRULL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define KRULL_OK 0

#define KRULL_ERR_NULL_POINTER 1

#define KRULL_ERR_INVALID_UTF8 2

#define KRULL_ERR_PANIC 3

#define KRULL_ERR_PRECISION_EXHAUSTED 10

#define KRULL_ERR_NOT_INTEGRAL 11

#define KRULL_ERR_HENSEL_CONDITION_FAILED 12

#define KRULL_ERR_NON_POSITIVE_ELEMENT 13

#define KRULL_ERR_SIZE_LIMIT 14

#define KRULL_ERR_ZETA_P_MISSING 15

#define KRULL_ERR_Q_EQUALS_P 16

#define KRULL_ERR_PRECONDITION_FAILED 17

#define KRULL_ERR_REDUCIBLE 18

#define KRULL_ERR_NOT_IN_MAXIMAL_IDEAL 19

#define KRULL_ERR_WINDOW_EXHAUSTED 20

#define KRULL_ERR_NO_COMPATIBLE_ROOT 21

#define KRULL_ERR_DEPTH_EXHAUSTED 22

#define KRULL_ERR_UNKNOWN_SUITE 23

#define KRULL_ERR_PARSE 24

#define KRULL_ERR_INVALID_FIELD 25

#define KRULL_ERR_INVALID_GROUP 26

#define KRULL_ERR_NOT_APPLICABLE 27

#define KRULL_ERR_IO 28

/**
 * Opaque element of a [`KrullField`].
 */
typedef struct KrullElement KrullElement;

/**
 * Opaque local field.
 */
typedef struct KrullField KrullField;

/**
 * Opaque verification report.
 */
typedef struct KrullReport KrullReport;

/**
 * Suite parameters; zero means "use the suite default" for `p`, `q`, `n`,
 * `precision` and `depth`; a null `field` means no field descriptor.
 */
typedef struct KrullSuiteParams {
  uint64_t p;
  uint64_t q;
  uint64_t n;
  uint32_t precision;
  uint32_t depth;
  uint64_t seed;
  const char *field;
} KrullSuiteParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Free with
 * [`krull_string_free`].
 */
char *krull_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void krull_string_free(char *s);

/**
 * Parse a field descriptor such as `"Qp(3)[zeta_p]"`.
 *
 * # Safety
 * `descriptor` must be a NUL-terminated string; `out` a valid pointer.
 */
int32_t krull_field_parse(const char *descriptor, struct KrullField **out_field);

/**
 * # Safety
 * `field` must be null or a handle from [`krull_field_parse`], not yet freed.
 */
void krull_field_free(struct KrullField *field);

/**
 * Residue characteristic, ramification index, residue degree and `[F:Q_p]`.
 *
 * # Safety
 * `field` must be a live handle; out-pointers may be null to skip a value.
 */
int32_t krull_field_invariants(const struct KrullField *field,
                               uint64_t *p,
                               int64_t *e,
                               uint32_t *f,
                               uint64_t *degree);

/**
 * `dim_{F_q} F^×/F^{×q}`.
 *
 * # Safety
 * `field` must be a live handle and `out_dim` valid.
 */
int32_t krull_p_rank(const struct KrullField *field, uint64_t q, uint64_t *out_dim);

/**
 * Residue of `p/π^{p−1}`; written as an integer when the residue field is
 * `F_p` (the usual case), otherwise the constant coordinate.
 *
 * # Safety
 * `field` must be a live handle and `out_residue` valid.
 */
int32_t krull_residue_p_over_pi(const struct KrullField *field, uint64_t *out_residue);

/**
 * # Safety
 * `field` must be a live handle and `out_elem` valid.
 */
int32_t krull_element_from_int(const struct KrullField *field,
                               int64_t n,
                               struct KrullElement **out_elem);

/**
 * The field's uniformizer.
 *
 * # Safety
 * `field` must be a live handle and `out_elem` valid.
 */
int32_t krull_element_uniformizer(const struct KrullField *field, struct KrullElement **out_elem);

/**
 * # Safety
 * `elem` must be null or a live element handle.
 */
void krull_element_free(struct KrullElement *elem);

/**
 * # Safety
 * `a`, `b` must be live handles over the same field; `out_elem` valid.
 */
int32_t krull_element_add(const struct KrullElement *a,
                          const struct KrullElement *b,
                          struct KrullElement **out_elem);

/**
 * # Safety
 * As for [`krull_element_add`].
 */
int32_t krull_element_mul(const struct KrullElement *a,
                          const struct KrullElement *b,
                          struct KrullElement **out_elem);

/**
 * # Safety
 * As for [`krull_element_add`].
 */
int32_t krull_element_div(const struct KrullElement *a,
                          const struct KrullElement *b,
                          struct KrullElement **out_elem);

/**
 * Normalised valuation (`v(π) = 1`). `*out_is_infinite` is set to 1 for
 * an exact zero, in which case `*out_val` is 0.
 *
 * # Safety
 * `elem` must be a live handle; out-pointers valid.
 */
int32_t krull_element_valuation(const struct KrullElement *elem,
                                int64_t *out_val,
                                int32_t *out_is_infinite);

/**
 * `*out_is_zero` = 1 when the element vanishes to its own precision
 * (where [`krull_element_valuation`] reports `KRULL_ERR_PRECISION_EXHAUSTED`).
 *
 * # Safety
 * `elem` must be a live handle and `out_is_zero` valid.
 */
int32_t krull_element_is_zero(const struct KrullElement *elem, int32_t *out_is_zero);

/**
 * Render an element; free the result with [`krull_string_free`].
 *
 * # Safety
 * `elem` must be a live handle and `out_str` valid.
 */
int32_t krull_element_to_string(const struct KrullElement *elem, char **out_str);

/**
 * Julia Robinson's integrality predicate on `p^val · mantissa` known to
 * `rel` p-adic digits. `*out_integral` is 1 or 0.
 *
 * # Safety
 * `out_integral` must be valid.
 */
int32_t krull_jr_integer_test(uint64_t p,
                              int64_t val,
                              int64_t mantissa,
                              uint32_t rel,
                              int32_t *out_integral);

/**
 * `([Q_p(ζ_n):Q_p], e, f)`.
 *
 * # Safety
 * Out-pointers must be valid.
 */
int32_t krull_cyclotomic_data(uint64_t n, uint64_t p, uint64_t *degree, uint64_t *e, uint64_t *f);

/**
 * Run a named suite. `params` may be null for all defaults.
 *
 * # Safety
 * `suite_id` must be a NUL-terminated string, `params` null or valid,
 * `out_report` valid.
 */
int32_t krull_suite_run(const char *suite_id,
                        const struct KrullSuiteParams *params,
                        struct KrullReport **out_report);

/**
 * # Safety
 * `report` must be null or a live report handle.
 */
void krull_report_free(struct KrullReport *report);

/**
 * Number of cases, and how many passed.
 *
 * # Safety
 * `report` must be a live handle; out-pointers valid.
 */
int32_t krull_report_counts(const struct KrullReport *report, uint64_t *total, uint64_t *passed);

/**
 * Versioned JSON rendering; free with [`krull_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out_json` valid.
 */
int32_t krull_report_to_json(const struct KrullReport *report, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KRULL_H */
