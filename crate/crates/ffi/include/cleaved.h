/* C interface to the cleaved planar algebra library. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
#define CLV_OK 0

#define CLV_ERR_DOMAIN 1

#define CLV_ERR_PARSE 2

#define CLV_ERR_NULL 3

#define CLV_ERR_UTF8 4

/**
 * An opaque exact matrix between cleaved-link modules.
 */
typedef struct ClvMatrix ClvMatrix;

/**
 * An opaque parsed tangle (a planar diagram is a crossing-free tangle).
 */
typedef struct ClvTangle ClvTangle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *clv_last_error(void);

/**
 * Parse a tangle (or diagram) from its text format.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
int32_t clv_tangle_parse(const char *text, struct ClvTangle **out);

/**
 * # Safety
 * `tangle` must come from this library and not have been freed.
 */
void clv_tangle_free(struct ClvTangle *tangle);

/**
 * Serialize back to the text format.
 *
 * # Safety
 * `tangle` must be a live handle; free the string with `clv_string_free`.
 */
int32_t clv_tangle_serialize(const struct ClvTangle *tangle, char **out);

/**
 * Mirror image: every crossing flipped.
 *
 * # Safety
 * `tangle` must be a live handle and `out` a valid pointer.
 */
int32_t clv_tangle_mirror(const struct ClvTangle *tangle, struct ClvTangle **out);

/**
 * Jones polynomial of a closed tangle as serialized pairs.
 *
 * # Safety
 * `tangle` must be a live handle; free the string with `clv_string_free`.
 */
int32_t clv_jones(const struct ClvTangle *tangle, char **out);

/**
 * The partition matrix of a tangle.
 *
 * # Safety
 * `tangle` must be a live handle and `out` a valid pointer.
 */
int32_t clv_tangle_partition(const struct ClvTangle *tangle, struct ClvMatrix **out);

/**
 * The partition matrix of a crossing-free diagram given in text form.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
int32_t clv_diagram_partition(const char *text, struct ClvMatrix **out);

/**
 * Representation matrix of a braid word such as "s1 s2^-1".
 *
 * # Safety
 * `word` must be a valid NUL-terminated string and `out` a valid pointer.
 */
int32_t clv_braid_rep(uint32_t strands, const char *word, struct ClvMatrix **out);

/**
 * # Safety
 * `matrix` must come from this library and not have been freed.
 */
void clv_matrix_free(struct ClvMatrix *matrix);

/**
 * # Safety
 * `matrix` must be a live handle and `rows` a valid pointer.
 */
int32_t clv_matrix_rows(const struct ClvMatrix *matrix, uint64_t *rows);

/**
 * # Safety
 * `matrix` must be a live handle and `cols` a valid pointer.
 */
int32_t clv_matrix_cols(const struct ClvMatrix *matrix, uint64_t *cols);

/**
 * A single entry as serialized pairs; the zero polynomial is "[]".
 *
 * # Safety
 * `matrix` must be a live handle; free the string with `clv_string_free`.
 */
int32_t clv_matrix_entry(const struct ClvMatrix *matrix, uint64_t row, uint64_t col, char **out);

/**
 * Number of generators of I_{2n}.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
int32_t clv_basis_size(uint32_t n, uint64_t *out);

/**
 * # Safety
 * `s` must have been returned by this library and not yet freed.
 */
void clv_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
