#ifndef NILORB_H
#define NILORB_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum NilorbStatus {
  NILORB_STATUS_OK = 0,
  NILORB_STATUS_NULL_POINTER = 1,
  NILORB_STATUS_INVALID_UTF8 = 2,
  NILORB_STATUS_PARSE = 3,
  NILORB_STATUS_SHAPE = 4,
  NILORB_STATUS_INDEX = 5,
  NILORB_STATUS_BLOCKS = 6,
  NILORB_STATUS_PATTERN = 7,
  NILORB_STATUS_NOT_NILPOTENT = 8,
  NILORB_STATUS_NOT_GENERIC = 9,
  NILORB_STATUS_DIMENSION_VECTOR = 10,
  NILORB_STATUS_DATUM = 11,
  NILORB_STATUS_PRECONDITION = 12,
  NILORB_STATUS_CONSTRUCTION = 13,
  NILORB_STATUS_PANIC = 14,
} NilorbStatus;

/**
 * Block sizes of a parabolic subgroup.
 */
typedef struct NilorbBlocks NilorbBlocks;

/**
 * Exact rational matrix.
 */
typedef struct NilorbMatrix NilorbMatrix;

/**
 * Orbit poset for fixed blocks.
 */
typedef struct NilorbPoset NilorbPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *nilorb_last_error_message(void);

void nilorb_string_free(char *s);

/**
 * Builds a `rows x cols` matrix from row-major numerators and denominators.
 * `den` may be null for integer entries.
 */
enum NilorbStatus nilorb_matrix_new(size_t rows,
                                    size_t cols,
                                    const int64_t *num,
                                    const int64_t *den,
                                    struct NilorbMatrix **out);

/**
 * Parses `{"rows":..,"cols":..,"entries":[..]}` with entries as exact rational strings.
 */
enum NilorbStatus nilorb_matrix_from_json(const char *json, struct NilorbMatrix **out);

enum NilorbStatus nilorb_matrix_to_json(const struct NilorbMatrix *m, char **out);

size_t nilorb_matrix_rows(const struct NilorbMatrix *m);

size_t nilorb_matrix_cols(const struct NilorbMatrix *m);

/**
 * Entry `(i, j)` (0-based) as a string such as `"-3/4"`.
 */
enum NilorbStatus nilorb_matrix_entry(const struct NilorbMatrix *m, size_t i, size_t j, char **out);

void nilorb_matrix_free(struct NilorbMatrix *m);

enum NilorbStatus nilorb_blocks_new(const size_t *sizes, size_t len, struct NilorbBlocks **out);

/**
 * Parses a comma separated list such as `"2,1,2"`.
 */
enum NilorbStatus nilorb_blocks_parse(const char *s, struct NilorbBlocks **out);

size_t nilorb_blocks_n(const struct NilorbBlocks *b);

void nilorb_blocks_free(struct NilorbBlocks *b);

/**
 * Number of `P`-orbits on 2-nilpotent matrices.
 */
enum NilorbStatus nilorb_orbit_count(const struct NilorbBlocks *b, size_t *out);

/**
 * Enhanced oriented link pattern of a 2-nilpotent matrix, as JSON.
 */
enum NilorbStatus nilorb_classify(const struct NilorbMatrix *m,
                                  const struct NilorbBlocks *b,
                                  char **out);

/**
 * Finiteness verdict for `P` acting on `x`-nilpotent matrices. `json` may be
 * null; otherwise it receives the full verdict.
 */
enum NilorbStatus nilorb_is_finite(const struct NilorbBlocks *b,
                                   size_t x,
                                   bool *finite,
                                   char **json);

enum NilorbStatus nilorb_hasse(const struct NilorbBlocks *b, struct NilorbPoset **out);

size_t nilorb_poset_len(const struct NilorbPoset *p);

/**
 * Whether element `j` lies in the closure of element `i`.
 */
enum NilorbStatus nilorb_poset_leq(const struct NilorbPoset *p, size_t i, size_t j, bool *out);

enum NilorbStatus nilorb_poset_to_json(const struct NilorbPoset *p, char **out);

enum NilorbStatus nilorb_poset_to_dot(const struct NilorbPoset *p, char **out);

void nilorb_poset_free(struct NilorbPoset *p);

/**
 * Generic normal form `H = g N g^-1`. `g` may be null.
 */
enum NilorbStatus nilorb_normal_form(const struct NilorbMatrix *m,
                                     const struct NilorbBlocks *b,
                                     struct NilorbMatrix **h,
                                     struct NilorbMatrix **g);

/**
 * Evaluates a semi-invariant given either as datum JSON or, when `datum`
 * does not start with `{`, as a builtin name such as `"det_2"` or `"f_{3,1}"`.
 * The value is written as an exact rational string.
 */
enum NilorbStatus nilorb_invariant_eval(const char *datum,
                                        const struct NilorbMatrix *m,
                                        char **out);

/**
 * Parses an exact rational and writes its normalized form; a cheap way for
 * callers to validate input.
 */
enum NilorbStatus nilorb_rational_normalize(const char *s, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILORB_H */
