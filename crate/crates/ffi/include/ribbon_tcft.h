#ifndef RIBBON_TCFT_H
#define RIBBON_TCFT_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Cochain complex selector for `rt_cochain_values`.
 */
typedef enum RtComplex {
  RT_COMPLEX_LCIRC = 0,
  RT_COMPLEX_LINF = 1,
  RT_COMPLEX_OPEN = 2,
} RtComplex;

/**
 * Outcome of a call.
 */
typedef enum RtStatus {
  RT_STATUS_OK = 0,
  RT_STATUS_NULL_POINTER = 1,
  RT_STATUS_INVALID_UTF8 = 2,
  RT_STATUS_PARSE = 3,
  RT_STATUS_STRUCTURAL = 4,
  /**
   * Validation ran and found violated axioms.
   */
  RT_STATUS_AXIOM_VIOLATION = 5,
  RT_STATUS_HODGE_INFEASIBLE = 6,
  RT_STATUS_UNSTABLE = 7,
  RT_STATUS_RESOURCE_BOUND = 8,
  RT_STATUS_PRECONDITION = 9,
  RT_STATUS_GRAPH = 10,
  RT_STATUS_PANIC = 11,
} RtStatus;

typedef struct RtAlgebra RtAlgebra;

typedef struct RtEngine RtEngine;

typedef struct RtHodge RtHodge;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The caller
 * frees it with `rt_string_free`.
 */
char *rt_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void rt_string_free(char *s);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rt_version(void);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum RtStatus rt_algebra_from_json(const char *json, struct RtAlgebra **out);

/**
 * `Q[x]/(x^2)` with zero differential.
 *
 * # Safety
 * `out` must be writable.
 */
enum RtStatus rt_algebra_dual_numbers(struct RtAlgebra **out);

/**
 * The acyclic endomorphism algebra of `Q^{1|1}`.
 *
 * # Safety
 * `out` must be writable.
 */
enum RtStatus rt_algebra_contractible(struct RtAlgebra **out);

/**
 * # Safety
 * `alg` must be NULL or a live algebra handle.
 */
void rt_algebra_free(struct RtAlgebra *alg);

/**
 * Dimension of the algebra, 0 for NULL.
 *
 * # Safety
 * `alg` must be NULL or a live algebra handle.
 */
size_t rt_algebra_dim(const struct RtAlgebra *alg);

/**
 * Checks the axioms. Returns `RT_STATUS_AXIOM_VIOLATION` if any fails;
 * if `report` is not NULL it receives the violations as JSON either way.
 *
 * # Safety
 * `alg` must be a live handle; `report` NULL or writable.
 */
enum RtStatus rt_algebra_validate(const struct RtAlgebra *alg, char **report);

/**
 * Solves for a Hodge decomposition of `alg`.
 *
 * # Safety
 * `alg` must be a live handle and `out` writable.
 */
enum RtStatus rt_hodge_construct(const struct RtAlgebra *alg, struct RtHodge **out);

/**
 * # Safety
 * `alg` must be a live handle, `json` NUL-terminated and `out` writable.
 */
enum RtStatus rt_hodge_from_json(const struct RtAlgebra *alg,
                                 const char *json,
                                 struct RtHodge **out);

/**
 * # Safety
 * Both handles must be live; `report` NULL or writable.
 */
enum RtStatus rt_hodge_validate(const struct RtAlgebra *alg,
                                const struct RtHodge *hodge,
                                char **report);

/**
 * # Safety
 * `hodge` must be a live handle and `out` writable.
 */
enum RtStatus rt_hodge_to_json(const struct RtHodge *hodge, char **out);

/**
 * # Safety
 * `hodge` must be NULL or a live handle.
 */
void rt_hodge_free(struct RtHodge *hodge);

/**
 * Evaluation engine for one algebra and decomposition. The engine keeps
 * its own copies; both inputs may be freed afterwards.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum RtStatus rt_engine_new(const struct RtAlgebra *alg,
                            const struct RtHodge *hodge,
                            struct RtEngine **out);

/**
 * # Safety
 * `engine` must be NULL or a live handle.
 */
void rt_engine_free(struct RtEngine *engine);

/**
 * Integral of the assembled form over the cell of the graph, written to
 * `value` as `"p/q"`. Uses the graph's orientation if given.
 *
 * # Safety
 * `engine` live, `graph_json` NUL-terminated, `value` writable.
 */
enum RtStatus rt_costello_value(const struct RtEngine *engine,
                                const char *graph_json,
                                char **value);

/**
 * Propagator contraction of the graph, written as `"p/q"`.
 *
 * # Safety
 * `engine` live, `graph_json` NUL-terminated, `value` writable.
 */
enum RtStatus rt_kontsevich_value(const struct RtEngine *engine,
                                  const char *graph_json,
                                  char **value);

/**
 * Cochain value on the oriented cell, written as `"p/q"`.
 *
 * # Safety
 * `engine` live, `graph_json` NUL-terminated, `value` writable.
 */
enum RtStatus rt_cochain_value(const struct RtEngine *engine, const char *graph_json, char **value);

/**
 * Values on every generator of type `(g, n)` with at most `max_edges`
 * edges, as JSON keyed by canonical graph key.
 *
 * # Safety
 * `engine` live, `json` writable.
 */
enum RtStatus rt_cochain_values(const struct RtEngine *engine,
                                size_t g,
                                size_t n,
                                size_t max_edges,
                                enum RtComplex complex,
                                char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIBBON_TCFT_H */
