#ifndef QPCHAR_H
#define QPCHAR_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QpcStatus {
  QPC_STATUS_OK = 0,
  QPC_STATUS_NULL_POINTER = 1,
  QPC_STATUS_INVALID_UTF8 = 2,
  QPC_STATUS_PARSE = 3,
  QPC_STATUS_DOMAIN = 4,
  QPC_STATUS_PANIC = 5,
} QpcStatus;

/**
 * Opaque quiver-with-potential handle.
 */
typedef struct QpcQp QpcQp;

/**
 * Opaque quiver handle.
 */
typedef struct QpcQuiver QpcQuiver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * failing call; do not free.
 */
const char *qpc_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void qpc_string_free(char *s);

/**
 * Parses a quiver from `{"vertices": n, "arrows": [[s, t, "label"], ...]}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum QpcStatus qpc_quiver_from_json(const char *json, struct QpcQuiver **out);

/**
 * # Safety
 * `q` must be a valid handle; `out` receives a string to free with
 * [`qpc_string_free`].
 */
enum QpcStatus qpc_quiver_to_json(const struct QpcQuiver *q, char **out);

/**
 * # Safety
 * `q` must be null or a handle not yet freed.
 */
void qpc_quiver_free(struct QpcQuiver *q);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `q` must be null or a valid handle.
 */
size_t qpc_quiver_vertex_count(const struct QpcQuiver *q);

/**
 * Mutates at the 1-based `vertex`, writing a new handle to `out`.
 *
 * # Safety
 * `q` must be a valid handle and `out` a valid pointer.
 */
enum QpcStatus qpc_quiver_mutate(const struct QpcQuiver *q, size_t vertex, struct QpcQuiver **out);

/**
 * Writes the row-major `n x n` B-matrix into `buf`, which must hold
 * `len >= n * n` entries.
 *
 * # Safety
 * `q` must be a valid handle and `buf` valid for `len` writes.
 */
enum QpcStatus qpc_quiver_b_matrix(const struct QpcQuiver *q, int64_t *buf, size_t len);

/**
 * Builds a quiver with potential. `potential_json` may be null for the zero
 * potential; `trunc_degree` 0 selects the default.
 *
 * # Safety
 * `q` must be a valid handle, `potential_json` null or a nul-terminated
 * string, and `out` a valid pointer.
 */
enum QpcStatus qpc_qp_new(const struct QpcQuiver *q,
                          const char *potential_json,
                          size_t trunc_degree,
                          struct QpcQp **out);

/**
 * # Safety
 * `qp` must be null or a handle not yet freed.
 */
void qpc_qp_free(struct QpcQp *qp);

/**
 * Mutates (premutation plus reduction) at `vertex`.
 *
 * # Safety
 * `qp` must be a valid handle and `out` a valid pointer.
 */
enum QpcStatus qpc_qp_mutate(const struct QpcQp *qp, size_t vertex, struct QpcQp **out);

/**
 * Writes `{"quiver": ..., "potential": ...}`.
 *
 * # Safety
 * `qp` must be a valid handle and `out` a valid pointer.
 */
enum QpcStatus qpc_qp_to_json(const struct QpcQp *qp, char **out);

/**
 * Total dimension of the Jacobian algebra truncated at `max_degree`;
 * `stabilized` receives 1 if the graded dimensions vanished before the
 * truncation and 0 otherwise.
 *
 * # Safety
 * `qp`, `total` and `stabilized` must be valid pointers.
 */
enum QpcStatus qpc_jacobian_dimension(const struct QpcQp *qp,
                                      size_t max_degree,
                                      size_t *total,
                                      int32_t *stabilized);

/**
 * Explores the exchange graph to `depth` with at most `max_seeds` seeds.
 *
 * # Safety
 * `q` and all output pointers must be valid.
 */
enum QpcStatus qpc_exchange_graph_counts(const struct QpcQuiver *q,
                                         size_t depth,
                                         size_t max_seeds,
                                         size_t *seeds,
                                         size_t *variables,
                                         int32_t *closed);

/**
 * Cluster character of `{"module": ..., "g": [...]}` rendered as a
 * Laurent polynomial such as `(x2 + 1)/x1`.
 *
 * # Safety
 * `qp` must be a valid handle, `input_json` a nul-terminated string and
 * `out` a valid pointer.
 */
enum QpcStatus qpc_character(const struct QpcQp *qp, const char *input_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPCHAR_H */
