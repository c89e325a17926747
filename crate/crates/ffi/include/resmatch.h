#ifndef RESMATCH_H
#define RESMATCH_H

/* Generated by cbindgen. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ResmatchStatus {
  RESMATCH_STATUS_OK = 0,
  RESMATCH_STATUS_NULL_ARGUMENT = 1,
  RESMATCH_STATUS_INVALID_UTF8 = 2,
  RESMATCH_STATUS_PARSE_ERROR = 3,
  RESMATCH_STATUS_INVALID_GRAPH = 4,
  RESMATCH_STATUS_INVALID_INSTANCE = 5,
  RESMATCH_STATUS_BUDGET_EXCEEDED = 6,
  RESMATCH_STATUS_INVALID_ARGUMENT = 7,
  RESMATCH_STATUS_PANIC = 8,
} ResmatchStatus;

typedef enum ResmatchMode {
  /**
   * Is there a maximum matching F with β(G \ F) ≥ k?
   */
  RESMATCH_MODE_AT_LEAST = 0,
  /**
   * Is there a maximum matching F with β(G \ F) ≤ k?
   */
  RESMATCH_MODE_AT_MOST = 1,
} ResmatchMode;

/**
 * Opaque reduction artifact handle.
 */
typedef struct ResmatchArtifact ResmatchArtifact;

/**
 * Opaque graph handle.
 */
typedef struct ResmatchGraph ResmatchGraph;

typedef struct ResmatchStats {
  size_t vertices;
  size_t edges;
  size_t max_degree;
  bool connected;
} ResmatchStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *resmatch_last_error_message(void);

/**
 * Parses a graph file (JSON) into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ResmatchStatus resmatch_graph_from_json(const char *json, struct ResmatchGraph **out);

/**
 * # Safety
 * `graph` must be NULL or a handle from this library not yet freed.
 */
void resmatch_graph_free(struct ResmatchGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum ResmatchStatus resmatch_graph_stats(const struct ResmatchGraph *graph,
                                         struct ResmatchStats *out);

/**
 * β(G). `budget_nodes` of 0 selects the default (or `RESMATCH_BUDGET`).
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum ResmatchStatus resmatch_matching_number(const struct ResmatchGraph *graph,
                                             uint64_t budget_nodes,
                                             size_t *out);

/**
 * Minimum and maximum of β(G \ F) over the maximum matchings F.
 *
 * # Safety
 * `graph` must be a live handle; `min_out` and `max_out` must be writable.
 */
enum ResmatchStatus resmatch_residual_range(const struct ResmatchGraph *graph,
                                            uint64_t budget_nodes,
                                            size_t *min_out,
                                            size_t *max_out);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum ResmatchStatus resmatch_decide(const struct ResmatchGraph *graph,
                                    enum ResmatchMode mode,
                                    size_t k,
                                    uint64_t budget_nodes,
                                    bool *out);

/**
 * Builds the reduction graph for a DIMACS instance, threshold `big_k` and
 * theorem 1 or 2.
 *
 * # Safety
 * `dimacs` must be a NUL-terminated string; `out` must be writable.
 */
enum ResmatchStatus resmatch_reduce(const char *dimacs,
                                    size_t big_k,
                                    uint8_t theorem,
                                    struct ResmatchArtifact **out);

/**
 * # Safety
 * `artifact` must be NULL or a handle from this library not yet freed.
 */
void resmatch_artifact_free(struct ResmatchArtifact *artifact);

/**
 * The residual threshold k of the artifact.
 *
 * # Safety
 * `artifact` must be a live handle; `out` must be writable.
 */
enum ResmatchStatus resmatch_artifact_k(const struct ResmatchArtifact *artifact, size_t *out);

/**
 * A new graph handle holding a copy of the artifact's graph.
 *
 * # Safety
 * `artifact` must be a live handle; `out` must be writable.
 */
enum ResmatchStatus resmatch_artifact_graph(const struct ResmatchArtifact *artifact,
                                            struct ResmatchGraph **out);

/**
 * The artifact file as JSON; release with [`resmatch_string_free`].
 *
 * # Safety
 * `artifact` must be a live handle; `out` must be writable.
 */
enum ResmatchStatus resmatch_artifact_json(const struct ResmatchArtifact *artifact, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void resmatch_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESMATCH_H */
