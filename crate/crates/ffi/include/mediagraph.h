#ifndef MEDIAGRAPH_H
#define MEDIAGRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MgColor {
  MG_COLOR_NONE = 0,
  MG_COLOR_COMMUNITY = 1,
} MgColor;

typedef enum MgFormat {
  MG_FORMAT_GEXF = 0,
  MG_FORMAT_GRAPHML = 1,
  MG_FORMAT_DOT = 2,
  MG_FORMAT_CSV_EDGES = 3,
  MG_FORMAT_CSV_VERTICES = 4,
  MG_FORMAT_JSON = 5,
} MgFormat;

/**
 * Result code of every fallible call.
 */
typedef enum MgStatus {
  MG_STATUS_OK = 0,
  MG_STATUS_NULL_ARGUMENT = 1,
  MG_STATUS_INVALID_UTF8 = 2,
  MG_STATUS_IO = 3,
  MG_STATUS_PARSE = 4,
  MG_STATUS_INVALID_INPUT = 5,
  MG_STATUS_UNSUPPORTED = 6,
  MG_STATUS_INTERNAL = 7,
  MG_STATUS_PANIC = 8,
} MgStatus;

typedef enum MgWeight {
  MG_WEIGHT_FREQUENCY = 0,
  MG_WEIGHT_UNIT = 1,
} MgWeight;

/**
 * Opaque graph handle.
 */
typedef struct MgGraph MgGraph;

/**
 * Thresholds for [`mg_contrast_json`]. Obtain defaults from
 * [`mg_contrast_params_default`].
 */
typedef struct MgContrastParams {
  uint64_t min_freq;
  double min_abs_pol;
  size_t min_degree;
  size_t top_k;
} MgContrastParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next library call on the same thread.
 */
const char *mg_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mg_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void mg_string_free(char *s);

/**
 * Load a graph from its native JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum MgStatus mg_graph_load_json(const char *path, struct MgGraph **out);

/**
 * Parse a graph from native JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum MgStatus mg_graph_from_json(const char *json, struct MgGraph **out);

/**
 * Run the builtin pipeline on a corpus file with default parameters:
 * builtin annotation with title, intersection admission, default alias
 * thresholds, sentence co-occurrence edges.
 *
 * # Safety
 * `corpus_path` must be a NUL-terminated string, `source_label` NULL or a
 * NUL-terminated string; `out` must be writable.
 */
enum MgStatus mg_graph_build_builtin(const char *corpus_path,
                                     const char *source_label,
                                     struct MgGraph **out);

/**
 * # Safety
 * `graph` must be NULL or a handle from this library not yet freed.
 */
void mg_graph_free(struct MgGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum MgStatus mg_graph_vertex_count(const struct MgGraph *graph, size_t *out);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum MgStatus mg_graph_edge_count(const struct MgGraph *graph, size_t *out);

/**
 * Serialize the graph to native JSON. Free the result with [`mg_string_free`].
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum MgStatus mg_graph_to_json(const struct MgGraph *graph, char **out);

/**
 * Metrics summary as JSON, the same document `metrics` writes to
 * `summary.json`. Free the result with [`mg_string_free`].
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum MgStatus mg_graph_summary_json(const struct MgGraph *graph,
                                    enum MgWeight weight,
                                    uint64_t seed,
                                    char **out);

/**
 * Write the graph to `path`. Community colors run Louvain with `seed` and
 * frequency weights.
 *
 * # Safety
 * `graph` must be a live handle; `path` must be a NUL-terminated string.
 */
enum MgStatus mg_graph_export(const struct MgGraph *graph,
                              const char *path,
                              enum MgFormat format,
                              enum MgColor color,
                              uint64_t seed);

struct MgContrastParams mg_contrast_params_default(void);

/**
 * Contrast report and subgraph of two graphs as one JSON object with keys
 * `report` and `subgraph`. Free the result with [`mg_string_free`].
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum MgStatus mg_contrast_json(const struct MgGraph *a,
                               const struct MgGraph *b,
                               struct MgContrastParams params,
                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEDIAGRAPH_H */
