#ifndef COAUTHOR_RANK_H
#define COAUTHOR_RANK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code for every fallible call.
typedef enum CrStatus {
  CR_STATUS_OK = 0,
  // A required pointer argument was null.
  CR_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  CR_STATUS_INVALID_UTF8 = 2,
  // Bad data or parameters: empty graph, invalid damping, dangling node, unreadable file, ...
  CR_STATUS_INPUT_ERROR = 3,
  // Power iteration did not converge or the direct system was singular.
  CR_STATUS_NUMERICAL_ERROR = 4,
  // The output buffer is shorter than the node count.
  CR_STATUS_BUFFER_TOO_SMALL = 5,
  // An internal panic was caught.
  CR_STATUS_PANIC = 6,
} CrStatus;

// Transition matrix normalization.
typedef enum CrMode {
  // Divide edge weights by the column's weighted degree.
  CR_MODE_WEIGHTED = 0,
  // Divide by neighbor count, ignoring weights.
  CR_MODE_UNWEIGHTED = 1,
} CrMode;

// Accumulates raw edge records before a graph is built.
typedef struct CrEdgeList CrEdgeList;

// Immutable coauthorship graph with nodes in ascending author order.
typedef struct CrGraph CrGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. Valid until the next call on this thread.
const char *cr_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *cr_version(void);

// Creates an empty edge list. Free with [`cr_edge_list_free`].
struct CrEdgeList *cr_edge_list_new(void);

// # Safety
// `list` must come from [`cr_edge_list_new`] (or be null) and not be used afterwards.
void cr_edge_list_free(struct CrEdgeList *list);

// Appends one coauthorship record. Validation happens in [`cr_graph_build`].
//
// # Safety
// `list` must be a live edge list; `a` and `b` NUL-terminated strings.
enum CrStatus cr_edge_list_push(struct CrEdgeList *list,
                                const char *a,
                                const char *b,
                                double weight);

// Builds a graph from the list. Duplicate pairs merge by summing weights; self-loops are dropped.
//
// # Safety
// `list` must be a live edge list and `out` writable. On success `*out` owns a
// graph to be released with [`cr_graph_free`].
enum CrStatus cr_graph_build(const struct CrEdgeList *list, struct CrGraph **out);

// Reads a tab-separated edge list file (`a<TAB>b[<TAB>weight]`); malformed lines are skipped.
//
// # Safety
// `path` must be a NUL-terminated string and `out` writable.
enum CrStatus cr_graph_from_tsv(const char *path, struct CrGraph **out);

// # Safety
// `graph` must come from this library (or be null) and not be used afterwards.
void cr_graph_free(struct CrGraph *graph);

// Node count, or 0 for null.
//
// # Safety
// `graph` must be a live graph or null.
size_t cr_graph_node_count(const struct CrGraph *graph);

// Undirected edge count, or 0 for null.
//
// # Safety
// `graph` must be a live graph or null.
size_t cr_graph_edge_count(const struct CrGraph *graph);

// Name of node `index`, or null when out of range. Valid while the graph lives.
//
// # Safety
// `graph` must be a live graph or null.
const char *cr_graph_node_name(const struct CrGraph *graph, size_t index);

// Extracts the largest connected component as a new graph.
//
// # Safety
// `graph` must be a live graph and `out` writable.
enum CrStatus cr_graph_largest_component(const struct CrGraph *graph, struct CrGraph **out);

// Power-iteration PageRank. Scores are written in node order and sum to 1.
//
// `teleport` may be null for the uniform vector; otherwise `teleport_len` non-negative
// weights (normalized internally) in node order. `out_iterations` may be null.
//
// # Safety
// Pointers must be valid for the stated lengths.
enum CrStatus cr_pagerank(const struct CrGraph *graph,
                          enum CrMode mode,
                          double damping,
                          double tolerance,
                          size_t max_iter,
                          const double *teleport,
                          size_t teleport_len,
                          double *out_scores,
                          size_t out_len,
                          size_t *out_iterations);

// Dense direct solve of the same fixed point; limited to moderate graph sizes.
//
// # Safety
// Pointers must be valid for the stated lengths.
enum CrStatus cr_solve_direct(const struct CrGraph *graph,
                              enum CrMode mode,
                              double damping,
                              const double *teleport,
                              size_t teleport_len,
                              double *out_scores,
                              size_t out_len);

// Spearman rank correlation with average ranks for ties and a two-sided p-value.
//
// # Safety
// `x` and `y` must hold `n` elements; `out_rho` must be writable; `out_p` may be null.
enum CrStatus cr_spearman(const double *x,
                          const double *y,
                          size_t n,
                          double *out_rho,
                          double *out_p);

// h-index of per-paper citation counts.
//
// # Safety
// `counts` must hold `n` elements and `out` be writable.
enum CrStatus cr_h_index(const uint64_t *counts, size_t n, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COAUTHOR_RANK_H */
