#ifndef HAMCUBE_H
#define HAMCUBE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_UTF8 = 2,
  HC_STATUS_PARSE_ERROR = 3,
  HC_STATUS_OUT_OF_CONTRACT = 4,
  HC_STATUS_BUDGET_EXHAUSTED = 5,
  HC_STATUS_UNSAT = 6,
  HC_STATUS_CONSTRUCTION_FAILED = 7,
  HC_STATUS_VIOLATION = 8,
  HC_STATUS_PANIC = 9,
} HcStatus;

/**
 * A validated instance.
 */
typedef struct HcInstance HcInstance;

/**
 * A verified Hamiltonian path.
 */
typedef struct HcPath HcPath;

/**
 * Engine settings; start from [`hc_config_default`].
 */
typedef struct HcConfig {
  /**
   * Dimensions up to this are solved by exact search (at least 5).
   */
  uint32_t n_base;
  /**
   * Node limit per exact-search call.
   */
  uint64_t node_limit;
  /**
   * Wall-clock limit per exact-search call in milliseconds; 0 for none.
   */
  uint64_t time_limit_ms;
  uint64_t seed;
  /**
   * Fail instead of falling back to exact search.
   */
  bool strict;
} HcConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *hc_last_error(void);

const char *hc_version(void);

struct HcConfig hc_config_default(void);

/**
 * Parses an instance in the text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HcStatus hc_instance_parse(const char *text, struct HcInstance **out);

/**
 * Builds an instance from raw vertices; `edges` holds `2 * n_edges` values.
 *
 * # Safety
 * `edges` must point to `2 * n_edges` values (or be null when `n_edges` is
 * 0) and `out` must be a valid pointer.
 */
enum HcStatus hc_instance_new(uint32_t n,
                              uint64_t x,
                              uint64_t y,
                              const uint64_t *edges,
                              size_t n_edges,
                              struct HcInstance **out);

/**
 * # Safety
 * `inst` must come from this library and not be used afterwards.
 */
void hc_instance_free(struct HcInstance *inst);

/**
 * Dimension of the instance; 0 for null.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
uint32_t hc_instance_dim(const struct HcInstance *inst);

/**
 * Builds a Hamiltonian path for `inst`. `config` may be null for defaults.
 *
 * # Safety
 * `inst` must be a live handle, `config` null or valid, `out` valid.
 */
enum HcStatus hc_solve(const struct HcInstance *inst,
                       const struct HcConfig *config,
                       struct HcPath **out);

/**
 * Number of vertices; 0 for null.
 *
 * # Safety
 * `path` must be null or a live handle.
 */
size_t hc_path_len(const struct HcPath *path);

/**
 * The vertices of `path`, valid while the handle lives.
 *
 * # Safety
 * `path` must be null or a live handle.
 */
const uint64_t *hc_path_vertices(const struct HcPath *path);

/**
 * The path in the text format; release with [`hc_string_free`].
 *
 * # Safety
 * `path` must be null or a live handle.
 */
char *hc_path_to_text(const struct HcPath *path);

/**
 * # Safety
 * `path` must come from this library and not be used afterwards.
 */
void hc_path_free(struct HcPath *path);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void hc_string_free(char *s);

/**
 * Checks a vertex sequence against `inst`: `Ok` or `Violation`.
 *
 * # Safety
 * `inst` must be a live handle and `vertices` point to `len` values.
 */
enum HcStatus hc_verify(const struct HcInstance *inst, const uint64_t *vertices, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HAMCUBE_H */
