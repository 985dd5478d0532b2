#ifndef MUKAI_H
#define MUKAI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MkStatus {
  MK_STATUS_OK = 0,
  MK_STATUS_NULL_ARGUMENT = 1,
  MK_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or vector text.
   */
  MK_STATUS_PARSE = 3,
  /**
   * The computation refused the input; see `mk_last_error_code`.
   */
  MK_STATUS_DOMAIN = 4,
  /**
   * A trace was read but did not verify.
   */
  MK_STATUS_REJECTED = 5,
  MK_STATUS_PANIC = 6,
} MkStatus;

typedef enum MkSurfaceKind {
  MK_SURFACE_KIND_K3 = 0,
  MK_SURFACE_KIND_ABELIAN = 1,
} MkSurfaceKind;

/**
 * Opaque surface model.
 */
typedef struct MkSurface MkSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static storage.
 */
const char *mk_version(void);

/**
 * Error code of the last failure on this thread, e.g. `rank_too_small`.
 * Valid until the next failing call on the same thread.
 */
const char *mk_last_error_code(void);

/**
 * Human-readable message of the last failure on this thread.
 */
const char *mk_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void mk_string_free(char *s);

/**
 * Builds a surface from a preset name (`k3-elliptic`, `abelian-elliptic`,
 * `k3-deg2`, `abelian-deg2`) or a JSON object.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
enum MkStatus mk_surface_new(const char *source, struct MkSurface **out);

/**
 * # Safety
 * `s` must come from [`mk_surface_new`] and not have been freed. Null is ignored.
 */
void mk_surface_free(struct MkSurface *s);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MkStatus mk_surface_rho(const struct MkSurface *s, size_t *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MkStatus mk_surface_kind(const struct MkSurface *s, enum MkSurfaceKind *out);

/**
 * JSON form of the surface.
 *
 * # Safety
 * Pointers must be valid; free the result with [`mk_string_free`].
 */
enum MkStatus mk_surface_to_json(const struct MkSurface *s, char **out);

/**
 * Mukai pairing `(v, u)` as a decimal string.
 *
 * # Safety
 * Pointers must be valid; free the result with [`mk_string_free`].
 */
enum MkStatus mk_mukai_pairing(const struct MkSurface *s, const char *v, const char *u, char **out);

/**
 * Norm bound `|v|` as `p/q`, or an integer when exact.
 *
 * # Safety
 * Pointers must be valid; free the result with [`mk_string_free`].
 */
enum MkStatus mk_norm_bound(const struct MkSurface *s, const char *v, char **out);

/**
 * Wall certificates as a JSON array: the walls through `h` when given,
 * otherwise the complete list on an elliptic model.
 *
 * # Safety
 * `h` may be null; other pointers must be valid. Free the result with
 * [`mk_string_free`].
 */
enum MkStatus mk_walls(const struct MkSurface *s, const char *v, const char *h, char **out);

/**
 * Second Betti number of the symplectic resolution (24 or 8).
 *
 * # Safety
 * `out` must be writable.
 */
enum MkStatus mk_resolution_b2(enum MkSurfaceKind kind, size_t *out);

/**
 * Validates a triple `{"surface", "v", "H"}` and returns the reduction trace
 * as JSON. `config` may be null for defaults.
 *
 * # Safety
 * `config` may be null; other pointers must be valid. Free the result with
 * [`mk_string_free`].
 */
enum MkStatus mk_reduce(const char *triple, const char *config, char **out);

/**
 * Re-checks a trace. The report is written to `report` in both outcomes;
 * the status is `MK_STATUS_REJECTED` when some move fails.
 *
 * # Safety
 * Pointers must be valid; free the report with [`mk_string_free`].
 */
enum MkStatus mk_verify(const char *trace, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUKAI_H */
