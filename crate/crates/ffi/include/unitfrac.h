#ifndef UNITFRAC_H
#define UNITFRAC_H

#include <stdint.h>

/*
 Which numeric setting [`uf_config_set_bound`] changes.
 */
typedef enum UfBound {
  UF_BOUND_R1_MAX = 0,
  UF_BOUND_W5_MAX = 1,
  UF_BOUND_U5_MAX = 2,
  UF_BOUND_WORK_BUDGET = 3,
  UF_BOUND_ORACLE_MAX_N = 4,
} UfBound;

typedef enum UfStatus {
  UF_OK = 0,
  /*
   Nothing found within the configured bounds, or a triple did not verify.
   */
  UF_NOT_FOUND = 1,
  UF_INVALID_ARGUMENT = 2,
  /*
   Work budget, divisor cap or overflow; a larger budget may help.
   */
  UF_RESOURCE_LIMIT = 3,
  /*
   A value does not fit the requested output type.
   */
  UF_OUT_OF_RANGE = 4,
  UF_NULL_POINTER = 5,
  UF_INTERNAL = 6,
} UfStatus;

/*
 Pipeline settings.
 */
typedef struct UfConfig UfConfig;

/*
 A verified decomposition of 4/n.
 */
typedef struct UfDecomposition UfDecomposition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 Valid until the next `uf_*` call on the same thread. Do not free.
 */
const char *uf_last_error(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void uf_string_free(char *s);

/*
 Default settings: all stages, r1 <= 100, w5, u5 <= 1000.
 */
struct UfConfig *uf_config_new(void);

/*
 Parses TOML settings into a new handle.

 # Safety
 `toml` must be a NUL-terminated string; `out` must be writable.
 */
enum UfStatus uf_config_from_toml(const char *toml, struct UfConfig **out);

/*
 # Safety
 `cfg` must come from `uf_config_new`/`uf_config_from_toml` or be null.
 */
void uf_config_free(struct UfConfig *cfg);

/*
 Stage order as a comma list, e.g. `"split,multiplier"`.

 # Safety
 `cfg` must be a live handle and `methods` a NUL-terminated string.
 */
enum UfStatus uf_config_set_methods(struct UfConfig *cfg, const char *methods);

/*
 Sets one search bound. `which` is a `UfBound` value (taken as an integer
 so an out-of-range value is an error, not undefined behavior); `value`
 must be at least 1.

 # Safety
 `cfg` must be a live handle.
 */
enum UfStatus uf_config_set_bound(struct UfConfig *cfg, uint32_t which, uint64_t value);

/*
 1 if 4/n = 1/x + 1/y + 1/z exactly, else 0 (including any zero argument).
 */
int32_t uf_verify_u64(uint64_t n, uint64_t x, uint64_t y, uint64_t z);

/*
 [`uf_verify_u64`] for decimal strings up to 2^128 - 1. `UF_OK` with
 `*holds` set to 1 or 0.

 # Safety
 All strings must be NUL-terminated; `holds` must be writable.
 */
enum UfStatus uf_verify_str(const char *n,
                            const char *x,
                            const char *y,
                            const char *z,
                            int32_t *holds);

/*
 Runs the solve pipeline. `cfg` may be null for defaults. On `UF_OK`,
 `*out` holds a handle to free with `uf_decomposition_free`; otherwise it
 is set to null.

 # Safety
 `cfg` must be a live handle or null; `out` must be writable.
 */
enum UfStatus uf_solve(const struct UfConfig *cfg, uint64_t n, struct UfDecomposition **out);

/*
 [`uf_solve`] with `n` as a decimal string.

 # Safety
 As [`uf_solve`]; `n` must be NUL-terminated.
 */
enum UfStatus uf_solve_str(const struct UfConfig *cfg, const char *n, struct UfDecomposition **out);

/*
 # Safety
 `d` must come from `uf_solve`/`uf_solve_str` or be null.
 */
void uf_decomposition_free(struct UfDecomposition *d);

/*
 `n`, `x`, `y`, `z` as 64-bit values; `UF_OUT_OF_RANGE` if any is wider
 (use `uf_decomposition_json` then). Output pointers may be null.

 # Safety
 `d` must be a live handle; non-null outputs must be writable.
 */
enum UfStatus uf_decomposition_values(const struct UfDecomposition *d,
                                      uint64_t *n,
                                      uint64_t *x,
                                      uint64_t *y,
                                      uint64_t *z);

/*
 Method tag such as `"identity:F4"` or `"multiplier-split"`. Free with `uf_string_free`.

 # Safety
 `d` must be a live handle.
 */
char *uf_decomposition_method(const struct UfDecomposition *d);

/*
 The JSON record `{"n", "x", "y", "z", "method", "params"}`. Free with `uf_string_free`.

 # Safety
 `d` must be a live handle.
 */
char *uf_decomposition_json(const struct UfDecomposition *d);

/*
 Number of canonical solutions `x <= y <= z` of 4/n.

 # Safety
 `out` must be writable.
 */
enum UfStatus uf_oracle_count(uint64_t n, uint64_t *out);

/*
 Number of `(w5, u5)` witnesses with `w5 <= w5_max`, `u5 <= u5_max` for `p = 1 mod 4`.

 # Safety
 `out` must be writable.
 */
enum UfStatus uf_parametric_count(uint64_t p, uint64_t w5_max, uint64_t u5_max, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNITFRAC_H */
