#ifndef FAIRSTOP_H
#define FAIRSTOP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define FAIRSTOP_OK 0

#define FAIRSTOP_ERR_NULL_POINTER 1

#define FAIRSTOP_ERR_INVALID_UTF8 2

#define FAIRSTOP_ERR_PARSE 3

#define FAIRSTOP_ERR_INVALID_ARGUMENT 4

#define FAIRSTOP_ERR_INFEASIBLE 5

#define FAIRSTOP_ERR_INTERNAL 6

#define FAIRSTOP_SETTING_ONLINE_IIF 0

#define FAIRSTOP_SETTING_ONLINE_TIF 1

#define FAIRSTOP_SETTING_OFFLINE_RELAXATION 2

#define FAIRSTOP_SETTING_MUST_HIRE_IIF 3

#define FAIRSTOP_SETTING_MUST_HIRE_TIF 4

// Parsed problem instance.
typedef struct FairstopInstance FairstopInstance;

// Solved policy with its objective.
typedef struct FairstopPolicy FairstopPolicy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses an instance JSON (`{"dists": [...], "order": [...]}`, order
// optional and 1-based).
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
int32_t fairstop_instance_from_json(const char *json, struct FairstopInstance **out);

// # Safety
// `instance` must come from [`fairstop_instance_from_json`] or be null.
void fairstop_instance_free(struct FairstopInstance *instance);

// Number of candidates, or 0 for a null handle.
//
// # Safety
// `instance` must be a live handle or null.
uintptr_t fairstop_instance_n(const struct FairstopInstance *instance);

// # Safety
// `instance` must be a live handle; `out` must be writable.
int32_t fairstop_expected_max(const struct FairstopInstance *instance, double *out);

// Solves one program. `order` holds `order_len` 1-based positions; pass a
// null pointer to use the instance's own order (or the identity).
//
// # Safety
// `instance` must be a live handle; `order` must point to `order_len`
// readable values or be null; `out` must be writable.
int32_t fairstop_solve(const struct FairstopInstance *instance,
                       int32_t setting,
                       const uint32_t *order,
                       uintptr_t order_len,
                       struct FairstopPolicy **out);

// Optimal objective, or NaN for a null handle.
//
// # Safety
// `policy` must be a live handle or null.
double fairstop_policy_objective(const struct FairstopPolicy *policy);

// Serializes the policy; free the string with [`fairstop_string_free`].
//
// # Safety
// `policy` must be a live handle; `out` must be writable.
int32_t fairstop_policy_to_json(const struct FairstopPolicy *policy, char **out);

// # Safety
// `s` must come from this library or be null.
void fairstop_string_free(char *s);

// # Safety
// `policy` must come from [`fairstop_solve`] or be null.
void fairstop_policy_free(struct FairstopPolicy *policy);

// Message of the last failed call on this thread, or null. Valid until the
// next call on the same thread.
const char *fairstop_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FAIRSTOP_H */
