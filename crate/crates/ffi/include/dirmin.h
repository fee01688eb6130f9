#ifndef DIRMIN_H
#define DIRMIN_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum DmStatus {
  DM_STATUS_OK = 0,
  DM_STATUS_NULL_POINTER = 1,
  DM_STATUS_INVALID_UTF8 = 2,
  DM_STATUS_PARSE = 3,
  DM_STATUS_INVALID_PROBLEM = 4,
  DM_STATUS_UNKNOWN_COMMAND = 5,
  DM_STATUS_COMPUTATION = 6,
  DM_STATUS_PANIC = 7,
} DmStatus;

/**
 * Opaque problem handle.
 */
typedef struct DmProblem DmProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON problem file into a new handle stored in `*out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DmStatus dm_problem_from_json(const char *json, struct DmProblem **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `p` must come from [`dm_problem_from_json`] and not be freed twice.
 */
void dm_problem_free(struct DmProblem *p);

/**
 * Runs a command (`"certify"`, `"kkt"`, ...) and stores the JSON report in
 * `*report` and the command-line exit code (0, 1 or 2) in `*exit_code`.
 *
 * # Safety
 * `problem` must be a live handle; `command` a NUL-terminated string;
 * `report` and `exit_code` valid pointers.
 */
enum DmStatus dm_run(const struct DmProblem *problem,
                     const char *command,
                     bool weak,
                     char **report,
                     int32_t *exit_code);

/**
 * Runs a gallery example by name; outputs as in [`dm_run`].
 *
 * # Safety
 * `name` must be a NUL-terminated string; `report` and `exit_code` valid
 * pointers.
 */
enum DmStatus dm_gallery_run(const char *name, char **report, int32_t *exit_code);

/**
 * Value of the scalarization `max_i (a_i·y)/(a_i·e)` for the cone with
 * `rows` row-major `n_rows × dim` coefficients.
 *
 * # Safety
 * `rows` must hold `n_rows * dim` doubles, `e` and `y` `dim` doubles each,
 * and `out` must be a valid pointer.
 */
enum DmStatus dm_gerstewitz_value(const double *rows,
                                  size_t n_rows,
                                  size_t dim,
                                  const double *e,
                                  const double *y,
                                  double *out);

/**
 * Frees a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void dm_string_free(char *s);

/**
 * Message of the last failure on this thread (empty if none). Valid until
 * the next failing call on the same thread.
 */
const char *dm_last_error_message(void);

/**
 * Library version, statically allocated.
 */
const char *dm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRMIN_H */
