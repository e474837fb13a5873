#ifndef BSPOLE_H
#define BSPOLE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum BspoleStatus {
  BSPOLE_STATUS_OK = 0,
  BSPOLE_STATUS_NULL_POINTER = 1,
  BSPOLE_STATUS_INVALID_UTF8 = 2,
  // The polynomial or options were rejected.
  BSPOLE_STATUS_VALIDATION = 3,
  // Numerical or internal failure.
  BSPOLE_STATUS_NUMERIC = 4,
  BSPOLE_STATUS_OUT_OF_RANGE = 5,
  BSPOLE_STATUS_PANIC = 6,
} BspoleStatus;

typedef enum BspoleVerdict {
  BSPOLE_VERDICT_POLE = 0,
  BSPOLE_VERDICT_NOT_POLE_SYMMETRY = 1,
  BSPOLE_VERDICT_NOT_POLE_NUMERIC = 2,
  BSPOLE_VERDICT_INDETERMINATE = 3,
} BspoleVerdict;

// Opaque analysis report.
typedef struct BspoleReport BspoleReport;

// Numerical options; start from [`bspole_options_default`].
typedef struct BspoleOptions {
  double tol_rel;
  double zero_abs;
  double zero_rel;
  // Explicit type `(a, b; m)`; all zero to infer it.
  uint64_t weight_a;
  uint64_t weight_b;
  uint64_t weight_m;
} BspoleOptions;

// One window root `s0 = s0_num / s0_den`.
typedef struct BspoleRoot {
  uint64_t d;
  int64_t s0_num;
  int64_t s0_den;
  enum BspoleVerdict verdict;
  uint32_t representation_count;
} BspoleRoot;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

struct BspoleOptions bspole_options_default(void);

// Parses `poly`, validates it and classifies every window root.
//
// # Safety
// `poly` must be a NUL-terminated string; `options` may be null for defaults;
// `out` must be writable. On success `*out` owns a report for [`bspole_report_free`].
enum BspoleStatus bspole_analyze(const char *poly,
                                 const struct BspoleOptions *options,
                                 struct BspoleReport **out);

// # Safety
// `report` must come from [`bspole_analyze`] and not be used afterwards. Null is ignored.
void bspole_report_free(struct BspoleReport *report);

// Number of roots in `(-1, 0)`; 0 for a null report.
//
// # Safety
// `report` must be null or a live report.
size_t bspole_report_root_count(const struct BspoleReport *report);

// # Safety
// `report` must be a live report and `out` writable.
enum BspoleStatus bspole_report_root(const struct BspoleReport *report,
                                     size_t index,
                                     struct BspoleRoot *out);

// The resolved type `(a, b; m)`.
//
// # Safety
// `report` must be a live report; the output pointers must be writable.
enum BspoleStatus bspole_report_weights(const struct BspoleReport *report,
                                        uint64_t *a,
                                        uint64_t *b,
                                        uint64_t *m);

// 1 when some verdict is indeterminate, 0 otherwise (or for a null report).
//
// # Safety
// `report` must be null or a live report.
int32_t bspole_report_has_indeterminate(const struct BspoleReport *report);

// The full report as JSON. Free with [`bspole_string_free`]; null on failure.
//
// # Safety
// `report` must be null or a live report.
char *bspole_report_json(const struct BspoleReport *report);

// # Safety
// `s` must come from this library and not be used afterwards. Null is ignored.
void bspole_string_free(char *s);

// Message of the last failure on this thread, or null. Valid until the next call on the thread.
const char *bspole_last_error_message(void);

// Library version as a static string.
const char *bspole_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BSPOLE_H */
