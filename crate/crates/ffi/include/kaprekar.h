#ifndef KAPREKAR_H
#define KAPREKAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum KaprekarStatus {
  KAPREKAR_STATUS_OK = 0,
  KAPREKAR_STATUS_INVALID_BASE = 1,
  KAPREKAR_STATUS_DIGIT_OUT_OF_RANGE = 2,
  KAPREKAR_STATUS_VALUE_OUT_OF_RANGE = 3,
  KAPREKAR_STATUS_INVALID_PAIR = 4,
  KAPREKAR_STATUS_UNSUPPORTED_BASE = 5,
  KAPREKAR_STATUS_UNDETERMINED = 6,
  KAPREKAR_STATUS_NULL_POINTER = 7,
  KAPREKAR_STATUS_INDEX_OUT_OF_RANGE = 8,
  // The quantity is not defined for this input, e.g. no prediction.
  KAPREKAR_STATUS_NO_VALUE = 9,
  // The result does not fit the output type.
  KAPREKAR_STATUS_OVERFLOW = 10,
  KAPREKAR_STATUS_PANIC = 11,
} KaprekarStatus;

typedef enum KaprekarTerminal {
  KAPREKAR_TERMINAL_FIXED_NUMERAL = 0,
  KAPREKAR_TERMINAL_ZERO_SINK = 1,
  KAPREKAR_TERMINAL_CYCLE = 2,
} KaprekarTerminal;

// Opaque per-base statistics.
typedef struct KaprekarReport KaprekarReport;

// Opaque orbit of one numeral.
typedef struct KaprekarTrajectory KaprekarTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated description of a status code.
const char *kaprekar_status_message(enum KaprekarStatus status);

// One application of the Kaprekar map to `digits`, written to `result`.
enum KaprekarStatus kaprekar_step(uint32_t base, const uint32_t *digits, uint32_t *result);

// Difference pair `(d, d′)` of a numeral.
enum KaprekarStatus kaprekar_pair_of(uint32_t base,
                                     const uint32_t *digits,
                                     uint32_t *d,
                                     uint32_t *d_prime);

// Pair of the image of any numeral with pair `(d, d′)`.
enum KaprekarStatus kaprekar_pair_step(uint32_t base,
                                       uint32_t d,
                                       uint32_t d_prime,
                                       uint32_t *next_d,
                                       uint32_t *next_d_prime);

// Number of four-digit numerals whose pair is `(d, d′)`.
enum KaprekarStatus kaprekar_count_representatives(uint32_t base,
                                                   uint32_t d,
                                                   uint32_t d_prime,
                                                   uint64_t *count);

// Closed-form largest distance to the fixed numeral; `NO_VALUE` when no
// prediction applies.
enum KaprekarStatus kaprekar_predict_mb(uint32_t base, uint32_t *mb);

// Closed-form convergence fraction as a reduced `numerator/denominator`.
enum KaprekarStatus kaprekar_predict_cb(uint32_t base, uint64_t *numerator, uint64_t *denominator);

// Iterates from `digits` for at most `max_steps` steps (0 selects the
// default budget). On success `*trajectory` owns a new handle.
enum KaprekarStatus kaprekar_trajectory_new(uint32_t base,
                                            const uint32_t *digits,
                                            uint64_t max_steps,
                                            struct KaprekarTrajectory **trajectory);

// Number of recorded states, the start included; 0 for a null handle.
size_t kaprekar_trajectory_len(const struct KaprekarTrajectory *trajectory);

enum KaprekarStatus kaprekar_trajectory_state(const struct KaprekarTrajectory *trajectory,
                                              size_t index,
                                              uint32_t *digits);

// How the orbit ends. `period` and `entry_step` are written only for
// cycles and may be null otherwise.
enum KaprekarStatus kaprekar_trajectory_terminal(const struct KaprekarTrajectory *trajectory,
                                                 enum KaprekarTerminal *kind,
                                                 size_t *period,
                                                 size_t *entry_step);

// Steps to the fixed numeral; `NO_VALUE` if the orbit never reaches it.
enum KaprekarStatus kaprekar_trajectory_distance(const struct KaprekarTrajectory *trajectory,
                                                 uint32_t *distance);

void kaprekar_trajectory_free(struct KaprekarTrajectory *trajectory);

// Computes the statistics of `base`. On success `*report` owns a new
// handle.
enum KaprekarStatus kaprekar_report_new(uint32_t base, struct KaprekarReport **report);

// Largest distance to a fixed numeral; `NO_VALUE` when nothing converges.
enum KaprekarStatus kaprekar_report_mb(const struct KaprekarReport *report, uint32_t *mb);

// Number of numerals whose orbit reaches a non-zero fixed numeral.
enum KaprekarStatus kaprekar_report_sb_size(const struct KaprekarReport *report, uint64_t *size);

// Converging fraction of all numerals, reduced.
enum KaprekarStatus kaprekar_report_cb(const struct KaprekarReport *report,
                                       uint64_t *numerator,
                                       uint64_t *denominator);

// Number of distinct distances in the histogram.
size_t kaprekar_report_histogram_len(const struct KaprekarReport *report);

// The `index`-th histogram entry, in increasing distance.
enum KaprekarStatus kaprekar_report_histogram_entry(const struct KaprekarReport *report,
                                                    size_t index,
                                                    uint32_t *distance,
                                                    uint64_t *count);

void kaprekar_report_free(struct KaprekarReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KAPREKAR_H */
