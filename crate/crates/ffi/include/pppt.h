#ifndef PPPT_H
#define PPPT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define PPPT_RULE_IAN 0

#define PPPT_RULE_OPT 1

#define PPPT_METHOD_COGNITIVE 0

#define PPPT_METHOD_FIXED_RATE 1

#define PPPT_INTERFERENCE_FULL 0

#define PPPT_INTERFERENCE_CLOSEST_ONLY 1

#define PPPT_RATE_MODE_EXACT_POWERS 0

#define PPPT_RATE_MODE_LOWER_BOUND_POWERS 1

typedef enum {
  PPPT_STATUS_OK = 0,
  /**
   * Null pointer or unknown enumeration constant.
   */
  PPPT_STATUS_INVALID_ARGUMENT = 1,
  PPPT_STATUS_CONFIG = 2,
  PPPT_STATUS_DOMAIN = 3,
  PPPT_STATUS_QUADRATURE = 4,
  PPPT_STATUS_BRACKET = 5,
  PPPT_STATUS_EMPTY_WINDOW = 6,
  PPPT_STATUS_NUMERICAL = 7,
  /**
   * Output buffer too small.
   */
  PPPT_STATUS_BUFFER_TOO_SMALL = 8,
  PPPT_STATUS_PANIC = 9,
} PpptStatus;

/**
 * Network parameters.
 */
typedef struct PpptNetwork PpptNetwork;

/**
 * One sampled realization.
 */
typedef struct PpptRealization PpptRealization;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *pppt_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pppt_version(void);

PpptStatus pppt_network_new(double lambda, double d, double alpha, PpptNetwork **out_net);

/**
 * Releases a network; null is ignored.
 */
void pppt_network_free(PpptNetwork *net);

/**
 * Mean number of interferers inside the link disc, `λπd²`.
 */
PpptStatus pppt_network_link_disc_mean(const PpptNetwork *network, double *value);

/**
 * IAN rate density at `x`.
 */
PpptStatus pppt_ian_pdf_rate(const PpptNetwork *network, double x, double *value);

/**
 * IAN SIR density at `x`.
 */
PpptStatus pppt_ian_pdf_beta(const PpptNetwork *network, double x, double *value);

/**
 * Density of the distance to the closest interferer at `x`.
 */
PpptStatus pppt_pdf_nearest_distance(const PpptNetwork *network, double x, double *value);

/**
 * OPT rate density at `x` given `n` jointly decoded interferers.
 */
PpptStatus pppt_opt_pdf_rate_conditional(const PpptNetwork *network,
                                         size_t n,
                                         double x,
                                         double *value);

/**
 * Unconditional OPT rate density at `x`.
 */
PpptStatus pppt_opt_pdf_rate(const PpptNetwork *network, double x, double *value);

/**
 * Cognitive spatial throughput.
 */
PpptStatus pppt_cognitive_throughput(const PpptNetwork *network, uint32_t rule_id, double *value);

/**
 * Lower bound on the cognitive throughput. IAN uses rate `y`; OPT uses
 * `y·log₂(2+i)/(1+i)` for `i` decoded interferers, so `y > 1` is required.
 */
PpptStatus pppt_lower_bound(const PpptNetwork *network, uint32_t rule_id, double y, double *value);

/**
 * Upper bound on the cognitive throughput.
 */
PpptStatus pppt_upper_bound(const PpptNetwork *network, uint32_t rule_id, double *value);

/**
 * High-density asymptote of the IAN cognitive throughput.
 */
PpptStatus pppt_ian_asymptote(const PpptNetwork *network, double *value);

/**
 * Density maximizing the IAN cognitive throughput and the maximum.
 */
PpptStatus pppt_optimal_density(double d, double alpha, double *lambda, double *throughput);

/**
 * Highest fixed-rate spatial throughput.
 */
PpptStatus pppt_fixed_rate_throughput(const PpptNetwork *network, uint32_t rule_id, double *value);

/**
 * Optimal fixed SIR thresholds, one per decoding state starting at
 * `*first_state`. `*len` receives the count; pass `capacity = 0` to query it.
 */
PpptStatus pppt_fixed_rate_thresholds(const PpptNetwork *network,
                                      uint32_t rule_id,
                                      double *betas,
                                      size_t capacity,
                                      size_t *first_state,
                                      size_t *len);

/**
 * Monte Carlo estimate of the cognitive (`PPPT_METHOD_COGNITIVE`) or
 * optimal fixed-rate (`PPPT_METHOD_FIXED_RATE`) throughput.
 */
PpptStatus pppt_simulate(const PpptNetwork *network,
                         uint32_t rule_id,
                         uint32_t method,
                         uint32_t interference_mode,
                         uint32_t rate_mode_id,
                         size_t realizations,
                         uint64_t seed,
                         double *mean,
                         double *stderr);

/**
 * Samples interferers uniformly in a disc of radius `window_radius`
 * around the typical receiver.
 */
PpptStatus pppt_realization_sample(const PpptNetwork *network,
                                   double window_radius,
                                   uint64_t seed,
                                   PpptRealization **out_real);

/**
 * Releases a realization; null is ignored.
 */
void pppt_realization_free(PpptRealization *real);

/**
 * Number of interferers.
 */
PpptStatus pppt_realization_len(const PpptRealization *real, size_t *len);

/**
 * Copies interferer coordinates as `x0, y0, x1, y1, ...` into `xy`, which
 * must hold `2·len` values.
 */
PpptStatus pppt_realization_interferers(const PpptRealization *real, double *xy, size_t capacity);

/**
 * Distance from the typical receiver to its closest interferer.
 */
PpptStatus pppt_realization_nearest_distance(const PpptRealization *real, double *value);

/**
 * Best rate of the typical link in the realization.
 */
PpptStatus pppt_realization_rate(const PpptRealization *real,
                                 uint32_t rule_id,
                                 uint32_t interference_mode,
                                 uint32_t rate_mode_id,
                                 double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPPT_H */
