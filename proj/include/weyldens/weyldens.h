#ifndef WEYLDENS_H
#define WEYLDENS_H

/* C interface to the weyldens library: spectral density of -y'' - eps x y on
 * the half-line with y(0) cos(alpha) + y'(0) sin(alpha) = 0, ctg(alpha) > 0.
 *
 * Every call that can fail returns a wd_status; on failure the message is
 * available from wd_last_error() on the same thread. A context may be shared
 * between threads only for read-only use (no setters running concurrently). */

#include <stddef.h>

#if defined(_WIN32)
#define WD_API __declspec(dllexport)
#else
#define WD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wd_status {
  WD_OK = 0,
  WD_INVALID_ARGUMENT = 1,
  WD_DOMAIN_ERROR = 2,
  WD_NON_CONVERGENCE = 3,
  WD_INVALID_DECAY_HINT = 4,
  WD_RANGE_ERROR = 5,
  WD_POLE_PROXIMITY = 6,
  WD_REGION_ERROR = 7,
  WD_NO_BRACKET = 8,
  WD_MODEL_MISMATCH = 9,
  WD_CROSS_CHECK_MISMATCH = 10,
  WD_INTERNAL_ERROR = 11
} wd_status;

typedef enum wd_region {
  WD_REGION_DEEP_LEFT = 0,    /* lambda < -2 ctg^2 */
  WD_REGION_GAP = 1,          /* the critical segment [-2 ctg^2, -ctg^2/2] */
  WD_REGION_INTERMEDIATE = 2, /* (-ctg^2/2, -c2 eps^(2/3)) */
  WD_REGION_NEAR_ZERO = 3     /* [-c2 eps^(2/3), 0) */
} wd_region;

typedef struct wd_context wd_context;
typedef struct wd_report wd_report;

/* sign * exp(log_mag); sign is 0 for an exact zero. */
typedef struct wd_scaled {
  int sign;
  double log_mag;
} wd_scaled;

typedef struct wd_constants {
  double c1;
  double c2;
  double c3;
  double big_o_const;
} wd_constants;

typedef struct wd_tolerances {
  double root_rel;
  double kernel_rel;
  double mass_rel;
  double cross_check_rel;
} wd_tolerances;

typedef struct wd_bound_check {
  int pass;
  double margin; /* ln(big_o_const * envelope) - ln(rho') */
  wd_region region;
  wd_scaled rho_prime;
  wd_scaled envelope;
} wd_bound_check;

typedef struct wd_peak_mass {
  double mass;
  double mass_unsubstituted;
  double lambda1;
  double width;
  double d;
  int in_admissible_window;
  double achieved_rel_tol;
} wd_peak_mass;

typedef struct wd_resonance_report {
  double eps;
  double lambda1;
  double width;
  double mass;
  double d_used;
  double drift_prediction; /* lambda0 - eps tan(alpha) / 2 */
  double drift_residual;   /* lambda1 - drift_prediction */
} wd_resonance_report;

typedef struct wd_drift_fit {
  double slope;
  double curvature;
  double quadratic_residual_bound;
} wd_drift_fit;

typedef struct wd_weak_pairing {
  double total;
  double peak_part;
  double off_peak_part;
  double d;
  double achieved_rel_tol;
} wd_weak_pairing;

typedef struct wd_sweep_row {
  double lambda;
  wd_scaled rho_prime;
  wd_region region;
  wd_status status; /* WD_OK, or why this point could not be evaluated */
} wd_sweep_row;

typedef enum wd_relation { WD_LESS_EQUAL = 0, WD_GREATER_EQUAL = 1 } wd_relation;

/* Strings point into the owning report and live until wd_report_destroy. */
typedef struct wd_check {
  const char* name;
  int criterion;
  int pass;
  double value;
  double threshold;
  wd_relation relation;
  const char* detail;
} wd_check;

typedef double (*wd_test_function)(double lambda, void* user);

WD_API const char* wd_version(void);
WD_API const char* wd_status_name(wd_status status);
WD_API const char* wd_region_name(wd_region region);
WD_API const char* wd_last_error(void);

/* Contexts */
WD_API wd_status wd_context_create_alpha(double alpha, wd_context** out);
WD_API wd_status wd_context_create_cot(double cot_alpha, wd_context** out);
WD_API void wd_context_destroy(wd_context* ctx);
WD_API wd_status wd_boundary(const wd_context* ctx, double* alpha, double* cot_alpha);

WD_API void wd_default_constants(wd_constants* out);
WD_API void wd_default_tolerances(wd_tolerances* out);
WD_API double wd_default_drift_const(void);
WD_API wd_status wd_set_constants(wd_context* ctx, const wd_constants* c);
WD_API wd_status wd_get_constants(const wd_context* ctx, wd_constants* out);
WD_API wd_status wd_set_tolerances(wd_context* ctx, const wd_tolerances* t);
WD_API wd_status wd_get_tolerances(const wd_context* ctx, wd_tolerances* out);
WD_API wd_status wd_set_drift_const(wd_context* ctx, double c);

/* Density, lambda < 0 */
WD_API wd_status wd_rho_prime(const wd_context* ctx, double lambda, double eps, wd_scaled* out, wd_region* region);
WD_API wd_status wd_region_of(const wd_context* ctx, double lambda, double eps, wd_region* out);
WD_API wd_status wd_t_function(const wd_context* ctx, double lambda, double eps, double* out);
WD_API wd_status wd_asymptote(const wd_context* ctx, double lambda, double eps, wd_scaled* out);
WD_API wd_status wd_bound_check_at(const wd_context* ctx, double lambda, double eps, wd_bound_check* out);

/* Unperturbed density */
WD_API wd_status wd_baseline_positive(const wd_context* ctx, double lambda, double* out);
WD_API wd_status wd_baseline_point_mass(const wd_context* ctx, double* location, double* mass);

/* Reference values from the Hankel representation of m */
WD_API wd_status wd_oracle_m(const wd_context* ctx, double lambda, double eps, double* re, double* im);
WD_API wd_status wd_oracle_rho_prime(const wd_context* ctx, double lambda, double eps, double* out);

/* Resonance; d <= 0 selects d = eps^2 */
WD_API wd_status wd_locate_zero(const wd_context* ctx, double eps, double* lambda1);
WD_API wd_status wd_peak_width(const wd_context* ctx, double eps, double lambda1, double* width);
WD_API wd_status wd_peak_mass_compute(const wd_context* ctx, double eps, double d, wd_peak_mass* out);
WD_API wd_status wd_analyze(const wd_context* ctx, double eps, double d, wd_resonance_report* out);
/* lambda1 may be NULL; otherwise it receives n values. */
WD_API wd_status wd_drift(const wd_context* ctx, const double* eps, size_t n, wd_drift_fit* out, double* lambda1);
WD_API wd_status wd_weak_convergence(const wd_context* ctx, double eps, wd_test_function g, void* user, double d,
                                     wd_weak_pairing* out);

/* Evenly spaced sweep over [lmin, lmax] into caller-provided rows[n].
 * threads = 0 uses all cores, capped by the WEYL_DENS_THREADS environment
 * variable when it holds a positive integer. */
WD_API wd_status wd_sweep(const wd_context* ctx, double eps, double lmin, double lmax, size_t n, unsigned threads,
                          wd_sweep_row* rows);

/* Positive WEYL_DENS_THREADS value, or 0 when unset or malformed */
WD_API unsigned wd_thread_cap(void);

/* Validation suites */
WD_API size_t wd_suite_count(void);
WD_API const char* wd_suite_name(size_t i);
WD_API wd_status wd_verify(const wd_context* ctx, const char* suite, wd_report** out);
WD_API void wd_report_destroy(wd_report* report);
WD_API const char* wd_report_suite(const wd_report* report);
WD_API int wd_report_pass(const wd_report* report);
WD_API double wd_report_seconds(const wd_report* report);
WD_API size_t wd_report_check_count(const wd_report* report);
WD_API wd_status wd_report_check(const wd_report* report, size_t i, wd_check* out);

#ifdef __cplusplus
}
#endif

#endif /* WEYLDENS_H */
