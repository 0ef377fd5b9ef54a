#ifndef TAILNORM_H
#define TAILNORM_H

/* C interface to the tailnorm library. Handles are opaque; every call returns a tn_status and
 * leaves a message for tn_last_error() on failure. Strings returned through handles stay valid
 * until the handle is freed or rerun. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define TN_API __declspec(dllexport)
#else
#define TN_API __attribute__((visibility("default")))
#endif

typedef enum tn_status {
    TN_OK = 0,
    TN_ERR_INVALID_ARGUMENT = 1,
    TN_ERR_PARSE = 2,
    TN_ERR_IO = 3,
    TN_ERR_NUMERIC = 4,
    TN_ERR_INTERNAL = 5
} tn_status;

typedef enum tn_verdict { TN_FINITE = 0, TN_DIVERGES = 1, TN_INDETERMINATE = 2 } tn_verdict;

typedef struct tn_result {
    tn_verdict verdict;
    double value;       /* NaN unless finite; +inf when finite beyond double range */
    double error;
    double log_value;
    double cross_check; /* independent second route, NaN when none */
} tn_result;

typedef struct tn_function tn_function;
typedef struct tn_weight tn_weight;
typedef struct tn_young tn_young;
typedef struct tn_psi tn_psi;
typedef struct tn_job tn_job;

/* Message of the last failed call on this thread; empty after success. */
TN_API const char* tn_last_error(void);
TN_API const char* tn_version(void);

/* "analytic:pareto p=2", "sample:path.csv", "pareto_sample p=2 n=1000 seed=3". */
TN_API tn_status tn_function_parse(const char* descriptor, tn_function** out);
/* weights may be NULL for uniform weights summing to mass. */
TN_API tn_status tn_function_from_samples(const double* magnitudes, const double* weights, size_t n, double mass,
                                          tn_function** out);
TN_API void tn_function_free(tn_function* f);
/* T(t) = mu{|f| >= t}. */
TN_API tn_status tn_function_tail(const tn_function* f, double t, double* out);
/* f*(s). */
TN_API tn_status tn_function_rearrangement(const tn_function* f, double s, double* out);

/* "power p=2", "log p=2 kappa=1"; "natural" takes the generating function, which may be NULL otherwise. */
TN_API tn_status tn_weight_parse(const char* descriptor, const tn_function* generator, tn_weight** out);
TN_API void tn_weight_free(tn_weight* w);

/* "power q=2", "exp_power q=2", "exp_square_log", "phi p0=2 delta=0 s_kappa=0". */
TN_API tn_status tn_young_parse(const char* descriptor, tn_young** out);
TN_API void tn_young_free(tn_young* y);

/* "p0_delta_s p0=2 delta=0", "power_blowup B=3 beta=1", "degenerate r=2". */
TN_API tn_status tn_psi_parse(const char* descriptor, tn_psi** out);
TN_API void tn_psi_free(tn_psi* p);

TN_API tn_status tn_gamma(const tn_weight* w, tn_result* out);
TN_API tn_status tn_weak_norm(const tn_function* f, const tn_weight* w, tn_result* out);
TN_API tn_status tn_marcinkiewicz_norm(const tn_function* f, const tn_weight* w, tn_result* out);
TN_API tn_status tn_lp_norm(const tn_function* f, double p, tn_result* out);
TN_API tn_status tn_weak_orlicz_norm(const tn_function* f, const tn_young* y, tn_result* out);
TN_API tn_status tn_luxemburg_norm(const tn_function* f, const tn_young* y, tn_result* out);
TN_API tn_status tn_gls_norm(const tn_function* f, const tn_psi* psi, tn_result* out);

/* Job files: see the key list in tailnorm/job.hpp. base_dir resolves relative sample paths
 * and may be NULL for the working directory. Parse errors name line and column. */
TN_API tn_status tn_job_parse(const char* text, const char* base_dir, tn_job** out);
TN_API tn_status tn_job_set(tn_job* job, const char* key, const char* value);
/* Runs the job; exit_code receives 0 success, 1 check failure, 2 indeterminate, 3 usage error. */
TN_API tn_status tn_job_run(tn_job* job, int* exit_code);
TN_API const char* tn_job_csv(const tn_job* job);
TN_API const char* tn_job_summary(const tn_job* job);
/* Warnings raised while resolving the job, newline separated. */
TN_API const char* tn_job_warnings(const tn_job* job);
TN_API void tn_job_free(tn_job* job);

#ifdef __cplusplus
}
#endif

#endif
