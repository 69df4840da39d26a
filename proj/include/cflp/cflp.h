#ifndef CFLP_H
#define CFLP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CFLP_BUILDING)
#    define CFLP_API __declspec(dllexport)
#  else
#    define CFLP_API __declspec(dllimport)
#  endif
#else
#  define CFLP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cflp_status {
    CFLP_OK = 0,
    CFLP_ERR_INVALID = 1,
    CFLP_ERR_INFEASIBLE = 2,
    CFLP_ERR_NUMERICAL = 3,
    CFLP_ERR_IO = 4,
    CFLP_ERR_INTERNAL = 5
} cflp_status;

#define CFLP_MAX_FACILITIES 8

/* message of the last failing call on this thread; never NULL */
CFLP_API const char* cflp_last_error(void);
CFLP_API const char* cflp_version(void);

/* malloc'd strings handed out by the library */
CFLP_API void cflp_string_free(char* s);

/* cost exponent p >= 1; INFINITY selects the max cost */

typedef struct cflp_distribution cflp_distribution;

/* "uniform", "normal", "exp", "beta31", optionally "@alpha,beta" */
CFLP_API cflp_status cflp_distribution_create(const char* spec, cflp_distribution** out);
CFLP_API void cflp_distribution_destroy(cflp_distribution* d);
CFLP_API cflp_status cflp_distribution_cdf(const cflp_distribution* d, double x, double* out);
CFLP_API cflp_status cflp_distribution_quantile(const cflp_distribution* d, double u, double* out);
CFLP_API cflp_status cflp_distribution_pdf(const cflp_distribution* d, double x, double* out);
CFLP_API cflp_status cflp_distribution_support(const cflp_distribution* d, double* lo, double* hi);
/* n sorted draws */
CFLP_API cflp_status cflp_distribution_sample(const cflp_distribution* d, size_t n, uint64_t seed, double* out);

/* perm is 0-based: facility j carries q[perm[j]] */
typedef struct cflp_erm_params {
    size_t m;
    double v[CFLP_MAX_FACILITIES];
    size_t perm[CFLP_MAX_FACILITIES];
} cflp_erm_params;

CFLP_API cflp_status cflp_absolute_capacity(double q, size_t n, size_t* out);

/* explanation may be NULL; it is always NUL-terminated when cap > 0 */
CFLP_API cflp_status cflp_erm_feasible(const double* q, size_t m, const cflp_erm_params* params,
                                       int* feasible, char* explanation, size_t cap);

typedef struct cflp_outcome {
    size_t m;
    double y[CFLP_MAX_FACILITIES];
    size_t capacity[CFLP_MAX_FACILITIES];
    size_t perm[CFLP_MAX_FACILITIES];
    double cost;
} cflp_outcome;

/* mechanism: "erm:v1,v2[:p1,p2]" (1-based perm), "innerpoint", "allmedian", "eem".
   matching may be NULL, otherwise n entries in report order. */
CFLP_API cflp_status cflp_run_mechanism(const char* mechanism, const double* q, size_t m, const double* x,
                                        size_t n, double p, cflp_outcome* out, size_t* matching);

CFLP_API cflp_status cflp_optimal_cost(const double* x, size_t n, const double* q, size_t m, double p,
                                       cflp_outcome* out);
CFLP_API cflp_status cflp_bruteforce_cost(const double* x, size_t n, const double* q, size_t m, double p,
                                          double* out);

typedef struct cflp_limit_report {
    double numerator;
    double denominator;
    double ratio;
    size_t m;
    double erm_atoms[CFLP_MAX_FACILITIES];
    double erm_weights[CFLP_MAX_FACILITIES];
    double opt_atoms[CFLP_MAX_FACILITIES];
    double opt_weights[CFLP_MAX_FACILITIES];
    size_t opt_sigma[CFLP_MAX_FACILITIES];
} cflp_limit_report;

CFLP_API cflp_status cflp_limit_ratio(const cflp_distribution* d, const double* q, size_t m,
                                      const cflp_erm_params* params, double p, cflp_limit_report* out);

/* method: "closedform", "search", "maxcost", "nospare", "predicate" */
CFLP_API cflp_status cflp_design(const cflp_distribution* d, const double* q, size_t m, double p,
                                 const char* method, cflp_erm_params* out, cflp_limit_report* report);

CFLP_API cflp_status cflp_eem_limit_uniform(const double* q, double* out);
CFLP_API cflp_status cflp_relative_error(double empirical, double limit, double* out);

typedef struct cflp_experiment_config {
    const char* distribution;
    const double* q;
    size_t m;
    const char* const* mechanisms;
    size_t mechanism_count;
    const size_t* n_values;
    size_t n_count;
    size_t trials;
    double p;
    uint64_t seed;
    int ratio_of_means;   /* 0: mean of ratios */
    size_t bootstrap;
    unsigned threads;
} cflp_experiment_config;

/* fills defaults: uniform, 500 trials, p=1, seed 1, 2000 resamples, 1 thread */
CFLP_API void cflp_experiment_config_init(cflp_experiment_config* cfg);

typedef struct cflp_experiment cflp_experiment;

typedef struct cflp_result_row {
    const char* dist;   /* owned by the experiment handle */
    const char* mech;
    size_t n;
    size_t trials;
    double ratio_mean;
    double ci_lb;
    double ci_ub;
    double ratio_of_means;
    double mean_of_ratios;
    int has_limit;
    double limit;
    double rel_err;
} cflp_result_row;

CFLP_API cflp_status cflp_experiment_run(const cflp_experiment_config* cfg, cflp_experiment** out);
CFLP_API void cflp_experiment_destroy(cflp_experiment* e);
CFLP_API size_t cflp_experiment_row_count(const cflp_experiment* e);
CFLP_API cflp_status cflp_experiment_row(const cflp_experiment* e, size_t i, cflp_result_row* out);
CFLP_API cflp_status cflp_experiment_write_csv(const cflp_experiment* e, const char* path);
CFLP_API cflp_status cflp_experiment_csv(const cflp_experiment* e, char** out);

/* names: balanced-sc, unbalanced-sc, balanced-max, unbalanced-max, l2, relerr */
CFLP_API cflp_status cflp_table_preset_csv(const char* name, size_t trials, uint64_t seed, unsigned threads,
                                           char** out);

/* levels[2*l + j]: level of coordinate l for facility j */
typedef struct cflp_herm_report {
    double fx[2];
    double fy[2];
    size_t capacity[2];
    size_t demand[2];
    size_t ties;
    int feasible;
    size_t overload_facility;
    double social_cost;
} cflp_herm_report;

/* xy holds n interleaved (x, y) pairs */
CFLP_API cflp_status cflp_herm_run(const double* q, const double* levels, const size_t* perm, const double* xy,
                                   size_t n, cflp_herm_report* out);
/* reading 0: as stated, 1: shared coordinate */
CFLP_API cflp_status cflp_herm_feasible(const double* q, const double* levels, const size_t* perm, int reading,
                                        int* out);
CFLP_API cflp_status cflp_herm_example(cflp_herm_report* out);

#ifdef __cplusplus
}
#endif

#endif
