/* exercises the shared library through its C header only */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "cflp/cflp.h"

static int failures = 0;

#define EXPECT(cond)                                                    \
    do {                                                                \
        if (!(cond)) {                                                  \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                 \
        }                                                               \
    } while (0)

static int near(double a, double b, double tol) { return fabs(a - b) <= tol; }

int main(void)
{
    cflp_distribution* u = NULL;
    EXPECT(cflp_distribution_create("uniform", &u) == CFLP_OK);
    double v = 0;
    EXPECT(cflp_distribution_quantile(u, 0.25, &v) == CFLP_OK && near(v, 0.25, 1e-15));
    double lo = 0, hi = 0;
    EXPECT(cflp_distribution_support(u, &lo, &hi) == CFLP_OK && lo == 0.0 && hi == 1.0);

    cflp_distribution* bad = NULL;
    EXPECT(cflp_distribution_create("cauchy", &bad) == CFLP_ERR_INVALID);
    EXPECT(strlen(cflp_last_error()) > 0);
    EXPECT(cflp_distribution_cdf(NULL, 0.5, &v) == CFLP_ERR_INVALID);

    cflp_distribution* n = NULL;
    EXPECT(cflp_distribution_create("normal@2,5", &n) == CFLP_OK);
    EXPECT(cflp_distribution_quantile(n, 0.5, &v) == CFLP_OK && near(v, 5.0, 1e-12));
    double draws[16];
    EXPECT(cflp_distribution_sample(n, 16, 3, draws) == CFLP_OK);
    for (int i = 1; i < 16; ++i)
        EXPECT(draws[i - 1] <= draws[i]);

    size_t c = 0;
    EXPECT(cflp_absolute_capacity(0.7, 20, &c) == CFLP_OK && c == 14);

    double q77[2] = {0.7, 0.7};
    double q84[2] = {0.8, 0.4};
    cflp_erm_params p;
    memset(&p, 0, sizeof p);
    p.m = 2;
    p.v[0] = 0.3;
    p.v[1] = 0.7;
    p.perm[0] = 0;
    p.perm[1] = 1;
    int ok = -1;
    char why[256];
    EXPECT(cflp_erm_feasible(q77, 2, &p, &ok, why, sizeof why) == CFLP_OK && ok == 1);
    p.v[0] = 0.1;
    p.v[1] = 0.95;
    EXPECT(cflp_erm_feasible(q77, 2, &p, &ok, why, sizeof why) == CFLP_OK && ok == 0 && strlen(why) > 0);
    char tiny[4];
    EXPECT(cflp_erm_feasible(q77, 2, &p, &ok, tiny, sizeof tiny) == CFLP_OK && strlen(tiny) == 3);

    double x[4] = {1, 0.9, 0, 0.1};
    cflp_outcome out;
    size_t match[4];
    EXPECT(cflp_run_mechanism("innerpoint", (double[]){0.5, 0.5}, 2, x, 4, 1.0, &out, match) == CFLP_OK);
    EXPECT(near(out.cost, 0.05, 1e-12));
    EXPECT(match[0] == 1 && match[1] == 1 && match[2] == 0 && match[3] == 0);
    EXPECT(cflp_run_mechanism("erm:0.1,0.95", q77, 2, x, 4, 1.0, &out, NULL) == CFLP_OK);
    EXPECT(cflp_run_mechanism("nope", q77, 2, x, 4, 1.0, &out, NULL) == CFLP_ERR_INVALID);
    EXPECT(cflp_optimal_cost(x, 4, (double[]){0.5, 0.5}, 2, 1.0, &out) == CFLP_OK && near(out.cost, 0.05, 1e-12));
    double bf = 0;
    EXPECT(cflp_bruteforce_cost(x, 4, (double[]){0.5, 0.5}, 2, INFINITY, &bf) == CFLP_OK && near(bf, 0.05, 1e-12));
    EXPECT(cflp_optimal_cost(x, 4, (double[]){0.3, 0.3}, 2, 1.0, &out) == CFLP_ERR_INFEASIBLE);

    p.v[0] = 0.3;
    p.v[1] = 0.7;
    cflp_limit_report r;
    EXPECT(cflp_limit_ratio(u, q77, 2, &p, 1.0, &r) == CFLP_OK && near(r.ratio, 1.04, 1e-9));
    EXPECT(r.m == 2 && near(r.erm_weights[0], 0.5, 1e-12));
    EXPECT(cflp_limit_ratio(n, q77, 2, &p, INFINITY, &r) == CFLP_ERR_INVALID);

    cflp_erm_params d;
    EXPECT(cflp_design(u, q84, 2, 1.0, "closedform", &d, &r) == CFLP_OK);
    EXPECT(near(d.v[0], 0.6, 1e-12) && near(d.v[1], 0.8, 1e-12) && near(r.ratio, 0.21 / 0.13, 1e-9));
    EXPECT(cflp_design(u, q84, 2, 1.0, "predicate", &d, NULL) == CFLP_ERR_INFEASIBLE);
    EXPECT(cflp_design(u, q84, 2, 1.0, "guess", &d, NULL) == CFLP_ERR_INVALID);
    EXPECT(cflp_design(u, q77, 2, INFINITY, "maxcost", &d, &r) == CFLP_OK && near(d.v[0], 0.3, 1e-9));

    double e = 0;
    EXPECT(cflp_eem_limit_uniform(q84, &e) == CFLP_OK && near(e, 0.34 / 0.13, 1e-9));
    EXPECT(cflp_relative_error(1.06, 1.04, &e) == CFLP_OK && near(e, 0.02 / 1.04, 1e-12));
    EXPECT(cflp_relative_error(1.0, 0.0, &e) == CFLP_ERR_INVALID);

    cflp_experiment_config cfg;
    cflp_experiment_config_init(&cfg);
    const char* mechs[2] = {"erm:0.3,0.7", "eem"};
    size_t ns[2] = {10, 20};
    cfg.q = q77;
    cfg.m = 2;
    cfg.mechanisms = mechs;
    cfg.mechanism_count = 2;
    cfg.n_values = ns;
    cfg.n_count = 2;
    cfg.trials = 20;
    cfg.bootstrap = 100;
    cflp_experiment* ex = NULL;
    EXPECT(cflp_experiment_run(&cfg, &ex) == CFLP_OK);
    EXPECT(cflp_experiment_row_count(ex) == 4);
    cflp_result_row row;
    EXPECT(cflp_experiment_row(ex, 0, &row) == CFLP_OK && row.n == 10 && row.has_limit == 1);
    EXPECT(strcmp(row.mech, "erm(0.3;0.7|1;2)") == 0);
    EXPECT(cflp_experiment_row(ex, 3, &row) == CFLP_OK && row.has_limit == 0 && isnan(row.limit));
    EXPECT(cflp_experiment_row(ex, 4, &row) == CFLP_ERR_INVALID);
    char* csv = NULL;
    EXPECT(cflp_experiment_csv(ex, &csv) == CFLP_OK && strncmp(csv, "dist,q1,q2,mech", 15) == 0);
    cflp_string_free(csv);
    EXPECT(cflp_experiment_write_csv(ex, "/nonexistent-dir/out.csv") == CFLP_ERR_IO);
    cflp_experiment_destroy(ex);

    mechs[0] = "erm:0.1,0.95";
    ex = NULL;
    EXPECT(cflp_experiment_run(&cfg, &ex) == CFLP_ERR_INFEASIBLE && ex == NULL);

    cflp_herm_report h;
    EXPECT(cflp_herm_example(&h) == CFLP_OK);
    EXPECT(h.feasible == 0 && h.fx[0] == 0.0 && h.fy[1] == 1.0 && h.demand[0] == 18 && h.capacity[0] == 14);
    double levels[4] = {0.5, 0.55, 0.5, 0.55};
    int holds = -1;
    EXPECT(cflp_herm_feasible(q77, levels, NULL, 0, &holds) == CFLP_OK && holds == 1);
    EXPECT(cflp_herm_feasible(q77, levels, NULL, 1, &holds) == CFLP_OK && holds == 0);
    double pts[4] = {0, 0, 1, 1};
    EXPECT(cflp_herm_run(q77, levels, NULL, pts, 2, &h) == CFLP_OK && h.feasible == 1);

    char* table = NULL;
    EXPECT(cflp_table_preset_csv("nope", 1, 1, 1, &table) == CFLP_ERR_INVALID);

    cflp_distribution_destroy(u);
    cflp_distribution_destroy(n);
    cflp_distribution_destroy(NULL);

    if (failures)
        fprintf(stderr, "%d failures\n", failures);
    else
        printf("c api ok\n");
    return failures ? 1 : 0;
}
