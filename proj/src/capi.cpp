#include "cflp/cflp.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "cflp/experiments.hpp"
#include "cflp/higherdim.hpp"
#include "cflp/limits.hpp"
#include "cflp/solver.hpp"

struct cflp_distribution {
    cflp::DistributionModel model;
};

struct cflp_experiment {
    cflp::BatchResult result;
};

namespace {

thread_local std::string last_error;

cflp_status status_of(cflp::ErrorKind kind)
{
    using cflp::ErrorKind;
    switch (kind) {
    case ErrorKind::InfeasibleAssignment:
    case ErrorKind::InfeasibleParams:
    case ErrorKind::TotalCapacity:
        return CFLP_ERR_INFEASIBLE;
    case ErrorKind::Numerical: return CFLP_ERR_NUMERICAL;
    case ErrorKind::Io: return CFLP_ERR_IO;
    default: return CFLP_ERR_INVALID;
    }
}

template <class F>
cflp_status guarded(F&& body)
{
    try {
        body();
        last_error.clear();
        return CFLP_OK;
    } catch (const cflp::Error& e) {
        last_error = std::string(cflp::to_string(e.kind())) + ": " + e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return CFLP_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return CFLP_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return CFLP_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what)
{
    cflp::require(p != nullptr, cflp::ErrorKind::InvalidArgument, std::string(what) + " is NULL");
}

cflp::CostKind cost_of(double p)
{
    if (std::isinf(p) && p > 0)
        return cflp::CostKind::max();
    return cflp::CostKind::lp(p);
}

cflp::CapacityVector caps_of(const double* q, std::size_t m)
{
    need(q, "q");
    cflp::require(m >= 1 && m <= CFLP_MAX_FACILITIES, cflp::ErrorKind::InvalidArgument, "facility count out of range");
    return cflp::CapacityVector(std::vector<double>(q, q + m));
}

cflp::ErmParams params_of(const cflp_erm_params* p)
{
    need(p, "params");
    cflp::require(p->m >= 1 && p->m <= CFLP_MAX_FACILITIES, cflp::ErrorKind::InvalidArgument,
                  "facility count out of range");
    cflp::ErmParams out;
    out.v.assign(p->v, p->v + p->m);
    out.perm.assign(p->perm, p->perm + p->m);
    return out;
}

void store_params(const cflp::ErmParams& in, cflp_erm_params* out)
{
    *out = cflp_erm_params{};
    out->m = in.v.size();
    for (std::size_t j = 0; j < in.v.size(); ++j) {
        out->v[j] = in.v[j];
        out->perm[j] = in.perm[j];
    }
}

void store_report(const cflp::LimitReport& r, cflp_limit_report* out)
{
    *out = cflp_limit_report{};
    out->numerator = r.numerator;
    out->denominator = r.denominator;
    out->ratio = r.ratio;
    out->m = r.erm_measure.size();
    for (std::size_t j = 0; j < r.erm_measure.size(); ++j) {
        out->erm_atoms[j] = r.erm_measure.atoms()[j];
        out->erm_weights[j] = r.erm_measure.weights()[j];
    }
    for (std::size_t j = 0; j < r.optimal_measure.size(); ++j) {
        out->opt_atoms[j] = r.optimal_measure.atoms()[j];
        out->opt_weights[j] = r.optimal_measure.weights()[j];
    }
    for (std::size_t j = 0; j < r.optimal_sigma.size(); ++j)
        out->opt_sigma[j] = r.optimal_sigma[j];
}

void store_outcome(const cflp::FacilityOutcome& o, double cost, cflp_outcome* out)
{
    *out = cflp_outcome{};
    out->m = o.y.size();
    for (std::size_t j = 0; j < o.y.size(); ++j) {
        out->y[j] = o.y[j];
        out->capacity[j] = o.capacity[j];
        out->perm[j] = o.perm[j];
    }
    out->cost = cost;
}

char* dup_string(const std::string& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void store_herm(const cflp::HermOutcome& h, cflp_herm_report* out)
{
    *out = cflp_herm_report{};
    for (std::size_t j = 0; j < 2; ++j) {
        out->fx[j] = h.facility[j].x;
        out->fy[j] = h.facility[j].y;
        out->capacity[j] = h.capacity[j];
        out->demand[j] = h.demand[j];
    }
    out->ties = h.ties;
    out->feasible = h.feasible() ? 1 : 0;
    out->overload_facility = h.overload ? h.overload->facility : 0;
    out->social_cost = h.social_cost;
}

cflp::HermParams herm_params_of(const double* levels, const std::size_t* perm)
{
    need(levels, "levels");
    cflp::HermParams p;
    p.levels = {{{levels[0], levels[1]}, {levels[2], levels[3]}}};
    if (perm)
        p.perm = {perm[0], perm[1]};
    return p;
}

}  // namespace

extern "C" {

const char* cflp_last_error(void) { return last_error.c_str(); }

const char* cflp_version(void) { return "1.0.0"; }

void cflp_string_free(char* s) { std::free(s); }

cflp_status cflp_distribution_create(const char* spec, cflp_distribution** out)
{
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        *out = new cflp_distribution{cflp::DistributionModel::parse(spec)};
    });
}

void cflp_distribution_destroy(cflp_distribution* d) { delete d; }

cflp_status cflp_distribution_cdf(const cflp_distribution* d, double x, double* out)
{
    return guarded([&] {
        need(d, "distribution");
        need(out, "out");
        *out = d->model.cdf(x);
    });
}

cflp_status cflp_distribution_quantile(const cflp_distribution* d, double u, double* out)
{
    return guarded([&] {
        need(d, "distribution");
        need(out, "out");
        *out = d->model.quantile(u);
    });
}

cflp_status cflp_distribution_pdf(const cflp_distribution* d, double x, double* out)
{
    return guarded([&] {
        need(d, "distribution");
        need(out, "out");
        *out = d->model.pdf(x);
    });
}

cflp_status cflp_distribution_support(const cflp_distribution* d, double* lo, double* hi)
{
    return guarded([&] {
        need(d, "distribution");
        need(lo, "lo");
        need(hi, "hi");
        auto s = d->model.support();
        *lo = s.first;
        *hi = s.second;
    });
}

cflp_status cflp_distribution_sample(const cflp_distribution* d, size_t n, uint64_t seed, double* out)
{
    return guarded([&] {
        need(d, "distribution");
        need(out, "out");
        auto v = cflp::sample_values(d->model, n, seed);
        std::copy(v.begin(), v.end(), out);
    });
}

cflp_status cflp_absolute_capacity(double q, size_t n, size_t* out)
{
    return guarded([&] {
        need(out, "out");
        *out = cflp::absolute_capacity(q, n);
    });
}

cflp_status cflp_erm_feasible(const double* q, size_t m, const cflp_erm_params* params, int* feasible,
                              char* explanation, size_t cap)
{
    if (explanation && cap > 0)
        explanation[0] = '\0';
    return guarded([&] {
        need(feasible, "feasible");
        auto check = cflp::erm_feasibility(caps_of(q, m), params_of(params));
        *feasible = check.feasible ? 1 : 0;
        if (explanation && cap > 0) {
            std::size_t k = std::min(cap - 1, check.explanation.size());
            std::memcpy(explanation, check.explanation.data(), k);
            explanation[k] = '\0';
        }
    });
}

cflp_status cflp_run_mechanism(const char* mechanism, const double* q, size_t m, const double* x, size_t n,
                               double p, cflp_outcome* out, size_t* matching)
{
    return guarded([&] {
        need(mechanism, "mechanism");
        need(x, "x");
        need(out, "out");
        auto caps = caps_of(q, m);
        auto spec = cflp::MechanismSpec::parse(mechanism);
        cflp::AgentProfile profile(std::vector<double>(x, x + n));
        auto outcome = spec.bind(caps)(profile);
        store_outcome(outcome, cflp::evaluate_cost(profile, outcome, cost_of(p)), out);
        if (matching)
            for (std::size_t i = 0; i < n; ++i)
                matching[i] = outcome.facility_of(profile, i);
    });
}

cflp_status cflp_optimal_cost(const double* x, size_t n, const double* q, size_t m, double p, cflp_outcome* out)
{
    return guarded([&] {
        need(x, "x");
        need(out, "out");
        auto sol = cflp::optimal_cost(cflp::AgentProfile(std::vector<double>(x, x + n)), caps_of(q, m), cost_of(p));
        store_outcome(sol.outcome, sol.cost, out);
    });
}

cflp_status cflp_bruteforce_cost(const double* x, size_t n, const double* q, size_t m, double p, double* out)
{
    return guarded([&] {
        need(x, "x");
        need(out, "out");
        *out = cflp::bruteforce_oracle(cflp::AgentProfile(std::vector<double>(x, x + n)), caps_of(q, m), cost_of(p));
    });
}

cflp_status cflp_limit_ratio(const cflp_distribution* d, const double* q, size_t m, const cflp_erm_params* params,
                             double p, cflp_limit_report* out)
{
    return guarded([&] {
        need(d, "distribution");
        need(out, "out");
        store_report(cflp::limit_ratio(d->model, caps_of(q, m), params_of(params), cost_of(p)), out);
    });
}

cflp_status cflp_design(const cflp_distribution* d, const double* q, size_t m, double p, const char* method,
                        cflp_erm_params* out, cflp_limit_report* report)
{
    return guarded([&] {
        need(d, "distribution");
        need(method, "method");
        need(out, "out");
        auto caps = caps_of(q, m);
        auto kind = cost_of(p);
        std::string how = method;
        cflp::ErmParams params;
        if (how == "closedform") {
            cflp::require(d->model.law() == cflp::BaseLaw::Uniform && kind.is_social(),
                          cflp::ErrorKind::InvalidArgument, "closedform needs a uniform law and p=1");
            params = cflp::optimal_erm_uniform_sc(caps);
        } else if (how == "search") {
            params = cflp::optimal_erm_search(d->model, caps, kind).params;
        } else if (how == "maxcost") {
            cflp::require(kind.is_max(), cflp::ErrorKind::InvalidArgument, "maxcost needs p=inf");
            params = cflp::optimal_erm_maxcost(d->model, caps).params;
        } else if (how == "nospare") {
            params = cflp::optimal_erm_nospare(d->model, caps, kind);
        } else if (how == "predicate") {
            auto pr = cflp::asymptotically_optimal_predicate(d->model, caps, kind);
            cflp::require(pr.holds && pr.params.has_value(), cflp::ErrorKind::InfeasibleParams,
                          "no asymptotically optimal ERM exists for these capacities");
            params = *pr.params;
        } else {
            cflp::fail(cflp::ErrorKind::InvalidArgument, "unknown design method '" + how + "'");
        }
        store_params(params, out);
        if (report)
            store_report(cflp::limit_ratio(d->model, caps, params, kind), report);
    });
}

cflp_status cflp_eem_limit_uniform(const double* q, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = cflp::eem_limit_uniform(caps_of(q, 2));
    });
}

cflp_status cflp_relative_error(double empirical, double limit, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = cflp::relative_error(empirical, limit);
    });
}

void cflp_experiment_config_init(cflp_experiment_config* cfg)
{
    if (!cfg)
        return;
    *cfg = cflp_experiment_config{};
    cfg->distribution = "uniform";
    cfg->trials = 500;
    cfg->p = 1.0;
    cfg->seed = 1;
    cfg->bootstrap = 2000;
    cfg->threads = 1;
}

cflp_status cflp_experiment_run(const cflp_experiment_config* cfg, cflp_experiment** out)
{
    return guarded([&] {
        need(cfg, "config");
        need(out, "out");
        need(cfg->distribution, "distribution");
        cflp::ExperimentSpec spec;
        spec.distribution = cfg->distribution;
        spec.q = caps_of(cfg->q, cfg->m).values();
        need(cfg->mechanisms, "mechanisms");
        for (std::size_t k = 0; k < cfg->mechanism_count; ++k) {
            need(cfg->mechanisms[k], "mechanism");
            spec.mechanisms.push_back(cflp::MechanismSpec::parse(cfg->mechanisms[k]));
        }
        need(cfg->n_values, "n_values");
        spec.n_values.assign(cfg->n_values, cfg->n_values + cfg->n_count);
        spec.trials = cfg->trials;
        spec.cost = cost_of(cfg->p);
        spec.seed = cfg->seed;
        spec.estimator = cfg->ratio_of_means ? cflp::Estimator::RatioOfMeans : cflp::Estimator::MeanOfRatios;
        spec.bootstrap = cfg->bootstrap;
        spec.threads = cfg->threads;
        *out = new cflp_experiment{cflp::run_batch(spec)};
    });
}

void cflp_experiment_destroy(cflp_experiment* e) { delete e; }

size_t cflp_experiment_row_count(const cflp_experiment* e) { return e ? e->result.rows.size() : 0; }

cflp_status cflp_experiment_row(const cflp_experiment* e, size_t i, cflp_result_row* out)
{
    return guarded([&] {
        need(e, "experiment");
        need(out, "out");
        cflp::require(i < e->result.rows.size(), cflp::ErrorKind::InvalidArgument, "row index out of range");
        const auto& r = e->result.rows[i];
        *out = cflp_result_row{};
        out->dist = r.dist.c_str();
        out->mech = r.mech.c_str();
        out->n = r.n;
        out->trials = r.trials;
        out->ratio_mean = r.ratio_mean;
        out->ci_lb = r.ci_lb;
        out->ci_ub = r.ci_ub;
        out->ratio_of_means = r.ratio_of_means;
        out->mean_of_ratios = r.mean_of_ratios;
        out->has_limit = r.limit ? 1 : 0;
        out->limit = r.limit.value_or(NAN);
        out->rel_err = r.rel_err.value_or(NAN);
    });
}

cflp_status cflp_experiment_write_csv(const cflp_experiment* e, const char* path)
{
    return guarded([&] {
        need(e, "experiment");
        need(path, "path");
        cflp::emit_csv(e->result.rows, std::string(path));
    });
}

cflp_status cflp_experiment_csv(const cflp_experiment* e, char** out)
{
    return guarded([&] {
        need(e, "experiment");
        need(out, "out");
        std::ostringstream os;
        cflp::emit_csv(e->result.rows, os);
        *out = dup_string(os.str());
    });
}

cflp_status cflp_table_preset_csv(const char* name, size_t trials, uint64_t seed, unsigned threads, char** out)
{
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        std::vector<cflp::ResultRow> rows;
        for (auto spec : cflp::table_preset(name, trials, seed)) {
            spec.threads = threads;
            auto r = cflp::run_batch(spec);
            rows.insert(rows.end(), r.rows.begin(), r.rows.end());
        }
        std::ostringstream os;
        cflp::emit_csv(rows, os);
        *out = dup_string(os.str());
    });
}

cflp_status cflp_herm_run(const double* q, const double* levels, const size_t* perm, const double* xy, size_t n,
                          cflp_herm_report* out)
{
    return guarded([&] {
        need(xy, "xy");
        need(out, "out");
        cflp::PlanarProfile profile(n);
        for (std::size_t i = 0; i < n; ++i)
            profile[i] = {xy[2 * i], xy[2 * i + 1]};
        store_herm(cflp::herm_run(caps_of(q, 2), herm_params_of(levels, perm), profile), out);
    });
}

cflp_status cflp_herm_feasible(const double* q, const double* levels, const size_t* perm, int reading, int* out)
{
    return guarded([&] {
        need(out, "out");
        auto how = reading == 0 ? cflp::HermReading::Literal : cflp::HermReading::SharedCoordinate;
        *out = cflp::herm_feasible_2d(caps_of(q, 2), herm_params_of(levels, perm), how) ? 1 : 0;
    });
}

cflp_status cflp_herm_example(cflp_herm_report* out)
{
    return guarded([&] {
        need(out, "out");
        store_herm(cflp::herm_run(cflp::herm_example_q(), cflp::herm_example_params(), cflp::herm_example_profile()),
                   out);
    });
}

}  // extern "C"
