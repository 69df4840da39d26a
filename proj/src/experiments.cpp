#include "cflp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "cflp/limits.hpp"
#include "cflp/solver.hpp"
#include "text.hpp"

namespace cflp {

MechanismSpec MechanismSpec::parse(std::string_view s)
{
    s = text::trim(s);
    MechanismSpec spec;
    if (s == "innerpoint" || s == "im") {
        spec.kind = MechanismKind::InnerPoint;
        return spec;
    }
    if (s == "allmedian" || s == "all-median") {
        spec.kind = MechanismKind::AllMedian;
        return spec;
    }
    if (s == "eem") {
        spec.kind = MechanismKind::Eem;
        return spec;
    }
    require(s.substr(0, 4) == "erm:", ErrorKind::InvalidArgument, "unknown mechanism '" + std::string(s) + "'");
    auto parts = text::split(s.substr(4), ':');
    require(parts.size() <= 2, ErrorKind::InvalidArgument, "expected erm:v1,v2[:perm]");
    spec.erm.v = text::parse_doubles(parts[0]);
    if (parts.size() == 2) {
        for (auto p : text::split(parts[1], ',')) {
            auto k = text::parse_u64(p);
            require(k >= 1, ErrorKind::InvalidArgument, "perm entries are 1-based");
            spec.erm.perm.push_back(static_cast<std::size_t>(k - 1));
        }
    } else {
        spec.erm.perm = identity_permutation(spec.erm.v.size());
    }
    spec.erm.validate(spec.erm.v.size());
    return spec;
}

MechanismSpec MechanismSpec::of_erm(ErmParams params)
{
    MechanismSpec spec;
    spec.kind = MechanismKind::Erm;
    spec.erm = std::move(params);
    return spec;
}

std::string MechanismSpec::label() const
{
    switch (kind) {
    case MechanismKind::Erm: return erm.label();
    case MechanismKind::InnerPoint: return "innerpoint";
    case MechanismKind::AllMedian: return "allmedian";
    case MechanismKind::Eem: return "eem";
    }
    return "";
}

Mechanism MechanismSpec::bind(const CapacityVector& q) const
{
    switch (kind) {
    case MechanismKind::Erm: return [q, p = erm](const AgentProfile& x) { return erm_run(q, p, x); };
    case MechanismKind::InnerPoint: return [q](const AgentProfile& x) { return innerpoint_run(x, q); };
    case MechanismKind::AllMedian: return [q](const AgentProfile& x) { return all_median_run(q, x); };
    case MechanismKind::Eem: return [q](const AgentProfile& x) { return eem_run(q, x); };
    }
    fail(ErrorKind::InvalidArgument, "unknown mechanism");
}

void ExperimentSpec::validate() const
{
    auto mu = DistributionModel::parse(distribution);
    (void)mu;
    CapacityVector cap(q);
    require(trials >= 1, ErrorKind::InvalidArgument, "trials must be positive");
    require(!n_values.empty(), ErrorKind::InvalidArgument, "no agent counts given");
    require(!mechanisms.empty(), ErrorKind::InvalidArgument, "no mechanisms given");
    require(bootstrap >= 1, ErrorKind::InvalidArgument, "bootstrap needs at least one resample");
    require(cost.p >= 1.0, ErrorKind::InvalidArgument, "cost exponent must be >= 1");
    for (auto n : n_values)
        require(n >= 2, ErrorKind::InvalidArgument, "agent counts must be at least 2");
    for (const auto& mech : mechanisms) {
        switch (mech.kind) {
        case MechanismKind::Erm: {
            mech.erm.validate(cap.size());
            auto check = erm_feasibility(cap, mech.erm);
            require(check.feasible, ErrorKind::InfeasibleParams, mech.label() + " infeasible: " + check.explanation);
            break;
        }
        case MechanismKind::InnerPoint:
            require(cap.size() == 2, ErrorKind::InvalidArgument, "innerpoint needs two facilities");
            for (auto n : n_values) {
                require(n % 2 == 0, ErrorKind::InvalidArgument, "innerpoint needs even agent counts");
                require(absolute_capacity(cap[1], n) >= n / 2, ErrorKind::InfeasibleParams,
                        "innerpoint needs capacity n/2 at each facility");
            }
            break;
        case MechanismKind::AllMedian:
            for (auto n : n_values) {
                std::size_t total = 0;
                for (auto c : facility_capacities(cap, identity_permutation(cap.size()), n))
                    total += c;
                require(total >= n, ErrorKind::InfeasibleParams, "all-median capacities do not cover the agents");
            }
            break;
        case MechanismKind::Eem:
            require(cap.size() == 2, ErrorKind::InvalidArgument, "eem needs two facilities");
            for (auto n : n_values)
                require(absolute_capacity(cap[0], n) + absolute_capacity(cap[1], n) >= n,
                        ErrorKind::InfeasibleParams, "eem capacities do not cover the agents");
            break;
        }
    }
}

double TrialRecord::ratio() const
{
    if (optimal_cost > 0)
        return mechanism_cost / optimal_cost;
    return mechanism_cost > 0 ? std::numeric_limits<double>::infinity() : 1.0;
}

double relative_error(double empirical, double limit)
{
    require(limit > 0, ErrorKind::InvalidArgument, "limit must be positive");
    return (empirical - limit) / limit;
}

std::optional<double> mechanism_limit(const MechanismSpec& mech, const DistributionModel& mu,
                                      const CapacityVector& q, CostKind kind)
{
    try {
        switch (mech.kind) {
        case MechanismKind::Erm: return limit_ratio(mu, q, mech.erm, kind).ratio;
        case MechanismKind::InnerPoint:
        case MechanismKind::AllMedian:
            return limit_ratio(mu, q, ErmParams::identity(std::vector<double>(q.size(), 0.5)), kind).ratio;
        case MechanismKind::Eem:
            if (mu.law() == BaseLaw::Uniform && kind.is_social() && q.size() == 2 && q[0] > 0.5 && q[1] < 0.5)
                return eem_limit_uniform(q);
            return std::nullopt;
        }
    } catch (const Error&) {
    }
    return std::nullopt;
}

namespace {

struct Interval {
    double lb, ub;
};

Interval bootstrap_ci(const std::vector<TrialRecord>& rec, Estimator est, std::size_t resamples,
                      std::uint64_t seed)
{
    const std::size_t T = rec.size();
    std::vector<double> stat(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        double sm = 0, so = 0, sr = 0;
        for (std::size_t i = 0; i < T; ++i) {
            auto k = static_cast<std::size_t>(counter_uniform(seed, b * T + i) * static_cast<double>(T));
            const auto& r = rec[std::min(k, T - 1)];
            sm += r.mechanism_cost;
            so += r.optimal_cost;
            sr += r.ratio();
        }
        stat[b] = est == Estimator::MeanOfRatios ? sr / static_cast<double>(T) : (so > 0 ? sm / so : 1.0);
    }
    std::sort(stat.begin(), stat.end());
    auto lo = static_cast<std::size_t>(std::floor(0.025 * static_cast<double>(resamples)));
    auto hi = static_cast<std::size_t>(std::ceil(0.975 * static_cast<double>(resamples)));
    hi = std::clamp<std::size_t>(hi, 1, resamples) - 1;
    return {stat[std::min(lo, resamples - 1)], stat[hi]};
}

}  // namespace

BatchResult run_batch(const ExperimentSpec& spec)
{
    spec.validate();
    const auto mu = DistributionModel::parse(spec.distribution);
    const CapacityVector q(spec.q);
    const std::size_t M = spec.mechanisms.size();
    std::vector<Mechanism> mechs;
    for (const auto& m : spec.mechanisms)
        mechs.push_back(m.bind(q));

    BatchResult result;
    const std::size_t T = spec.trials;
    // records[(a*T + t)*M + k]
    result.records.resize(spec.n_values.size() * T * M);

    for (std::size_t a = 0; a < spec.n_values.size(); ++a) {
        const std::size_t n = spec.n_values[a];
        auto run_trial = [&](std::size_t t) {
            std::uint64_t seed = derive_seed(spec.seed, n, t);
            try {
                auto profile = sample(mu, n, seed);
                double opt = optimal_cost(profile, q, spec.cost).cost;
                for (std::size_t k = 0; k < M; ++k) {
                    auto out = mechs[k](profile);
                    double c = evaluate_cost(profile, out, spec.cost);
                    if (c < opt - 1e-9 * std::max(1.0, opt))
                        fail(ErrorKind::Numerical, spec.mechanisms[k].label() + " beat the optimum");
                    result.records[(a * T + t) * M + k] = TrialRecord{n, t, k, seed, c, opt};
                }
            } catch (const Error& e) {
                throw Error(e.kind(), "n=" + std::to_string(n) + " trial " + std::to_string(t) + " seed " +
                                          text::fmt(seed) + ": " + e.what());
            }
        };

        unsigned threads = std::max(1u, spec.threads);
        if (threads == 1) {
            for (std::size_t t = 0; t < T; ++t)
                run_trial(t);
        } else {
            std::atomic<std::size_t> next{0};
            std::mutex guard;
            std::size_t failed_at = T;
            std::exception_ptr failure;
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < threads; ++w)
                pool.emplace_back([&] {
                    for (std::size_t t = next++; t < T; t = next++) {
                        try {
                            run_trial(t);
                        } catch (...) {
                            std::lock_guard lock(guard);
                            if (t < failed_at) {
                                failed_at = t;
                                failure = std::current_exception();
                            }
                        }
                    }
                });
            for (auto& th : pool)
                th.join();
            if (failure)
                std::rethrow_exception(failure);
        }
    }

    for (std::size_t k = 0; k < M; ++k) {
        auto limit = mechanism_limit(spec.mechanisms[k], mu, q, spec.cost);
        for (std::size_t a = 0; a < spec.n_values.size(); ++a) {
            std::vector<TrialRecord> rec;
            double sm = 0, so = 0, sr = 0;
            for (std::size_t t = 0; t < T; ++t) {
                const auto& r = result.records[(a * T + t) * M + k];
                rec.push_back(r);
                sm += r.mechanism_cost;
                so += r.optimal_cost;
                sr += r.ratio();
            }
            ResultRow row;
            row.dist = mu.name();
            row.q = spec.q;
            row.mech = spec.mechanisms[k].label();
            row.cost = spec.cost;
            row.n = spec.n_values[a];
            row.trials = T;
            row.seed = spec.seed;
            row.mean_of_ratios = sr / static_cast<double>(T);
            row.ratio_of_means = so > 0 ? sm / so : 1.0;
            row.ratio_mean = spec.estimator == Estimator::MeanOfRatios ? row.mean_of_ratios : row.ratio_of_means;
            auto ci = bootstrap_ci(rec, spec.estimator, spec.bootstrap,
                                   derive_seed(spec.seed ^ 0x5eedb007ULL, row.n, k));
            row.ci_lb = ci.lb;
            row.ci_ub = ci.ub;
            row.limit = limit;
            if (limit)
                row.rel_err = relative_error(row.ratio_mean, *limit);
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out)
{
    out << "dist,q1,q2,mech,p,n,trials,seed,ratio_mean,ci_lb,ci_ub,ratio_of_means,limit,rel_err\n";
    for (const auto& r : rows) {
        std::string q2;
        for (std::size_t j = 1; j < r.q.size(); ++j) {
            if (j > 1)
                q2 += ';';
            q2 += text::fmt(r.q[j]);
        }
        out << csv_field(r.dist) << ',' << text::fmt(r.q[0]) << ',' << q2 << ',' << csv_field(r.mech) << ','
            << r.cost.label() << ',' << r.n << ',' << r.trials << ',' << r.seed << ',' << text::fmt(r.ratio_mean)
            << ',' << text::fmt(r.ci_lb) << ',' << text::fmt(r.ci_ub) << ',' << text::fmt(r.ratio_of_means) << ','
            << (r.limit ? text::fmt(*r.limit) : "") << ',' << (r.rel_err ? text::fmt(*r.rel_err) : "") << '\n';
    }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::Io, "cannot open '" + path + "' for writing");
    emit_csv(rows, f);
    f.flush();
    require(static_cast<bool>(f), ErrorKind::Io, "write to '" + path + "' failed");
}

std::vector<std::string> table_preset_names()
{
    return {"balanced-sc", "unbalanced-sc", "balanced-max", "unbalanced-max", "l2", "relerr"};
}

std::vector<ExperimentSpec> table_preset(std::string_view name, std::size_t trials, std::uint64_t seed)
{
    const std::vector<std::vector<double>> balanced{{0.7, 0.7}, {0.8, 0.8}, {0.9, 0.9}};
    const std::vector<std::vector<double>> unbalanced{{0.85, 0.75}, {0.8, 0.4}, {0.85, 0.35}};
    std::vector<std::vector<double>> all = balanced;
    all.insert(all.end(), unbalanced.begin(), unbalanced.end());
    const std::vector<std::size_t> ns{10, 20, 30, 40, 50};

    std::vector<std::vector<double>> qs;
    std::vector<std::string> dists;
    CostKind cost = CostKind::social();
    bool with_eem = true;
    bool maxcost = false;
    if (name == "balanced-sc") {
        qs = balanced;
        dists = {"uniform", "normal", "exp"};
    } else if (name == "unbalanced-sc") {
        qs = unbalanced;
        dists = {"uniform", "normal"};
    } else if (name == "balanced-max" || name == "unbalanced-max") {
        qs = name == "balanced-max" ? balanced : unbalanced;
        dists = {"uniform", "beta31"};
        cost = CostKind::max();
        maxcost = true;
    } else if (name == "l2") {
        qs = all;
        dists = {"uniform", "normal", "exp"};
        cost = CostKind::lp(2.0);
    } else if (name == "relerr") {
        qs = all;
        dists = {"uniform", "normal"};
        with_eem = false;
    } else {
        fail(ErrorKind::InvalidArgument, "unknown table preset '" + std::string(name) + "'");
    }

    std::vector<ExperimentSpec> specs;
    for (const auto& qv : qs) {
        CapacityVector q(qv);
        for (const auto& d : dists) {
            ExperimentSpec s;
            s.distribution = d;
            s.q = qv;
            s.n_values = ns;
            s.trials = trials;
            s.cost = cost;
            s.seed = seed;
            auto mu = DistributionModel::parse(d);
            s.mechanisms.push_back(MechanismSpec::of_erm(maxcost ? optimal_erm_maxcost(mu, q).params
                                                                 : optimal_erm_uniform_sc(q)));
            if (with_eem)
                s.mechanisms.push_back(MechanismSpec::parse("eem"));
            specs.push_back(std::move(s));
        }
    }
    return specs;
}

}  // namespace cflp
