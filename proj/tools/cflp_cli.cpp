#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cflp/cflp.h"

namespace {

enum Exit { kOk = 0, kNo = 1, kInvalid = 2, kInfeasible = 3, kNumerical = 4 };

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_of(cflp_status s)
{
    switch (s) {
    case CFLP_OK: return kOk;
    case CFLP_ERR_INFEASIBLE: return kInfeasible;
    case CFLP_ERR_NUMERICAL:
    case CFLP_ERR_INTERNAL: return kNumerical;
    default: return kInvalid;
    }
}

int report(cflp_status s)
{
    if (s != CFLP_OK)
        std::fprintf(stderr, "error: %s\n", cflp_last_error());
    return exit_of(s);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        out.push_back(item);
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

double to_double(const std::string& s)
{
    if (s == "inf" || s == "max")
        return INFINITY;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0')
        throw Usage("not a number: '" + s + "'");
    return v;
}

std::vector<double> doubles(const std::string& s)
{
    std::vector<double> out;
    for (const auto& t : split(s, ','))
        out.push_back(to_double(t));
    return out;
}

std::vector<std::size_t> counts(const std::string& s)
{
    std::vector<std::size_t> out;
    for (const auto& t : split(s, ',')) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(t.c_str(), &end, 10);
        if (t.empty() || *end != '\0' || t[0] == '-')
            throw Usage("not a count: '" + t + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

double cost_p(const std::string& s)
{
    if (s == "sc")
        return 1.0;
    return to_double(s);
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

cflp_erm_params make_params(const std::vector<double>& v, const std::string& perm)
{
    if (v.empty() || v.size() > CFLP_MAX_FACILITIES)
        throw Usage("--v needs between 1 and 8 levels");
    cflp_erm_params p{};
    p.m = v.size();
    for (std::size_t j = 0; j < v.size(); ++j) {
        p.v[j] = v[j];
        p.perm[j] = j;
    }
    if (!perm.empty()) {
        auto pr = counts(perm);
        if (pr.size() != v.size())
            throw Usage("--perm needs one entry per level");
        for (std::size_t j = 0; j < pr.size(); ++j) {
            if (pr[j] == 0)
                throw Usage("--perm entries are 1-based");
            p.perm[j] = pr[j] - 1;
        }
    }
    return p;
}

struct Distribution {
    cflp_distribution* d = nullptr;
    explicit Distribution(const std::string& spec)
    {
        if (cflp_distribution_create(spec.c_str(), &d) != CFLP_OK)
            throw Usage(cflp_last_error());
    }
    ~Distribution() { cflp_distribution_destroy(d); }
    Distribution(const Distribution&) = delete;
    Distribution& operator=(const Distribution&) = delete;
};

void print_report(const cflp_limit_report& r)
{
    std::string ea, ew, oa, ow, sg;
    for (std::size_t j = 0; j < r.m; ++j) {
        const char* sep = j ? "," : "";
        ea += sep + num(r.erm_atoms[j]);
        ew += sep + num(r.erm_weights[j]);
        oa += sep + num(r.opt_atoms[j]);
        ow += sep + num(r.opt_weights[j]);
        sg += sep + std::to_string(r.opt_sigma[j] + 1);
    }
    std::cout << "numerator=" << num(r.numerator) << "\n"
              << "denominator=" << num(r.denominator) << "\n"
              << "ratio=" << num(r.ratio) << "\n"
              << "erm_atoms=" << ea << "\nerm_weights=" << ew << "\n"
              << "opt_atoms=" << oa << "\nopt_weights=" << ow << "\nopt_sigma=" << sg << "\n";
}

int write_text(const std::string& text, const std::string& out)
{
    if (out.empty() || out == "-") {
        std::cout << text;
        return kOk;
    }
    std::ofstream f(out, std::ios::binary);
    f << text;
    if (!f) {
        std::fprintf(stderr, "error: cannot write '%s'\n", out.c_str());
        return kInvalid;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"capacitated facility location mechanisms on the line"};
    app.require_subcommand(1);

    std::string dist = "uniform", q, v, perm, p = "1", out, points, method = "search", preset, V, reading = "literal";
    std::string n_list = "10,20,30,40,50", estimator = "mean-of-ratios";
    std::vector<std::string> mechs;
    std::size_t trials = 500, bootstrap = 2000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool example = false;

    auto* sim = app.add_subcommand("simulate", "Monte Carlo ratio estimates as CSV");
    sim->add_option("--dist", dist);
    sim->add_option("--q", q)->required();
    sim->add_option("--mech", mechs, "erm:v1,v2[:perm] | innerpoint | allmedian | eem")->required();
    sim->add_option("--n", n_list);
    sim->add_option("--trials", trials);
    sim->add_option("--p", p);
    sim->add_option("--seed", seed);
    sim->add_option("--out", out);
    sim->add_option("--estimator", estimator)->check(CLI::IsMember({"mean-of-ratios", "ratio-of-means"}));
    sim->add_option("--bootstrap", bootstrap);
    sim->add_option("--threads", threads);

    auto* lim = app.add_subcommand("limit", "limit ratio of an ERM");
    lim->add_option("--dist", dist);
    lim->add_option("--q", q)->required();
    lim->add_option("--v", v)->required();
    lim->add_option("--perm", perm);
    lim->add_option("--p", p);

    auto* des = app.add_subcommand("design", "optimal ERM parameters");
    des->add_option("--dist", dist);
    des->add_option("--q", q)->required();
    des->add_option("--p", p);
    des->add_option("--method", method)
        ->check(CLI::IsMember({"closedform", "search", "maxcost", "nospare", "predicate"}));

    auto* fea = app.add_subcommand("feasible", "check the ERM capacity system");
    fea->add_option("--q", q)->required();
    fea->add_option("--v", v)->required();
    fea->add_option("--perm", perm);

    auto* tab = app.add_subcommand("table", "regenerate a preset table as CSV");
    tab->add_option("--preset", preset)
        ->required()
        ->check(CLI::IsMember({"balanced-sc", "unbalanced-sc", "balanced-max", "unbalanced-max", "l2", "relerr"}));
    tab->add_option("--trials", trials);
    std::uint64_t table_seed = 2024;
    tab->add_option("--seed", table_seed);
    tab->add_option("--threads", threads);
    tab->add_option("--out", out);

    auto* herm = app.add_subcommand("herm-check", "planar HERM run and feasibility predicate");
    herm->add_option("--q", q);
    herm->add_option("--V", V, "v11,v12;v21,v22 (row = coordinate, column = facility)");
    herm->add_option("--perm", perm);
    herm->add_option("--reading", reading)->check(CLI::IsMember({"literal", "shared"}));
    herm->add_option("--points", points, "x,y;x,y;... (defaults to the 20-agent example)");
    herm->add_flag("--example", example);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*sim) {
            auto qv = doubles(q);
            auto ns = counts(n_list);
            std::vector<const char*> mp;
            for (const auto& m : mechs)
                mp.push_back(m.c_str());
            cflp_experiment_config cfg;
            cflp_experiment_config_init(&cfg);
            cfg.distribution = dist.c_str();
            cfg.q = qv.data();
            cfg.m = qv.size();
            cfg.mechanisms = mp.data();
            cfg.mechanism_count = mp.size();
            cfg.n_values = ns.data();
            cfg.n_count = ns.size();
            cfg.trials = trials;
            cfg.p = cost_p(p);
            cfg.seed = seed;
            cfg.ratio_of_means = estimator == "ratio-of-means";
            cfg.bootstrap = bootstrap;
            cfg.threads = threads;
            cflp_experiment* e = nullptr;
            if (auto s = cflp_experiment_run(&cfg, &e); s != CFLP_OK)
                return report(s);
            cflp_status s;
            if (out.empty() || out == "-") {
                char* text = nullptr;
                s = cflp_experiment_csv(e, &text);
                if (s == CFLP_OK)
                    std::cout << text;
                cflp_string_free(text);
            } else {
                s = cflp_experiment_write_csv(e, out.c_str());
            }
            cflp_experiment_destroy(e);
            return report(s);
        }

        if (*lim) {
            Distribution d(dist);
            auto qv = doubles(q);
            auto params = make_params(doubles(v), perm);
            cflp_limit_report r;
            if (auto s = cflp_limit_ratio(d.d, qv.data(), qv.size(), &params, cost_p(p), &r); s != CFLP_OK)
                return report(s);
            print_report(r);
            return kOk;
        }

        if (*des) {
            Distribution d(dist);
            auto qv = doubles(q);
            cflp_erm_params params;
            cflp_limit_report r;
            if (auto s = cflp_design(d.d, qv.data(), qv.size(), cost_p(p), method.c_str(), &params, &r); s != CFLP_OK)
                return report(s);
            std::string vs, ps;
            for (std::size_t j = 0; j < params.m; ++j) {
                vs += (j ? "," : "") + num(params.v[j]);
                ps += (j ? "," : "") + std::to_string(params.perm[j] + 1);
            }
            std::cout << "method=" << method << "\nv=" << vs << "\nperm=" << ps << "\n";
            print_report(r);
            return kOk;
        }

        if (*fea) {
            auto qv = doubles(q);
            auto params = make_params(doubles(v), perm);
            int ok = 0;
            char why[512];
            if (auto s = cflp_erm_feasible(qv.data(), qv.size(), &params, &ok, why, sizeof why); s != CFLP_OK)
                return report(s);
            std::cout << (ok ? "feasible" : "infeasible") << "\n";
            if (why[0])
                std::cout << why << "\n";
            return ok ? kOk : kNo;
        }

        if (*tab) {
            char* text = nullptr;
            auto s = cflp_table_preset_csv(preset.c_str(), trials, table_seed, threads, &text);
            if (s != CFLP_OK)
                return report(s);
            int code = write_text(text, out);
            cflp_string_free(text);
            return code;
        }

        if (*herm) {
            std::vector<double> qv{0.7, 0.7};
            std::vector<double> levels{0.5, 0.55, 0.5, 0.55};
            std::size_t pr[2] = {0, 1};
            if (!q.empty())
                qv = doubles(q);
            if (!V.empty()) {
                auto rows = split(V, ';');
                if (rows.size() != 2)
                    throw Usage("--V needs two rows separated by ';'");
                levels.clear();
                for (const auto& row : rows) {
                    auto r = doubles(row);
                    if (r.size() != 2)
                        throw Usage("--V rows need two levels");
                    levels.insert(levels.end(), r.begin(), r.end());
                }
            }
            if (!perm.empty()) {
                auto pv = counts(perm);
                if (pv.size() != 2 || pv[0] == 0 || pv[1] == 0)
                    throw Usage("--perm needs two 1-based entries");
                pr[0] = pv[0] - 1;
                pr[1] = pv[1] - 1;
            }
            if (qv.size() != 2)
                throw Usage("--q needs two capacities");

            std::vector<double> xy;
            if (points.empty()) {
                for (int i = 0; i < 9; ++i)
                    xy.insert(xy.end(), {-1.0, 1.5});
                xy.insert(xy.end(), {0.0, 1.0, 1.0, 0.0});
                for (int i = 0; i < 9; ++i)
                    xy.insert(xy.end(), {1.5, -1.0});
            } else {
                for (const auto& pt : split(points, ';')) {
                    auto c = doubles(pt);
                    if (c.size() != 2)
                        throw Usage("--points entries need two coordinates");
                    xy.insert(xy.end(), c.begin(), c.end());
                }
            }
            if (example && (!q.empty() || !V.empty() || !perm.empty() || !points.empty()))
                throw Usage("--example replays the fixed instance; drop --q, --V, --perm and --points");
            cflp_herm_report r;
            cflp_status s = example ? cflp_herm_example(&r)
                                    : cflp_herm_run(qv.data(), levels.data(), pr, xy.data(), xy.size() / 2, &r);
            if (s != CFLP_OK)
                return report(s);
            int literal = 0, shared = 0;
            if (auto s2 = cflp_herm_feasible(qv.data(), levels.data(), pr, 0, &literal); s2 != CFLP_OK)
                return report(s2);
            cflp_herm_feasible(qv.data(), levels.data(), pr, 1, &shared);
            for (int j = 0; j < 2; ++j)
                std::cout << "facility" << j + 1 << "=(" << num(r.fx[j]) << "," << num(r.fy[j]) << ") demand="
                          << r.demand[j] << " capacity=" << r.capacity[j] << "\n";
            std::cout << "ties=" << r.ties << "\n";
            if (r.feasible)
                std::cout << "outcome=feasible social_cost=" << num(r.social_cost) << "\n";
            else
                std::cout << "outcome=infeasible facility=" << r.overload_facility + 1
                          << " demand=" << r.demand[r.overload_facility]
                          << " capacity=" << r.capacity[r.overload_facility] << "\n";
            std::cout << "predicate_literal=" << (literal ? "true" : "false") << "\n"
                      << "predicate_shared=" << (shared ? "true" : "false") << "\n";
            bool chosen = reading == "literal" ? literal : shared;
            std::cout << "predicate=" << (chosen ? "true" : "false") << " (" << reading << ")\n";
            return r.feasible ? kOk : kNo;
        }
    } catch (const Usage& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInvalid;
    }
    return kOk;
}
