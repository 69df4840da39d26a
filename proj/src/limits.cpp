#include "cflp/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "text.hpp"

namespace cflp {

namespace {

std::vector<double> caps_for(const CapacityVector& q, const std::vector<std::size_t>& perm)
{
    std::vector<double> c(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j)
        c[j] = q[perm[j]];
    return c;
}

std::vector<double> atoms_for(const DistributionModel& mu, const std::vector<double>& v)
{
    std::vector<double> y(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        y[j] = mu.quantile(v[j]);
        require(std::isfinite(y[j]), ErrorKind::InvalidArgument,
                "quantile level " + text::fmt(v[j]) + " maps outside the support of " + mu.name());
    }
    return y;
}

// W_p of the ERM limit measure
double erm_value(const DistributionModel& mu, const CapacityVector& q, const ErmParams& params, CostKind kind)
{
    auto y = atoms_for(mu, params.v);
    auto nu = constrained_weights(mu, y, caps_for(q, params.perm), kind);
    return wp_cont_discrete(mu, nu, kind);
}

void require_two(const CapacityVector& q)
{
    require(q.size() == 2, ErrorKind::DimensionMismatch, "two facilities expected");
}

}  // namespace

LimitReport limit_ratio(const DistributionModel& mu, const CapacityVector& q, const ErmParams& params,
                        CostKind kind)
{
    params.validate(q.size());
    auto check = erm_feasibility(q, params);
    require(check.feasible, ErrorKind::InfeasibleParams, "ERM parameters infeasible: " + check.explanation);
    if (kind.is_max())
        require(mu.compact(), ErrorKind::UnboundedSupport, "p = inf needs a compactly supported law");

    auto y = atoms_for(mu, params.v);
    auto nu = constrained_weights(mu, y, caps_for(q, params.perm), kind);
    double num = wp_cont_discrete(mu, nu, kind);
    auto opt = solve_min_proj(mu, q, kind);
    require(opt.value > 0, ErrorKind::Numerical, "optimal quantization has zero cost");
    return LimitReport{kind, num, opt.value, num / opt.value, nu, opt.measure, opt.sigma};
}

bool scale_invariance_check(const DistributionModel& mu, const CapacityVector& q, const ErmParams& params,
                            CostKind kind, double alpha, double beta)
{
    double a = limit_ratio(mu, q, params, kind).ratio;
    double b = limit_ratio(mu.affine(alpha, beta), q, params, kind).ratio;
    return std::abs(a - b) <= 1e-6;
}

double two_atom_w1(const DistributionModel& mu, double y1, double y2)
{
    return wp_cont_discrete(mu, voronoi_weights(mu, {y1, y2}), CostKind::social());
}

std::pair<double, double> grad_W(const DistributionModel& mu, double y1, double y2)
{
    require(y1 <= y2, ErrorKind::InvalidArgument, "expected y1 <= y2");
    double fm = mu.cdf(0.5 * (y1 + y2));
    return {2.0 * mu.cdf(y1) - fm, 2.0 * mu.cdf(y2) - 1.0 - fm};
}

ErmParams optimal_erm_uniform_sc(const CapacityVector& q)
{
    require_two(q);
    require(q.sum() >= 1.0 - kFeasTol, ErrorKind::InfeasibleParams, "no feasible ERM when q1 + q2 < 1");
    if (q[1] >= 0.75)
        return ErmParams::identity({0.25, 0.75});
    return ErmParams::identity({1.0 - q[1], std::min(q[0], 1.0 - q[1] / 3.0)});
}

ErmParams optimal_erm_nospare(const DistributionModel& mu, const CapacityVector& q, CostKind kind)
{
    require(std::abs(q.sum() - 1.0) <= 1e-9, ErrorKind::InvalidArgument, "capacities must sum to 1");
    double level;
    if (kind.is_max()) {
        require(mu.compact(), ErrorKind::UnboundedSupport, "p = inf needs a compactly supported law");
        auto [a, b] = mu.support();
        level = mu.cdf(0.5 * (a + b));
    } else if (kind.p == 1.0) {
        level = 0.5;
    } else if (kind.p == 2.0) {
        level = mu.cdf(mu.mean());
    } else {
        fail(ErrorKind::InvalidArgument, "no-spare design covers p = 1, 2, inf");
    }
    return ErmParams::identity(std::vector<double>(q.size(), level));
}

double allmedian_limit_uniform(const CapacityVector& q)
{
    require(std::abs(q.sum() - 1.0) <= 1e-6, ErrorKind::InvalidArgument, "capacities must sum to 1");
    double s = 0;
    for (double v : q.values())
        s += v * v;
    return 1.0 / s;
}

namespace {

struct Intervals {
    double a, b;
    std::pair<double, double> id, swap;
};

Intervals maxcost_intervals(const DistributionModel& mu, const CapacityVector& q)
{
    require_two(q);
    require(mu.compact(), ErrorKind::UnboundedSupport, "max-cost design needs a compactly supported law");
    require(q.sum() >= 1.0 - kFeasTol, ErrorKind::InfeasibleParams, "capacities sum below 1");
    auto [a, b] = mu.support();
    Intervals k{a, b, {mu.quantile(1.0 - q[1]), mu.quantile(q[0])}, {mu.quantile(1.0 - q[0]), mu.quantile(q[1])}};
    return k;
}

double clamp_to(double x, std::pair<double, double> k)
{
    return std::clamp(x, k.first, std::max(k.first, k.second));
}

}  // namespace

MaxCostSplit maxcost_opt_split(const DistributionModel& mu, const CapacityVector& q)
{
    auto k = maxcost_intervals(mu, q);
    double z0 = 0.5 * (k.a + k.b);
    double zid = clamp_to(z0, k.id);
    double zs = clamp_to(z0, k.swap);
    bool id = std::abs(zid - z0) <= std::abs(zs - z0);
    double z = id ? zid : zs;
    double fz = mu.cdf(z);
    DiscreteMeasure nu({0.5 * (k.a + z), 0.5 * (z + k.b)}, {fz, 1.0 - fz});
    std::vector<std::size_t> perm = id ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{1, 0};
    return MaxCostSplit{nu, perm, z, std::max(z - k.a, k.b - z) / 2.0};
}

MaxCostDesign optimal_erm_maxcost(const DistributionModel& mu, const CapacityVector& q)
{
    auto k = maxcost_intervals(mu, q);
    auto split = maxcost_opt_split(mu, q);
    double y1 = split.measure.atoms()[0], y2 = split.measure.atoms()[1];

    MaxCostDesign d{ErmParams{}, {clamp_to(y1, k.id), clamp_to(y2, k.id)},
                    {clamp_to(y1, k.swap), clamp_to(y2, k.swap)}, 0, 0, 0, 0, true};
    d.criterion_id = std::max(std::abs(k.a - d.s_id[0]), std::abs(k.b - d.s_id[1]));
    d.criterion_swap = std::max(std::abs(k.a - d.s_swap[0]), std::abs(k.b - d.s_swap[1]));

    ErmParams pid{{mu.cdf(d.s_id[0]), mu.cdf(d.s_id[1])}, {0, 1}};
    ErmParams pswap{{mu.cdf(d.s_swap[0]), mu.cdf(d.s_swap[1])}, {1, 0}};
    d.w_inf_id = erm_value(mu, q, pid, CostKind::max());
    d.w_inf_swap = erm_value(mu, q, pswap, CostKind::max());

    bool id = d.criterion_id <= d.criterion_swap;
    d.params = id ? pid : pswap;
    d.criterion_agrees = id ? d.w_inf_id <= d.w_inf_swap + 1e-12 : d.w_inf_swap <= d.w_inf_id + 1e-12;
    return d;
}

PredicateResult asymptotically_optimal_predicate(const DistributionModel& mu, const CapacityVector& q,
                                                 CostKind kind)
{
    auto opt = solve_min_proj(mu, q, kind);
    const auto& y = opt.measure.atoms();
    const std::size_t m = y.size();
    std::vector<double> f(m + 2);
    f[0] = 0.0;
    f[m + 1] = 1.0;
    for (std::size_t j = 0; j < m; ++j)
        f[j + 1] = mu.cdf(y[j]);

    PredicateResult res{true, std::vector<double>(m), std::nullopt};
    for (std::size_t j = 0; j < m; ++j)
        res.zeta[j] = f[j + 2] - f[j];
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return res.zeta[a] > res.zeta[b]; });
    for (std::size_t j = 0; j < m; ++j)
        if (res.zeta[order[j]] > q[j] + 1e-7)
            res.holds = false;
    if (res.holds)
        res.params = ErmParams{std::vector<double>(f.begin() + 1, f.end() - 1), inverse_permutation(order)};
    return res;
}

SearchResult optimal_erm_search(const DistributionModel& mu, const CapacityVector& q, CostKind kind)
{
    const std::size_t m = q.size();
    require(m <= 3, ErrorKind::InvalidArgument, "optimal ERM search supports m <= 3");
    if (m > 1)
        require(q.sum() >= 1.0 - kFeasTol, ErrorKind::InfeasibleParams, "no feasible ERM when capacities sum below 1");
    if (kind.is_max())
        require(mu.compact(), ErrorKind::UnboundedSupport, "p = inf needs a compactly supported law");

    const bool generic_p = !kind.is_max() && kind.p != 1.0 && kind.p != 2.0;
    const double step = (m <= 2 && !generic_p) ? 1e-3 : 1e-2;
    const std::size_t K = static_cast<std::size_t>(std::llround(1.0 / step));
    auto [slo, shi] = mu.support();
    const std::size_t klo = std::isfinite(slo) ? 0 : 1;
    const std::size_t khi = std::isfinite(shi) ? K : K - 1;
    const double vlo = std::isfinite(slo) ? 0.0 : 1e-9;
    const double vhi = std::isfinite(shi) ? 1.0 : 1.0 - 1e-9;

    double best = std::numeric_limits<double>::infinity();
    ErmParams best_params;

    for (const auto& perm : all_permutations(m)) {
        auto value = [&](const std::vector<double>& v) {
            ErmParams p{v, perm};
            if (!erm_feasible(q, p))
                return std::numeric_limits<double>::infinity();
            return erm_value(mu, q, p, kind);
        };

        std::vector<double> v(m), vb;
        double fb = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> idx(m, klo);
        while (true) {
            for (std::size_t j = 0; j < m; ++j)
                v[j] = static_cast<double>(idx[j]) * step;
            double f = value(v);
            if (f < fb) {
                fb = f;
                vb = v;
            }
            // next non-decreasing index tuple
            std::size_t j = m;
            while (j > 0 && idx[j - 1] == khi)
                --j;
            if (j == 0)
                break;
            ++idx[j - 1];
            for (std::size_t r = j; r < m; ++r)
                idx[r] = idx[j - 1];
        }
        if (vb.empty())
            continue;

        for (double s = step / 2; s >= 5e-7; s /= 2) {
            bool moved = true;
            while (moved) {
                moved = false;
                std::vector<std::vector<double>> moves;
                for (std::size_t j = 0; j < m; ++j)
                    for (double dir : {-1.0, 1.0}) {
                        auto c = vb;
                        c[j] += dir * s;
                        moves.push_back(c);
                    }
                for (double dir : {-1.0, 1.0}) {
                    auto c = vb;
                    for (auto& x : c)
                        x += dir * s;
                    moves.push_back(c);
                }
                for (auto& c : moves) {
                    bool ok = std::is_sorted(c.begin(), c.end());
                    for (double x : c)
                        ok = ok && x >= vlo && x <= vhi;
                    if (!ok)
                        continue;
                    double f = value(c);
                    if (f < fb - 1e-15) {
                        fb = f;
                        vb = c;
                        moved = true;
                        break;
                    }
                }
            }
        }
        if (fb < best - 1e-12) {
            best = fb;
            best_params = ErmParams{vb, perm};
        }
    }
    require(!best_params.v.empty(), ErrorKind::InfeasibleParams, "no feasible ERM parameters found");
    return SearchResult{best_params, limit_ratio(mu, q, best_params, kind)};
}

double eem_limit_numerator_uniform(const CapacityVector& q)
{
    require_two(q);
    double q2 = q[1];
    return (1.0 - q2) * (1.0 - q2) / 2.0 + q2 * (2.0 - 3.0 * q2) / 2.0;
}

double eem_limit_uniform(const CapacityVector& q)
{
    require_two(q);
    require(q[0] > 0.5 && q[1] < 0.5, ErrorKind::InvalidArgument, "EEM uniform limit needs q1 > 0.5 > q2");
    require(q.sum() >= 1.0 - kFeasTol, ErrorKind::InfeasibleParams, "capacities sum below 1");
    auto opt = solve_min_proj(DistributionModel::builtin("uniform01"), q, CostKind::social());
    return eem_limit_numerator_uniform(q) / opt.value;
}

}  // namespace cflp
