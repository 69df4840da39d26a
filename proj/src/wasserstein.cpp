#include "cflp/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "numerics.hpp"

namespace cflp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finish(double total, CostKind kind)
{
    if (kind.is_max() || kind.p == 1.0)
        return total;
    if (kind.p == 2.0)
        return std::sqrt(std::max(0.0, total));
    return std::pow(std::max(0.0, total), 1.0 / kind.p);
}

void require_compact(const DistributionModel& mu)
{
    require(mu.compact(), ErrorKind::UnboundedSupport, "p = inf needs a compactly supported law, got " + mu.name());
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights)
{
    require(!atoms.empty(), ErrorKind::InvalidArgument, "measure needs at least one atom");
    require(atoms.size() == weights.size(), ErrorKind::DimensionMismatch, "one weight per atom expected");
    double total = 0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        require(std::isfinite(atoms[j]), ErrorKind::InvalidArgument, "atoms must be finite");
        require(weights[j] >= -1e-15, ErrorKind::InvalidArgument, "weights must be non-negative");
        weights[j] = std::max(0.0, weights[j]);
        total += weights[j];
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::InvalidArgument, "weights must sum to 1");
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
    for (auto i : order) {
        atoms_.push_back(atoms[i]);
        weights_.push_back(weights[i]);
    }
}

DiscreteMeasure DiscreteMeasure::dirac(double at)
{
    return DiscreteMeasure({at}, {1.0});
}

DiscreteMeasure DiscreteMeasure::empirical(const AgentProfile& profile)
{
    const std::size_t n = profile.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    return DiscreteMeasure(profile.positions(), w);
}

double wp_discrete(const DiscreteMeasure& a, const DiscreteMeasure& b, CostKind kind)
{
    const auto& xa = a.atoms();
    const auto& xb = b.atoms();
    std::vector<double> ca(xa.size()), cb(xb.size());
    std::partial_sum(a.weights().begin(), a.weights().end(), ca.begin());
    std::partial_sum(b.weights().begin(), b.weights().end(), cb.begin());
    ca.back() = 1.0;
    cb.back() = 1.0;

    std::size_t i = 0, j = 0;
    double at = 0, total = 0;
    while (i < xa.size() && j < xb.size()) {
        double next = std::min(ca[i], cb[j]);
        double mass = next - at;
        if (mass > 0) {
            double d = std::abs(xa[i] - xb[j]);
            if (kind.is_max()) {
                if (mass > 1e-12)
                    total = std::max(total, d);
            } else {
                total += std::pow(d, kind.p) * mass;
            }
            at = next;
        }
        if (ca[i] <= next)
            ++i;
        if (j < xb.size() && cb[j] <= next)
            ++j;
    }
    return finish(total, kind);
}

double cell_cost(const DistributionModel& mu, double u0, double u1, double y, double p, Integration how)
{
    if (!(u1 > u0))
        return 0.0;
    const double a = mu.quantile(u0);
    const double b = mu.quantile(u1);
    if (how == Integration::Automatic && (p == 1.0 || p == 2.0)) {
        double m1a = mu.partial_moment(1, a), m1b = mu.partial_moment(1, b);
        double mass = u1 - u0;
        if (p == 2.0) {
            double m2 = mu.partial_moment(2, b) - mu.partial_moment(2, a);
            return std::max(0.0, m2 - 2.0 * y * (m1b - m1a) + y * y * mass);
        }
        if (y <= a)
            return (m1b - m1a) - y * mass;
        if (y >= b)
            return y * mass - (m1b - m1a);
        double fy = mu.cdf(y);
        double m1y = mu.partial_moment(1, y);
        return y * (fy - u0) - (m1y - m1a) + (m1b - m1y) - y * (u1 - fy);
    }
    double lo = std::isfinite(a) ? a : mu.quantile(kTailLevel);
    double hi = std::isfinite(b) ? b : mu.quantile(1.0 - kTailLevel);
    auto f = [&](double x) { return std::pow(std::abs(x - y), p) * mu.pdf(x); };
    if (y > lo && y < hi)
        return num::adaptive_simpson(f, lo, y, kQuadratureTol) + num::adaptive_simpson(f, y, hi, kQuadratureTol);
    return num::adaptive_simpson(f, lo, hi, kQuadratureTol);
}

double wp_cont_discrete(const DistributionModel& mu, const DiscreteMeasure& nu, CostKind kind, Integration how)
{
    const auto& y = nu.atoms();
    const auto& w = nu.weights();
    if (kind.is_max())
        require_compact(mu);
    double cum = 0, total = 0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        double u0 = cum;
        double u1 = j + 1 == y.size() ? 1.0 : std::min(1.0, cum + w[j]);
        cum = u1;
        if (!(u1 > u0))
            continue;
        if (kind.is_max()) {
            if (u1 - u0 > 1e-12)
                total = std::max({total, std::abs(mu.quantile(u0) - y[j]), std::abs(mu.quantile(u1) - y[j])});
        } else {
            total += cell_cost(mu, u0, u1, y[j], kind.p, how);
        }
    }
    return finish(total, kind);
}

DiscreteMeasure voronoi_weights(const DistributionModel& mu, const std::vector<double>& y)
{
    require(!y.empty(), ErrorKind::InvalidArgument, "no atoms");
    require(std::is_sorted(y.begin(), y.end()), ErrorKind::InvalidArgument, "atoms must be sorted");
    const std::size_t m = y.size();
    std::vector<double> w(m);
    double prev = 0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        double f = mu.cdf(0.5 * (y[j] + y[j + 1]));
        w[j] = f - prev;
        prev = f;
    }
    w[m - 1] = 1.0 - prev;
    return DiscreteMeasure(y, w);
}

DiscreteMeasure constrained_weights(const DistributionModel& mu, const std::vector<double>& y,
                                    const std::vector<double>& caps, CostKind kind)
{
    const std::size_t m = y.size();
    require(caps.size() == m, ErrorKind::DimensionMismatch, "one cap per atom expected");
    if (m == 1)
        return DiscreteMeasure(y, {1.0});
    double total = std::accumulate(caps.begin(), caps.end(), 0.0);
    require(total >= 1.0 - kFeasTol, ErrorKind::InfeasibleParams, "caps sum below 1");

    auto vor = voronoi_weights(mu, y);
    bool ok = true;
    for (std::size_t j = 0; j < m; ++j)
        if (vor.weights()[j] > caps[j] + 1e-12)
            ok = false;
    if (ok)
        return vor;

    std::vector<double> target(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j)
        target[j] = mu.cdf(0.5 * (y[j] + y[j + 1]));

    if (m == 2) {
        double lo = std::max(0.0, 1.0 - caps[1]);
        double hi = std::min(1.0, caps[0]);
        double t = std::clamp(target[0], lo, std::max(lo, hi));
        return DiscreteMeasure(y, {t, 1.0 - t});
    }
    require(m == 3, ErrorKind::InvalidArgument, "binding caps handled for at most three atoms");

    auto second = [&](double t1) {
        double lo = std::max(t1, 1.0 - caps[2]);
        double hi = std::min(1.0, t1 + caps[1]);
        return std::clamp(target[1], lo, std::max(lo, hi));
    };
    auto build = [&](double t1) {
        double t2 = second(t1);
        return DiscreteMeasure(y, {t1, std::max(0.0, t2 - t1), std::max(0.0, 1.0 - t2)});
    };
    double lo = std::max(0.0, 1.0 - caps[1] - caps[2]);
    double hi = std::min(1.0, caps[0]);
    auto [t1, val] = num::golden_min([&](double t) { return wp_cont_discrete(mu, build(t), kind); }, lo,
                                     std::max(lo, hi), 1e-12);
    (void)val;
    return build(t1);
}

namespace {

struct CellSolver {
    const DistributionModel& mu;
    CostKind kind;

    double atom(double u0, double u1) const
    {
        if (kind.is_max())
            return 0.5 * (mu.quantile(u0) + mu.quantile(u1));
        if (kind.p == 1.0)
            return mu.quantile(0.5 * (u0 + u1));
        if (kind.p == 2.0)
            return (mu.partial_moment(1, mu.quantile(u1)) - mu.partial_moment(1, mu.quantile(u0))) / (u1 - u0);
        double a = u0 > 0 ? mu.quantile(u0) : mu.quantile(kTailLevel);
        double b = u1 < 1 ? mu.quantile(u1) : mu.quantile(1.0 - kTailLevel);
        auto [y, c] = num::golden_min([&](double t) { return cell_cost(mu, u0, u1, t, kind.p); }, a, b,
                                      1e-9 * std::max(1.0, b - a));
        (void)c;
        return y;
    }

    double cost(double u0, double u1) const
    {
        if (!(u1 > u0))
            return 0.0;
        if (kind.is_max())
            return 0.5 * (mu.quantile(u1) - mu.quantile(u0));
        return cell_cost(mu, u0, u1, atom(u0, u1), kind.p);
    }

    // boundaries t_1..t_{m-1}
    double objective(const std::vector<double>& t) const
    {
        double total = 0, prev = 0;
        for (std::size_t j = 0; j <= t.size(); ++j) {
            double next = j < t.size() ? t[j] : 1.0;
            double c = cost(prev, next);
            total = kind.is_max() ? std::max(total, c) : total + c;
            prev = next;
        }
        return total;
    }
};

}  // namespace

MinProjResult solve_min_proj(const DistributionModel& mu, const CapacityVector& q, CostKind kind)
{
    const std::size_t m = q.size();
    require(m <= 3, ErrorKind::InvalidArgument, "constrained quantization supports m <= 3");
    if (kind.is_max())
        require_compact(mu);
    if (m > 1)
        require(q.sum() >= 1.0 - kFeasTol, ErrorKind::InfeasibleParams, "capacities sum below 1");
    CellSolver cells{mu, kind};

    double best = kInf;
    std::vector<double> best_t;
    std::vector<std::size_t> best_sigma;

    for (const auto& sigma : all_permutations(m)) {
        std::vector<double> c(m);
        for (std::size_t j = 0; j < m; ++j)
            c[j] = q[sigma[j]];
        std::vector<double> t;
        double val;
        if (m == 1) {
            val = cells.objective(t);
        } else if (m == 2) {
            double lo = std::max(0.0, 1.0 - c[1]);
            double hi = std::min(1.0, c[0]);
            hi = std::max(lo, hi);
            std::size_t K = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / 1e-3)));
            double h = (hi - lo) / static_cast<double>(K);
            double tb = lo;
            val = kInf;
            for (std::size_t k = 0; k <= K; ++k) {
                double tk = k == K ? hi : lo + h * static_cast<double>(k);
                double v = cells.objective({tk});
                if (v < val) {
                    val = v;
                    tb = tk;
                }
            }
            auto [tr, vr] = num::golden_min([&](double s) { return cells.objective({s}); }, std::max(lo, tb - h),
                                            std::min(hi, tb + h), 1e-11);
            if (vr < val) {
                val = vr;
                tb = tr;
            }
            t = {tb};
        } else {
            auto range1 = [&](double t2) {
                return std::pair{std::max(0.0, t2 - c[1]), std::min({c[0], t2, 1.0})};
            };
            auto range2 = [&](double t1) {
                return std::pair{std::max(t1, 1.0 - c[2]), std::min(1.0, t1 + c[1])};
            };
            const double step = 1e-2;
            double lo1 = std::max(0.0, 1.0 - c[1] - c[2]);
            double hi1 = std::min(1.0, c[0]);
            val = kInf;
            std::vector<double> tb{lo1, range2(lo1).first};
            for (double t1 = lo1; t1 <= hi1 + 1e-12; t1 += step) {
                double a1 = std::min(t1, hi1);
                auto [lo2, hi2] = range2(a1);
                for (double t2 = lo2; t2 <= hi2 + 1e-12; t2 += step) {
                    double a2 = std::min(t2, hi2);
                    double v = cells.objective({a1, a2});
                    if (v < val) {
                        val = v;
                        tb = {a1, a2};
                    }
                }
            }
            for (double h = step; h > 1e-11; h *= 0.5) {
                for (int sweep = 0; sweep < 2; ++sweep) {
                    auto [l1, u1] = range1(tb[1]);
                    auto r1 = num::golden_min([&](double s) { return cells.objective({s, tb[1]}); },
                                              std::max(l1, tb[0] - h), std::min(u1, tb[0] + h), h * 1e-3);
                    if (r1.second < val) {
                        val = r1.second;
                        tb[0] = r1.first;
                    }
                    auto [l2, u2] = range2(tb[0]);
                    auto r2 = num::golden_min([&](double s) { return cells.objective({tb[0], s}); },
                                              std::max(l2, tb[1] - h), std::min(u2, tb[1] + h), h * 1e-3);
                    if (r2.second < val) {
                        val = r2.second;
                        tb[1] = r2.first;
                    }
                }
            }
            t = tb;
        }
        if (val < best - 1e-12) {
            best = val;
            best_t = t;
            best_sigma = sigma;
        }
    }

    std::vector<double> atoms(m), weights(m);
    std::vector<bool> empty(m);
    double prev = 0;
    for (std::size_t j = 0; j < m; ++j) {
        double next = j + 1 < m ? best_t[j] : 1.0;
        weights[j] = std::max(0.0, next - prev);
        empty[j] = !(next > prev);
        if (!empty[j])
            atoms[j] = cells.atom(prev, next);
        prev = std::max(prev, next);
    }
    std::size_t first = 0;
    while (empty[first])
        ++first;
    for (std::size_t j = 0; j < first; ++j)
        atoms[j] = atoms[first];
    for (std::size_t j = first + 1; j < m; ++j)
        if (empty[j])
            atoms[j] = atoms[j - 1];

    MinProjResult res{DiscreteMeasure(atoms, weights), best_sigma, finish(best, kind), best_t};
    return res;
}

}  // namespace cflp
