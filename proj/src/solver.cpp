#include "cflp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "numerics.hpp"

namespace cflp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power_sum(std::span<const double> x, double y, double p)
{
    double s = 0;
    for (double xi : x)
        s += std::pow(std::abs(xi - y), p);
    return s;
}

// Block costs over the sorted agents [l, r).
class BlockTable {
public:
    BlockTable(const std::vector<double>& x, CostKind kind) : x_(x), kind_(kind)
    {
        const std::size_t n = x.size();
        shift_ = x[n / 2];
        s1_.assign(n + 1, 0.0);
        s2_.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double c = x[i] - shift_;
            s1_[i + 1] = s1_[i] + c;
            s2_[i + 1] = s2_[i] + c * c;
        }
        if (!kind.is_max() && kind.p != 1.0 && kind.p != 2.0) {
            generic_.assign((n + 1) * (n + 1), BlockOptimum{0.0, 0.0});
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t r = l + 1; r <= n; ++r)
                    generic_[l * (n + 1) + r] = block_cost(std::span<const double>(x.data() + l, r - l), kind);
        }
    }

    double cost(std::size_t l, std::size_t r) const
    {
        if (r <= l)
            return 0.0;
        if (kind_.is_max())
            return 0.5 * (x_[r - 1] - x_[l]);
        if (kind_.p == 1.0) {
            std::size_t med = l + (r - l - 1) / 2;
            double xm = x_[med] - shift_;
            double left = xm * static_cast<double>(med - l) - (s1_[med] - s1_[l]);
            double right = (s1_[r] - s1_[med + 1]) - xm * static_cast<double>(r - med - 1);
            return left + right;
        }
        if (kind_.p == 2.0) {
            if (x_[l] == x_[r - 1])
                return 0.0;
            double len = static_cast<double>(r - l);
            double s = s1_[r] - s1_[l];
            return std::max(0.0, (s2_[r] - s2_[l]) - s * s / len);
        }
        return generic_[l * (x_.size() + 1) + r].cost;
    }

    double location(std::size_t l, std::size_t r) const
    {
        if (kind_.is_max())
            return 0.5 * (x_[r - 1] + x_[l]);
        if (kind_.p == 1.0)
            return x_[l + (r - l - 1) / 2];
        if (kind_.p == 2.0)
            return shift_ + (s1_[r] - s1_[l]) / static_cast<double>(r - l);
        return generic_[l * (x_.size() + 1) + r].location;
    }

private:
    const std::vector<double>& x_;
    CostKind kind_;
    double shift_ = 0;
    std::vector<double> s1_, s2_;
    std::vector<BlockOptimum> generic_;
};

double combine(double acc, double block, CostKind kind)
{
    return kind.is_max() ? std::max(acc, block) : acc + block;
}

double finish(double total, std::size_t n, CostKind kind)
{
    if (kind.is_max())
        return total;
    double mean = total / static_cast<double>(n);
    if (kind.p == 1.0)
        return mean;
    if (kind.p == 2.0)
        return std::sqrt(mean);
    return std::pow(mean, 1.0 / kind.p);
}

}  // namespace

BlockOptimum block_cost(std::span<const double> x, CostKind kind)
{
    require(!x.empty(), ErrorKind::InvalidArgument, "empty block");
    const std::size_t len = x.size();
    if (kind.is_max())
        return {0.5 * (x.back() - x.front()), 0.5 * (x.back() + x.front())};
    if (kind.p == 1.0) {
        double y = x[(len - 1) / 2];
        return {power_sum(x, y, 1.0), y};
    }
    if (kind.p == 2.0) {
        double mean = 0;
        for (double xi : x)
            mean += xi;
        mean /= static_cast<double>(len);
        double s = 0;
        for (double xi : x)
            s += (xi - mean) * (xi - mean);
        return {s, mean};
    }
    if (x.front() == x.back())
        return {0.0, x.front()};
    double span = x.back() - x.front();
    auto [y, c] = num::golden_min([&](double t) { return power_sum(x, t, kind.p); }, x.front(), x.back(),
                                  1e-10 * std::max(1.0, span));
    return {c, y};
}

OptimalSolution optimal_cost(const AgentProfile& profile, const CapacityVector& q, CostKind kind)
{
    const std::size_t n = profile.size();
    const std::size_t m = q.size();
    const auto& x = profile.positions();
    BlockTable table(x, kind);

    double best = kInf;
    std::vector<std::size_t> best_sigma;
    std::vector<std::size_t> best_breaks;

    for (const auto& sigma : all_permutations(m)) {
        auto caps = facility_capacities(q, sigma, n);
        std::size_t total = 0;
        for (auto c : caps)
            total += c;
        if (total < n)
            fail(ErrorKind::TotalCapacity, "capacities sum to " + std::to_string(total) + " for " +
                                               std::to_string(n) + " agents");

        std::vector<double> prev(n + 1, kInf), cur(n + 1);
        prev[0] = 0.0;
        std::vector<std::vector<std::size_t>> from(m, std::vector<std::size_t>(n + 1, 0));
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i <= n; ++i) {
                double v = kInf;
                std::size_t arg = i;
                std::size_t lo = i > caps[j] ? i - caps[j] : 0;
                for (std::size_t l = lo; l <= i; ++l) {
                    if (prev[l] == kInf)
                        continue;
                    double c = combine(prev[l], table.cost(l, i), kind);
                    if (c < v) {
                        v = c;
                        arg = l;
                    }
                }
                cur[i] = v;
                from[j][i] = arg;
            }
            std::swap(prev, cur);
        }
        if (prev[n] < best) {
            best = prev[n];
            best_sigma = sigma;
            best_breaks.assign(m + 1, n);
            for (std::size_t j = m; j-- > 0;)
                best_breaks[j] = from[j][best_breaks[j + 1]];
        }
    }

    OptimalSolution sol;
    sol.cost = finish(best, n, kind);
    sol.breakpoints = best_breaks;
    auto& out = sol.outcome;
    out.perm = best_sigma;
    out.capacity = facility_capacities(q, best_sigma, n);
    out.y.assign(m, 0.0);
    out.matching.resize(n);
    std::vector<bool> empty(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t l = best_breaks[j], r = best_breaks[j + 1];
        empty[j] = r <= l;
        if (!empty[j])
            out.y[j] = table.location(l, r);
        for (std::size_t i = l; i < r; ++i)
            out.matching[i] = j;
    }
    // idle facilities copy a neighbour so positions stay sorted
    std::size_t first_used = 0;
    while (empty[first_used])
        ++first_used;
    for (std::size_t j = 0; j < first_used; ++j)
        out.y[j] = out.y[first_used];
    for (std::size_t j = first_used + 1; j < m; ++j)
        if (empty[j])
            out.y[j] = out.y[j - 1];
    return sol;
}

double bruteforce_oracle(const AgentProfile& profile, const CapacityVector& q, CostKind kind)
{
    const std::size_t n = profile.size();
    const std::size_t m = q.size();
    require(n <= 10 && m <= 3, ErrorKind::SizeLimit, "oracle limited to n <= 10 and m <= 3");
    auto caps = facility_capacities(q, identity_permutation(m), n);
    const auto& x = profile.positions();

    std::vector<std::size_t> label(n, 0);
    double best = kInf;
    std::vector<std::vector<double>> groups(m);
    while (true) {
        std::vector<std::size_t> load(m, 0);
        bool ok = true;
        for (auto l : label)
            if (++load[l] > caps[l])
                ok = false;
        if (ok) {
            for (auto& g : groups)
                g.clear();
            for (std::size_t i = 0; i < n; ++i)
                groups[label[i]].push_back(x[i]);
            double total = 0;
            for (const auto& g : groups)
                if (!g.empty())
                    total = combine(total, block_cost(g, kind).cost, kind);
            best = std::min(best, total);
        }
        std::size_t i = 0;
        while (i < n && ++label[i] == m)
            label[i++] = 0;
        if (i == n)
            break;
    }
    require(best < kInf, ErrorKind::TotalCapacity, "no capacity-respecting partition exists");
    return finish(best, n, kind);
}

}  // namespace cflp
