#include "cflp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "text.hpp"

namespace cflp {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::InfeasibleAssignment: return "infeasible assignment";
    case ErrorKind::InfeasibleParams: return "infeasible parameters";
    case ErrorKind::TotalCapacity: return "total capacity below demand";
    case ErrorKind::UnboundedSupport: return "unbounded support";
    case ErrorKind::SizeLimit: return "size limit exceeded";
    case ErrorKind::Numerical: return "numerical failure";
    case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

CostKind CostKind::lp(double p)
{
    require(p >= 1.0, ErrorKind::InvalidArgument, "cost exponent must be >= 1");
    return {p};
}

std::string CostKind::label() const
{
    return is_max() ? "inf" : text::fmt(p);
}

CostKind parse_cost_kind(std::string_view s)
{
    s = text::trim(s);
    if (s == "inf" || s == "max" || s == "infinity")
        return CostKind::max();
    if (s == "sc")
        return CostKind::social();
    double p = text::parse_double(s);
    require(!std::isnan(p) && p >= 1.0, ErrorKind::InvalidArgument,
            "cost exponent must be >= 1, got '" + std::string(s) + "'");
    return {p};
}

AgentProfile::AgentProfile(std::vector<double> reports)
{
    require(!reports.empty(), ErrorKind::InvalidArgument, "profile needs at least one agent");
    for (double r : reports)
        require(std::isfinite(r), ErrorKind::InvalidArgument, "agent positions must be finite");
    const std::size_t n = reports.size();
    orig_.resize(n);
    std::iota(orig_.begin(), orig_.end(), std::size_t{0});
    std::stable_sort(orig_.begin(), orig_.end(),
                     [&](std::size_t a, std::size_t b) { return reports[a] < reports[b]; });
    x_.resize(n);
    rank_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        x_[i] = reports[orig_[i]];
        rank_[orig_[i]] = i;
    }
}

std::vector<double> AgentProfile::reports() const
{
    std::vector<double> out(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i)
        out[orig_[i]] = x_[i];
    return out;
}

CapacityVector::CapacityVector(std::vector<double> q) : q_(std::move(q))
{
    require(!q_.empty(), ErrorKind::InvalidArgument, "capacity vector is empty");
    for (std::size_t j = 0; j < q_.size(); ++j) {
        require(q_[j] > 0.0 && q_[j] < 1.0, ErrorKind::InvalidArgument,
                "capacities must lie in (0,1), got " + text::fmt(q_[j]));
        if (j > 0)
            require(q_[j] <= q_[j - 1], ErrorKind::InvalidArgument,
                    "capacities must be non-increasing");
    }
}

double CapacityVector::sum() const
{
    return std::accumulate(q_.begin(), q_.end(), 0.0);
}

std::size_t absolute_capacity(double q, std::size_t n)
{
    require(n >= 1, ErrorKind::InvalidArgument, "n must be positive");
    require(q > 0.0 && q < 1.0, ErrorKind::InvalidArgument, "capacity must lie in (0,1)");
    return static_cast<std::size_t>(std::floor(q * static_cast<double>(n - 1) + kRankSlack)) + 1;
}

std::size_t order_rank(double v, std::size_t n)
{
    require(n >= 1, ErrorKind::InvalidArgument, "n must be positive");
    require(v >= 0.0 && v <= 1.0, ErrorKind::InvalidArgument, "quantile level must lie in [0,1]");
    auto r = static_cast<std::size_t>(std::floor(v * static_cast<double>(n - 1) + kRankSlack)) + 1;
    return std::min(r, n);
}

std::vector<std::size_t> facility_capacities(const CapacityVector& q,
                                             const std::vector<std::size_t>& perm,
                                             std::size_t n)
{
    require(perm.size() == q.size(), ErrorKind::DimensionMismatch, "permutation size differs from m");
    if (q.size() == 1)
        return {n};
    std::vector<std::size_t> caps(q.size());
    for (std::size_t j = 0; j < q.size(); ++j)
        caps[j] = absolute_capacity(q[perm[j]], n);
    return caps;
}

double aggregate_cost(const std::vector<double>& d, CostKind kind)
{
    require(!d.empty(), ErrorKind::InvalidArgument, "no distances");
    if (kind.is_max())
        return *std::max_element(d.begin(), d.end());
    double s = 0;
    if (kind.p == 1.0) {
        for (double v : d)
            s += v;
        return s / static_cast<double>(d.size());
    }
    if (kind.p == 2.0) {
        for (double v : d)
            s += v * v;
        return std::sqrt(s / static_cast<double>(d.size()));
    }
    // scale by the largest distance so large p does not overflow
    double top = *std::max_element(d.begin(), d.end());
    if (top == 0.0)
        return 0.0;
    for (double v : d)
        s += std::pow(v / top, kind.p);
    return top * std::pow(s / static_cast<double>(d.size()), 1.0 / kind.p);
}

double evaluate_cost(const AgentProfile& profile, const FacilityOutcome& out, CostKind kind)
{
    const std::size_t n = profile.size();
    const std::size_t m = out.y.size();
    require(out.matching.size() == n, ErrorKind::InvalidArgument, "matching does not cover every agent");
    require(out.capacity.size() == m, ErrorKind::InvalidArgument, "capacity list does not match facilities");
    std::vector<std::size_t> load(m, 0);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = out.matching[i];
        require(j < m, ErrorKind::InvalidArgument, "agent matched to a missing facility");
        ++load[j];
        d[i] = std::abs(profile[i] - out.y[j]);
    }
    for (std::size_t j = 0; j < m; ++j)
        require(load[j] <= out.capacity[j], ErrorKind::InvalidArgument,
                "facility " + std::to_string(j + 1) + " serves " + std::to_string(load[j]) +
                    " agents, capacity " + std::to_string(out.capacity[j]));
    return aggregate_cost(d, kind);
}

std::vector<std::size_t> nearest_feasible_assignment(const AgentProfile& profile,
                                                     const std::vector<double>& y,
                                                     const std::vector<std::size_t>& caps)
{
    const std::size_t m = y.size();
    const std::size_t n = profile.size();
    require(m >= 1, ErrorKind::InvalidArgument, "no facilities");
    require(caps.size() == m, ErrorKind::DimensionMismatch, "one capacity per facility expected");
    require(std::is_sorted(y.begin(), y.end()), ErrorKind::InvalidArgument, "facility positions must be sorted");
    std::size_t total = 0;
    for (auto c : caps)
        total += c;
    require(total >= n, ErrorKind::InfeasibleAssignment, "capacities do not cover the agents");

    // Monotone min-distance assignment: facility j serves a contiguous block.
    // f[j][k]: first k agents served by facilities < j. Ties favour the left.
    const double inf = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(profile[i]));
    for (double v : y)
        scale = std::max(scale, std::abs(v));
    const double tie = 1e-12 * scale;

    std::vector<std::vector<double>> pre(m, std::vector<double>(n + 1, 0.0));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < n; ++i)
            pre[j][i + 1] = pre[j][i] + std::abs(profile[i] - y[j]);

    std::vector<std::vector<double>> f(m + 1, std::vector<double>(n + 1, inf));
    std::vector<std::vector<std::size_t>> from(m + 1, std::vector<std::size_t>(n + 1, 0));
    f[0][0] = 0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k <= n; ++k) {
            std::size_t lo = k > caps[j] ? k - caps[j] : 0;
            for (std::size_t a = k + 1; a-- > lo;) {
                if (f[j][a] == inf)
                    continue;
                double c = f[j][a] + pre[j][k] - pre[j][a];
                if (c < f[j + 1][k] - tie) {
                    f[j + 1][k] = c;
                    from[j + 1][k] = a;
                }
            }
        }
    }

    std::vector<std::size_t> matching(n);
    std::size_t k = n;
    for (std::size_t j = m; j-- > 0;) {
        std::size_t a = from[j + 1][k];
        for (std::size_t i = a; i < k; ++i)
            matching[i] = j;
        k = a;
    }

    for (std::size_t i = 0; i < n; ++i) {
        double best = inf;
        for (double v : y)
            best = std::min(best, std::abs(profile[i] - v));
        if (std::abs(profile[i] - y[matching[i]]) > best + tie)
            fail(ErrorKind::InfeasibleAssignment,
                 "agent at " + text::fmt(profile[i]) + " cannot reach a nearest facility without overloading it");
    }
    return matching;
}

std::vector<std::size_t> identity_permutation(std::size_t m)
{
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

bool is_permutation_of(const std::vector<std::size_t>& perm, std::size_t m)
{
    if (perm.size() != m)
        return false;
    std::vector<bool> seen(m, false);
    for (auto j : perm) {
        if (j >= m || seen[j])
            return false;
        seen[j] = true;
    }
    return true;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t m)
{
    std::vector<std::vector<std::size_t>> out;
    auto p = identity_permutation(m);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm)
{
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j)
        inv[perm[j]] = j;
    return inv;
}

}  // namespace cflp
