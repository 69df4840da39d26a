#include "cflp/mechanisms.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "text.hpp"

namespace cflp {

ErmParams ErmParams::identity(std::vector<double> v)
{
    ErmParams p;
    p.perm = identity_permutation(v.size());
    p.v = std::move(v);
    return p;
}

void ErmParams::validate(std::size_t m) const
{
    require(v.size() == m, ErrorKind::DimensionMismatch,
            "expected " + std::to_string(m) + " quantile levels, got " + std::to_string(v.size()));
    require(is_permutation_of(perm, m), ErrorKind::InvalidArgument, "perm is not a permutation of the facilities");
    for (std::size_t j = 0; j < m; ++j) {
        require(v[j] >= 0.0 && v[j] <= 1.0, ErrorKind::InvalidArgument, "quantile levels must lie in [0,1]");
        if (j > 0)
            require(v[j - 1] <= v[j], ErrorKind::InvalidArgument, "quantile levels must be non-decreasing");
    }
}

std::string ErmParams::label() const
{
    std::string s = "erm(" + text::join(v, ';', 12) + "|";
    for (std::size_t j = 0; j < perm.size(); ++j) {
        if (j)
            s += ';';
        s += std::to_string(perm[j] + 1);
    }
    return s + ")";
}

FeasibilityCheck erm_feasibility(const CapacityVector& q, const ErmParams& params)
{
    const std::size_t m = q.size();
    params.validate(m);
    FeasibilityCheck out;
    if (m == 1) {
        out.explanation = "single facility";
        return out;
    }

    std::vector<double> level;
    std::vector<double> cap;
    std::vector<std::size_t> first;
    for (std::size_t j = 0; j < m; ++j) {
        if (level.empty() || params.v[j] != level.back()) {
            level.push_back(params.v[j]);
            cap.push_back(0.0);
            first.push_back(j);
        }
        cap.back() += q[params.perm[j]];
    }
    const std::size_t groups = level.size();

    if (groups == 1) {
        out.required = 1.0;
        out.available = cap[0];
        out.feasible = cap[0] >= 1.0 - kFeasTol;
        out.explanation = "all facilities share level " + text::fmt(level[0]) + ": total capacity " +
                          text::fmt(cap[0]) + (out.feasible ? " >= 1" : " < 1");
        return out;
    }

    for (std::size_t g = 0; g < groups; ++g) {
        double lower = g == 0 ? 0.0 : level[g - 1];
        double upper = g + 1 == groups ? 1.0 : level[g + 1];
        double need = upper - lower;
        if (cap[g] < need - kFeasTol) {
            out.feasible = false;
            out.violated = first[g];
            out.required = need;
            out.available = cap[g];
            std::string who = groups == m ? "facility " + std::to_string(first[g] + 1)
                                          : "level group at v=" + text::fmt(level[g]);
            out.explanation = who + ": capacity " + text::fmt(cap[g]) + " < " + text::fmt(upper) + " - " +
                              text::fmt(lower) + " = " + text::fmt(need);
            return out;
        }
    }
    out.explanation = "all capacity inequalities hold";
    return out;
}

bool erm_feasible(const CapacityVector& q, const ErmParams& params)
{
    return erm_feasibility(q, params).feasible;
}

bool spare_capacity_necessary(const CapacityVector& q, const std::vector<double>& v)
{
    require(v.size() == q.size(), ErrorKind::DimensionMismatch, "one level per facility expected");
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return !(*hi - *lo > q.sum() - 1.0 + kFeasTol);
}

FacilityOutcome erm_run(const CapacityVector& q, const ErmParams& params, const AgentProfile& profile)
{
    const std::size_t m = q.size();
    const std::size_t n = profile.size();
    params.validate(m);
    FacilityOutcome out;
    out.perm = params.perm;
    out.y.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        out.y[j] = profile[order_rank(params.v[j], n) - 1];
    out.capacity = facility_capacities(q, params.perm, n);
    out.matching = nearest_feasible_assignment(profile, out.y, out.capacity);
    return out;
}

FacilityOutcome innerpoint_run(const AgentProfile& profile, const CapacityVector& q)
{
    const std::size_t n = profile.size();
    require(q.size() == 2, ErrorKind::DimensionMismatch, "InnerPoint needs two facilities");
    require(n % 2 == 0, ErrorKind::InvalidArgument, "InnerPoint needs an even number of agents");
    const std::size_t k = n / 2;
    FacilityOutcome out;
    out.perm = identity_permutation(2);
    out.capacity = facility_capacities(q, out.perm, n);
    require(out.capacity[0] >= k && out.capacity[1] >= k, ErrorKind::InfeasibleAssignment,
            "InnerPoint needs capacity n/2 at each facility");
    out.y = {profile[k - 1], profile[k]};
    out.matching.assign(n, 0);
    for (std::size_t i = k; i < n; ++i)
        out.matching[i] = 1;
    return out;
}

FacilityOutcome all_median_run(const CapacityVector& q, const AgentProfile& profile)
{
    const std::size_t n = profile.size();
    const std::size_t m = q.size();
    FacilityOutcome out;
    out.perm = identity_permutation(m);
    out.capacity = facility_capacities(q, out.perm, n);
    std::size_t total = 0;
    for (auto c : out.capacity)
        total += c;
    require(total >= n, ErrorKind::TotalCapacity, "capacities sum to " + std::to_string(total) +
                                                      " for " + std::to_string(n) + " agents");
    out.y.assign(m, profile[order_rank(0.5, n) - 1]);
    out.matching.resize(n);
    std::size_t j = 0, used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (used == out.capacity[j]) {
            ++j;
            used = 0;
        }
        out.matching[i] = j;
        ++used;
    }
    return out;
}

namespace {

std::array<double, 2> eem_place(const std::vector<double>& x, std::size_t c1, std::size_t c2)
{
    const std::size_t n = x.size();
    const double x1 = x.front(), xn = x.back();
    std::size_t a1 = 0;
    for (double xi : x)
        if (2.0 * (xi - x1) <= xn - x1)
            ++a1;
    const std::size_t a2 = n - a1;
    if (a1 <= c1 && a2 <= c2)
        return {x1, xn};
    if (a1 > c1 && a2 <= c2)
        return {2.0 * x[c1] - xn, xn};
    if (a1 <= c1 && a2 > c2)
        return {x1, 2.0 * x[n - c2 - 1] - x1};
    fail(ErrorKind::InfeasibleAssignment, "both endpoint clusters exceed their capacities");
}

}  // namespace

FacilityOutcome eem_run(const CapacityVector& q, const AgentProfile& profile)
{
    require(q.size() == 2, ErrorKind::DimensionMismatch, "EEM needs exactly two facilities");
    const std::size_t n = profile.size();
    const std::size_t c1 = absolute_capacity(q[0], n);
    const std::size_t c2 = absolute_capacity(q[1], n);
    require(c1 + c2 >= n, ErrorKind::TotalCapacity, "EEM capacities do not cover the agents");

    const auto& x = profile.positions();
    const double x1 = x.front(), xn = x.back();
    std::size_t a1 = 0;
    for (double xi : x)
        if (2.0 * (xi - x1) <= xn - x1)
            ++a1;

    FacilityOutcome out;
    if (a1 >= n - a1) {
        auto y = eem_place(x, c1, c2);
        out.y = {y[0], y[1]};
        out.perm = {0, 1};
        out.capacity = {c1, c2};
    } else {
        std::vector<double> mirrored(n);
        for (std::size_t i = 0; i < n; ++i)
            mirrored[i] = -x[n - 1 - i];
        auto y = eem_place(mirrored, c1, c2);
        out.y = {-y[1], -y[0]};
        out.perm = {1, 0};
        out.capacity = {c2, c1};
    }
    out.matching = nearest_feasible_assignment(profile, out.y, out.capacity);
    return out;
}

bool truthfulness_probe(const Mechanism& mechanism, const AgentProfile& profile,
                        std::size_t agent, double misreport)
{
    require(agent < profile.size(), ErrorKind::InvalidArgument, "agent index out of range");
    auto reports = profile.reports();
    const double truth = reports[agent];
    auto honest = mechanism(profile);
    double honest_cost = std::abs(truth - honest.y[honest.facility_of(profile, agent)]);

    reports[agent] = misreport;
    AgentProfile manipulated(reports);
    auto lied = mechanism(manipulated);
    double lied_cost = std::abs(truth - lied.y[lied.facility_of(manipulated, agent)]);
    return lied_cost >= honest_cost - 1e-12;
}

InfeasibilityWitness infeasibility_witness(const CapacityVector& q, const ErmParams& params)
{
    const std::size_t m = q.size();
    auto check = erm_feasibility(q, params);
    require(!check.feasible, ErrorKind::InvalidArgument, "parameters are feasible; no witness exists");
    for (std::size_t j = 1; j < m; ++j)
        require(params.v[j] != params.v[j - 1], ErrorKind::InvalidArgument,
                "witness construction needs distinct quantile levels");

    const std::size_t j = check.violated;
    const double gap = check.required - check.available;
    std::size_t N = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(2.0 / gap)) + 1);
    while (2.0 / static_cast<double>(N - 1) > gap)
        ++N;

    for (; N < 100000000; ++N) {
        std::vector<std::size_t> r(m);
        for (std::size_t i = 0; i < m; ++i)
            r[i] = order_rank(params.v[i], N);
        std::size_t low = j == 0 ? 0 : r[j - 1];
        std::size_t high = j + 1 == m ? N + 1 : r[j + 1];
        if (!(low < r[j] && r[j] < high))
            continue;
        std::size_t demand = high - low - 1;
        std::size_t cap = absolute_capacity(q[params.perm[j]], N);
        if (demand <= cap)
            continue;
        std::vector<double> x(N);
        for (std::size_t rank = 1; rank <= N; ++rank) {
            if (j == 0)
                x[rank - 1] = rank < high ? 0.0 : 1.0;
            else if (j + 1 == m)
                x[rank - 1] = rank <= low ? 0.0 : 1.0;
            else
                x[rank - 1] = rank <= low ? -1.0 : (rank < high ? 0.0 : 1.0);
        }
        return InfeasibilityWitness{AgentProfile(std::move(x)), j, demand, cap};
    }
    fail(ErrorKind::Numerical, "no witness found below the search limit");
}

}  // namespace cflp
