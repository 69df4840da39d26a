#include "cflp/higherdim.hpp"

#include <algorithm>
#include <cmath>

#include "cflp/mechanisms.hpp"

namespace cflp {

void HermParams::validate() const
{
    for (const auto& row : levels)
        for (double v : row)
            require(std::isfinite(v) && v >= 0 && v <= 1, ErrorKind::InvalidArgument,
                    "HERM levels must lie in [0,1]");
    require(perm[0] + perm[1] == 1 && perm[0] <= 1, ErrorKind::InvalidArgument, "perm must be a permutation of {0,1}");
}

HermOutcome herm_run(const CapacityVector& q, const HermParams& params, const PlanarProfile& profile)
{
    require(q.size() == 2, ErrorKind::DimensionMismatch, "HERM needs exactly two facilities");
    require(!profile.empty(), ErrorKind::InvalidArgument, "empty planar profile");
    params.validate();
    const std::size_t n = profile.size();
    std::array<std::vector<double>, 2> z;
    for (const auto& p : profile) {
        require(std::isfinite(p.x) && std::isfinite(p.y), ErrorKind::InvalidArgument, "non-finite coordinate");
        z[0].push_back(p.x);
        z[1].push_back(p.y);
    }
    std::sort(z[0].begin(), z[0].end());
    std::sort(z[1].begin(), z[1].end());

    HermOutcome out;
    for (std::size_t j = 0; j < 2; ++j) {
        out.facility[j].x = z[0][order_rank(params.levels[0][j], n) - 1];
        out.facility[j].y = z[1][order_rank(params.levels[1][j], n) - 1];
        out.capacity[j] = absolute_capacity(q[params.perm[j]], n);
    }

    std::vector<std::array<double, 2>> dist(n);
    std::vector<int> nearest(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 2; ++j)
            dist[i][j] = std::hypot(profile[i].x - out.facility[j].x, profile[i].y - out.facility[j].y);
        if (dist[i][0] < dist[i][1]) {
            nearest[i] = 0;
            ++out.demand[0];
        } else if (dist[i][1] < dist[i][0]) {
            nearest[i] = 1;
            ++out.demand[1];
        } else {
            nearest[i] = -1;
            ++out.ties;
        }
    }

    for (std::size_t j = 0; j < 2; ++j)
        if (out.demand[j] > out.capacity[j] && !out.overload)
            out.overload = HermOverload{j, out.demand[j], out.ties, out.capacity[j]};
    if (!out.overload && n > out.capacity[0] + out.capacity[1]) {
        std::size_t j = out.demand[0] + out.ties > out.capacity[0] ? 0 : 1;
        out.overload = HermOverload{j, out.demand[j], out.ties, out.capacity[j]};
    }
    if (out.overload)
        return out;

    std::size_t room0 = out.capacity[0] - out.demand[0];
    out.matching.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j;
        if (nearest[i] >= 0) {
            j = static_cast<std::size_t>(nearest[i]);
        } else if (room0 > 0) {
            j = 0;
            --room0;
        } else {
            j = 1;
        }
        out.matching[i] = j;
        out.social_cost += dist[i][j];
    }
    return out;
}

namespace {

bool one_dim_feasible(const CapacityVector& q, const std::array<std::size_t, 2>& perm, double a, double b)
{
    ErmParams p;
    std::array<std::size_t, 2> pr = perm;
    if (a > b) {
        std::swap(a, b);
        std::swap(pr[0], pr[1]);
    }
    p.v = {a, b};
    p.perm = {pr[0], pr[1]};
    return erm_feasible(q, p);
}

}  // namespace

bool herm_feasible_2d(const CapacityVector& q, const HermParams& params, HermReading reading)
{
    require(q.size() == 2, ErrorKind::DimensionMismatch, "HERM needs exactly two facilities");
    params.validate();
    const auto& V = params.levels;
    const double q1 = q[params.perm[0]];
    const double q2 = q[params.perm[1]];
    if (reading == HermReading::Literal) {
        bool first = V[0][0] == V[1][0] && V[1][1] <= q1 + kFeasTol && 1 - V[0][1] <= q2 + kFeasTol;
        bool second = V[0][1] == V[1][1] && V[1][0] <= q1 + kFeasTol && 1 - V[0][0] <= q2 + kFeasTol;
        return first || second;
    }
    bool same0 = V[0][0] == V[0][1];
    bool same1 = V[1][0] == V[1][1];
    if (same0 && same1)
        return q.sum() >= 1 - kFeasTol;
    if (same0)
        return one_dim_feasible(q, params.perm, V[1][0], V[1][1]);
    if (same1)
        return one_dim_feasible(q, params.perm, V[0][0], V[0][1]);
    return false;
}

PlanarProfile herm_example_profile()
{
    PlanarProfile x;
    for (int i = 0; i < 9; ++i)
        x.push_back({-1.0, 1.5});
    x.push_back({0.0, 1.0});
    x.push_back({1.0, 0.0});
    for (int i = 0; i < 9; ++i)
        x.push_back({1.5, -1.0});
    return x;
}

HermParams herm_example_params()
{
    HermParams p;
    p.levels = {{{0.5, 0.55}, {0.5, 0.55}}};
    return p;
}

CapacityVector herm_example_q() { return CapacityVector({0.7, 0.7}); }

}  // namespace cflp
