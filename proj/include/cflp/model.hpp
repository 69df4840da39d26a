#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "cflp/error.hpp"

namespace cflp {

// Slack used when flooring q*(n-1) and v*(n-1); keeps 0.7*10 at 7.
inline constexpr double kRankSlack = 1e-9;
// Tolerance for the capacity inequalities on real-valued parameters.
inline constexpr double kFeasTol = 1e-9;

struct CostKind {
    double p = 1.0;

    static CostKind social() { return {1.0}; }
    static CostKind lp(double p);
    static CostKind max() { return {std::numeric_limits<double>::infinity()}; }

    bool is_max() const { return p == std::numeric_limits<double>::infinity(); }
    bool is_social() const { return p == 1.0; }
    std::string label() const;
};

// Accepts "1", "2", "inf", "max", or any real >= 1.
CostKind parse_cost_kind(std::string_view text);

class AgentProfile {
public:
    explicit AgentProfile(std::vector<double> reports);

    std::size_t size() const { return x_.size(); }
    const std::vector<double>& positions() const { return x_; }
    double operator[](std::size_t i) const { return x_[i]; }

    std::size_t original_index(std::size_t sorted_i) const { return orig_[sorted_i]; }
    std::size_t sorted_index(std::size_t original_i) const { return rank_[original_i]; }

    // positions in the order they were reported
    std::vector<double> reports() const;

private:
    std::vector<double> x_;
    std::vector<std::size_t> orig_;
    std::vector<std::size_t> rank_;
};

class CapacityVector {
public:
    explicit CapacityVector(std::vector<double> q);

    std::size_t size() const { return q_.size(); }
    double operator[](std::size_t j) const { return q_[j]; }
    const std::vector<double>& values() const { return q_; }
    double sum() const;

private:
    std::vector<double> q_;
};

// Facility j sits at y[j] and carries capacity q[perm[j]]; capacity[j] is the
// absolute count. matching[i] is the facility of the i-th sorted agent.
struct FacilityOutcome {
    std::vector<double> y;
    std::vector<std::size_t> perm;
    std::vector<std::size_t> capacity;
    std::vector<std::size_t> matching;

    std::size_t facility_of(const AgentProfile& profile, std::size_t original_agent) const
    {
        return matching[profile.sorted_index(original_agent)];
    }
};

std::size_t absolute_capacity(double q, std::size_t n);

// 1-based order statistic rank floor(v(n-1))+1
std::size_t order_rank(double v, std::size_t n);

// Capacities of the facilities in position order. A single facility is
// uncapacitated.
std::vector<std::size_t> facility_capacities(const CapacityVector& q,
                                             const std::vector<std::size_t>& perm,
                                             std::size_t n);

double aggregate_cost(const std::vector<double>& distances, CostKind kind);

double evaluate_cost(const AgentProfile& profile, const FacilityOutcome& outcome, CostKind kind);

std::vector<std::size_t> nearest_feasible_assignment(const AgentProfile& profile,
                                                     const std::vector<double>& y,
                                                     const std::vector<std::size_t>& caps);

std::vector<std::size_t> identity_permutation(std::size_t m);
bool is_permutation_of(const std::vector<std::size_t>& perm, std::size_t m);
std::vector<std::vector<std::size_t>> all_permutations(std::size_t m);
std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm);

}  // namespace cflp
