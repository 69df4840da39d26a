#pragma once

#include <span>
#include <vector>

#include "cflp/model.hpp"

namespace cflp {

struct BlockOptimum {
    double cost;       // sum of |x-y|^p over the block, or the half-width for p=inf
    double location;
};

BlockOptimum block_cost(std::span<const double> sorted_segment, CostKind kind);

struct OptimalSolution {
    double cost;
    FacilityOutcome outcome;
    std::vector<std::size_t> breakpoints;   // m+1 entries, 0 .. n
};

OptimalSolution optimal_cost(const AgentProfile& profile, const CapacityVector& q, CostKind kind);

// Exhaustive search over every capacity-respecting partition; n <= 10, m <= 3.
double bruteforce_oracle(const AgentProfile& profile, const CapacityVector& q, CostKind kind);

}  // namespace cflp
