#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cflp/model.hpp"

namespace cflp {

struct ErmParams {
    std::vector<double> v;           // quantile levels, non-decreasing
    std::vector<std::size_t> perm;   // facility j gets q[perm[j]]

    static ErmParams identity(std::vector<double> v);
    void validate(std::size_t m) const;
    std::string label() const;
};

struct FeasibilityCheck {
    bool feasible = true;
    std::size_t violated = 0;   // facility (or level group) index of the first failing inequality
    double required = 0;        // right-hand side of that inequality
    double available = 0;       // capacity fraction on its left-hand side
    std::string explanation;
};

FeasibilityCheck erm_feasibility(const CapacityVector& q, const ErmParams& params);
bool erm_feasible(const CapacityVector& q, const ErmParams& params);

// false means no permutation can make v feasible
bool spare_capacity_necessary(const CapacityVector& q, const std::vector<double>& v);

FacilityOutcome erm_run(const CapacityVector& q, const ErmParams& params, const AgentProfile& profile);
FacilityOutcome innerpoint_run(const AgentProfile& profile, const CapacityVector& q = CapacityVector({0.5, 0.5}));
FacilityOutcome all_median_run(const CapacityVector& q, const AgentProfile& profile);
FacilityOutcome eem_run(const CapacityVector& q, const AgentProfile& profile);

using Mechanism = std::function<FacilityOutcome(const AgentProfile&)>;

// agent is an index into the reported (unsorted) order
bool truthfulness_probe(const Mechanism& mechanism, const AgentProfile& profile,
                        std::size_t agent, double misreport);

struct InfeasibilityWitness {
    AgentProfile profile;
    std::size_t facility;   // overloaded facility, position order
    std::size_t demand;     // agents strictly nearest to it
    std::size_t capacity;
};

InfeasibilityWitness infeasibility_witness(const CapacityVector& q, const ErmParams& params);

}  // namespace cflp
