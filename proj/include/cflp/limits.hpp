#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "cflp/distributions.hpp"
#include "cflp/mechanisms.hpp"
#include "cflp/wasserstein.hpp"

namespace cflp {

struct LimitReport {
    CostKind kind;
    double numerator;     // W_p(mu, nu_v)
    double denominator;   // W_p(mu, nu_m)
    double ratio;
    DiscreteMeasure erm_measure;
    DiscreteMeasure optimal_measure;
    std::vector<std::size_t> optimal_sigma;
};

LimitReport limit_ratio(const DistributionModel& mu, const CapacityVector& q, const ErmParams& params,
                        CostKind kind);

bool scale_invariance_check(const DistributionModel& mu, const CapacityVector& q, const ErmParams& params,
                            CostKind kind, double alpha, double beta);

// W_1 between mu and the two-atom measure with Voronoi weights
double two_atom_w1(const DistributionModel& mu, double y1, double y2);
std::pair<double, double> grad_W(const DistributionModel& mu, double y1, double y2);

ErmParams optimal_erm_uniform_sc(const CapacityVector& q);
ErmParams optimal_erm_nospare(const DistributionModel& mu, const CapacityVector& q, CostKind kind);
double allmedian_limit_uniform(const CapacityVector& q);

struct MaxCostSplit {
    DiscreteMeasure measure;
    std::vector<std::size_t> perm;
    double z;
    double value;   // W_inf(mu, measure)
};

MaxCostSplit maxcost_opt_split(const DistributionModel& mu, const CapacityVector& q);

struct MaxCostDesign {
    ErmParams params;
    std::array<double, 2> s_id, s_swap;           // projected atoms per branch
    double criterion_id, criterion_swap;          // max{|a-s1|, |b-s2|}
    double w_inf_id, w_inf_swap;                  // W_inf of the ERM limit measure per branch
    bool criterion_agrees;                        // criterion picks the branch with smaller W_inf
};

MaxCostDesign optimal_erm_maxcost(const DistributionModel& mu, const CapacityVector& q);

struct PredicateResult {
    bool holds;
    std::vector<double> zeta;
    std::optional<ErmParams> params;
};

PredicateResult asymptotically_optimal_predicate(const DistributionModel& mu, const CapacityVector& q,
                                                 CostKind kind);

struct SearchResult {
    ErmParams params;
    LimitReport report;
};

SearchResult optimal_erm_search(const DistributionModel& mu, const CapacityVector& q, CostKind kind);

double eem_limit_numerator_uniform(const CapacityVector& q);
double eem_limit_uniform(const CapacityVector& q);

}  // namespace cflp
