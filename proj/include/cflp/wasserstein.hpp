#pragma once

#include <vector>

#include "cflp/distributions.hpp"
#include "cflp/model.hpp"

namespace cflp {

class DiscreteMeasure {
public:
    DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights);

    static DiscreteMeasure dirac(double at);
    static DiscreteMeasure empirical(const AgentProfile& profile);

    std::size_t size() const { return atoms_.size(); }
    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
};

enum class Integration {
    Automatic,   // closed form through partial moments for p = 1, 2; quadrature otherwise
    Quadrature,
};

inline constexpr double kQuadratureTol = 1e-11;
inline constexpr double kTailLevel = 1e-9;

double wp_discrete(const DiscreteMeasure& a, const DiscreteMeasure& b, CostKind kind);

// Integral of |x - atom|^p over the quantile cell [u0, u1] of mu (finite p).
double cell_cost(const DistributionModel& mu, double u0, double u1, double atom, double p,
                 Integration how = Integration::Automatic);

double wp_cont_discrete(const DistributionModel& mu, const DiscreteMeasure& nu, CostKind kind,
                        Integration how = Integration::Automatic);

DiscreteMeasure voronoi_weights(const DistributionModel& mu, const std::vector<double>& y);

// W_p-optimal masses on fixed sorted atoms with per-atom caps (m <= 3 when caps bind).
DiscreteMeasure constrained_weights(const DistributionModel& mu, const std::vector<double>& y,
                                    const std::vector<double>& caps, CostKind kind = CostKind::social());

struct MinProjResult {
    DiscreteMeasure measure;
    std::vector<std::size_t> sigma;     // atom j carries at most q[sigma[j]]
    double value;                       // W_p(mu, measure)
    std::vector<double> boundaries;     // cumulative masses t_1 .. t_{m-1}
};

MinProjResult solve_min_proj(const DistributionModel& mu, const CapacityVector& q, CostKind kind);

}  // namespace cflp
