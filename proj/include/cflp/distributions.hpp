#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cflp/model.hpp"

namespace cflp {

enum class BaseLaw { Uniform, Normal, Exponential, Beta31 };

class DistributionModel {
public:
    // uniform01, normal01, exp1, beta31 (short names uniform, normal, exp accepted)
    static DistributionModel builtin(std::string_view name);
    // name[@alpha,beta]
    static DistributionModel parse(std::string_view spec);

    DistributionModel affine(double alpha, double beta) const;

    double cdf(double x) const;
    double quantile(double u) const;
    double pdf(double x) const;
    std::pair<double, double> support() const;
    bool compact() const;
    double mean() const;
    double median() const;

    // E[X^k ; X <= t] for k = 0, 1, 2
    double partial_moment(int k, double t) const;

    BaseLaw law() const { return law_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    std::string name() const;

private:
    DistributionModel(BaseLaw law, double alpha, double beta) : law_(law), alpha_(alpha), beta_(beta) {}

    BaseLaw law_;
    double alpha_;
    double beta_;
};

double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double u);

std::uint64_t splitmix64(std::uint64_t x);
// uniform on (0,1) from the counter stream of a seed
double counter_uniform(std::uint64_t seed, std::uint64_t index);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

std::vector<double> sample_values(const DistributionModel& model, std::size_t n, std::uint64_t seed);
AgentProfile sample(const DistributionModel& model, std::size_t n, std::uint64_t seed);

}  // namespace cflp
