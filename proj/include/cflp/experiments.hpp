#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cflp/distributions.hpp"
#include "cflp/mechanisms.hpp"

namespace cflp {

enum class MechanismKind { Erm, InnerPoint, AllMedian, Eem };

struct MechanismSpec {
    MechanismKind kind = MechanismKind::Erm;
    ErmParams erm;

    // erm:v1,v2[:p1,p2] | innerpoint | allmedian | eem ; perm entries are 1-based
    static MechanismSpec parse(std::string_view text);
    static MechanismSpec of_erm(ErmParams params);
    std::string label() const;
    Mechanism bind(const CapacityVector& q) const;
};

enum class Estimator { MeanOfRatios, RatioOfMeans };

struct ExperimentSpec {
    std::string distribution = "uniform";
    std::vector<double> q;
    std::vector<MechanismSpec> mechanisms;
    std::vector<std::size_t> n_values;
    std::size_t trials = 500;
    CostKind cost = CostKind::social();
    std::uint64_t seed = 1;
    Estimator estimator = Estimator::MeanOfRatios;
    std::size_t bootstrap = 2000;
    unsigned threads = 1;

    void validate() const;
};

struct TrialRecord {
    std::size_t n;
    std::size_t trial;
    std::size_t mechanism;
    std::uint64_t seed;
    double mechanism_cost;
    double optimal_cost;
    double ratio() const;
};

struct ResultRow {
    std::string dist;
    std::vector<double> q;
    std::string mech;
    CostKind cost;
    std::size_t n;
    std::size_t trials;
    std::uint64_t seed;
    double ratio_mean;       // per ExperimentSpec::estimator
    double ci_lb, ci_ub;
    double ratio_of_means;
    double mean_of_ratios;
    std::optional<double> limit;
    std::optional<double> rel_err;
};

struct BatchResult {
    std::vector<ResultRow> rows;
    std::vector<TrialRecord> records;
};

BatchResult run_batch(const ExperimentSpec& spec);

double relative_error(double empirical, double limit);

// Limit ratio of a mechanism, when one is known for (mu, q, p).
std::optional<double> mechanism_limit(const MechanismSpec& mech, const DistributionModel& mu,
                                      const CapacityVector& q, CostKind kind);

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

std::vector<std::string> table_preset_names();
std::vector<ExperimentSpec> table_preset(std::string_view name, std::size_t trials = 500, std::uint64_t seed = 2024);

}  // namespace cflp
