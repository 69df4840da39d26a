#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cflp/model.hpp"

namespace cflp {

struct Point2 {
    double x = 0, y = 0;
};

using PlanarProfile = std::vector<Point2>;

// levels[l][j]: quantile level of coordinate l for facility j
struct HermParams {
    std::array<std::array<double, 2>, 2> levels{};
    std::array<std::size_t, 2> perm{0, 1};

    void validate() const;
};

struct HermOverload {
    std::size_t facility;
    std::size_t demand;     // agents strictly nearest to it
    std::size_t ties;       // equidistant agents
    std::size_t capacity;
};

struct HermOutcome {
    std::array<Point2, 2> facility{};
    std::array<std::size_t, 2> capacity{};
    std::array<std::size_t, 2> demand{};
    std::size_t ties = 0;
    std::optional<HermOverload> overload;
    std::vector<std::size_t> matching;   // empty when overloaded
    double social_cost = 0;

    bool feasible() const { return !overload.has_value(); }
};

HermOutcome herm_run(const CapacityVector& q, const HermParams& params, const PlanarProfile& profile);

enum class HermReading { Literal, SharedCoordinate };

bool herm_feasible_2d(const CapacityVector& q, const HermParams& params,
                      HermReading reading = HermReading::Literal);

PlanarProfile herm_example_profile();
HermParams herm_example_params();
CapacityVector herm_example_q();

}  // namespace cflp
