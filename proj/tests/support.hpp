#pragma once

#include <cstdint>
#include <vector>

#include "cflp/distributions.hpp"
#include "cflp/model.hpp"

namespace testing {

// deterministic stream for property tests
struct Stream {
    std::uint64_t seed;
    std::uint64_t i = 0;
    explicit Stream(std::uint64_t s) : seed(s) {}
    double uniform() { return cflp::counter_uniform(seed, i++); }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    std::size_t index(std::size_t n) { return std::min<std::size_t>(static_cast<std::size_t>(uniform() * n), n - 1); }
};

inline std::vector<double> grid_profile(Stream& s, std::size_t n)
{
    // coarse values so ties show up
    std::vector<double> x(n);
    for (auto& v : x)
        v = static_cast<double>(s.index(11)) / 10.0;
    return x;
}

}  // namespace testing
