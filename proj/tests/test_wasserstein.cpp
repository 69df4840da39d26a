#include <cmath>

#include "cflp/solver.hpp"
#include "cflp/wasserstein.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cflp;

TEST_SUITE("wasserstein") {

TEST_CASE("discrete distances")
{
    DiscreteMeasure pair({0, 1}, {0.5, 0.5});
    CHECK(wp_discrete(pair, DiscreteMeasure::dirac(0.5), CostKind::social()) == doctest::Approx(0.5));
    CHECK(wp_discrete(pair, pair, CostKind::lp(2)) == 0.0);
    DiscreteMeasure shifted({0.2, 1.2}, {0.5, 0.5});
    CHECK(wp_discrete(pair, shifted, CostKind::max()) == doctest::Approx(0.2));
    CHECK_THROWS_AS(DiscreteMeasure({0, 1}, {0.5, 0.6}), Error);
    CHECK_THROWS_AS(DiscreteMeasure({0, 1}, {-0.1, 1.1}), Error);
    auto emp = DiscreteMeasure::empirical(AgentProfile({3, 1, 2, 1}));
    CHECK(emp.atoms() == std::vector<double>{1, 1, 2, 3});
}

TEST_CASE("discrete distances form a metric")
{
    testing::Stream s(13);
    auto random_measure = [&] {
        std::size_t k = 1 + s.index(5);
        std::vector<double> a(k), w(k);
        double t = 0;
        for (std::size_t j = 0; j < k; ++j) {
            a[j] = s.uniform(-2, 2);
            w[j] = s.uniform(0.05, 1);
            t += w[j];
        }
        for (auto& v : w)
            v /= t;
        double fix = 1;
        for (std::size_t j = 0; j + 1 < k; ++j)
            fix -= w[j];
        w[k - 1] = fix;
        return DiscreteMeasure(a, w);
    };
    for (int t = 0; t < 1000; ++t) {
        auto a = random_measure(), b = random_measure(), c = random_measure();
        for (CostKind k : {CostKind::social(), CostKind::lp(2), CostKind::max()}) {
            double ab = wp_discrete(a, b, k), ba = wp_discrete(b, a, k);
            CHECK(std::abs(ab - ba) <= 1e-9);
            CHECK(ab <= wp_discrete(a, c, k) + wp_discrete(c, b, k) + 1e-9);
        }
    }
}

TEST_CASE("continuous to discrete")
{
    auto u = DistributionModel::builtin("uniform");
    CHECK(wp_cont_discrete(u, DiscreteMeasure::dirac(0.5), CostKind::social()) == doctest::Approx(0.25));
    CHECK(wp_cont_discrete(u, DiscreteMeasure::dirac(0.5), CostKind::social(), Integration::Quadrature) ==
          doctest::Approx(0.25).epsilon(1e-9));
    CHECK(wp_cont_discrete(u, DiscreteMeasure({0.25, 0.75}, {0.5, 0.5}), CostKind::social()) ==
          doctest::Approx(0.125));
    CHECK(wp_cont_discrete(u, DiscreteMeasure::dirac(0.5), CostKind::max()) == doctest::Approx(0.5));
    CHECK_THROWS_AS(wp_cont_discrete(DistributionModel::builtin("normal"), DiscreteMeasure::dirac(0), CostKind::max()),
                    Error);
}

TEST_CASE("continuous distances against frozen quadrature values")
{
    auto n = DistributionModel::builtin("normal");
    auto e = DistributionModel::builtin("exp");
    auto b = DistributionModel::builtin("beta31");
    auto u = DistributionModel::builtin("uniform");
    struct Case {
        const DistributionModel* mu;
        DiscreteMeasure nu;
        double p;
        double want;
    };
    const Case cases[] = {
        {&n, DiscreteMeasure({-0.6744897501960817, 0.6744897501960817}, {0.5, 0.5}), 1, 0.4732217299335505},
        {&n, DiscreteMeasure({-1.0, 0.2, 1.5}, {0.3, 0.4, 0.3}), 2, 0.5025305254406398},
        {&e, DiscreteMeasure({0.5, 2.0}, {0.4, 0.6}), 1, 0.670741137379304},
        {&e, DiscreteMeasure({0.5, 2.0}, {0.4, 0.6}), 2, 0.8834669644198557},
        {&b, DiscreteMeasure({0.4, 0.85}, {0.25, 0.75}), 3, 0.12767811510855395},
        {&u, DiscreteMeasure({0.3, 0.7}, {0.5, 0.5}), 1.5, 0.14241926069064764},
    };
    for (const auto& c : cases) {
        CHECK(wp_cont_discrete(*c.mu, c.nu, CostKind::lp(c.p)) == doctest::Approx(c.want).epsilon(1e-8));
        // tails are cut at 1e-9; for p = 2 on exp that leaves ~3e-7
        CHECK(std::abs(wp_cont_discrete(*c.mu, c.nu, CostKind::lp(c.p), Integration::Quadrature) - c.want) <= 1e-6);
    }
}

TEST_CASE("closed form cells agree with quadrature")
{
    testing::Stream s(17);
    for (const char* name : {"uniform", "normal", "exp", "beta31"}) {
        auto mu = DistributionModel::builtin(name).affine(s.uniform(0.5, 2), s.uniform(-1, 1));
        for (int t = 0; t < 30; ++t) {
            double u0 = s.uniform(0, 0.6), u1 = u0 + s.uniform(0.01, 0.4);
            double atom = mu.quantile(s.uniform(0.05, 0.95));
            for (double p : {1.0, 2.0})
                CHECK(cell_cost(mu, u0, u1, atom, p) ==
                      doctest::Approx(cell_cost(mu, u0, u1, atom, p, Integration::Quadrature)).epsilon(1e-9));
        }
    }
}

TEST_CASE("voronoi weights")
{
    auto u = DistributionModel::builtin("uniform");
    auto w = voronoi_weights(u, {0.2, 0.7});
    CHECK(w.weights()[0] == doctest::Approx(0.45));
    CHECK(w.weights()[1] == doctest::Approx(0.55));
    CHECK(voronoi_weights(DistributionModel::builtin("normal"), {0.3}).weights()[0] == 1.0);
    auto s = voronoi_weights(u, {0.25, 0.75});
    CHECK(s.weights()[0] == doctest::Approx(0.5));
}

TEST_CASE("constrained weights")
{
    auto u = DistributionModel::builtin("uniform");
    auto a = constrained_weights(u, {0.3, 0.7}, {0.7, 0.7});
    CHECK(a.weights()[0] == doctest::Approx(0.5));
    auto n = DistributionModel::builtin("normal");
    auto free = constrained_weights(n, {-0.4, 1.1}, {1, 1});
    auto vor = voronoi_weights(n, {-0.4, 1.1});
    CHECK(free.weights()[0] == doctest::Approx(vor.weights()[0]));
    auto c = constrained_weights(u, {0.1, 0.9}, {0.4, 0.9});
    CHECK(c.weights()[0] == doctest::Approx(0.4));
    CHECK(c.weights()[1] == doctest::Approx(0.6));

    // grid check of the clipped optimum
    double best = INFINITY, arg = 0;
    for (int i = 0; i <= 4000; ++i) {
        double l = 0.1 + 0.5 * i / 4000.0;
        if (l > 0.4 || 1 - l > 0.9)
            continue;
        double v = wp_cont_discrete(u, DiscreteMeasure({0.1, 0.9}, {l, 1 - l}), CostKind::social());
        if (v < best) {
            best = v;
            arg = l;
        }
    }
    CHECK(arg == doctest::Approx(0.4));
    CHECK_THROWS_AS(constrained_weights(u, {0.1, 0.9}, {0.4, 0.4}), Error);

    testing::Stream s(29);
    for (int t = 0; t < 200; ++t) {
        std::size_t m = 2 + s.index(2);
        std::vector<double> y(m), caps(m);
        double total = 0;
        for (std::size_t j = 0; j < m; ++j) {
            y[j] = s.uniform();
            caps[j] = s.uniform(0.2, 0.9);
            total += caps[j];
        }
        if (total < 1)
            continue;
        std::sort(y.begin(), y.end());
        auto w = constrained_weights(u, y, caps);
        double sum = 0;
        for (std::size_t j = 0; j < m; ++j) {
            CHECK(w.weights()[j] <= caps[j] + 1e-12);
            sum += w.weights()[j];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("optimal quantisation")
{
    auto u = DistributionModel::builtin("uniform");
    auto a = solve_min_proj(u, CapacityVector({0.7, 0.7}), CostKind::social());
    CHECK(a.value == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(a.measure.atoms()[0] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(a.measure.atoms()[1] == doctest::Approx(0.75).epsilon(1e-6));

    auto b = solve_min_proj(u, CapacityVector({0.8, 0.4}), CostKind::social());
    CHECK(b.value == doctest::Approx(0.13).epsilon(1e-9));
    bool direct = std::abs(b.measure.atoms()[0] - 0.2) < 1e-6 && std::abs(b.measure.weights()[0] - 0.4) < 1e-6;
    bool mirror = std::abs(b.measure.atoms()[0] - 0.3) < 1e-6 && std::abs(b.measure.weights()[0] - 0.6) < 1e-6;
    CHECK((direct || mirror));

    auto c = solve_min_proj(u, CapacityVector({0.7, 0.7}), CostKind::max());
    CHECK(c.value == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(c.measure.atoms()[0] == doctest::Approx(0.25).epsilon(1e-6));

    auto three = solve_min_proj(u, CapacityVector({0.5, 0.5, 0.5}), CostKind::social());
    CHECK(three.value == doctest::Approx(1.0 / 12.0).epsilon(1e-6));
    CHECK_THROWS_AS(solve_min_proj(u, CapacityVector({0.4, 0.4}), CostKind::social()), Error);
}

TEST_CASE("empirical measures converge")
{
    auto u = DistributionModel::builtin("uniform");
    double prev = INFINITY;
    for (std::size_t n : {50, 200, 2000}) {
        double avg = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            auto emp = DiscreteMeasure::empirical(sample(u, n, seed));
            avg += wp_cont_discrete(u, emp, CostKind::social());
        }
        avg /= 50;
        CHECK(avg < prev);
        prev = avg;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("finite instances match the quantisation of the empirical measure")
{
    // W_p(mu_n, nu) with nu on the optimal blocks equals the exact optimum
    testing::Stream s(53);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 2 + s.index(49);
        auto x = sample(DistributionModel::builtin("normal"), n, s.i++);
        CapacityVector q({0.8, 0.5});
        for (CostKind k : {CostKind::social(), CostKind::lp(2), CostKind::max()}) {
            auto sol = optimal_cost(x, q, k);
            std::vector<double> w(2, 0.0);
            for (auto j : sol.outcome.matching)
                w[j] += 1.0 / static_cast<double>(n);
            w[1] = 1.0 - w[0];
            std::vector<double> atoms = sol.outcome.y;
            DiscreteMeasure nu(atoms, w);
            CHECK(wp_discrete(DiscreteMeasure::empirical(x), nu, k) == doctest::Approx(sol.cost).epsilon(1e-8));
        }
    }
}

}
