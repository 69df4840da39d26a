#include <cmath>
#include <sstream>

#include "cflp/experiments.hpp"
#include "doctest.h"

using namespace cflp;

namespace {

ExperimentSpec small_batch()
{
    ExperimentSpec s;
    s.distribution = "uniform";
    s.q = {0.7, 0.7};
    s.mechanisms = {MechanismSpec::parse("erm:0.3,0.7"), MechanismSpec::parse("eem"),
                    MechanismSpec::parse("innerpoint")};
    s.n_values = {10, 20, 30, 40, 50};
    s.trials = 40;
    s.bootstrap = 200;
    s.seed = 9;
    return s;
}

std::string csv_of(const BatchResult& r)
{
    std::ostringstream os;
    emit_csv(r.rows, os);
    return os.str();
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("relative error")
{
    CHECK(relative_error(1.06, 1.04) == doctest::Approx(0.0192).epsilon(1e-3));
    CHECK(relative_error(1.3, 1.3) == 0.0);
    CHECK(relative_error(0.9, 1.0) == doctest::Approx(-0.1));
    CHECK_THROWS_AS(relative_error(1.0, 0.0), Error);
    CHECK_THROWS_AS(relative_error(1.0, -1.0), Error);
}

TEST_CASE("mechanism specs")
{
    auto a = MechanismSpec::parse("erm:0.3,0.7");
    CHECK(a.kind == MechanismKind::Erm);
    CHECK(a.erm.perm == std::vector<std::size_t>{0, 1});
    CHECK(a.label() == "erm(0.3;0.7|1;2)");
    auto b = MechanismSpec::parse("erm:0.2,0.6:2,1");
    CHECK(b.erm.perm == std::vector<std::size_t>{1, 0});
    CHECK(MechanismSpec::parse("allmedian").kind == MechanismKind::AllMedian);
    CHECK(MechanismSpec::parse("innerpoint").label() == "innerpoint");
    CHECK_THROWS_AS(MechanismSpec::parse("erm:0.3,0.7:0,1"), Error);
    CHECK_THROWS_AS(MechanismSpec::parse("erm:0.7,0.3"), Error);
    CHECK_THROWS_AS(MechanismSpec::parse("median"), Error);
}

TEST_CASE("experiment validation")
{
    auto s = small_batch();
    CHECK_NOTHROW(s.validate());
    auto t = s;
    t.trials = 0;
    CHECK_THROWS_AS(t.validate(), Error);
    t = s;
    t.n_values = {1};
    CHECK_THROWS_AS(t.validate(), Error);
    t = s;
    t.n_values = {11};
    CHECK_THROWS_AS(t.validate(), Error);   // innerpoint needs even n
    t = s;
    t.mechanisms = {MechanismSpec::parse("erm:0.1,0.95")};
    try {
        t.validate();
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfeasibleParams);
    }
    t = s;
    t.distribution = "normal";
    t.cost = CostKind::max();
    t.mechanisms = {MechanismSpec::parse("eem")};
    CHECK_NOTHROW(t.validate());
}

TEST_CASE("batch shape and determinism")
{
    auto s = small_batch();
    auto r = run_batch(s);
    CHECK(r.rows.size() == 15);
    CHECK(r.records.size() == 5 * 40 * 3);
    for (const auto& rec : r.records)
        CHECK(rec.mechanism_cost >= rec.optimal_cost - 1e-12);
    for (const auto& row : r.rows) {
        CHECK(row.ci_lb <= row.ratio_mean + 1e-12);
        CHECK(row.ratio_mean <= row.ci_ub + 1e-12);
        CHECK(row.ratio_mean >= 1.0);
    }
    CHECK(r.rows[0].mech == "erm(0.3;0.7|1;2)");
    CHECK(r.rows[0].n == 10);
    CHECK(r.rows[4].n == 50);
    CHECK(r.rows[5].mech == "eem");
    REQUIRE(r.rows[0].limit.has_value());
    CHECK(*r.rows[0].limit == doctest::Approx(1.04));
    CHECK_FALSE(r.rows[5].limit.has_value());

    auto again = run_batch(s);
    CHECK(csv_of(r) == csv_of(again));

    auto par = s;
    par.threads = 4;
    auto pr = run_batch(par);
    REQUIRE(pr.records.size() == r.records.size());
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        CHECK(pr.records[i].mechanism_cost == r.records[i].mechanism_cost);
        CHECK(pr.records[i].optimal_cost == r.records[i].optimal_cost);
    }
    CHECK(csv_of(pr) == csv_of(r));
}

TEST_CASE("estimators")
{
    auto s = small_batch();
    s.mechanisms = {MechanismSpec::parse("erm:0.3,0.7")};
    s.n_values = {20};
    auto a = run_batch(s);
    s.estimator = Estimator::RatioOfMeans;
    auto b = run_batch(s);
    CHECK(a.rows[0].ratio_mean == a.rows[0].mean_of_ratios);
    CHECK(b.rows[0].ratio_mean == b.rows[0].ratio_of_means);
    CHECK(a.rows[0].ratio_of_means == b.rows[0].ratio_of_means);
    double sm = 0, so = 0;
    for (const auto& rec : b.records) {
        sm += rec.mechanism_cost;
        so += rec.optimal_cost;
    }
    CHECK(b.rows[0].ratio_of_means == doctest::Approx(sm / so).epsilon(1e-14));
}

TEST_CASE("trial ratio conventions")
{
    TrialRecord same{4, 0, 0, 1, 0.0, 0.0};
    CHECK(same.ratio() == 1.0);
    TrialRecord worse{4, 0, 0, 1, 0.5, 0.0};
    CHECK(std::isinf(worse.ratio()));
    TrialRecord normal{4, 0, 0, 1, 0.6, 0.4};
    CHECK(normal.ratio() == doctest::Approx(1.5));
}

TEST_CASE("csv layout")
{
    ExperimentSpec s;
    s.distribution = "normal@2,5";
    s.q = {0.8, 0.4};
    s.mechanisms = {MechanismSpec::parse("erm:0.6,0.8"), MechanismSpec::parse("eem")};
    s.n_values = {10, 20};
    s.trials = 10;
    s.bootstrap = 50;
    auto text = csv_of(run_batch(s));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "dist,q1,q2,mech,p,n,trials,seed,ratio_mean,ci_lb,ci_ub,ratio_of_means,limit,rel_err");
    std::getline(in, line);
    CHECK(line.rfind("\"normal@2,5\",0.8,0.4,erm(0.6;0.8|1;2),1,10,10,1,", 0) == 0);
    int rows = 1;
    while (std::getline(in, line))
        ++rows;
    CHECK(rows == 4);

    ExperimentSpec e;
    e.distribution = "exp";
    e.q = {0.7, 0.7};
    e.mechanisms = {MechanismSpec::parse("eem")};
    e.n_values = {10};
    e.trials = 5;
    e.bootstrap = 20;
    auto et = csv_of(run_batch(e));
    CHECK(et.find(",,\n") != std::string::npos);   // no limit, no relative error

    CHECK_THROWS_AS(emit_csv(run_batch(e).rows, std::string("/nonexistent-dir/x.csv")), Error);
}

TEST_CASE("three facilities")
{
    ExperimentSpec s;
    s.q = {0.5, 0.5, 0.5};
    s.mechanisms = {MechanismSpec::parse("erm:0.2,0.5,0.7"), MechanismSpec::parse("allmedian")};
    s.n_values = {12};
    s.trials = 20;
    s.bootstrap = 50;
    auto text = csv_of(run_batch(s));
    CHECK(text.find(",0.5,0.5;0.5,erm(0.2;0.5;0.7|1;2;3),") != std::string::npos);
}

TEST_CASE("limits attached to mechanisms")
{
    auto u = DistributionModel::builtin("uniform");
    CapacityVector q({0.8, 0.4});
    CHECK(*mechanism_limit(MechanismSpec::parse("eem"), u, q, CostKind::social()) ==
          doctest::Approx(2.615).epsilon(1e-3));
    CHECK_FALSE(mechanism_limit(MechanismSpec::parse("eem"), u, q, CostKind::max()).has_value());
    CHECK_FALSE(mechanism_limit(MechanismSpec::parse("eem"), u, CapacityVector({0.7, 0.7}), CostKind::social())
                    .has_value());
    CHECK(*mechanism_limit(MechanismSpec::parse("innerpoint"), u, CapacityVector({0.5, 0.5}), CostKind::social()) ==
          doctest::Approx(2.0).epsilon(1e-6));
    CHECK_FALSE(mechanism_limit(MechanismSpec::parse("erm:0.3,0.7"), DistributionModel::builtin("normal"),
                                CapacityVector({0.7, 0.7}), CostKind::max())
                    .has_value());
}

TEST_CASE("presets")
{
    CHECK(table_preset_names().size() == 6);
    auto bal = table_preset("balanced-sc", 10, 1);
    CHECK(bal.size() == 9);
    CHECK(bal[0].mechanisms.size() == 2);
    CHECK(bal[0].n_values == std::vector<std::size_t>{10, 20, 30, 40, 50});
    auto mx = table_preset("unbalanced-max");
    CHECK(mx.size() == 6);
    CHECK(mx[0].cost.is_max());
    CHECK(mx[0].trials == 500);
    auto rel = table_preset("relerr");
    CHECK(rel[0].mechanisms.size() == 1);
    CHECK_THROWS_AS(table_preset("nope"), Error);
    for (const auto& name : table_preset_names())
        for (const auto& spec : table_preset(name, 1, 1))
            CHECK_NOTHROW(spec.validate());
}

}
