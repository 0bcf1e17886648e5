#include <doctest.h>

#include <filesystem>
#include <map>

#include "symreg/config.hpp"
#include "symreg/errors.hpp"
#include "symreg/report.hpp"
#include "test_util.hpp"

using namespace symreg;
using namespace testutil;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("symreg_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("scenario functions") {
    CHECK(scenario_function(ScenarioId::SO3_f1, ball(0, 0, 0)) == 1.0);
    CHECK(scenario_function(ScenarioId::T2_g1, torus2(0.3, 0.9)) == 1.0);
    CHECK(scenario_function(ScenarioId::SO3_f3, ball(0.5, 0.2, 0.1)) == doctest::Approx(0.25 + 0.2 - 0.06));
    CHECK(scenario_function(ScenarioId::T2_g2, torus2(0.25, 0.7)) == doctest::Approx(1.0));
    CHECK(scenario_function(ScenarioId::T2_g3, torus2(0.4, 0.4)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(scenario_function(ScenarioId::T2_g2, ball(0, 0, 0)), IncompatibleError);
    CHECK_THROWS_AS(parse_scenario_id("so3_f9"), ConfigError);

    Rng rng(41);
    const auto sx = ClosedSubgroup::circle({1, 0, 0});
    for (int i = 0; i < 10000; ++i) {
        const Point x = sample_point(CovariateSpace::unit_ball(), PointLaw::UniformSpace, rng);
        CHECK(std::abs(scenario_function(ScenarioId::SO3_f2, act(sample_group(sx, rng), x)) -
                       scenario_function(ScenarioId::SO3_f2, x)) <= 1e-12);
    }
    for (auto id : {ScenarioId::T2_g2, ScenarioId::T2_g3}) {
        const Scenario s = builtin_scenario(id);
        const auto g = ClosedSubgroup::parse(s.max_symmetry);
        for (int i = 0; i < 1000; ++i) {
            const Point x = sample_point(CovariateSpace::torus(2), PointLaw::UniformSpace, rng);
            CHECK(std::abs(s.fn(act(sample_group(g, rng), x)) - s.fn(x)) <= 1e-12);
        }
    }
}

TEST_CASE("generated data") {
    Rng rng(42);
    const Scenario s = builtin_scenario(ScenarioId::SO3_f1);
    const Dataset clean = generate_data(s, 100, 0.0, rng);
    for (std::size_t i = 0; i < clean.size(); ++i) CHECK(clean.y[i] == s.fn(clean.x[i]));

    const double sigma = 0.5;
    const std::size_t n = 1'000'000;
    const Dataset noisy = generate_data(builtin_scenario(ScenarioId::T2_g1), n, sigma, rng);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = noisy.y[i] - 1.0;
        sum += e;
        sum2 += e * e;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) <= 3 * sigma / 1000);
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(var - sigma * sigma) <= 0.01 * sigma * sigma);
}

TEST_CASE("risk estimates") {
    Rng rng(43);
    const Scenario s = builtin_scenario(ScenarioId::SO3_f1);
    CHECK(estimate_risk(s.fn, s.fn, s.space, 50, rng) == 0.0);
    auto shifted = [&](const Point& x) { return s.fn(x) + 1.0; };
    CHECK(estimate_risk(shifted, s.fn, s.space, 7, rng) == doctest::Approx(1.0).epsilon(1e-15));

    // E[cos^2 ||X||] = int_0^1 3 r^2 cos^2 r dr by Simpson's rule.
    const int m = 2000;
    double quad = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double r = static_cast<double>(i) / m;
        const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
        quad += w * 3 * r * r * std::cos(r) * std::cos(r);
    }
    quad /= 3.0 * m;
    const std::size_t k = 1'000'000;
    auto zero = [](const Point&) { return 0.0; };
    const double est = estimate_risk(zero, s.fn, s.space, k, rng);
    // Var of cos^2 ||X|| is below 1/4, so 3 standard errors stay under 1.5e-3.
    CHECK(std::abs(est - quad) <= 1.5e-3);
}

TEST_CASE("constant torus scenario: symmetrised risk never exceeds baseline") {
    ExperimentConfig cfg;
    cfg.scenarios = {builtin_scenario(ScenarioId::T2_g1)};
    cfg.sigma = 0.0;
    cfg.n_grid = {30};
    cfg.trials = 1;
    cfg.delta = 0.5;
    const RiskReport r = run_experiment(cfg);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[1].estimator == std::string(kBestSymmetric));
    CHECK(r.rows[1].risk <= r.rows[0].risk);
}

TEST_CASE("aggregates and slopes") {
    RiskReport r;
    r.rows = {{"s", 10, 0, "baseline", 1.0}, {"s", 10, 1, "baseline", 3.0}, {"s", 100, 0, "baseline", 0.1},
              {"s", 100, 1, "baseline", 0.1}};
    r.summarise();
    REQUIRE(r.aggregates.size() == 2);
    CHECK(r.aggregates[0].mean_risk == 2.0);
    CHECK(r.aggregates[0].ci_halfwidth == doctest::Approx(1.96 * std::sqrt(2.0) / std::sqrt(2.0)));
    CHECK(r.aggregates[1].ci_halfwidth == 0.0);
    REQUIRE(r.slopes.size() == 1);
    CHECK(r.slopes[0].slope == doctest::Approx(std::log(0.1 / 2.0) / std::log(10.0)));
    CHECK(ols_slope({0, 1, 2}, {1, 3, 5}) == doctest::Approx(2.0));
}

TEST_CASE("report files") {
    const auto empty_dir = scratch("empty");
    RiskReport empty;
    empty.summarise();
    emit_report(empty, empty_dir);
    CHECK(read_text_file(empty_dir / "rows.csv") == "scenario,n,trial,estimator,risk\n");
    CHECK(read_text_file(empty_dir / "aggregates.csv") == "scenario,n,estimator,mean_risk,ci_halfwidth\n");
    int svgs = 0;
    for (const auto& e : std::filesystem::directory_iterator(empty_dir)) svgs += e.path().extension() == ".svg";
    CHECK(svgs == 0);

    const auto one_dir = scratch("one");
    RiskReport one;
    one.rows = {{"so3_f1", 30, 0, "baseline", 0.125}};
    one.summarise();
    emit_report(one, one_dir);
    CHECK(read_text_file(one_dir / "rows.csv") == "scenario,n,trial,estimator,risk\nso3_f1,30,0,baseline,0.125\n");
    CHECK(read_text_file(one_dir / "aggregates.csv") ==
          "scenario,n,estimator,mean_risk,ci_halfwidth\nso3_f1,30,baseline,0.125,0\n");
    CHECK(std::filesystem::exists(one_dir / "so3_f1.svg"));

    CHECK_THROWS_AS(emit_report(one, "/proc/definitely/not/writable"), IoError);
}

TEST_CASE("experiments are reproducible and aggregates follow from rows") {
    ExperimentConfig cfg;
    cfg.scenarios = {builtin_scenario(ScenarioId::SO3_f2), builtin_scenario(ScenarioId::T2_g3)};
    cfg.n_grid = {30, 60};
    cfg.trials = 3;
    cfg.eval_points = 50;
    cfg.delta = 2.0;
    cfg.threads = 1;
    const RiskReport serial = run_experiment(cfg);
    cfg.threads = 4;
    const RiskReport parallel = run_experiment(cfg);
    CHECK(rows_csv(serial) == rows_csv(parallel));
    CHECK(aggregates_csv(serial) == aggregates_csv(parallel));
    CHECK(selections_csv(serial) == selections_csv(parallel));

    cfg.seed = 2;
    CHECK(rows_csv(run_experiment(cfg)) != rows_csv(serial));

    RiskReport again;
    again.rows = parse_rows_csv(rows_csv(serial));
    again.summarise();
    CHECK(aggregates_csv(again) == aggregates_csv(serial));

    const std::string svg = scenario_svg(serial, "so3_f2");
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("slope") != std::string::npos);
    CHECK(svg.find("best_symmetric") != std::string::npos);
}

TEST_CASE("grid symmetriser and pooled data also run") {
    ExperimentConfig cfg;
    cfg.scenarios = {builtin_scenario(ScenarioId::T2_g2)};
    cfg.n_grid = {40};
    cfg.trials = 2;
    cfg.delta = 0.5;
    cfg.symmetriser = SymmetriserMode::OrbitGrid;
    cfg.split = false;
    const RiskReport r = run_experiment(cfg);
    CHECK(r.rows.size() == 4);
    for (const auto& row : r.rows) CHECK(std::isfinite(row.risk));
}

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse_config(R"(# comment
scenario = so3_f1, t2_g2
sigma = 0.25
n_grid = 30,50
trials = 4
eval_points = 10
delta = 0.8
seed = 77
split = false
symmetriser = grid
)");
    REQUIRE(cfg.scenarios.size() == 2);
    CHECK(cfg.scenarios[1].name == "t2_g2");
    CHECK(cfg.sigma == 0.25);
    CHECK(cfg.n_grid == std::vector<int>{30, 50});
    CHECK(cfg.trials == 4);
    CHECK(cfg.eval_points == 10);
    CHECK(*cfg.delta == 0.8);
    CHECK(cfg.seed == 77u);
    CHECK_FALSE(cfg.split);
    CHECK(cfg.symmetriser == SymmetriserMode::OrbitGrid);
    CHECK_NOTHROW(cfg.validate());

    auto field_of = [](const std::string& text) {
        try {
            ExperimentConfig c = parse_config(text);
            c.scenarios.push_back(builtin_scenario(ScenarioId::SO3_f1));
            c.validate();
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string();
    };
    CHECK(field_of("sigma = -1") == "sigma");
    CHECK(field_of("n_grid = 50, 30") == "n_grid");
    CHECK(field_of("trials = 0") == "trials");
    CHECK(field_of("eval_points = 0") == "eval_points");
    CHECK(field_of("beta = 1.5") == "beta");
    CHECK(field_of("trials = many") == "trials");
    CHECK(field_of("colour = red") == "colour");
    CHECK(field_of("scenario = nope") == "scenario");
    CHECK(field_of("just a line") == "line 1");
}
