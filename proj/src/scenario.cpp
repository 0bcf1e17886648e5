#include "symreg/scenario.hpp"

#include <cmath>
#include <numbers>

#include "symreg/errors.hpp"

namespace symreg {

namespace {

constexpr ScenarioId kAll[] = {ScenarioId::SO3_f1, ScenarioId::SO3_f2, ScenarioId::SO3_f3,
                               ScenarioId::T2_g1,  ScenarioId::T2_g2,  ScenarioId::T2_g3};

bool on_ball(ScenarioId id) {
    return id == ScenarioId::SO3_f1 || id == ScenarioId::SO3_f2 || id == ScenarioId::SO3_f3;
}

}  // namespace

std::string scenario_name(ScenarioId id) {
    switch (id) {
        case ScenarioId::SO3_f1: return "so3_f1";
        case ScenarioId::SO3_f2: return "so3_f2";
        case ScenarioId::SO3_f3: return "so3_f3";
        case ScenarioId::T2_g1: return "t2_g1";
        case ScenarioId::T2_g2: return "t2_g2";
        case ScenarioId::T2_g3: return "t2_g3";
    }
    return "";
}

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> out;
    for (auto id : kAll) out.push_back(scenario_name(id));
    return out;
}

ScenarioId parse_scenario_id(const std::string& name) {
    for (auto id : kAll)
        if (scenario_name(id) == name) return id;
    throw ConfigError("scenario", "unknown scenario '" + name + "'");
}

double scenario_function(ScenarioId id, const Point& x) {
    const CovariateSpace want = on_ball(id) ? CovariateSpace::unit_ball() : CovariateSpace::torus(2);
    if (!(x.space() == want))
        throw IncompatibleError(scenario_name(id) + " is defined on " + want.name() + ", got " + x.space().name());
    constexpr double tau = 2.0 * std::numbers::pi;
    switch (id) {
        case ScenarioId::SO3_f1: return std::cos(x.coords().norm());
        case ScenarioId::SO3_f2: return std::cos(std::sqrt(x[1] * x[1] + x[2] * x[2]));
        case ScenarioId::SO3_f3: return x[0] * x[0] + x[1] - 0.6 * x[2];
        case ScenarioId::T2_g1: return 1.0;
        case ScenarioId::T2_g2: return std::sin(tau * x[0]);
        case ScenarioId::T2_g3: return std::cos(tau * (x[0] - x[1]));
    }
    return 0.0;
}

Scenario builtin_scenario(ScenarioId id) {
    Scenario s{scenario_name(id),
               on_ball(id) ? CovariateSpace::unit_ball() : CovariateSpace::torus(2),
               on_ball(id) ? ParentGroup::so3() : ParentGroup::torus(2),
               [id](const Point& x) { return scenario_function(id, x); },
               ""};
    switch (id) {
        case ScenarioId::SO3_f1: s.max_symmetry = ClosedSubgroup::full_so3().label(); break;
        case ScenarioId::SO3_f2: s.max_symmetry = ClosedSubgroup::circle({1, 0, 0}).label(); break;
        case ScenarioId::SO3_f3: s.max_symmetry = ClosedSubgroup::trivial(ParentGroup::so3()).label(); break;
        case ScenarioId::T2_g1: s.max_symmetry = ClosedSubgroup::full_torus(2).label(); break;
        case ScenarioId::T2_g2: s.max_symmetry = ClosedSubgroup::torus_line(0, 1).label(); break;
        case ScenarioId::T2_g3: s.max_symmetry = ClosedSubgroup::torus_line(1, 1).label(); break;
    }
    return s;
}

Dataset generate_data(const Scenario& s, std::size_t n, double sigma, Rng& rng) {
    if (!(sigma >= 0.0)) throw DomainError("noise sd must be nonnegative");
    Dataset d(s.space);
    d.x.reserve(n);
    d.y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point x = sample_point(s.space, PointLaw::UniformSpace, rng);
        const double noise = sigma * rng.gaussian();
        const double y = s.fn(x) + noise;
        d.add(std::move(x), y);
    }
    return d;
}

double estimate_risk(const std::function<double(const Point&)>& pred, const std::function<double(const Point&)>& truth,
                     const CovariateSpace& space, std::size_t k, Rng& rng) {
    if (k == 0) throw DomainError("risk estimate needs K >= 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const Point x = sample_point(space, PointLaw::UniformSpace, rng);
        const double r = pred(x) - truth(x);
        sum += r * r;
    }
    return sum / static_cast<double>(k);
}

}  // namespace symreg
