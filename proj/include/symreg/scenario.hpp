#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symreg/estimator.hpp"

namespace symreg {

/// A regression problem: covariate law on a space, the true function and the
/// group searched over. Built-ins cover the rotation and torus experiments;
/// custom scenarios are constructed directly.
struct Scenario {
    std::string name;
    CovariateSpace space;
    ParentGroup parent;
    std::function<double(const Point&)> fn;
    /// Catalog label of the largest subgroup leaving fn invariant.
    std::string max_symmetry;
};

enum class ScenarioId { SO3_f1, SO3_f2, SO3_f3, T2_g1, T2_g2, T2_g3 };

/// so3_f1, so3_f2, so3_f3, t2_g1, t2_g2, t2_g3.
std::string scenario_name(ScenarioId id);
std::vector<std::string> builtin_scenario_names();

/// Throws ConfigError for unknown names.
ScenarioId parse_scenario_id(const std::string& name);

/// Closed forms. Throws IncompatibleError when x is not on the scenario's space.
///   so3_f1 cos ||x||             so3_f2 cos sqrt(x2^2 + x3^2)   so3_f3 x1^2 + x2 - 0.6 x3
///   t2_g1  1                     t2_g2  sin(2 pi x1)            t2_g3  cos(2 pi (x1 - x2))
double scenario_function(ScenarioId id, const Point& x);

Scenario builtin_scenario(ScenarioId id);

/// n i.i.d. pairs with X uniform on the space and Y = f(X) + sigma Z, Z from Rng::gaussian.
Dataset generate_data(const Scenario& s, std::size_t n, double sigma, Rng& rng);

/// (1/K) sum (pred(X') - truth(X'))^2 over K fresh uniform points.
double estimate_risk(const std::function<double(const Point&)>& pred, const std::function<double(const Point&)>& truth,
                     const CovariateSpace& space, std::size_t k, Rng& rng);

}  // namespace symreg
