#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symreg/orbit_grid.hpp"

namespace symreg {

/// Result of one oracle check. Two-sided checks pass when
/// |observed - expected| <= tolerance; one-sided checks pass when
/// observed <= expected + tolerance.
struct OracleReport {
    enum class Check { Within, AtMost };

    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    Check check = Check::Within;
    bool pass = false;
    std::string detail;

    static OracleReport make(std::string name, double observed, double expected, double tolerance, Check check,
                             std::string detail = {});
};

enum class InverseMomentCase {
    /// X ~ N(0, I_3), G = SO(3): E[(sqrt(2) ||X||)^-2] = 1/2.
    GaussianSO3,
    /// X uniform on the unit ball: E[||X||^-2] = 3.
    UniformBall,
    /// X uniform on the sphere, G = S^1_u, R = sqrt(1 - <X,u>): E[R^-1] = sqrt(2).
    SphereCircle,
};

/// Monte-Carlo estimate of E[R_X^-d]. The estimands have infinite variance, so
/// the tolerances are fixed per case (0.02, 0.05, 0.02) instead of standard errors.
OracleReport inverse_moment_oracle(InverseMomentCase c, std::size_t samples, Rng& rng);

/// Max of d(g.x, h.x) / d(g, h) over uniform g, h, x; should not exceed 1.
/// Every 97th pair is a deliberate g = h and is skipped.
OracleReport lipschitz_oracle(const CovariateSpace& space, const ParentGroup& parent, std::size_t samples, Rng& rng);

/// Random (space, subgroup, x, h) configurations; counts violations of the grid
/// count bound m >= max(1, (R/2h)^d) and of the 2h spacing of the orbit points.
OracleReport packing_oracle(std::size_t configs, Rng& rng);

/// Brute-force size of a maximal 2h-separated set on a circle of radius r
/// (greedy arc walk, exact for the circle).
std::size_t circle_packing_count(double radius, double h);

/// For f(x) = cos sqrt(x2^2 + x3^2), invariant under H = S^1_x and 1-Lipschitz:
/// |grid average of f - f(x)| <= d_Haus(G, H) + 2 eps over random x and G from `cover`.
OracleReport bias_bound_oracle(const std::vector<ClosedSubgroup>& cover, std::size_t samples, double eps, Rng& rng);

/// Binomial(n, p) simulation against P(empty) <= exp(-n p) and
/// P(count <= n p / 2) <= exp(-n p / 8); one report per bound.
std::vector<OracleReport> tail_bound_oracle(int n, double p, std::size_t trials, Rng& rng);

/// P(Binomial(n, p) <= k).
double binomial_cdf(int n, double p, int k);

/// The full suite run by `validate`, sorted by name.
std::vector<OracleReport> run_oracle_suite(std::uint64_t seed, unsigned threads);

/// name,observed,expected,tolerance,check,pass,detail
std::string oracle_csv(const std::vector<OracleReport>& reports);

}  // namespace symreg
