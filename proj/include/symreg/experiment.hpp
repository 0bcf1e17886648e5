#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symreg/scenario.hpp"
#include "symreg/selection.hpp"

namespace symreg {

struct ExperimentConfig {
    std::vector<Scenario> scenarios;
    double sigma = 0.5;
    std::vector<int> n_grid{30, 50, 75, 100, 150, 200, 300};
    int trials = 30;
    int eval_points = 200;
    double beta = 1.0;
    double a = 1.0;
    double lipschitz = 1.0;
    double lipschitz_group = 1.0;
    /// Fixed cover resolution; unset uses delta_schedule(n, ...).
    std::optional<double> delta;
    std::uint64_t seed = 1;
    /// Fit and select on independent copies; false uses the pooled data for both.
    bool split = true;
    SymmetriserMode symmetriser = SymmetriserMode::MonteCarlo;
    /// Monte-Carlo draws per prediction; 0 means the base training size.
    int mc_draws = 0;
    unsigned threads = 0;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct RiskRow {
    std::string scenario;
    int n = 0;
    int trial = 0;
    std::string estimator;
    double risk = 0.0;
};

struct RiskAggregate {
    std::string scenario;
    int n = 0;
    std::string estimator;
    double mean_risk = 0.0;
    double ci_halfwidth = 0.0;
    int trials = 0;
};

struct RiskSlope {
    std::string scenario;
    std::string estimator;
    double slope = 0.0;
};

struct SelectionRecord {
    std::string scenario;
    int n = 0;
    int trial = 0;
    std::string chosen;
    std::size_t candidates = 0;
};

inline constexpr const char* kBaseline = "baseline";
inline constexpr const char* kBestSymmetric = "best_symmetric";

struct RiskReport {
    std::vector<RiskRow> rows;
    std::vector<RiskAggregate> aggregates;
    std::vector<RiskSlope> slopes;
    std::vector<SelectionRecord> selections;

    /// Fills aggregates (mean, 1.96 sd / sqrt(trials)) and slopes (OLS of
    /// log mean risk on log n) from rows, in first-appearance order.
    void summarise();
};

/// Ordinary least squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Cover resolution used for sample size n.
double cover_delta(const ExperimentConfig& cfg, const Scenario& s, int n);

/// Outcome of a single (scenario, n, trial) unit.
struct TrialResult {
    double baseline_risk = 0.0;
    double symmetric_risk = 0.0;
    SymmetrySelection selection;
};

TrialResult run_trial(const ExperimentConfig& cfg, const Scenario& s, int n, int trial,
                      const std::vector<ClosedSubgroup>& cover);

/// Every (scenario, n, trial) unit, run in parallel with per-unit seeds.
RiskReport run_experiment(const ExperimentConfig& cfg);

}  // namespace symreg
