#pragma once

#include <string>
#include <string_view>

#include "symreg/experiment.hpp"

namespace symreg {

/// Applies one setting. Keys:
///   scenario        comma-separated built-in names
///   sigma, beta, a, lipschitz, lipschitz_group      reals
///   n_grid          comma-separated ascending integers
///   trials, eval_points, mc_draws, threads          integers
///   delta           real, or "auto" for the sample-size schedule
///   seed            unsigned 64-bit integer
///   split           true/false
///   symmetriser     grid | monte_carlo
/// Throws ConfigError naming the key.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat "key = value" text; blank lines and lines starting with '#' are skipped.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});

}  // namespace symreg
