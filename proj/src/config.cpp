#include "symreg/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "symreg/errors.hpp"
#include "symreg/format.hpp"

namespace symreg {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

double real(std::string_view key, std::string_view v) {
    double out = 0.0;
    if (!parse_double(v, out) || !std::isfinite(out))
        throw ConfigError(std::string(key), "expected a number, got '" + std::string(v) + "'");
    return out;
}

template <class Int>
Int integer(std::string_view key, std::string_view v) {
    Int out{};
    v = trim(v);
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
    return out;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    const std::string k(key);
    if (k == "scenario") {
        cfg.scenarios.clear();
        for (auto name : split_list(value)) cfg.scenarios.push_back(builtin_scenario(parse_scenario_id(std::string(name))));
    } else if (k == "sigma") {
        cfg.sigma = real(key, value);
    } else if (k == "beta") {
        cfg.beta = real(key, value);
    } else if (k == "a") {
        cfg.a = real(key, value);
    } else if (k == "lipschitz") {
        cfg.lipschitz = real(key, value);
    } else if (k == "lipschitz_group") {
        cfg.lipschitz_group = real(key, value);
    } else if (k == "n_grid") {
        cfg.n_grid.clear();
        for (auto v : split_list(value)) cfg.n_grid.push_back(integer<int>(key, v));
    } else if (k == "trials") {
        cfg.trials = integer<int>(key, value);
    } else if (k == "eval_points") {
        cfg.eval_points = integer<int>(key, value);
    } else if (k == "mc_draws") {
        cfg.mc_draws = integer<int>(key, value);
    } else if (k == "threads") {
        cfg.threads = integer<unsigned>(key, value);
    } else if (k == "delta") {
        if (value == "auto")
            cfg.delta.reset();
        else
            cfg.delta = real(key, value);
    } else if (k == "seed") {
        cfg.seed = integer<std::uint64_t>(key, value);
    } else if (k == "split") {
        if (value == "true")
            cfg.split = true;
        else if (value == "false")
            cfg.split = false;
        else
            throw ConfigError(k, "expected true or false");
    } else if (k == "symmetriser") {
        if (value == "grid")
            cfg.symmetriser = SymmetriserMode::OrbitGrid;
        else if (value == "monte_carlo")
            cfg.symmetriser = SymmetriserMode::MonteCarlo;
        else
            throw ConfigError(k, "expected grid or monte_carlo");
    } else {
        throw ConfigError(k, "unknown setting");
    }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig cfg) {
    std::size_t lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
    return cfg;
}

}  // namespace symreg
