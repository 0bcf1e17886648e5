#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "symreg/config.hpp"
#include "symreg/errors.hpp"
#include "symreg/format.hpp"
#include "symreg/oracles.hpp"
#include "symreg/report.hpp"

using namespace symreg;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kConfigError = 2;

CovariateSpace parse_space(const std::string& s) {
    if (s == "ball") return CovariateSpace::unit_ball();
    if (s == "sphere") return CovariateSpace::unit_sphere();
    if (s.rfind("torus", 0) == 0) {
        double d = 0;
        if (!parse_double(s.substr(5), d) || d < 1 || d > kMaxDim || d != std::floor(d))
            throw ConfigError("space", "expected torus1 .. torus8, got '" + s + "'");
        return CovariateSpace::torus(static_cast<int>(d));
    }
    if (s.rfind("box:", 0) == 0) {
        std::vector<double> sides;
        std::stringstream ss(s.substr(4));
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0;
            if (!parse_double(cell, v) || !(v > 0)) throw ConfigError("space", "bad box side '" + cell + "'");
            sides.push_back(v);
        }
        if (sides.empty() || sides.size() > kMaxDim) throw ConfigError("space", "box needs 1 to 8 sides");
        return CovariateSpace::box(sides);
    }
    throw ConfigError("space", "expected ball, sphere, torus<d> or box:<s1,...>, got '" + s + "'");
}

Dataset read_dataset(const std::string& path, const CovariateSpace& space) {
    const std::string text = read_text_file(path);
    Dataset data(space);
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    const int d = space.ambient_dim();
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<double> values;
        std::stringstream ls(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ls, cell, ',')) {
            double v = 0;
            if (!parse_double(cell, v)) numeric = false;
            values.push_back(v);
        }
        if (!numeric) {
            if (lineno == 1) continue;  // header
            throw IoError(path + ":" + std::to_string(lineno) + ": non-numeric value");
        }
        if (static_cast<int>(values.size()) != d + 1)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(d + 1) + " columns");
        Coords c(d);
        for (int i = 0; i < d; ++i) c[i] = values[static_cast<std::size_t>(i)];
        try {
            data.add(Point(space, c), values.back());
        } catch (const DomainError& e) {
            throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return data;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetry selection and symmetrised kernel regression"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Run the simulation benchmark and write CSV/SVG output");
    std::string config_path, out_dir = "results";
    std::vector<std::string> settings;
    std::string scenario, n_grid, symmetriser, delta;
    int trials = 0, threads = -1;
    std::uint64_t seed = 0;
    bool seed_set = false, no_split = false;
    double sigma = -1;
    sim->add_option("--config", config_path, "key = value config file");
    sim->add_option("--scenario", scenario, "Comma-separated scenario names");
    sim->add_option("--n-grid", n_grid, "Comma-separated ascending sample sizes");
    sim->add_option("--trials", trials, "Trials per sample size");
    sim->add_option("--seed", seed, "Base seed")->each([&](const std::string&) { seed_set = true; });
    sim->add_option("--sigma", sigma, "Noise standard deviation");
    sim->add_option("--delta", delta, "Cover resolution, or auto for the sample-size schedule");
    sim->add_option("--symmetriser", symmetriser, "grid or monte_carlo");
    sim->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sim->add_flag("--no-split", no_split, "Fit and select on the same pooled data");
    sim->add_option("--set", settings, "Extra key=value settings");
    sim->add_option("--out", out_dir, "Output directory");

    auto* sel = app.add_subcommand("select", "Select a symmetry for a CSV dataset x1..xd,y");
    std::string data_path, space_name, report_path, catalog_path;
    double sel_delta = 0, sel_a = 1, sel_beta = 1, sel_l = 1, sel_lg = 1;
    std::uint64_t sel_seed = 1;
    bool sel_no_split = false;
    unsigned sel_threads = 0;
    sel->add_option("--data", data_path, "CSV file")->required();
    sel->add_option("--space", space_name, "ball, sphere, torus<d> or box:<s1,...>")->required();
    sel->add_option("--delta", sel_delta, "Fixed cover resolution (default: sample-size schedule)");
    sel->add_option("--a", sel_a, "Bandwidth constant");
    sel->add_option("--beta", sel_beta, "Smoothness in (0, 1]");
    sel->add_option("--lipschitz", sel_l, "Lipschitz constant of the regression function");
    sel->add_option("--lipschitz-group", sel_lg, "Lipschitz constant of the action");
    sel->add_option("--seed", sel_seed, "Seed for the fit/holdout split");
    sel->add_option("--threads", sel_threads, "Worker threads (0 = all cores)");
    sel->add_flag("--no-split", sel_no_split, "Fit and score on the full dataset");
    sel->add_option("--out", report_path, "Write the selection report here instead of stdout");
    sel->add_option("--catalog", catalog_path, "Write the candidate subgroup catalog here");

    auto* val = app.add_subcommand("validate", "Run the oracle suite");
    std::uint64_t val_seed = 1;
    unsigned val_threads = 0;
    std::string val_out;
    val->add_option("--seed", val_seed, "Base seed");
    val->add_option("--threads", val_threads, "Worker threads (0 = all cores)");
    val->add_option("--out", val_out, "Write the CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*sim) {
            ExperimentConfig cfg;
            cfg.scenarios.push_back(builtin_scenario(ScenarioId::SO3_f1));
            if (!config_path.empty()) cfg = parse_config(read_text_file(config_path), cfg);
            if (!scenario.empty()) apply_setting(cfg, "scenario", scenario);
            if (!n_grid.empty()) apply_setting(cfg, "n_grid", n_grid);
            if (trials > 0) cfg.trials = trials;
            if (seed_set) cfg.seed = seed;
            if (sigma >= 0) cfg.sigma = sigma;
            if (!delta.empty()) apply_setting(cfg, "delta", delta);
            if (!symmetriser.empty()) apply_setting(cfg, "symmetriser", symmetriser);
            if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
            if (no_split) cfg.split = false;
            for (const auto& kv : settings) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw ConfigError(kv, "expected key=value");
                apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
            }
            cfg.validate();
            const RiskReport report = run_experiment(cfg);
            for (const auto& p : emit_report(report, out_dir)) std::cout << "wrote " << p.string() << '\n';
            for (const auto& s : report.slopes)
                std::cout << s.scenario << ' ' << s.estimator << " slope " << format_fixed(s.slope, 4) << '\n';
            return kOk;
        }
        if (*sel) {
            const CovariateSpace space = parse_space(space_name);
            const Dataset data = read_dataset(data_path, space);
            if (data.size() < 2) throw ConfigError("data", "need at least two rows");
            if (!(sel_beta > 0 && sel_beta <= 1)) throw ConfigError("beta", "must lie in (0, 1]");
            if (!(sel_a > 0)) throw ConfigError("a", "must be > 0");
            std::shared_ptr<const Dataset> fit, hold;
            if (sel_no_split) {
                fit = hold = std::make_shared<Dataset>(data);
            } else {
                Rng rng(sel_seed);
                auto [a, b] = split_dataset(data, rng);
                fit = std::make_shared<Dataset>(std::move(a));
                hold = std::make_shared<Dataset>(std::move(b));
            }
            const ParentGroup parent = natural_parent(space);
            const double d = sel_delta > 0 ? sel_delta
                                           : delta_schedule(static_cast<double>(fit->size()), sel_beta,
                                                            space.intrinsic_dim(), parent.max_orbit_dim(), sel_l, sel_lg);
            SelectionInput in;
            in.base = lce_factory(fit);
            in.fit_size = fit->size();
            in.holdout = hold;
            in.cover = delta_cover(parent, d);
            in.rule = {sel_a, sel_beta};
            in.threads = sel_threads;
            const SymmetrySelection s = global_ems(in);
            std::string text = "delta: " + format_double(d) + "\n" + s.report();
            if (!catalog_path.empty()) write_text_file(catalog_path, format_catalog(in.cover));
            if (report_path.empty())
                std::cout << text;
            else
                write_text_file(report_path, text);
            return kOk;
        }
        if (*val) {
            const auto reports = run_oracle_suite(val_seed, val_threads);
            const std::string csv = oracle_csv(reports);
            if (val_out.empty())
                std::cout << csv;
            else
                write_text_file(val_out, csv);
            bool ok = true;
            for (const auto& r : reports) {
                if (!r.pass) {
                    ok = false;
                    std::cerr << "FAIL " << r.name << ": observed " << format_double(r.observed) << ", expected "
                              << format_double(r.expected) << " +- " << format_double(r.tolerance) << '\n';
                }
            }
            return ok ? kOk : kValidationFailed;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
