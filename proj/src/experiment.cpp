#include "symreg/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "symreg/errors.hpp"
#include "symreg/parallel.hpp"

namespace symreg {

void ExperimentConfig::validate() const {
    if (scenarios.empty()) throw ConfigError("scenario", "at least one scenario is required");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma", "must be a finite value >= 0");
    if (n_grid.empty()) throw ConfigError("n_grid", "must list at least one sample size");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 2) throw ConfigError("n_grid", "sample sizes must be >= 2");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid", "must be strictly ascending");
    }
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    if (eval_points < 1) throw ConfigError("eval_points", "must be >= 1");
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta", "must lie in (0, 1]");
    if (!(a > 0.0)) throw ConfigError("a", "must be > 0");
    if (!(lipschitz > 0.0)) throw ConfigError("lipschitz", "must be > 0");
    if (!(lipschitz_group > 0.0)) throw ConfigError("lipschitz_group", "must be > 0");
    if (delta && !(*delta > 0.0)) throw ConfigError("delta", "must be > 0");
    if (mc_draws < 0) throw ConfigError("mc_draws", "must be >= 0");
    for (const auto& s : scenarios) {
        if (!s.fn) throw ConfigError("scenario", s.name + " has no regression function");
        if (!s.parent.acts_on(s.space)) throw ConfigError("scenario", s.name + ": group does not act on the space");
        if (!s.parent.is_compact()) throw ConfigError("scenario", s.name + ": parent group must be compact");
    }
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return std::nan("");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::nan("");
}

void RiskReport::summarise() {
    aggregates.clear();
    slopes.clear();
    struct Key {
        std::string scenario;
        int n;
        std::string estimator;
    };
    std::vector<Key> keys;
    std::vector<std::vector<double>> values;
    for (const auto& r : rows) {
        auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& k) {
            return k.scenario == r.scenario && k.n == r.n && k.estimator == r.estimator;
        });
        if (it == keys.end()) {
            keys.push_back({r.scenario, r.n, r.estimator});
            values.emplace_back();
            it = keys.end() - 1;
        }
        values[static_cast<std::size_t>(it - keys.begin())].push_back(r.risk);
    }
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const auto& v = values[k];
        const double t = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= t;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const double sd = v.size() > 1 ? std::sqrt(ss / (t - 1.0)) : 0.0;
        aggregates.push_back({keys[k].scenario, keys[k].n, keys[k].estimator, mean, 1.96 * sd / std::sqrt(t),
                              static_cast<int>(v.size())});
    }

    std::vector<std::pair<std::string, std::string>> series;
    for (const auto& a : aggregates)
        if (std::find(series.begin(), series.end(), std::pair{a.scenario, a.estimator}) == series.end())
            series.emplace_back(a.scenario, a.estimator);
    for (const auto& [scen, est] : series) {
        std::vector<double> lx, ly;
        for (const auto& a : aggregates)
            if (a.scenario == scen && a.estimator == est && a.mean_risk > 0.0) {
                lx.push_back(std::log(static_cast<double>(a.n)));
                ly.push_back(std::log(a.mean_risk));
            }
        slopes.push_back({scen, est, ols_slope(lx, ly)});
    }
}

double cover_delta(const ExperimentConfig& cfg, const Scenario& s, int n) {
    if (cfg.delta) return *cfg.delta;
    return delta_schedule(n, cfg.beta, s.space.intrinsic_dim(), s.parent.max_orbit_dim(), cfg.lipschitz,
                          cfg.lipschitz_group);
}

TrialResult run_trial(const ExperimentConfig& cfg, const Scenario& s, int n, int trial,
                      const std::vector<ClosedSubgroup>& cover) {
    const std::uint64_t seed = derive_seed(cfg.seed, {hash_name(s.name), static_cast<std::uint64_t>(n),
                                                      static_cast<std::uint64_t>(trial)});
    Rng rng(seed);
    const auto nn = static_cast<std::size_t>(n);
    auto first = std::make_shared<Dataset>(generate_data(s, nn, cfg.sigma, rng));
    auto second = std::make_shared<Dataset>(generate_data(s, nn, cfg.sigma, rng));
    auto pooled = std::make_shared<Dataset>(concat(*first, *second));

    const int d = s.space.intrinsic_dim();
    const LocalConstantEstimator baseline(*pooled, bandwidth(cfg.a, 2.0 * n, cfg.beta, d, 0));

    SelectionInput in;
    in.base = lce_factory(cfg.split ? first : pooled);
    in.fit_size = cfg.split ? nn : 2 * nn;
    in.holdout = cfg.split ? second : pooled;
    in.cover = cover;
    in.rule = {cfg.a, cfg.beta};
    in.symmetriser = cfg.symmetriser;
    in.threads = 1;
    TrialResult out;
    out.selection = global_ems(in);

    const CompactNeighborhood u = default_neighborhood(s.parent);
    const BestSymmetricEstimator best(in.base, out.selection, u);
    const std::size_t draws = cfg.mc_draws > 0 ? static_cast<std::size_t>(cfg.mc_draws) : in.fit_size;
    Rng mc(derive_seed(seed, {hash_name("monte_carlo")}));
    std::function<double(const Point&)> sym;
    if (cfg.symmetriser == SymmetriserMode::MonteCarlo)
        sym = [&](const Point& x) { return best.predict_monte_carlo(x, draws, mc); };
    else
        sym = [&](const Point& x) { return best.predict(x); };

    const auto k = static_cast<std::size_t>(cfg.eval_points);
    Rng eval_a(derive_seed(seed, {hash_name("risk")}));
    Rng eval_b(derive_seed(seed, {hash_name("risk")}));
    out.baseline_risk = estimate_risk([&](const Point& x) { return baseline.predict(x); }, s.fn, s.space, k, eval_a);
    out.symmetric_risk = estimate_risk(sym, s.fn, s.space, k, eval_b);
    return out;
}

RiskReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    struct Unit {
        std::size_t scenario;
        std::size_t n_index;
        int trial;
    };
    std::vector<std::vector<std::vector<ClosedSubgroup>>> covers(cfg.scenarios.size());
    std::vector<Unit> units;
    for (std::size_t s = 0; s < cfg.scenarios.size(); ++s) {
        for (std::size_t j = 0; j < cfg.n_grid.size(); ++j) {
            covers[s].push_back(delta_cover(cfg.scenarios[s].parent, cover_delta(cfg, cfg.scenarios[s], cfg.n_grid[j])));
            for (int t = 0; t < cfg.trials; ++t) units.push_back({s, j, t});
        }
    }
    std::vector<TrialResult> results(units.size());
    parallel_for(units.size(), cfg.threads, [&](std::size_t i) {
        const Unit& u = units[i];
        results[i] = run_trial(cfg, cfg.scenarios[u.scenario], cfg.n_grid[u.n_index], u.trial,
                               covers[u.scenario][u.n_index]);
    });

    RiskReport report;
    for (std::size_t i = 0; i < units.size(); ++i) {
        const Unit& u = units[i];
        const std::string& name = cfg.scenarios[u.scenario].name;
        const int n = cfg.n_grid[u.n_index];
        report.rows.push_back({name, n, u.trial, kBaseline, results[i].baseline_risk});
        report.rows.push_back({name, n, u.trial, kBestSymmetric, results[i].symmetric_risk});
        report.selections.push_back({name, n, u.trial, results[i].selection.chosen.label(),
                                     results[i].selection.per_group.size()});
    }
    report.summarise();
    return report;
}

}  // namespace symreg
