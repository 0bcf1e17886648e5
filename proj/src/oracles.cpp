#include "symreg/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "symreg/errors.hpp"
#include "symreg/format.hpp"
#include "symreg/parallel.hpp"

namespace symreg {

OracleReport OracleReport::make(std::string name, double observed, double expected, double tolerance, Check check,
                                std::string detail) {
    OracleReport r{std::move(name), observed, expected, tolerance, check, false, std::move(detail)};
    r.pass = check == Check::Within ? std::abs(observed - expected) <= tolerance : observed <= expected + tolerance;
    return r;
}

OracleReport inverse_moment_oracle(InverseMomentCase c, std::size_t samples, Rng& rng) {
    if (samples == 0) throw DomainError("inverse moment oracle needs samples");
    double sum = 0.0;
    switch (c) {
        case InverseMomentCase::GaussianSO3:
            for (std::size_t i = 0; i < samples; ++i) {
                const double a = rng.gaussian(), b = rng.gaussian(), d = rng.gaussian();
                sum += 1.0 / (2.0 * (a * a + b * b + d * d));
            }
            return OracleReport::make("inverse_moment_gaussian_so3", sum / samples, 0.5, 0.02,
                                      OracleReport::Check::Within);
        case InverseMomentCase::UniformBall:
            for (std::size_t i = 0; i < samples; ++i) {
                const Point x = sample_point(CovariateSpace::unit_ball(), PointLaw::UniformSpace, rng);
                sum += 1.0 / x.coords().squaredNorm();
            }
            return OracleReport::make("inverse_moment_uniform_ball", sum / samples, 3.0, 0.05,
                                      OracleReport::Check::Within);
        case InverseMomentCase::SphereCircle: {
            const Eigen::Vector3d u(0.0, 0.0, 1.0);
            for (std::size_t i = 0; i < samples; ++i) {
                const Point x = sample_point(CovariateSpace::unit_sphere(), PointLaw::UniformSpace, rng);
                const double t = x[0] * u.x() + x[1] * u.y() + x[2] * u.z();
                sum += 1.0 / std::sqrt(1.0 - t);
            }
            return OracleReport::make("inverse_moment_sphere_circle", sum / samples, std::numbers::sqrt2, 0.02,
                                      OracleReport::Check::Within);
        }
    }
    throw DomainError("unknown inverse moment case");
}

namespace {

ClosedSubgroup whole(const ParentGroup& parent) {
    switch (parent.kind) {
        case ParentKind::SO3: return ClosedSubgroup::full_so3();
        case ParentKind::Torus: return ClosedSubgroup::full_torus(parent.dim);
        case ParentKind::BoxTranslations: break;
    }
    throw NonCompactError("no uniform distribution on " + parent.name());
}

// A group element within `scale` of the identity.
GroupElement small_element(const ParentGroup& parent, double scale, Rng& rng) {
    if (parent.kind == ParentKind::SO3) {
        Eigen::Vector3d axis(rng.gaussian(), rng.gaussian(), rng.gaussian());
        if (axis.norm() == 0.0) axis = Eigen::Vector3d::UnitZ();
        return Rotation::about(axis.normalized(), rng.uniform(-scale, scale));
    }
    Coords s(parent.dim);
    for (int i = 0; i < parent.dim; ++i) s[i] = rng.uniform(-scale, scale);
    return TorusShift{s};
}

}  // namespace

OracleReport lipschitz_oracle(const CovariateSpace& space, const ParentGroup& parent, std::size_t samples, Rng& rng) {
    if (!parent.acts_on(space)) throw IncompatibleError(parent.name() + " does not act on " + space.name());
    const ClosedSubgroup all = whole(parent);
    double worst = 0.0;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const GroupElement g = sample_group(all, rng);
        GroupElement h = g;
        if (i % 97 != 0) {
            // Alternate far pairs with nearby ones, where the ratio is closest to 1.
            h = i % 2 == 0 ? sample_group(all, rng) : compose(g, small_element(parent, 1e-3, rng));
        }
        const Point x = sample_point(space, PointLaw::UniformSpace, rng);
        const double dg = group_distance(g, h);
        if (dg == 0.0) {
            ++skipped;
            continue;
        }
        worst = std::max(worst, space_distance(act(g, x), act(h, x)) / dg);
    }
    return OracleReport::make("lipschitz_" + parent.name() + "_on_" + space.name(), worst, 1.0, 1e-9,
                              OracleReport::Check::AtMost, "skipped " + std::to_string(skipped) + " pairs with g = h");
}

namespace {

struct PackingCase {
    Point x;
    ClosedSubgroup g;
    CompactNeighborhood u;
};

Eigen::Vector3d random_axis(Rng& rng) {
    Eigen::Vector3d v;
    do v = Eigen::Vector3d(rng.gaussian(), rng.gaussian(), rng.gaussian());
    while (v.norm() < 1e-6);
    return v.normalized();
}

PackingCase random_packing_case(Rng& rng) {
    switch (rng.below(5)) {
        case 0:
        case 1: {
            const CovariateSpace space = rng.below(2) == 0 ? CovariateSpace::unit_ball() : CovariateSpace::unit_sphere();
            const Point x = sample_point(space, PointLaw::UniformSpace, rng);
            switch (rng.below(3)) {
                case 0: return {x, ClosedSubgroup::trivial(ParentGroup::so3()), CompactNeighborhood::whole_group()};
                case 1: return {x, ClosedSubgroup::circle(random_axis(rng)), CompactNeighborhood::whole_group()};
                default: return {x, ClosedSubgroup::full_so3(), CompactNeighborhood::whole_group()};
            }
        }
        case 2: {
            const Point x = sample_point(CovariateSpace::torus(2), PointLaw::UniformSpace, rng);
            switch (rng.below(3)) {
                case 0: return {x, ClosedSubgroup::trivial(ParentGroup::torus(2)), CompactNeighborhood::whole_group()};
                case 1: {
                    int p, q;
                    do {
                        p = static_cast<int>(rng.below(5));
                        q = static_cast<int>(rng.below(9)) - 4;
                    } while (std::gcd(p, q) != 1);
                    return {x, ClosedSubgroup::torus_line(p, q), CompactNeighborhood::whole_group()};
                }
                default: return {x, ClosedSubgroup::full_torus(2), CompactNeighborhood::whole_group()};
            }
        }
        case 3: {
            const int d = 1 + static_cast<int>(rng.below(3));
            const Point x = sample_point(CovariateSpace::torus(d), PointLaw::UniformSpace, rng);
            if (rng.below(3) == 0)
                return {x, ClosedSubgroup::trivial(ParentGroup::torus(d)), CompactNeighborhood::whole_group()};
            return {x, ClosedSubgroup::full_torus(d), CompactNeighborhood::whole_group()};
        }
        default: {
            const int d = 1 + static_cast<int>(rng.below(3));
            std::vector<double> sides;
            for (int i = 0; i < d; ++i) sides.push_back(rng.uniform(0.5, 3.0));
            const CovariateSpace space = CovariateSpace::box(sides);
            const Point x = sample_point(space, PointLaw::UniformSpace, rng);
            const auto mask = static_cast<unsigned>(rng.below(1u << d));
            return {x, ClosedSubgroup::axis_translations(d, mask), CompactNeighborhood::cube(rng.uniform(0.25, 1.5))};
        }
    }
}

}  // namespace

OracleReport packing_oracle(std::size_t configs, Rng& rng) {
    std::size_t violations = 0;
    double count_slack = 1e300, spacing_slack = 1e300;
    for (std::size_t c = 0; c < configs; ++c) {
        const PackingCase pc = random_packing_case(rng);
        const double h = std::exp(rng.uniform(std::log(0.05), std::log(1.0)));
        const OrbitGrid grid = build_orbit_grid(pc.x, pc.g, h, pc.u);
        const int dim = grid.singular ? 0 : grid.orbit_dim;
        const double bound = std::max(1.0, std::pow(grid.hypercube_side / (2.0 * h), dim));
        const double m = static_cast<double>(grid.m());
        count_slack = std::min(count_slack, m - bound);
        bool bad = m + 1e-9 < bound;

        std::vector<Point> pts;
        pts.reserve(grid.m());
        for (const auto& g : grid.elements) pts.push_back(act(g, pc.x));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double gap = space_distance(pts[i], pts[j]) - 2.0 * h;
                spacing_slack = std::min(spacing_slack, gap);
                if (gap < -1e-9) bad = true;
            }
        if (bad) ++violations;
    }
    std::ostringstream detail;
    detail << "min count slack " << format_double(count_slack) << ", min spacing slack "
           << (spacing_slack > 1e299 ? std::string("n/a") : format_double(spacing_slack));
    return OracleReport::make("packing", static_cast<double>(violations), 0.0, 0.0, OracleReport::Check::AtMost,
                              detail.str());
}

std::size_t circle_packing_count(double radius, double h) {
    if (radius <= 0.0) return 1;
    if (2.0 * h > 2.0 * radius) return 1;
    // Chord 2h subtends the angle 2 asin(h / r); walk the circle greedily.
    const double step = 2.0 * std::asin(std::min(1.0, h / radius));
    const double tau = 2.0 * std::numbers::pi;
    std::size_t count = 0;
    double angle = 0.0;
    while (angle + step <= tau + 1e-12 || count == 0) {
        ++count;
        angle += step;
    }
    return std::max<std::size_t>(count, 1);
}

OracleReport bias_bound_oracle(const std::vector<ClosedSubgroup>& cover, std::size_t samples, double eps, Rng& rng) {
    if (cover.empty()) throw DomainError("bias oracle needs a cover");
    const ClosedSubgroup h_group = ClosedSubgroup::circle({1.0, 0.0, 0.0});
    const CompactNeighborhood u = CompactNeighborhood::whole_group();
    auto f = [](const Eigen::Vector3d& x) { return std::cos(std::sqrt(x.y() * x.y() + x.z() * x.z())); };

    std::vector<ClosedSubgroup> groups = cover;
    groups.push_back(h_group);
    std::map<std::size_t, double> distance;
    std::size_t violations = 0;
    double worst = -1e300;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t k = rng.below(groups.size());
        const Point x = sample_point(CovariateSpace::unit_ball(), PointLaw::UniformSpace, rng);
        const double h = rng.uniform(0.02, 0.5);
        auto it = distance.find(k);
        if (it == distance.end()) it = distance.emplace(k, hausdorff_U_distance(groups[k], h_group, u, eps)).first;
        const OrbitGrid grid = build_orbit_grid(x, groups[k], h, u);
        double avg = 0.0;
        for (const auto& g : grid.elements) {
            const Point y = act(g, x);
            avg += f({y[0], y[1], y[2]});
        }
        avg /= static_cast<double>(grid.m());
        const double gap = std::abs(avg - f({x[0], x[1], x[2]})) - it->second;
        worst = std::max(worst, gap);
        if (gap > 2.0 * eps + 1e-9) ++violations;
    }
    return OracleReport::make("bias_bound", static_cast<double>(violations), 0.0, 0.0, OracleReport::Check::AtMost,
                              "max gap minus distance " + format_double(worst));
}

double binomial_cdf(int n, double p, int k) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    double sum = 0.0;
    for (int i = 0; i <= k; ++i)
        sum += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * std::log(p) +
                        (n - i) * std::log1p(-p));
    return std::min(1.0, sum);
}

std::vector<OracleReport> tail_bound_oracle(int n, double p, std::size_t trials, Rng& rng) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("tail oracle needs p in (0, 1]");
    if (n < 1 || trials == 0) throw DomainError("tail oracle needs n >= 1 and trials >= 1");
    std::size_t empty = 0, low = 0;
    const double half = 0.5 * n * p;
    for (std::size_t t = 0; t < trials; ++t) {
        int count = 0;
        for (int i = 0; i < n; ++i) count += rng.uniform() < p ? 1 : 0;
        if (count == 0) ++empty;
        if (count <= half) ++low;
    }
    const double tr = static_cast<double>(trials);
    auto se = [&](double b) { return std::sqrt(std::max(b * (1.0 - b), 1.0 / tr) / tr); };
    const std::string tag = "n=" + std::to_string(n) + " p=" + format_double(p);
    const double b_empty = std::exp(-n * p);
    const double b_low = std::exp(-n * p / 8.0);
    return {OracleReport::make("tail_empty " + tag, empty / tr, b_empty, 3.0 * se(b_empty),
                               OracleReport::Check::AtMost),
            OracleReport::make("tail_half " + tag, low / tr, b_low, 3.0 * se(b_low), OracleReport::Check::AtMost)};
}

std::vector<OracleReport> run_oracle_suite(std::uint64_t seed, unsigned threads) {
    using Job = std::function<std::vector<OracleReport>(Rng&)>;
    std::vector<std::pair<std::string, Job>> jobs;
    const std::size_t moments = 1'000'000;
    jobs.emplace_back("inverse_moment_gaussian_so3", [=](Rng& r) {
        return std::vector{inverse_moment_oracle(InverseMomentCase::GaussianSO3, moments, r)};
    });
    jobs.emplace_back("inverse_moment_uniform_ball", [=](Rng& r) {
        return std::vector{inverse_moment_oracle(InverseMomentCase::UniformBall, moments, r)};
    });
    jobs.emplace_back("inverse_moment_sphere_circle", [=](Rng& r) {
        return std::vector{inverse_moment_oracle(InverseMomentCase::SphereCircle, moments, r)};
    });
    jobs.emplace_back("lipschitz_ball", [](Rng& r) {
        return std::vector{lipschitz_oracle(CovariateSpace::unit_ball(), ParentGroup::so3(), 100'000, r)};
    });
    jobs.emplace_back("lipschitz_torus", [](Rng& r) {
        return std::vector{lipschitz_oracle(CovariateSpace::torus(2), ParentGroup::torus(2), 100'000, r)};
    });
    jobs.emplace_back("packing", [](Rng& r) { return std::vector{packing_oracle(1000, r)}; });
    jobs.emplace_back("bias_bound", [](Rng& r) {
        return std::vector{bias_bound_oracle(delta_cover(ParentGroup::so3(), 0.5), 1000, 0.05, r)};
    });
    const std::pair<int, double> grid[] = {{50, 0.1}, {20, 0.3}, {100, 0.05}, {200, 0.02}, {30, 0.5}};
    for (auto [n, p] : grid)
        jobs.emplace_back("tail " + std::to_string(n), [n, p](Rng& r) { return tail_bound_oracle(n, p, 100'000, r); });

    std::vector<std::vector<OracleReport>> out(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        Rng rng(derive_seed(seed, {hash_name(jobs[i].first)}));
        out[i] = jobs[i].second(rng);
    });
    std::vector<OracleReport> all;
    for (auto& v : out) all.insert(all.end(), v.begin(), v.end());
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return all;
}

std::string oracle_csv(const std::vector<OracleReport>& reports) {
    std::string out = "name,observed,expected,tolerance,check,pass,detail\n";
    for (const auto& r : reports)
        out += r.name + ',' + format_double(r.observed) + ',' + format_double(r.expected) + ',' +
               format_double(r.tolerance) + ',' + (r.check == OracleReport::Check::Within ? "within" : "at_most") + ',' +
               (r.pass ? "true" : "false") + ',' + r.detail + '\n';
    return out;
}

}  // namespace symreg
