#include "symreg/selection.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "symreg/errors.hpp"
#include "symreg/format.hpp"
#include "symreg/parallel.hpp"

namespace symreg {

BaseFactory lce_factory(std::shared_ptr<const Dataset> data) {
    return [data = std::move(data)](double h) -> std::shared_ptr<const Predictor> {
        return std::make_shared<LocalConstantEstimator>(*data, h);
    };
}

BaseFactory fixed_factory(std::shared_ptr<const Predictor> pred) {
    return [pred = std::move(pred)](double) { return pred; };
}

double empirical_error(const std::function<double(const Point&)>& pred, const Dataset& holdout) {
    if (holdout.empty()) throw DomainError("empirical error needs a nonempty holdout");
    double sum = 0.0;
    for (std::size_t i = 0; i < holdout.size(); ++i) {
        const double r = pred(holdout.x[i]) - holdout.y[i];
        sum += r * r;
    }
    return sum / static_cast<double>(holdout.size());
}

std::size_t choose_minimiser(const std::vector<GroupError>& errors) {
    if (errors.empty()) throw DomainError("no candidates to choose from");
    std::size_t best = 0;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const auto& c = errors[i];
        const auto& b = errors[best];
        if (c.error < b.error - kTieTolerance) {
            best = i;
        } else if (c.error <= b.error + kTieTolerance) {
            if (c.orbit_dim > b.orbit_dim ||
                (c.orbit_dim == b.orbit_dim && canonical_less(c.group, b.group)))
                best = i;
        }
    }
    return best;
}

namespace {

void check_input(const SelectionInput& in) {
    if (!in.base) throw DomainError("selection needs a base estimator");
    if (!in.holdout) throw DomainError("selection needs a holdout dataset");
    if (in.cover.empty()) throw DomainError("selection cover is empty");
    if (in.fit_size == 0) throw DomainError("selection needs the base training size");
}

CompactNeighborhood neighborhood_of(const SelectionInput& in) {
    return in.neighborhood ? *in.neighborhood : default_neighborhood(in.cover.front().parent());
}

SymmetrySelection evaluate(const SelectionInput& in, const std::vector<std::size_t>& rows) {
    const Dataset& hold = *in.holdout;
    const CovariateSpace& space = hold.space;
    const CompactNeighborhood u = neighborhood_of(in);

    std::vector<ClosedSubgroup> cover = in.cover;
    std::sort(cover.begin(), cover.end(), canonical_less);
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());

    std::vector<GroupError> errors;
    errors.reserve(cover.size());
    std::map<double, std::shared_ptr<const Predictor>> bases;
    for (const auto& g : cover) {
        GroupError e{g, orbit_dimension(g, space), 0.0, 0.0};
        e.bandwidth = bandwidth(in.rule.a, static_cast<double>(in.fit_size), in.rule.beta, space.intrinsic_dim(),
                                e.orbit_dim);
        if (!bases.count(e.bandwidth)) bases.emplace(e.bandwidth, in.base(e.bandwidth));
        errors.push_back(std::move(e));
    }

    parallel_for(errors.size(), in.threads, [&](std::size_t k) {
        auto& e = errors[k];
        const Predictor& base = *bases.at(e.bandwidth);
        const bool whole_orbit = in.symmetriser == SymmetriserMode::MonteCarlo && e.group.is_compact();
        double sum = 0.0;
        for (std::size_t i : rows) {
            const Point& x = hold.x[i];
            const double pred = whole_orbit ? orbit_average_predict(base, e.group, e.bandwidth, x)
                                            : partial_symmetrised_predict(base, build_orbit_grid(x, e.group, e.bandwidth, u), x);
            const double r = pred - hold.y[i];
            sum += r * r;
        }
        e.error = sum / static_cast<double>(rows.size());
    });

    const GroupError best = errors[choose_minimiser(errors)];
    return {best.group, best.orbit_dim, best.bandwidth, std::move(errors), false, rows.size()};
}

}  // namespace

SymmetrySelection global_ems(const SelectionInput& input) {
    check_input(input);
    if (input.region) throw DomainError("global selection takes no region; use local_ems");
    if (input.holdout->empty()) throw DomainError("global selection needs a nonempty holdout");
    std::vector<std::size_t> rows(input.holdout->size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return evaluate(input, rows);
}

SymmetrySelection local_ems(const SelectionInput& input) {
    check_input(input);
    const Dataset& hold = *input.holdout;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < hold.size(); ++i)
        if (!input.region || input.region(hold.x[i])) rows.push_back(i);
    if (!rows.empty()) return evaluate(input, rows);

    const CovariateSpace& space = hold.space;
    const ClosedSubgroup trivial = ClosedSubgroup::trivial(input.cover.front().parent());
    std::vector<ClosedSubgroup> cover = input.cover;
    std::sort(cover.begin(), cover.end(), canonical_less);
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    SymmetrySelection out{trivial, 0, 0.0, {}, true, 0};
    for (const auto& g : cover) {
        const int dg = orbit_dimension(g, space);
        out.per_group.push_back({g, dg,
                                 bandwidth(input.rule.a, static_cast<double>(input.fit_size), input.rule.beta,
                                           space.intrinsic_dim(), dg),
                                 input.fallback_error});
    }
    out.chosen_bandwidth = bandwidth(input.rule.a, static_cast<double>(input.fit_size), input.rule.beta,
                                     space.intrinsic_dim(), 0);
    return out;
}

std::string SymmetrySelection::report() const {
    std::ostringstream os;
    os << "chosen: " << chosen.label() << '\n';
    os << "orbit_dim: " << chosen_orbit_dim << '\n';
    os << "bandwidth: " << format_double(chosen_bandwidth) << '\n';
    os << "fallback: " << (used_fallback ? "yes" : "no") << '\n';
    os << "holdout_points: " << region_points << '\n';
    os << "candidates: " << per_group.size() << '\n';
    os << "# orbit_dim bandwidth error group\n";
    for (const auto& e : per_group)
        os << e.orbit_dim << ' ' << format_double(e.bandwidth) << ' ' << format_double(e.error) << ' '
           << e.group.label() << '\n';
    return os.str();
}

BestSymmetricEstimator::BestSymmetricEstimator(const BaseFactory& base, const SymmetrySelection& selection,
                                               CompactNeighborhood u)
    : group_(selection.chosen), h_(selection.chosen_bandwidth), u_(u) {
    if (!(h_ > 0.0)) throw DomainError("selection carries no bandwidth");
    base_ = base(h_);
}

double BestSymmetricEstimator::predict(const Point& x) const {
    if (group_.family() == SubgroupFamily::Trivial) return base_->predict(x);
    return partial_symmetrised_predict(*base_, build_orbit_grid(x, group_, h_, u_), x);
}

double BestSymmetricEstimator::predict_monte_carlo(const Point& x, std::size_t draws, Rng& rng) const {
    if (group_.family() == SubgroupFamily::Trivial) return base_->predict(x);
    return monte_carlo_symmetrised_predict(*base_, group_, draws, rng, x);
}

double best_symmetric_predict(const BaseFactory& base, const SymmetrySelection& selection, const Point& x) {
    const BestSymmetricEstimator est(base, selection, default_neighborhood(selection.chosen.parent()));
    return est.predict(x);
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& full, Rng& rng) {
    const std::size_t n = full.size();
    if (n < 2) throw DomainError("split needs at least two rows");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);
    const std::size_t first = n / 2;
    std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(first));
    std::sort(idx.begin() + static_cast<std::ptrdiff_t>(first), idx.end());
    Dataset a(full.space), b(full.space);
    for (std::size_t k = 0; k < n; ++k) (k < first ? a : b).add(full.x[idx[k]], full.y[idx[k]]);
    return {std::move(a), std::move(b)};
}

}  // namespace symreg
