#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symreg/estimator.hpp"

namespace symreg {

/// h_G = a n^(-1/(2 beta + d - d^G)); n is the size of the base estimator's training set.
struct BandwidthRule {
    double a = 1.0;
    double beta = 1.0;
};

/// Builds the base estimator at a requested bandwidth.
using BaseFactory = std::function<std::shared_ptr<const Predictor>(double bandwidth)>;

/// Local constant estimator on `data` at whatever bandwidth is requested.
BaseFactory lce_factory(std::shared_ptr<const Dataset> data);

/// Ignores the bandwidth and always returns `pred` (exact predictors in tests).
BaseFactory fixed_factory(std::shared_ptr<const Predictor> pred);

/// Mean of (pred(X_i) - Y_i)^2 over the holdout. Throws DomainError when empty.
double empirical_error(const std::function<double(const Point&)>& pred, const Dataset& holdout);

/// OrbitGrid: partial symmetrisation on the orbit grid. MonteCarlo: the uniform
/// law on the whole orbit (sampled for prediction, evenly spaced for selection).
enum class SymmetriserMode { OrbitGrid, MonteCarlo };

struct SelectionInput {
    BaseFactory base;
    std::size_t fit_size = 0;
    std::shared_ptr<const Dataset> holdout;
    std::vector<ClosedSubgroup> cover;
    /// Closed membership predicate for the local variant; empty means the whole space.
    std::function<bool(const Point&)> region;
    double fallback_error = 1.0;
    BandwidthRule rule;
    /// Unset means default_neighborhood of the cover's parent.
    std::optional<CompactNeighborhood> neighborhood;
    /// How each candidate's holdout error is scored. Non-compact groups always use the grid.
    SymmetriserMode symmetriser = SymmetriserMode::OrbitGrid;
    unsigned threads = 1;
};

struct GroupError {
    ClosedSubgroup group;
    int orbit_dim = 0;
    double bandwidth = 0.0;
    double error = 0.0;
};

struct SymmetrySelection {
    ClosedSubgroup chosen = ClosedSubgroup::trivial(ParentGroup::so3());
    int chosen_orbit_dim = 0;
    double chosen_bandwidth = 0.0;
    /// Canonically sorted by group.
    std::vector<GroupError> per_group;
    bool used_fallback = false;
    std::size_t region_points = 0;

    /// Plain-text report: chosen group then one line per candidate.
    std::string report() const;
};

/// Errors within this distance count as ties.
inline constexpr double kTieTolerance = 1e-12;

/// Argmin over candidates: smallest error, ties toward larger orbit dimension,
/// then canonical order. Returns an index into `errors`.
std::size_t choose_minimiser(const std::vector<GroupError>& errors);

/// Global Error Minimising Symmetry: every cover subgroup is scored by the
/// holdout error of its partially symmetrised base estimator.
SymmetrySelection global_ems(const SelectionInput& input);

/// Local variant restricted to holdout points inside the region. With no
/// holdout point in the region the result is Trivial with every error set to
/// the fallback level.
SymmetrySelection local_ems(const SelectionInput& input);

/// The base estimator symmetrised over the selected subgroup at its bandwidth.
class BestSymmetricEstimator final : public Predictor {
public:
    /// The base is built at the selection's bandwidth.
    BestSymmetricEstimator(const BaseFactory& base, const SymmetrySelection& selection, CompactNeighborhood u);

    /// Orbit-grid symmetrisation.
    double predict(const Point& x) const override;

    /// Uniform-measure symmetrisation with `draws` Haar samples (compact groups only;
    /// the trivial group returns the base prediction).
    double predict_monte_carlo(const Point& x, std::size_t draws, Rng& rng) const;

    const ClosedSubgroup& group() const noexcept { return group_; }
    const Predictor& base() const noexcept { return *base_; }

private:
    std::shared_ptr<const Predictor> base_;
    ClosedSubgroup group_;
    double h_;
    CompactNeighborhood u_;
};

/// One-shot form of BestSymmetricEstimator::predict.
double best_symmetric_predict(const BaseFactory& base, const SymmetrySelection& selection, const Point& x);

/// Uniformly random partition into halves of sizes floor(n/2) and ceil(n/2).
std::pair<Dataset, Dataset> split_dataset(const Dataset& full, Rng& rng);

}  // namespace symreg
