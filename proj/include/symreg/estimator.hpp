#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "symreg/orbit_grid.hpp"

namespace symreg {

/// Regression sample {(X_i, Y_i)} on one covariate space.
struct Dataset {
    explicit Dataset(CovariateSpace s) : space(s) {}

    CovariateSpace space;
    std::vector<Point> x;
    std::vector<double> y;

    void add(Point p, double value);
    std::size_t size() const noexcept { return x.size(); }
    bool empty() const noexcept { return x.empty(); }
};

/// Union of two datasets on the same space (a's rows first).
Dataset concat(const Dataset& a, const Dataset& b);

class Predictor {
public:
    virtual ~Predictor() = default;
    virtual double predict(const Point& x) const = 0;
};

/// Wraps a closed-form function (exact predictors in tests and oracles).
class FunctionPredictor final : public Predictor {
public:
    explicit FunctionPredictor(std::function<double(const Point&)> f) : f_(std::move(f)) {}
    double predict(const Point& x) const override { return f_(x); }

private:
    std::function<double(const Point&)> f_;
};

/// Samples above this size are searched through a uniform cell grid.
inline constexpr std::size_t kIndexThreshold = 512;

/// Nadaraya-Watson estimator with the rectangular kernel: the mean of Y_i over
/// the open ball {i : d(x, X_i) < h}, and 0 when that ball holds no data.
class LocalConstantEstimator final : public Predictor {
public:
    LocalConstantEstimator(const Dataset& data, double bandwidth);

    double predict(const Point& x) const override;

    /// Indices i with d(x, X_i) < h, ascending.
    std::vector<std::size_t> neighbours(const Point& x) const;

    double bandwidth() const noexcept { return h_; }
    std::size_t size() const noexcept { return y_.size(); }
    bool indexed() const noexcept { return indexed_; }

private:
    template <class Fn>
    void for_each_candidate(const double* q, Fn&& fn) const;

    CovariateSpace space_;
    double h_;
    int dim_;
    std::vector<double> coords_;
    std::vector<double> y_;

    bool indexed_ = false;
    bool periodic_ = false;
    std::vector<int> cells_;
    std::vector<double> lo_;
    std::vector<double> cell_size_;
    std::vector<std::size_t> cell_start_;
    std::vector<std::size_t> order_;
};

/// h = a n^(-1 / (2 beta + d - d_G)).
double bandwidth(double a, double n, double beta, int d, int d_g);

/// (1/m) sum_i base(g_i . x) over the grid elements.
double partial_symmetrised_predict(const Predictor& base, const OrbitGrid& grid, const Point& x);

/// (1/M) sum_i base(g_i . x) with g_i drawn uniformly from the compact group G.
double monte_carlo_symmetrised_predict(const Predictor& base, const ClosedSubgroup& g, std::size_t draws, Rng& rng,
                                       const Point& x);

/// Uniform average of base over the whole orbit of x, on an equally spaced
/// set of orbit points at most about `spacing` apart. Deterministic stand-in for
/// the Monte-Carlo average when M is large.
double orbit_average_predict(const Predictor& base, const ClosedSubgroup& g, double spacing, const Point& x);

/// Memoises orbit grids by base point quantised to `quantum`; the grid of the
/// first point seen in a cell is reused for the whole cell. Not thread-safe.
class OrbitGridCache {
public:
    OrbitGridCache(ClosedSubgroup g, double bandwidth, CompactNeighborhood u, double quantum);

    const OrbitGrid& grid_for(const Point& x);
    std::size_t size() const noexcept { return grids_.size(); }

private:
    ClosedSubgroup group_;
    double h_;
    CompactNeighborhood u_;
    double quantum_;
    std::map<std::vector<long long>, OrbitGrid> grids_;
};

}  // namespace symreg
