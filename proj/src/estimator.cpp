#include "symreg/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "symreg/errors.hpp"

namespace symreg {

void Dataset::add(Point p, double value) {
    if (!(p.space() == space)) throw IncompatibleError("point from " + p.space().name() + " added to " + space.name());
    x.push_back(std::move(p));
    y.push_back(value);
}

Dataset concat(const Dataset& a, const Dataset& b) {
    if (!(a.space == b.space)) throw IncompatibleError("cannot concatenate datasets on different spaces");
    Dataset out(a.space);
    out.x = a.x;
    out.y = a.y;
    out.x.insert(out.x.end(), b.x.begin(), b.x.end());
    out.y.insert(out.y.end(), b.y.begin(), b.y.end());
    return out;
}

LocalConstantEstimator::LocalConstantEstimator(const Dataset& data, double bandwidth)
    : space_(data.space), h_(bandwidth), dim_(data.space.ambient_dim()) {
    if (!(h_ > 0.0) || !std::isfinite(h_)) throw DomainError("LCE bandwidth must be positive");
    const std::size_t n = data.size();
    coords_.reserve(n * static_cast<std::size_t>(dim_));
    for (const auto& p : data.x)
        for (int i = 0; i < dim_; ++i) coords_.push_back(p[i]);
    y_ = data.y;

    if (n <= kIndexThreshold) return;

    indexed_ = true;
    periodic_ = space_.kind() == SpaceKind::Torus;
    const bool centred = space_.kind() == SpaceKind::UnitBall3 || space_.kind() == SpaceKind::UnitSphere2;
    // Keep the cell count O(n).
    const int cap = std::max(1, static_cast<int>(std::pow(4.0 * static_cast<double>(n), 1.0 / dim_)));
    std::size_t total = 1;
    for (int i = 0; i < dim_; ++i) {
        const double lo = centred ? -1.0 : 0.0;
        const double extent = centred ? 2.0 : space_.side(i);
        const int nc = std::clamp(static_cast<int>(std::floor(extent / h_)), 1, cap);
        lo_.push_back(lo);
        cells_.push_back(nc);
        cell_size_.push_back(extent / nc);
        total *= static_cast<std::size_t>(nc);
    }
    auto cell_of = [&](std::size_t k) {
        std::size_t c = 0;
        for (int i = dim_ - 1; i >= 0; --i) {
            const auto ii = static_cast<std::size_t>(i);
            const int ci = std::clamp(static_cast<int>(std::floor((coords_[k * dim_ + ii] - lo_[ii]) / cell_size_[ii])),
                                      0, cells_[ii] - 1);
            c = c * static_cast<std::size_t>(cells_[ii]) + static_cast<std::size_t>(ci);
        }
        return c;
    };
    std::vector<std::size_t> cell(n);
    cell_start_.assign(total + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
        cell[k] = cell_of(k);
        ++cell_start_[cell[k] + 1];
    }
    for (std::size_t c = 0; c < total; ++c) cell_start_[c + 1] += cell_start_[c];
    order_.resize(n);
    std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t k = 0; k < n; ++k) order_[fill[cell[k]]++] = k;
}

template <class Fn>
void LocalConstantEstimator::for_each_candidate(const double* q, Fn&& fn) const {
    const std::size_t n = y_.size();
    if (!indexed_) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    // Neighbouring cells along each axis; cell size >= h so +-1 suffices.
    int lo[kMaxDim], span[kMaxDim], idx[kMaxDim];
    for (int i = 0; i < dim_; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const int nc = cells_[ii];
        const int c = std::clamp(static_cast<int>(std::floor((q[i] - lo_[ii]) / cell_size_[ii])), 0, nc - 1);
        if (periodic_) {
            if (nc <= 3) {
                lo[i] = 0;
                span[i] = nc;
            } else {
                lo[i] = c - 1;
                span[i] = 3;
            }
        } else {
            lo[i] = std::max(0, c - 1);
            span[i] = std::min(nc - 1, c + 1) - lo[i] + 1;
        }
        idx[i] = 0;
    }
    for (;;) {
        std::size_t cell = 0;
        for (int i = dim_ - 1; i >= 0; --i) {
            const int nc = cells_[static_cast<std::size_t>(i)];
            int ci = lo[i] + idx[i];
            if (periodic_) ci = (ci % nc + nc) % nc;
            cell = cell * static_cast<std::size_t>(nc) + static_cast<std::size_t>(ci);
        }
        for (std::size_t s = cell_start_[cell]; s < cell_start_[cell + 1]; ++s) fn(order_[s]);
        int i = 0;
        while (i < dim_ && ++idx[i] == span[i]) idx[i++] = 0;
        if (i == dim_) return;
    }
}

double LocalConstantEstimator::predict(const Point& x) const {
    if (!(x.space() == space_)) throw IncompatibleError("LCE queried on " + x.space().name());
    const double* q = x.coords().data();
    double sum = 0.0;
    std::size_t count = 0;
    for_each_candidate(q, [&](std::size_t k) {
        if (raw_distance(space_, q, &coords_[k * static_cast<std::size_t>(dim_)]) < h_) {
            sum += y_[k];
            ++count;
        }
    });
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::vector<std::size_t> LocalConstantEstimator::neighbours(const Point& x) const {
    if (!(x.space() == space_)) throw IncompatibleError("LCE queried on " + x.space().name());
    const double* q = x.coords().data();
    std::vector<std::size_t> out;
    for_each_candidate(q, [&](std::size_t k) {
        if (raw_distance(space_, q, &coords_[k * static_cast<std::size_t>(dim_)]) < h_) out.push_back(k);
    });
    std::sort(out.begin(), out.end());
    return out;
}

double bandwidth(double a, double n, double beta, int d, int d_g) {
    if (!(a > 0.0)) throw DomainError("bandwidth constant a must be positive");
    if (!(n >= 1.0)) throw DomainError("bandwidth needs n >= 1");
    const double k = 2.0 * beta + d - d_g;
    if (!(beta > 0.0) || !(k > 0.0)) throw DomainError("bandwidth needs beta > 0 and 2 beta + d - d_G > 0");
    return a * std::pow(n, -1.0 / k);
}

double partial_symmetrised_predict(const Predictor& base, const OrbitGrid& grid, const Point& x) {
    double sum = 0.0;
    for (const auto& g : grid.elements) sum += base.predict(act(g, x));
    return sum / static_cast<double>(grid.elements.size());
}

double monte_carlo_symmetrised_predict(const Predictor& base, const ClosedSubgroup& g, std::size_t draws, Rng& rng,
                                       const Point& x) {
    if (!g.is_compact()) throw NonCompactError("Monte-Carlo symmetrisation needs a compact group, got " + g.label());
    if (draws == 0) throw DomainError("Monte-Carlo symmetrisation needs at least one draw");
    double sum = 0.0;
    for (std::size_t i = 0; i < draws; ++i) sum += base.predict(act(sample_group(g, rng), x));
    return sum / static_cast<double>(draws);
}

double orbit_average_predict(const Predictor& base, const ClosedSubgroup& g, double spacing, const Point& x) {
    if (!g.is_compact()) throw NonCompactError("orbit average needs a compact group, got " + g.label());
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw DomainError("orbit spacing must be positive");
    constexpr double two_pi = 6.283185307179586;
    auto count = [](double n) { return static_cast<int>(std::clamp(std::ceil(n), 1.0, 1e6)); };
    double sum = 0.0;
    int m = 1;
    switch (g.family()) {
        case SubgroupFamily::Trivial: return base.predict(x);
        case SubgroupFamily::Circle3: {
            const Eigen::Vector3d v = x.coords().head<3>();
            const double r = (v - v.dot(g.axis()) * g.axis()).norm();
            m = count(two_pi * r / spacing);
            for (int k = 0; k < m; ++k) sum += base.predict(act(Rotation::about(g.axis(), two_pi * k / m), x));
            break;
        }
        case SubgroupFamily::FullSO3: {
            // Fibonacci points on the orbit sphere; any rotation taking x there will do.
            const Eigen::Vector3d v = x.coords().head<3>();
            const double rho = v.norm();
            if (rho < 1e-12) return base.predict(x);
            m = count(4.0 * M_PI * rho * rho / (spacing * spacing));
            const double golden = M_PI * (3.0 - std::sqrt(5.0));
            for (int k = 0; k < m; ++k) {
                const double z = 1.0 - (2.0 * k + 1.0) / m;
                const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
                const Eigen::Vector3d p(s * std::cos(golden * k), s * std::sin(golden * k), z);
                sum += base.predict(act(Rotation::between(v, p), x));
            }
            break;
        }
        case SubgroupFamily::TorusLine: {
            m = count(std::hypot(g.line_p(), g.line_q()) / spacing);
            for (int k = 0; k < m; ++k) {
                Coords s(2);
                const double t = static_cast<double>(k) / m;
                s << t * g.line_p(), t * g.line_q();
                sum += base.predict(act(TorusShift{s}, x));
            }
            break;
        }
        case SubgroupFamily::FullTorus: {
            const int d = g.parent().dim, per = count(1.0 / spacing);
            m = 1;
            for (int i = 0; i < d; ++i) m *= per;
            for (int k = 0; k < m; ++k) {
                Coords s(d);
                for (int i = 0, rest = k; i < d; ++i, rest /= per) s[i] = static_cast<double>(rest % per) / per;
                sum += base.predict(act(TorusShift{s}, x));
            }
            break;
        }
        case SubgroupFamily::AxisTranslations: break;
    }
    return sum / m;
}

OrbitGridCache::OrbitGridCache(ClosedSubgroup g, double bandwidth, CompactNeighborhood u, double quantum)
    : group_(std::move(g)), h_(bandwidth), u_(u), quantum_(quantum) {
    if (!(quantum_ > 0.0)) throw DomainError("grid cache quantum must be positive");
}

const OrbitGrid& OrbitGridCache::grid_for(const Point& x) {
    std::vector<long long> key;
    key.reserve(static_cast<std::size_t>(x.dim()));
    for (int i = 0; i < x.dim(); ++i) key.push_back(std::llround(x[i] / quantum_));
    auto it = grids_.find(key);
    if (it == grids_.end()) it = grids_.emplace(std::move(key), build_orbit_grid(x, group_, h_, u_)).first;
    return it->second;
}

}  // namespace symreg
