#include "symreg/space.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "symreg/errors.hpp"

namespace symreg {

namespace {

constexpr double kSphereTol = 1e-12;
constexpr double kBallTol = 1e-12;

Eigen::Vector3d as_vec3(const double* a) { return {a[0], a[1], a[2]}; }

}  // namespace

CovariateSpace::CovariateSpace(SpaceKind kind, int dim) : kind_(kind), dim_(dim) {
    sides_.fill(1.0);
}

CovariateSpace CovariateSpace::unit_ball() { return {SpaceKind::UnitBall3, 3}; }

CovariateSpace CovariateSpace::unit_sphere() { return {SpaceKind::UnitSphere2, 3}; }

CovariateSpace CovariateSpace::torus(int d) {
    if (d < 1 || d > kMaxDim) throw DomainError("torus dimension must be in [1, 8], got " + std::to_string(d));
    return {SpaceKind::Torus, d};
}

CovariateSpace CovariateSpace::box(std::span<const double> sides) {
    const int d = static_cast<int>(sides.size());
    if (d < 1 || d > kMaxDim) throw DomainError("box dimension must be in [1, 8], got " + std::to_string(d));
    CovariateSpace s{SpaceKind::Box, d};
    for (int i = 0; i < d; ++i) {
        if (!(sides[static_cast<std::size_t>(i)] > 0.0) || !std::isfinite(sides[static_cast<std::size_t>(i)]))
            throw DomainError("box side lengths must be positive and finite");
        s.sides_[static_cast<std::size_t>(i)] = sides[static_cast<std::size_t>(i)];
    }
    return s;
}

bool CovariateSpace::contains(const Coords& c) const {
    if (c.size() != dim_) return false;
    if (!c.allFinite()) return false;
    switch (kind_) {
        case SpaceKind::UnitBall3: return c.norm() <= 1.0 + kBallTol;
        case SpaceKind::UnitSphere2: return std::abs(c.norm() - 1.0) <= kSphereTol;
        case SpaceKind::Torus:
        case SpaceKind::Box:
            for (int i = 0; i < dim_; ++i)
                if (c[i] < 0.0 || c[i] >= side(i)) return false;
            return true;
    }
    return false;
}

Coords CovariateSpace::wrap(Coords c) const {
    switch (kind_) {
        case SpaceKind::UnitBall3: break;
        case SpaceKind::UnitSphere2: c /= c.norm(); break;
        case SpaceKind::Torus:
            for (int i = 0; i < dim_; ++i) c[i] = wrap_unit(c[i]);
            break;
        case SpaceKind::Box:
            for (int i = 0; i < dim_; ++i) {
                const double s = side(i);
                double v = c[i] - s * std::floor(c[i] / s);
                if (v >= s) v = 0.0;
                c[i] = v;
            }
            break;
    }
    return c;
}

std::string CovariateSpace::name() const {
    switch (kind_) {
        case SpaceKind::UnitBall3: return "ball3";
        case SpaceKind::UnitSphere2: return "sphere2";
        case SpaceKind::Torus: return "torus" + std::to_string(dim_);
        case SpaceKind::Box: return "box" + std::to_string(dim_);
    }
    return "unknown";
}

Point::Point(const CovariateSpace& space, Coords coords) : space_(space), coords_(std::move(coords)) {
    if (!space_.contains(coords_))
        throw DomainError("point is not a member of " + space_.name());
    if (space_.kind() == SpaceKind::UnitSphere2) coords_ /= coords_.norm();
}

Point Point::unchecked(const CovariateSpace& space, Coords coords) {
    return Point(space, std::move(coords), Unchecked{});
}

double wrap_unit(double v) {
    double w = v - std::floor(v);
    if (w >= 1.0) w = 0.0;
    return w;
}

double wrap_centered(double v, double period) {
    double w = v - period * std::floor(v / period + 0.5);
    if (w >= 0.5 * period) w -= period;
    return w;
}

double raw_distance(const CovariateSpace& space, const double* a, const double* b) {
    switch (space.kind()) {
        case SpaceKind::UnitBall3: {
            const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
            return std::sqrt(dx * dx + dy * dy + dz * dz);
        }
        case SpaceKind::UnitSphere2: {
            const Eigen::Vector3d u = as_vec3(a), v = as_vec3(b);
            return std::atan2(u.cross(v).norm(), u.dot(v));
        }
        case SpaceKind::Torus: {
            double s = 0.0;
            for (int i = 0; i < space.ambient_dim(); ++i) {
                double d = std::abs(a[i] - b[i]);
                d = std::min(d, 1.0 - d);
                s += d * d;
            }
            return std::sqrt(s);
        }
        case SpaceKind::Box: {
            double s = 0.0;
            for (int i = 0; i < space.ambient_dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(s);
        }
    }
    return 0.0;
}

double space_distance(const Point& x, const Point& y) {
    if (!(x.space() == y.space()))
        throw IncompatibleError("space_distance between " + x.space().name() + " and " + y.space().name());
    return raw_distance(x.space(), x.coords().data(), y.coords().data());
}

Point sample_point(const CovariateSpace& space, PointLaw law, Rng& rng) {
    if (law == PointLaw::Gaussian3) {
        if (space.kind() != SpaceKind::UnitBall3)
            throw DomainError("Gaussian3 sampling is only defined on ambient R^3 (ball3)");
        Coords c(3);
        for (int i = 0; i < 3; ++i) c[i] = rng.gaussian();
        return Point::unchecked(space, std::move(c));
    }
    switch (space.kind()) {
        case SpaceKind::UnitBall3:
        case SpaceKind::UnitSphere2: {
            Coords c(3);
            double n2;
            do {
                for (int i = 0; i < 3; ++i) c[i] = rng.gaussian();
                n2 = c.squaredNorm();
            } while (n2 == 0.0);
            c /= std::sqrt(n2);
            if (space.kind() == SpaceKind::UnitBall3) c *= std::cbrt(rng.uniform());
            return Point(space, std::move(c));
        }
        case SpaceKind::Torus:
        case SpaceKind::Box: {
            Coords c(space.ambient_dim());
            for (int i = 0; i < space.ambient_dim(); ++i) {
                double v = space.side(i) * rng.uniform();
                if (v >= space.side(i)) v = 0.0;
                c[i] = v;
            }
            return Point(space, std::move(c));
        }
    }
    throw DomainError("unsupported space for sampling");
}

}  // namespace symreg
