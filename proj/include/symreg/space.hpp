#pragma once

#include <array>
#include <span>
#include <string>

#include <Eigen/Core>

#include "symreg/rng.hpp"

namespace symreg {

/// Largest ambient dimension supported by the fixed-capacity coordinate type.
inline constexpr int kMaxDim = 8;

/// Ambient coordinates; heap-free up to kMaxDim entries.
using Coords = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

enum class SpaceKind { UnitBall3, UnitSphere2, Torus, Box };

/// The covariate domain together with its metric and membership predicate.
///  - UnitBall3:   closed unit ball in R^3, Euclidean distance
///  - UnitSphere2: unit sphere in R^3, great-circle distance
///  - Torus(d):    [0,1)^d with wrap-around Euclidean distance
///  - Box(d):      [0,s_1) x ... x [0,s_d), Euclidean distance
class CovariateSpace {
public:
    static CovariateSpace unit_ball();
    static CovariateSpace unit_sphere();
    static CovariateSpace torus(int d);
    static CovariateSpace box(std::span<const double> sides);

    SpaceKind kind() const noexcept { return kind_; }
    int ambient_dim() const noexcept { return dim_; }
    int intrinsic_dim() const noexcept { return kind_ == SpaceKind::UnitSphere2 ? 2 : dim_; }
    /// Period of coordinate i (1 on the torus, the side length on a box).
    double side(int i) const { return sides_.at(static_cast<std::size_t>(i)); }

    bool contains(const Coords& c) const;

    /// Maps coordinates back into the fundamental domain (torus/box wrap,
    /// sphere renormalisation). Identity for the ball.
    Coords wrap(Coords c) const;

    /// Short identifier: ball3, sphere2, torus<d>, box<d>.
    std::string name() const;

    bool operator==(const CovariateSpace&) const = default;

private:
    CovariateSpace(SpaceKind kind, int dim);

    SpaceKind kind_;
    int dim_;
    std::array<double, kMaxDim> sides_{};
};

/// An element of a covariate space. Construction validates membership.
class Point {
public:
    Point(const CovariateSpace& space, Coords coords);

    /// Skips the membership check (used for ambient Gaussian draws in oracles).
    static Point unchecked(const CovariateSpace& space, Coords coords);

    const CovariateSpace& space() const noexcept { return space_; }
    const Coords& coords() const noexcept { return coords_; }
    double operator[](int i) const { return coords_[i]; }
    int dim() const noexcept { return static_cast<int>(coords_.size()); }

private:
    struct Unchecked {};
    Point(const CovariateSpace& space, Coords coords, Unchecked)
        : space_(space), coords_(std::move(coords)) {}

    CovariateSpace space_;
    Coords coords_;
};

/// Wraps a real number into [0, 1).
double wrap_unit(double v);

/// Wraps a real number into [-period/2, period/2).
double wrap_centered(double v, double period);

/// Riemannian distance between two points of the same space.
double space_distance(const Point& x, const Point& y);

/// Unchecked distance on raw ambient coordinates of `space`.
double raw_distance(const CovariateSpace& space, const double* a, const double* b);

enum class PointLaw { UniformSpace, Gaussian3 };

/// Draws one point. UniformSpace is uniform on the space (ball radius law
/// ||X|| = z^{1/3}); Gaussian3 is N(0, I_3) in ambient R^3 and is only
/// defined for the ball, returned unchecked.
Point sample_point(const CovariateSpace& space, PointLaw law, Rng& rng);

}  // namespace symreg
