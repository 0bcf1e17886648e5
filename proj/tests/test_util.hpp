#pragma once

#include <cmath>
#include <numbers>

#include "symreg/group.hpp"
#include "symreg/space.hpp"

namespace testutil {

inline constexpr double kPi = std::numbers::pi;

inline symreg::Point ball(double x, double y, double z) {
    symreg::Coords c(3);
    c << x, y, z;
    return symreg::Point(symreg::CovariateSpace::unit_ball(), c);
}

inline symreg::Point sphere(double x, double y, double z) {
    symreg::Coords c(3);
    c << x, y, z;
    return symreg::Point(symreg::CovariateSpace::unit_sphere(), c);
}

inline symreg::Point torus2(double x, double y) {
    symreg::Coords c(2);
    c << x, y;
    return symreg::Point(symreg::CovariateSpace::torus(2), c);
}

inline symreg::Coords vec(std::initializer_list<double> v) {
    symreg::Coords c(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) c[i++] = x;
    return c;
}

inline double max_abs_diff(const symreg::Coords& a, const symreg::Coords& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testutil
