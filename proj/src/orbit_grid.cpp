#include "symreg/orbit_grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "symreg/errors.hpp"

namespace symreg {

namespace {

constexpr double kOrbitTol = 1e-9;
constexpr double kSingularTol = 1e-12;

Eigen::Vector3d vec3(const Point& x) { return {x[0], x[1], x[2]}; }

// Unit vector orthogonal to a (|a| = 1).
Eigen::Vector3d orthogonal(const Eigen::Vector3d& a) {
    const Eigen::Vector3d ref = std::abs(a.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    return a.cross(ref).normalized();
}

// floor(R/2h)+1 offsets spaced 2h and symmetric about zero; a single 0 when 2h >= R.
std::vector<double> lattice_offsets(double side, double h) {
    if (!(side > 2.0 * h)) return {0.0};
    const int k = static_cast<int>(std::floor(side / (2.0 * h)));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k + 1));
    for (int i = 0; i <= k; ++i) out.push_back((i - 0.5 * k) * 2.0 * h);
    return out;
}

// Calls fn(offset vector) for every point of the dim-fold product lattice.
template <class Fn>
void for_each_lattice_point(const std::vector<double>& axis, int dim, Fn&& fn) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> t(static_cast<std::size_t>(dim));
    for (;;) {
        for (int i = 0; i < dim; ++i) t[static_cast<std::size_t>(i)] = axis[idx[static_cast<std::size_t>(i)]];
        fn(t);
        int i = 0;
        while (i < dim && ++idx[static_cast<std::size_t>(i)] == axis.size()) idx[static_cast<std::size_t>(i++)] = 0;
        if (i == dim) return;
    }
}

struct CircleFrame {
    Eigen::Vector3d center, e1, e2;
    double radius;
};

CircleFrame circle_frame(const Eigen::Vector3d& x, const Eigen::Vector3d& u) {
    CircleFrame f;
    f.center = x.dot(u) * u;
    const Eigen::Vector3d radial = x - f.center;
    f.radius = radial.norm();
    f.e1 = f.radius > kSingularTol ? Eigen::Vector3d(radial / f.radius) : orthogonal(u);
    f.e2 = u.cross(f.e1);
    return f;
}

std::vector<int> moved_axes(const ClosedSubgroup& g) {
    std::vector<int> axes;
    for (int i = 0; i < g.parent().dim; ++i)
        if (g.mask() >> i & 1u) axes.push_back(i);
    return axes;
}

}  // namespace

double hypercube_side(const Point& x, const ClosedSubgroup& g, const CompactNeighborhood& u) {
    const CovariateSpace& space = x.space();
    orbit_dimension(g, space);  // validates the pairing
    switch (g.family()) {
        case SubgroupFamily::Trivial: return 1.0;
        case SubgroupFamily::FullSO3: return std::sqrt(2.0) * vec3(x).norm();
        case SubgroupFamily::Circle3: return 2.0 * circle_frame(vec3(x), g.axis()).radius;
        case SubgroupFamily::TorusLine: {
            const double p = std::abs(g.line_p()), q = std::abs(g.line_q());
            return std::hypot(p, q) / (2.0 * std::max(p, q));
        }
        case SubgroupFamily::FullTorus: return 0.5;
        case SubgroupFamily::AxisTranslations: {
            if (u.kind != CompactNeighborhood::Kind::Cube)
                throw DomainError("translation subgroups need a cube neighbourhood");
            double side = 2.0 * u.radius;
            for (int a : moved_axes(g)) side = std::min(side, 0.5 * space.side(a));
            return side;
        }
    }
    return 1.0;
}

OrbitGrid build_orbit_grid(const Point& x, const ClosedSubgroup& g, double h, const CompactNeighborhood& u) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("orbit grid bandwidth must be positive");
    const CovariateSpace& space = x.space();
    OrbitGrid grid{x, g, h, {}, hypercube_side(x, g, u), orbit_dimension(g, space), false};
    const GroupElement id = identity(g.parent());

    switch (g.family()) {
        case SubgroupFamily::Trivial: grid.elements.push_back(id); break;

        case SubgroupFamily::Circle3: {
            const CircleFrame f = circle_frame(vec3(x), g.axis());
            if (f.radius <= kSingularTol) {
                grid.singular = true;
                grid.elements.push_back(id);
                break;
            }
            for (double t : lattice_offsets(grid.hypercube_side, h)) {
                const double t_clamped = std::clamp(t, -f.radius, f.radius);
                const double along = std::sqrt(std::max(0.0, f.radius * f.radius - t_clamped * t_clamped));
                grid.elements.emplace_back(Rotation::about(g.axis(), std::atan2(t_clamped, along)));
            }
            break;
        }

        case SubgroupFamily::FullSO3: {
            const Eigen::Vector3d v = vec3(x);
            const double rho = v.norm();
            if (rho <= kSingularTol) {
                grid.singular = true;
                grid.elements.push_back(id);
                break;
            }
            const Eigen::Vector3d dir = v / rho;
            const Eigen::Vector3d e1 = orthogonal(dir);
            const Eigen::Vector3d e2 = dir.cross(e1);
            for_each_lattice_point(lattice_offsets(grid.hypercube_side, h), 2, [&](const std::vector<double>& t) {
                const Eigen::Vector3d w = t[0] * e1 + t[1] * e2;
                const double normal = std::sqrt(std::max(0.0, rho * rho - w.squaredNorm()));
                const Eigen::Vector3d target = normal * dir + w;
                grid.elements.emplace_back(Rotation::between(dir, target));
            });
            break;
        }

        case SubgroupFamily::TorusLine: {
            const Eigen::Vector2d dir = Eigen::Vector2d(g.line_p(), g.line_q()).normalized();
            for (double t : lattice_offsets(grid.hypercube_side, h)) {
                Coords s(2);
                s << t * dir.x(), t * dir.y();
                grid.elements.emplace_back(TorusShift{s});
            }
            break;
        }

        case SubgroupFamily::FullTorus: {
            const int d = g.parent().dim;
            for_each_lattice_point(lattice_offsets(grid.hypercube_side, h), d, [&](const std::vector<double>& t) {
                Coords s(d);
                for (int i = 0; i < d; ++i) s[i] = t[static_cast<std::size_t>(i)];
                grid.elements.emplace_back(TorusShift{s});
            });
            break;
        }

        case SubgroupFamily::AxisTranslations: {
            const auto axes = moved_axes(g);
            const int d = g.parent().dim;
            for_each_lattice_point(lattice_offsets(grid.hypercube_side, h), static_cast<int>(axes.size()),
                                   [&](const std::vector<double>& t) {
                                       Coords s = Coords::Zero(d);
                                       for (std::size_t a = 0; a < axes.size(); ++a) s[axes[a]] = t[a];
                                       grid.elements.emplace_back(BoxTranslation{s});
                                   });
            break;
        }
    }
    return grid;
}

GroupElement recover_group_element(const Point& x, const Point& target, const ClosedSubgroup& g) {
    if (!(x.space() == target.space())) throw IncompatibleError("recover_group_element across different spaces");
    orbit_dimension(g, x.space());
    switch (g.family()) {
        case SubgroupFamily::Trivial: {
            const double dev = space_distance(x, target);
            if (dev > kOrbitTol) throw OffOrbitError("target is not x under the trivial group", dev);
            return identity(g.parent());
        }
        case SubgroupFamily::FullSO3: {
            const Eigen::Vector3d a = vec3(x), b = vec3(target);
            const double dev = std::abs(a.norm() - b.norm());
            if (dev > kOrbitTol) throw OffOrbitError("target is off the SO(3) orbit", dev);
            if (a.norm() <= kSingularTol) return Rotation{};
            return Rotation::between(a, b);
        }
        case SubgroupFamily::Circle3: {
            const CircleFrame fa = circle_frame(vec3(x), g.axis());
            const CircleFrame fb = circle_frame(vec3(target), g.axis());
            const double dev = std::max((fa.center - fb.center).norm(), std::abs(fa.radius - fb.radius));
            if (dev > kOrbitTol) throw OffOrbitError("target is off the circle orbit", dev);
            if (fa.radius <= kSingularTol) return Rotation{};
            const double angle = std::atan2(fa.e1.cross(fb.e1).dot(g.axis()), fa.e1.dot(fb.e1));
            return Rotation::about(g.axis(), angle);
        }
        case SubgroupFamily::TorusLine: {
            Coords s(2);
            s << wrap_unit(target[0] - x[0]), wrap_unit(target[1] - x[1]);
            const int p = g.line_p(), q = g.line_q();
            double best = 1e300;
            auto gap = [](double v) {
                const double w = wrap_unit(v);
                return std::min(w, 1.0 - w);
            };
            if (p == 0) {
                best = gap(s[0]);
            } else {
                for (int k = 0; k < p; ++k) {
                    const double tau = (s[0] + k) / p;
                    best = std::min(best, gap(tau * q - s[1]));
                }
            }
            // Residual measured perpendicular to the line is at most the coordinate gap.
            if (best > kOrbitTol) throw OffOrbitError("target is off the torus line orbit", best);
            return TorusShift{s};
        }
        case SubgroupFamily::FullTorus: {
            Coords s(x.dim());
            for (int i = 0; i < x.dim(); ++i) s[i] = wrap_unit(target[i] - x[i]);
            return TorusShift{s};
        }
        case SubgroupFamily::AxisTranslations: {
            Coords t(x.dim());
            double dev = 0.0;
            for (int i = 0; i < x.dim(); ++i) {
                const double diff = wrap_centered(target[i] - x[i], x.space().side(i));
                if (g.mask() >> i & 1u) t[i] = diff;
                else {
                    t[i] = 0.0;
                    dev = std::max(dev, std::abs(diff));
                }
            }
            if (dev > kOrbitTol) throw OffOrbitError("target moves a coordinate fixed by the subgroup", dev);
            return BoxTranslation{t};
        }
    }
    throw DomainError("unknown subgroup family");
}

}  // namespace symreg
