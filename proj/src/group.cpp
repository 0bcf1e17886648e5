#include "symreg/group.hpp"

#include <cmath>

#include "symreg/errors.hpp"

namespace symreg {

namespace {

constexpr double kUnitTol = 1e-12;

Eigen::Quaterniond canonical(Eigen::Quaterniond q) {
    bool flip = q.w() < 0.0;
    if (q.w() == 0.0) {
        const double lead = q.x() != 0.0 ? q.x() : (q.y() != 0.0 ? q.y() : q.z());
        flip = lead < 0.0;
    }
    if (flip) q.coeffs() = -q.coeffs();
    return q;
}

template <class T>
const T& expect(const GroupElement& g, const char* what) {
    const T* p = std::get_if<T>(&g.variant());
    if (!p) throw IncompatibleError(std::string("group element variant mismatch in ") + what);
    return *p;
}

void check_dims(const Coords& a, const Coords& b, const char* what) {
    if (a.size() != b.size()) throw IncompatibleError(std::string("dimension mismatch in ") + what);
}

}  // namespace

Rotation::Rotation(const Eigen::Quaterniond& q) : q_(canonical(q)) {}

Rotation Rotation::from_quaternion(const Eigen::Quaterniond& q) {
    const double n = q.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitTol)
        throw DomainError("rotation quaternion must have unit norm, got " + std::to_string(n));
    return Rotation(q.normalized());
}

Rotation Rotation::about(const Eigen::Vector3d& axis, double angle) {
    const double n = axis.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("rotation axis must be nonzero");
    return Rotation(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis / n)));
}

Rotation Rotation::between(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
    const Eigen::Vector3d a = from.normalized(), b = to.normalized();
    const Eigen::Vector3d c = a.cross(b);
    const double s = c.norm();
    const double angle = std::atan2(s, a.dot(b));
    if (s > 1e-15) return about(c, angle);
    if (a.dot(b) > 0.0) return Rotation{};
    // Antiparallel: any axis orthogonal to a works; take the most stable one.
    Eigen::Vector3d ref = std::abs(a.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    return about(a.cross(ref), M_PI);
}

double Rotation::angle() const {
    return 2.0 * std::atan2(q_.vec().norm(), std::abs(q_.w()));
}

Rotation Rotation::operator*(const Rotation& other) const {
    return Rotation((q_ * other.q_).normalized());
}

Rotation Rotation::inverse() const { return Rotation(q_.conjugate()); }

GroupElement::GroupElement(TorusShift s) {
    for (int i = 0; i < s.shift.size(); ++i) s.shift[i] = wrap_unit(s.shift[i]);
    v_ = std::move(s);
}

GroupElement GroupElement::identity_like(const GroupElement& g) {
    return std::visit(
        [](const auto& e) -> GroupElement {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Rotation>) return Rotation{};
            else if constexpr (std::is_same_v<T, TorusShift>) return TorusShift{Coords::Zero(e.shift.size())};
            else return BoxTranslation{Coords::Zero(e.offset.size())};
        },
        g.variant());
}

Point act(const GroupElement& g, const Point& x) {
    const CovariateSpace& space = x.space();
    return std::visit(
        [&](const auto& e) -> Point {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Rotation>) {
                if (space.kind() != SpaceKind::UnitBall3 && space.kind() != SpaceKind::UnitSphere2)
                    throw IncompatibleError("rotations act on ball3/sphere2, not " + space.name());
                Eigen::Vector3d v = e.apply(Eigen::Vector3d(x[0], x[1], x[2]));
                Coords c(3);
                c << v.x(), v.y(), v.z();
                if (space.kind() == SpaceKind::UnitSphere2) c /= c.norm();
                return Point::unchecked(space, std::move(c));
            } else if constexpr (std::is_same_v<T, TorusShift>) {
                if (space.kind() != SpaceKind::Torus)
                    throw IncompatibleError("torus shifts act on the torus, not " + space.name());
                check_dims(e.shift, x.coords(), "act");
                return Point::unchecked(space, space.wrap(x.coords() + e.shift));
            } else {
                if (space.kind() != SpaceKind::Box)
                    throw IncompatibleError("box translations act on a box, not " + space.name());
                check_dims(e.offset, x.coords(), "act");
                return Point::unchecked(space, space.wrap(x.coords() + e.offset));
            }
        },
        g.variant());
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    return std::visit(
        [&](const auto& e) -> GroupElement {
            using T = std::decay_t<decltype(e)>;
            const T& f = expect<T>(h, "compose");
            if constexpr (std::is_same_v<T, Rotation>) {
                return e * f;
            } else if constexpr (std::is_same_v<T, TorusShift>) {
                check_dims(e.shift, f.shift, "compose");
                return TorusShift{e.shift + f.shift};
            } else {
                check_dims(e.offset, f.offset, "compose");
                return BoxTranslation{e.offset + f.offset};
            }
        },
        g.variant());
}

GroupElement inverse(const GroupElement& g) {
    return std::visit(
        [](const auto& e) -> GroupElement {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, Rotation>) return e.inverse();
            else if constexpr (std::is_same_v<T, TorusShift>) return TorusShift{-e.shift};
            else return BoxTranslation{-e.offset};
        },
        g.variant());
}

double group_distance(const GroupElement& g, const GroupElement& h) {
    return std::visit(
        [&](const auto& e) -> double {
            using T = std::decay_t<decltype(e)>;
            const T& f = expect<T>(h, "group_distance");
            if constexpr (std::is_same_v<T, Rotation>) {
                const Eigen::Quaterniond rel = e.quaternion().conjugate() * f.quaternion();
                return 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
            } else if constexpr (std::is_same_v<T, TorusShift>) {
                check_dims(e.shift, f.shift, "group_distance");
                double s = 0.0;
                for (int i = 0; i < e.shift.size(); ++i) {
                    double d = std::abs(e.shift[i] - f.shift[i]);
                    d = std::min(d, 1.0 - d);
                    s += d * d;
                }
                return std::sqrt(s);
            } else {
                check_dims(e.offset, f.offset, "group_distance");
                return (e.offset - f.offset).norm();
            }
        },
        g.variant());
}

}  // namespace symreg
