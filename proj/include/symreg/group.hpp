#pragma once

#include <variant>

#include <Eigen/Geometry>

#include "symreg/space.hpp"

namespace symreg {

/// A 3D rotation stored as a unit quaternion. q and -q describe the same
/// rotation; the stored representative has a nonnegative scalar part.
class Rotation {
public:
    Rotation() : q_(Eigen::Quaterniond::Identity()) {}

    /// Throws DomainError unless | ||q|| - 1 | <= 1e-12.
    static Rotation from_quaternion(const Eigen::Quaterniond& q);

    /// Right-handed rotation by `angle` radians about `axis` (normalised here).
    static Rotation about(const Eigen::Vector3d& axis, double angle);

    /// Minimal-angle rotation taking direction `from` onto direction `to`.
    static Rotation between(const Eigen::Vector3d& from, const Eigen::Vector3d& to);

    const Eigen::Quaterniond& quaternion() const noexcept { return q_; }

    /// Rotation angle in [0, pi].
    double angle() const;

    Eigen::Vector3d apply(const Eigen::Vector3d& v) const { return q_ * v; }
    Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }

    Rotation operator*(const Rotation& other) const;
    Rotation inverse() const;

private:
    explicit Rotation(const Eigen::Quaterniond& q);

    Eigen::Quaterniond q_;
};

/// Translation of the torus, coordinates kept in [0,1).
struct TorusShift {
    Coords shift;
};

/// Translation of R^d acting on a box by wrap-around.
struct BoxTranslation {
    Coords offset;
};

class GroupElement {
public:
    using Variant = std::variant<Rotation, TorusShift, BoxTranslation>;

    GroupElement(Rotation r) : v_(std::move(r)) {}
    GroupElement(TorusShift s);
    GroupElement(BoxTranslation t) : v_(std::move(t)) {}

    static GroupElement rotation(const Eigen::Vector3d& axis, double angle) {
        return Rotation::about(axis, angle);
    }
    static GroupElement torus_shift(Coords shift) { return TorusShift{std::move(shift)}; }
    static GroupElement box_translation(Coords offset) { return BoxTranslation{std::move(offset)}; }

    /// Identity of the same variant and dimension as `g`.
    static GroupElement identity_like(const GroupElement& g);

    const Variant& variant() const noexcept { return v_; }
    bool is_rotation() const noexcept { return std::holds_alternative<Rotation>(v_); }
    const Rotation& as_rotation() const { return std::get<Rotation>(v_); }

private:
    Variant v_;
};

/// g . x. Rotations act on ball3/sphere2, torus shifts on the torus, box
/// translations on a box (wrap-around).
Point act(const GroupElement& g, const Point& x);

/// Group product gh, so that act(compose(g,h), x) == act(g, act(h, x)).
GroupElement compose(const GroupElement& g, const GroupElement& h);

GroupElement inverse(const GroupElement& g);

/// Bi-invariant distance: rotation angle of g^-1 h for SO(3), wrap-around
/// Euclidean distance on the torus, Euclidean distance for translations.
double group_distance(const GroupElement& g, const GroupElement& h);

}  // namespace symreg
