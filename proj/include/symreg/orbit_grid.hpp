#pragma once

#include <vector>

#include "symreg/subgroup.hpp"

namespace symreg {

/// The finite symmetrising set {g_i} for a base point x, subgroup G and bandwidth h.
/// The orbit points g_i . x are pairwise at least 2h apart and there are at least
/// max(1, (R / 2h)^{d^G}) of them, where R is `hypercube_side`.
struct OrbitGrid {
    Point base;
    ClosedSubgroup group;
    double bandwidth = 0.0;
    std::vector<GroupElement> elements;
    double hypercube_side = 0.0;
    int orbit_dim = 0;
    /// Set when x is fixed by all of G (e.g. x = 0 under rotations, x on the
    /// axis of a circle subgroup); the grid is then {identity}.
    bool singular = false;

    std::size_t m() const noexcept { return elements.size(); }
};

/// Side length R of the largest cube inside the orthogonal projection of the
/// orbit patch [x]_U onto its tangent space at x:
///   Trivial: 1            SO(3): sqrt(2) ||x||       S^1_u: 2 dist(x, axis)
///   T^2 line (p,q): sqrt(p^2+q^2) / (2 max(|p|,|q|))  T^d: 1/2
///   axis translations: min(2 r_U, min over moved axes of side/2)
/// On the torus and box the orbit closes up; R is the longest stretch along which
/// the wrap-around distance equals the tangent distance.
double hypercube_side(const Point& x, const ClosedSubgroup& g, const CompactNeighborhood& u);

/// Builds the grid: a 2h-spaced lattice centred at the origin of the tangent cube
/// of side R (floor(R/2h)+1 points per axis, symmetric about x), projected
/// orthogonally onto the sheet of the orbit containing x, then lifted to group
/// elements (minimal-angle rotation where the stabiliser leaves a choice).
/// h >= R/2 or a singular base point gives the single-element grid {identity}.
OrbitGrid build_orbit_grid(const Point& x, const ClosedSubgroup& g, double h, const CompactNeighborhood& u);

/// A group element of G carrying x to `target`. Throws OffOrbitError when
/// target is further than 1e-9 from the orbit.
GroupElement recover_group_element(const Point& x, const Point& target, const ClosedSubgroup& g);

}  // namespace symreg
