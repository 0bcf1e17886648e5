#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symreg/group.hpp"

namespace symreg {

enum class ParentKind { SO3, Torus, BoxTranslations };

/// The ambient symmetry group searched over.
struct ParentGroup {
    ParentKind kind = ParentKind::SO3;
    int dim = 3;

    static ParentGroup so3() { return {ParentKind::SO3, 3}; }
    static ParentGroup torus(int d) { return {ParentKind::Torus, d}; }
    static ParentGroup box_translations(int d) { return {ParentKind::BoxTranslations, d}; }

    /// Dimension of a principal orbit of the whole group.
    int max_orbit_dim() const { return kind == ParentKind::SO3 ? 2 : dim; }
    bool acts_on(const CovariateSpace& space) const;
    bool is_compact() const { return kind != ParentKind::BoxTranslations; }
    std::string name() const;

    bool operator==(const ParentGroup&) const = default;
};

/// The group that naturally acts on `space` (SO(3) on ball/sphere, translations otherwise).
ParentGroup natural_parent(const CovariateSpace& space);

GroupElement identity(const ParentGroup& parent);

enum class SubgroupFamily { Trivial, Circle3, FullSO3, TorusLine, FullTorus, AxisTranslations };

/// A closed connected subgroup from the fixed catalog:
///   Trivial, S^1_u (rotations about axis u), SO(3), the closed line through the
///   origin of T^2 with primitive direction (p,q), the full torus, and the
///   coordinate-axis translation subgroups of R^d selected by a bit mask.
/// Parameters are canonical: axes have a positive leading coordinate, line
/// directions are coprime with a positive leading entry, mask 0 is Trivial.
class ClosedSubgroup {
public:
    static ClosedSubgroup trivial(const ParentGroup& parent);
    static ClosedSubgroup circle(const Eigen::Vector3d& axis);
    static ClosedSubgroup full_so3();
    static ClosedSubgroup torus_line(int p, int q);
    static ClosedSubgroup full_torus(int d);
    static ClosedSubgroup axis_translations(int d, unsigned mask);

    SubgroupFamily family() const noexcept { return family_; }
    const ParentGroup& parent() const noexcept { return parent_; }
    const Eigen::Vector3d& axis() const noexcept { return axis_; }
    int line_p() const noexcept { return p_; }
    int line_q() const noexcept { return q_; }
    unsigned mask() const noexcept { return mask_; }

    bool is_compact() const { return family_ != SubgroupFamily::AxisTranslations; }

    /// Catalog line: family name followed by its parameters, round-trippable by parse().
    std::string label() const;
    static ClosedSubgroup parse(std::string_view line);

    bool operator==(const ClosedSubgroup& other) const;

private:
    ClosedSubgroup(SubgroupFamily f, ParentGroup parent) : family_(f), parent_(parent) {}

    SubgroupFamily family_;
    ParentGroup parent_;
    Eigen::Vector3d axis_ = Eigen::Vector3d::Zero();
    int p_ = 0;
    int q_ = 0;
    unsigned mask_ = 0;
};

/// Total order on subgroups used for deterministic tie-breaking: family, then parameters.
bool canonical_less(const ClosedSubgroup& a, const ClosedSubgroup& b);

/// Dimension d^G of a principal orbit of G acting on `space`.
int orbit_dimension(const ClosedSubgroup& g, const CovariateSpace& space);

/// Compact neighbourhood U of the identity used to truncate non-compact subgroups.
struct CompactNeighborhood {
    enum class Kind { WholeGroup, Cube };
    Kind kind = Kind::WholeGroup;
    double radius = 0.0;

    static CompactNeighborhood whole_group() { return {Kind::WholeGroup, 0.0}; }
    static CompactNeighborhood cube(double radius);
};

/// U = G for compact parents, U = [-1,1]^d for translations of R^d.
CompactNeighborhood default_neighborhood(const ParentGroup& parent);

/// Haar-uniform draw from a compact subgroup.
GroupElement sample_group(const ClosedSubgroup& g, Rng& rng);

/// A finite subset of G ∩ U such that every element of G ∩ U is within `eps`
/// of it under group_distance. Deterministic.
std::vector<GroupElement> subgroup_net(const ClosedSubgroup& g, const CompactNeighborhood& u, double eps);

/// Hausdorff distance between two finite sets of group elements.
double net_hausdorff(std::span<const GroupElement> a, std::span<const GroupElement> b);

/// d_Haus(U)(G, H) computed on eps-nets of G ∩ U and H ∩ U; within 2 eps of the exact value.
double hausdorff_U_distance(const ClosedSubgroup& g, const ClosedSubgroup& h, const CompactNeighborhood& u, double eps);

/// Finite cover of the catalog subgroups of `parent`, stratified by orbit dimension.
///  - SO(3): Trivial, SO(3) and the circles S^1_u whose axes come from a regular
///    (theta, phi) grid with spacing delta/pi, antipodes merged.
///  - T^2: Trivial, T^2 and the lines hit when the angle grids 360 i / J,
///    J = 1..ceil(360 / (sqrt(2) delta)), are snapped to the nearest closed line
///    with max(|p|,|q|) <= ceil(1/delta).
///  - T^1: Trivial and T^1.
///  - translations of R^d: every coordinate-axis subgroup.
/// Output is sorted by canonical_less.
std::vector<ClosedSubgroup> delta_cover(const ParentGroup& parent, double delta);

/// delta_n = L_G^-1 (phi / (2 L^2))^(1 / (2 min(beta,1))) with
/// phi = n^(-2 beta / (2 beta + d - d_max)).
double delta_schedule(double n, double beta, int d, int d_max, double lipschitz, double lipschitz_group);

/// One label() per line.
std::string format_catalog(std::span<const ClosedSubgroup> cover);
std::vector<ClosedSubgroup> parse_catalog(std::string_view text);

}  // namespace symreg
