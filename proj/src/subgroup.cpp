#include "symreg/subgroup.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "symreg/errors.hpp"
#include "symreg/format.hpp"

namespace symreg {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Eigen::Vector3d canonical_axis(Eigen::Vector3d u) {
    const double n = u.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("circle axis must be nonzero");
    // Already-unit input (e.g. a parsed catalog line) is kept bit-exact.
    if (std::abs(n - 1.0) > 4e-16) u /= n;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(u[i]) > 1e-12) {
            if (u[i] < 0.0) u = -u;
            break;
        }
    }
    return u;
}

const char* family_name(SubgroupFamily f) {
    switch (f) {
        case SubgroupFamily::Trivial: return "trivial";
        case SubgroupFamily::Circle3: return "circle3";
        case SubgroupFamily::FullSO3: return "so3";
        case SubgroupFamily::TorusLine: return "torus_line";
        case SubgroupFamily::FullTorus: return "torus";
        case SubgroupFamily::AxisTranslations: return "axis_translations";
    }
    return "?";
}

std::vector<Eigen::Vector4d> so3_net_quaternions(double eps) {
    // Grid each facet {q_k = 1} of the cube [-1,1]^4 and project radially to S^3.
    // Facet grid step s leaves every unit quaternion within chord (sqrt(3)/2) s of
    // a net point (radial projection outside the unit ball is 1-Lipschitz); the
    // rotation distance is 4 asin(chord / 2), so s = (4/sqrt(3)) sin(eps/4).
    const double s = 4.0 / std::sqrt(3.0) * std::sin(eps / 4.0);
    const int steps = static_cast<int>(std::ceil(2.0 / s));
    std::vector<Eigen::Vector4d> net;
    net.reserve(static_cast<std::size_t>(4 * (steps + 1) * (steps + 1) * (steps + 1)));
    for (int facet = 0; facet < 4; ++facet) {
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; j <= steps; ++j)
                for (int k = 0; k <= steps; ++k) {
                    const double free[3] = {-1.0 + 2.0 * i / steps, -1.0 + 2.0 * j / steps, -1.0 + 2.0 * k / steps};
                    Eigen::Vector4d v;
                    int idx = 0;
                    for (int m = 0; m < 4; ++m) v[m] = (m == facet) ? 1.0 : free[idx++];
                    net.push_back(v.normalized());
                }
    }
    return net;
}

// (w, x, y, z) of each element; only meaningful for SO(3) subgroups.
std::vector<Eigen::Vector4d> rotation_net_quaternions(const ClosedSubgroup& g, double eps) {
    std::vector<Eigen::Vector4d> out;
    switch (g.family()) {
        case SubgroupFamily::Trivial: out.emplace_back(1.0, 0.0, 0.0, 0.0); break;
        case SubgroupFamily::Circle3: {
            const int count = static_cast<int>(std::ceil(kTwoPi / eps));
            for (int k = 0; k < count; ++k) {
                const double half = 0.5 * kTwoPi * k / count;
                const Eigen::Vector3d v = std::sin(half) * g.axis();
                out.emplace_back(std::cos(half), v.x(), v.y(), v.z());
            }
            break;
        }
        case SubgroupFamily::FullSO3: out = so3_net_quaternions(eps); break;
        default: throw IncompatibleError("not an SO(3) subgroup: " + g.label());
    }
    return out;
}

// Rotation distance is 2 acos|<a,b>|, so the directed Hausdorff distance is
// 2 acos(min_a max_b |<a,b>|).
double directed_hausdorff_quaternions(const std::vector<Eigen::Vector4d>& a, const std::vector<Eigen::Vector4d>& b) {
    double worst = 1.0;
    for (const auto& x : a) {
        double best = 0.0;
        for (const auto& y : b) {
            const double c = std::abs(x.dot(y));
            if (c > best) {
                best = c;
                if (best >= worst) break;
            }
        }
        worst = std::min(worst, best);
    }
    return 2.0 * std::acos(std::min(1.0, worst));
}

double directed_hausdorff(std::span<const GroupElement> a, std::span<const GroupElement> b) {
    double worst = 0.0;
    for (const auto& x : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : b) {
            const double d = group_distance(x, y);
            if (d < best) {
                best = d;
                if (best <= worst) break;
            }
        }
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

bool ParentGroup::acts_on(const CovariateSpace& space) const {
    switch (kind) {
        case ParentKind::SO3:
            return space.kind() == SpaceKind::UnitBall3 || space.kind() == SpaceKind::UnitSphere2;
        case ParentKind::Torus: return space.kind() == SpaceKind::Torus && space.ambient_dim() == dim;
        case ParentKind::BoxTranslations: return space.kind() == SpaceKind::Box && space.ambient_dim() == dim;
    }
    return false;
}

std::string ParentGroup::name() const {
    switch (kind) {
        case ParentKind::SO3: return "so3";
        case ParentKind::Torus: return "torus" + std::to_string(dim);
        case ParentKind::BoxTranslations: return "translations" + std::to_string(dim);
    }
    return "?";
}

ParentGroup natural_parent(const CovariateSpace& space) {
    switch (space.kind()) {
        case SpaceKind::UnitBall3:
        case SpaceKind::UnitSphere2: return ParentGroup::so3();
        case SpaceKind::Torus: return ParentGroup::torus(space.ambient_dim());
        case SpaceKind::Box: return ParentGroup::box_translations(space.ambient_dim());
    }
    throw DomainError("no natural parent group");
}

GroupElement identity(const ParentGroup& parent) {
    switch (parent.kind) {
        case ParentKind::SO3: return Rotation{};
        case ParentKind::Torus: return TorusShift{Coords::Zero(parent.dim)};
        case ParentKind::BoxTranslations: return BoxTranslation{Coords::Zero(parent.dim)};
    }
    throw DomainError("unknown parent group");
}

ClosedSubgroup ClosedSubgroup::trivial(const ParentGroup& parent) {
    return ClosedSubgroup(SubgroupFamily::Trivial, parent);
}

ClosedSubgroup ClosedSubgroup::circle(const Eigen::Vector3d& axis) {
    ClosedSubgroup g(SubgroupFamily::Circle3, ParentGroup::so3());
    g.axis_ = canonical_axis(axis);
    return g;
}

ClosedSubgroup ClosedSubgroup::full_so3() { return ClosedSubgroup(SubgroupFamily::FullSO3, ParentGroup::so3()); }

ClosedSubgroup ClosedSubgroup::torus_line(int p, int q) {
    if (p == 0 && q == 0) throw DomainError("torus line direction must be nonzero");
    if (std::gcd(p, q) != 1) throw DomainError("torus line direction must be a coprime integer pair");
    if (p < 0 || (p == 0 && q < 0)) {
        p = -p;
        q = -q;
    }
    ClosedSubgroup g(SubgroupFamily::TorusLine, ParentGroup::torus(2));
    g.p_ = p;
    g.q_ = q;
    return g;
}

ClosedSubgroup ClosedSubgroup::full_torus(int d) {
    if (d < 1 || d > kMaxDim) throw DomainError("torus dimension out of range");
    return ClosedSubgroup(SubgroupFamily::FullTorus, ParentGroup::torus(d));
}

ClosedSubgroup ClosedSubgroup::axis_translations(int d, unsigned mask) {
    if (d < 1 || d > kMaxDim) throw DomainError("translation dimension out of range");
    mask &= (1u << d) - 1u;
    if (mask == 0) return trivial(ParentGroup::box_translations(d));
    ClosedSubgroup g(SubgroupFamily::AxisTranslations, ParentGroup::box_translations(d));
    g.mask_ = mask;
    return g;
}

std::string ClosedSubgroup::label() const {
    std::string out = family_name(family_);
    switch (family_) {
        case SubgroupFamily::Trivial: out += " " + parent_.name(); break;
        case SubgroupFamily::Circle3:
            for (int i = 0; i < 3; ++i) out += " " + format_double(axis_[i]);
            break;
        case SubgroupFamily::FullSO3: break;
        case SubgroupFamily::TorusLine: out += " " + std::to_string(p_) + " " + std::to_string(q_); break;
        case SubgroupFamily::FullTorus: out += " " + std::to_string(parent_.dim); break;
        case SubgroupFamily::AxisTranslations: {
            out += " " + std::to_string(parent_.dim) + " ";
            for (int i = 0; i < parent_.dim; ++i) out += (mask_ >> i & 1u) ? '1' : '0';
            break;
        }
    }
    return out;
}

ClosedSubgroup ClosedSubgroup::parse(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string fam;
    in >> fam;
    auto fail = [&](const std::string& why) -> DomainError {
        return DomainError("cannot parse subgroup '" + std::string(line) + "': " + why);
    };
    if (fam == "trivial") {
        std::string parent;
        in >> parent;
        if (parent == "so3") return trivial(ParentGroup::so3());
        if (parent.rfind("torus", 0) == 0) return trivial(ParentGroup::torus(std::stoi(parent.substr(5))));
        if (parent.rfind("translations", 0) == 0)
            return trivial(ParentGroup::box_translations(std::stoi(parent.substr(12))));
        throw fail("unknown parent");
    }
    if (fam == "circle3") {
        std::string tok[3];
        Eigen::Vector3d u;
        for (int i = 0; i < 3; ++i) {
            if (!(in >> tok[i]) || !parse_double(tok[i], u[i])) throw fail("bad axis");
        }
        return circle(u);
    }
    if (fam == "so3") return full_so3();
    if (fam == "torus_line") {
        int p, q;
        if (!(in >> p >> q)) throw fail("bad direction");
        return torus_line(p, q);
    }
    if (fam == "torus") {
        int d;
        if (!(in >> d)) throw fail("bad dimension");
        return full_torus(d);
    }
    if (fam == "axis_translations") {
        int d;
        std::string bits;
        if (!(in >> d >> bits) || static_cast<int>(bits.size()) != d) throw fail("bad mask");
        unsigned mask = 0;
        for (int i = 0; i < d; ++i) {
            if (bits[static_cast<std::size_t>(i)] == '1') mask |= 1u << i;
            else if (bits[static_cast<std::size_t>(i)] != '0') throw fail("bad mask");
        }
        return axis_translations(d, mask);
    }
    throw fail("unknown family");
}

bool ClosedSubgroup::operator==(const ClosedSubgroup& o) const {
    return family_ == o.family_ && parent_ == o.parent_ && axis_ == o.axis_ && p_ == o.p_ && q_ == o.q_ &&
           mask_ == o.mask_;
}

bool canonical_less(const ClosedSubgroup& a, const ClosedSubgroup& b) {
    auto key = [](const ClosedSubgroup& g) {
        return std::make_tuple(static_cast<int>(g.family()), static_cast<int>(g.parent().kind), g.parent().dim,
                               g.axis()[0], g.axis()[1], g.axis()[2], g.line_p(), g.line_q(), g.mask());
    };
    return key(a) < key(b);
}

int orbit_dimension(const ClosedSubgroup& g, const CovariateSpace& space) {
    if (!g.parent().acts_on(space))
        throw IncompatibleError("subgroup " + g.label() + " does not act on " + space.name());
    switch (g.family()) {
        case SubgroupFamily::Trivial: return 0;
        case SubgroupFamily::Circle3:
        case SubgroupFamily::TorusLine: return 1;
        case SubgroupFamily::FullSO3: return 2;
        case SubgroupFamily::FullTorus: return g.parent().dim;
        case SubgroupFamily::AxisTranslations: return std::popcount(g.mask());
    }
    return 0;
}

CompactNeighborhood CompactNeighborhood::cube(double radius) {
    if (!(radius > 0.0)) throw DomainError("neighbourhood cube radius must be positive");
    return {Kind::Cube, radius};
}

CompactNeighborhood default_neighborhood(const ParentGroup& parent) {
    return parent.is_compact() ? CompactNeighborhood::whole_group() : CompactNeighborhood::cube(1.0);
}

GroupElement sample_group(const ClosedSubgroup& g, Rng& rng) {
    switch (g.family()) {
        case SubgroupFamily::Trivial: return identity(g.parent());
        case SubgroupFamily::Circle3: return Rotation::about(g.axis(), rng.uniform(0.0, kTwoPi));
        case SubgroupFamily::FullSO3: {
            Eigen::Vector4d v;
            double n2;
            do {
                for (int i = 0; i < 4; ++i) v[i] = rng.gaussian();
                n2 = v.squaredNorm();
            } while (n2 == 0.0);
            v /= std::sqrt(n2);
            return Rotation::from_quaternion(Eigen::Quaterniond(v[0], v[1], v[2], v[3]));
        }
        case SubgroupFamily::TorusLine: {
            const double t = rng.uniform();
            Coords s(2);
            s << t * g.line_p(), t * g.line_q();
            return TorusShift{s};
        }
        case SubgroupFamily::FullTorus: {
            Coords s(g.parent().dim);
            for (int i = 0; i < s.size(); ++i) s[i] = rng.uniform();
            return TorusShift{s};
        }
        case SubgroupFamily::AxisTranslations:
            throw NonCompactError("no uniform distribution on the non-compact subgroup " + g.label());
    }
    throw DomainError("unknown subgroup family");
}

std::vector<GroupElement> subgroup_net(const ClosedSubgroup& g, const CompactNeighborhood& u, double eps) {
    if (!(eps > 0.0)) throw DomainError("net resolution must be positive");
    std::vector<GroupElement> net;
    switch (g.family()) {
        case SubgroupFamily::Trivial: net.push_back(identity(g.parent())); break;
        case SubgroupFamily::Circle3: {
            // Consecutive angles eps apart: covering radius eps/2.
            const int count = static_cast<int>(std::ceil(kTwoPi / eps));
            for (int k = 0; k < count; ++k) net.emplace_back(Rotation::about(g.axis(), kTwoPi * k / count));
            break;
        }
        case SubgroupFamily::FullSO3:
            for (const auto& q : so3_net_quaternions(eps))
                net.emplace_back(Rotation::from_quaternion(Eigen::Quaterniond(q[0], q[1], q[2], q[3])));
            break;
        case SubgroupFamily::TorusLine: {
            const double len = std::hypot(g.line_p(), g.line_q());
            const int count = static_cast<int>(std::ceil(len / eps));
            for (int k = 0; k < count; ++k) {
                const double t = static_cast<double>(k) / count;
                Coords s(2);
                s << t * g.line_p(), t * g.line_q();
                net.emplace_back(TorusShift{s});
            }
            break;
        }
        case SubgroupFamily::FullTorus: {
            const int d = g.parent().dim;
            const int per_axis = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d)) / (2.0 * eps)));
            std::vector<int> idx(static_cast<std::size_t>(d), 0);
            for (;;) {
                Coords s(d);
                for (int i = 0; i < d; ++i) s[i] = static_cast<double>(idx[static_cast<std::size_t>(i)]) / per_axis;
                net.emplace_back(TorusShift{s});
                int i = 0;
                while (i < d && ++idx[static_cast<std::size_t>(i)] == per_axis) idx[static_cast<std::size_t>(i++)] = 0;
                if (i == d) break;
            }
            break;
        }
        case SubgroupFamily::AxisTranslations: {
            if (u.kind != CompactNeighborhood::Kind::Cube)
                throw DomainError("translation subgroups need a cube neighbourhood");
            const int d = g.parent().dim;
            const int k = std::popcount(g.mask());
            const double r = u.radius;
            // Grid on [-r, r]^k with covering radius sqrt(k) * step / 2 <= eps.
            const int steps = std::max(1, static_cast<int>(std::ceil(r * std::sqrt(static_cast<double>(k)) / eps)));
            std::vector<int> axes;
            for (int i = 0; i < d; ++i)
                if (g.mask() >> i & 1u) axes.push_back(i);
            std::vector<int> idx(axes.size(), 0);
            for (;;) {
                Coords t = Coords::Zero(d);
                for (std::size_t a = 0; a < axes.size(); ++a) t[axes[a]] = -r + 2.0 * r * idx[a] / steps;
                net.emplace_back(BoxTranslation{t});
                std::size_t a = 0;
                while (a < axes.size() && ++idx[a] == steps + 1) idx[a++] = 0;
                if (a == axes.size()) break;
            }
            break;
        }
    }
    return net;
}

double net_hausdorff(std::span<const GroupElement> a, std::span<const GroupElement> b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double hausdorff_U_distance(const ClosedSubgroup& g, const ClosedSubgroup& h, const CompactNeighborhood& u,
                            double eps) {
    if (!(eps > 0.0)) throw DomainError("net resolution must be positive, got " + format_double(eps));
    if (!(g.parent() == h.parent()))
        throw IncompatibleError("subgroups " + g.label() + " and " + h.label() + " have different parents");
    if (g == h) return 0.0;
    if (g.parent().kind == ParentKind::SO3) {
        const auto qa = rotation_net_quaternions(g, eps);
        const auto qb = rotation_net_quaternions(h, eps);
        return std::max(directed_hausdorff_quaternions(qa, qb), directed_hausdorff_quaternions(qb, qa));
    }
    const auto na = subgroup_net(g, u, eps);
    const auto nb = subgroup_net(h, u, eps);
    return net_hausdorff(na, nb);
}

std::vector<ClosedSubgroup> delta_cover(const ParentGroup& parent, double delta) {
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    std::vector<ClosedSubgroup> cover;
    cover.push_back(ClosedSubgroup::trivial(parent));
    switch (parent.kind) {
        case ParentKind::SO3: {
            cover.push_back(ClosedSubgroup::full_so3());
            const double step = delta / M_PI;
            std::set<std::tuple<long long, long long, long long>> seen;
            const int n_theta = static_cast<int>(std::floor(M_PI / step + 1e-12));
            const int n_phi = static_cast<int>(std::ceil(kTwoPi / step - 1e-12));
            for (int i = 0; i <= n_theta; ++i) {
                const double theta = i * step;
                for (int j = 0; j < n_phi; ++j) {
                    const double phi = j * step;
                    const Eigen::Vector3d u(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                            std::cos(theta));
                    const auto g = ClosedSubgroup::circle(u);
                    auto key = std::make_tuple(std::llround(g.axis()[0] * 1e9), std::llround(g.axis()[1] * 1e9),
                                               std::llround(g.axis()[2] * 1e9));
                    if (seen.insert(key).second) cover.push_back(g);
                }
            }
            break;
        }
        case ParentKind::Torus: {
            cover.push_back(ClosedSubgroup::full_torus(parent.dim));
            if (parent.dim == 1) break;
            if (parent.dim != 2) throw DomainError("delta covers are only available for T^1 and T^2");
            const int height = static_cast<int>(std::ceil(1.0 / delta - 1e-12));
            std::vector<ClosedSubgroup> lines;
            std::vector<double> line_angle;  // degrees in [0, 180)
            for (int p = 0; p <= height; ++p)
                for (int q = -height; q <= height; ++q) {
                    if ((p == 0 && q <= 0) || std::gcd(p, q) != 1) continue;
                    lines.push_back(ClosedSubgroup::torus_line(p, q));
                    double a = std::atan2(static_cast<double>(q), static_cast<double>(p)) * 180.0 / M_PI;
                    if (a < 0.0) a += 180.0;
                    line_angle.push_back(a);
                }
            std::vector<bool> hit(lines.size(), false);
            std::size_t hits = 0;
            const long long grid_max = static_cast<long long>(std::ceil(360.0 / (std::sqrt(2.0) * delta)));
            for (long long J = 1; J <= grid_max && hits < lines.size(); ++J) {
                for (long long i = 0; i <= J; ++i) {
                    const double a = std::fmod(360.0 * static_cast<double>(i) / static_cast<double>(J), 180.0);
                    std::size_t best = 0;
                    double best_gap = 1e300;
                    for (std::size_t l = 0; l < lines.size(); ++l) {
                        double gap = std::abs(a - line_angle[l]);
                        gap = std::min(gap, 180.0 - gap);
                        if (gap < best_gap - 1e-12) {
                            best_gap = gap;
                            best = l;
                        }
                    }
                    if (!hit[best]) {
                        hit[best] = true;
                        ++hits;
                    }
                }
            }
            for (std::size_t l = 0; l < lines.size(); ++l)
                if (hit[l]) cover.push_back(lines[l]);
            break;
        }
        case ParentKind::BoxTranslations: {
            for (unsigned mask = 1; mask < (1u << parent.dim); ++mask)
                cover.push_back(ClosedSubgroup::axis_translations(parent.dim, mask));
            break;
        }
    }
    std::sort(cover.begin(), cover.end(), canonical_less);
    return cover;
}

double delta_schedule(double n, double beta, int d, int d_max, double lipschitz, double lipschitz_group) {
    if (!(n > 0.0) || !(beta > 0.0) || d < 1 || !(lipschitz > 0.0) || !(lipschitz_group > 0.0))
        throw DomainError("delta_schedule inputs must be positive");
    const double k = 2.0 * beta + d - d_max;
    if (!(k > 0.0)) throw DomainError("delta_schedule needs 2 beta + d - d_max > 0");
    const double phi = std::pow(n, -2.0 * beta / k);
    return std::pow(phi / (2.0 * lipschitz * lipschitz), 1.0 / (2.0 * std::min(beta, 1.0))) / lipschitz_group;
}

std::string format_catalog(std::span<const ClosedSubgroup> cover) {
    std::string out;
    for (const auto& g : cover) out += g.label() + "\n";
    return out;
}

std::vector<ClosedSubgroup> parse_catalog(std::string_view text) {
    std::vector<ClosedSubgroup> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line.front() != '#') out.push_back(ClosedSubgroup::parse(line));
        pos = end + 1;
    }
    return out;
}

}  // namespace symreg
