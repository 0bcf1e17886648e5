#include <doctest.h>

#include "symreg/errors.hpp"
#include "symreg/oracles.hpp"
#include "symreg/orbit_grid.hpp"
#include "test_util.hpp"

using namespace symreg;
using namespace testutil;

namespace {

double min_pairwise(const OrbitGrid& g) {
    double best = 1e300;
    for (std::size_t i = 0; i < g.m(); ++i)
        for (std::size_t j = i + 1; j < g.m(); ++j)
            best = std::min(best, space_distance(act(g.elements[i], g.base), act(g.elements[j], g.base)));
    return best;
}

const CompactNeighborhood kWhole = CompactNeighborhood::whole_group();

}  // namespace

TEST_CASE("hypercube side examples") {
    CHECK(hypercube_side(ball(0.5, 0, 0), ClosedSubgroup::full_so3(), kWhole) ==
          doctest::Approx(0.7071067812).epsilon(1e-9));
    CHECK(hypercube_side(ball(0.1, 0.2, 0.3), ClosedSubgroup::trivial(ParentGroup::so3()), kWhole) == 1.0);
    for (double c : {0.3, 0.7, 1.0}) {
        const double phi = 0.4;
        const Point x = ball(0.6 * std::cos(phi) * c, 0.6 * std::sin(phi) * c, 0.8 * c);
        CHECK(hypercube_side(x, ClosedSubgroup::circle({0, 0, 1}), kWhole) == doctest::Approx(1.2 * c));
    }
    CHECK(hypercube_side(torus2(0.3, 0.3), ClosedSubgroup::full_torus(2), kWhole) == 0.5);
    CHECK(hypercube_side(torus2(0.3, 0.3), ClosedSubgroup::torus_line(1, 0), kWhole) == 0.5);
    CHECK(hypercube_side(torus2(0.3, 0.3), ClosedSubgroup::torus_line(1, 1), kWhole) ==
          doctest::Approx(std::sqrt(2.0) / 2));
    CHECK_THROWS_AS(hypercube_side(torus2(0.3, 0.3), ClosedSubgroup::full_so3(), kWhole), IncompatibleError);
}

TEST_CASE("trivial grid") {
    const OrbitGrid g = build_orbit_grid(ball(0.2, 0.1, 0), ClosedSubgroup::trivial(ParentGroup::so3()), 0.01, kWhole);
    CHECK(g.m() == 1);
    CHECK(group_distance(g.elements[0], Rotation{}) == 0.0);
}

TEST_CASE("circle grid on the equator") {
    const OrbitGrid g = build_orbit_grid(sphere(1, 0, 0), ClosedSubgroup::circle({0, 0, 1}), 0.1, kWhole);
    CHECK(g.m() >= 10);
    CHECK(min_pairwise(g) >= 0.2 - 1e-9);
    // Count matches the bound from the tangent construction and never beats an optimal circle packing.
    CHECK(g.m() <= circle_packing_count(1.0, 0.1));
}

TEST_CASE("full SO(3) grid on the unit sphere") {
    const OrbitGrid g = build_orbit_grid(sphere(0, 0, 1), ClosedSubgroup::full_so3(), 0.1, kWhole);
    CHECK(g.m() >= 50);
    CHECK(min_pairwise(g) >= 0.2 - 1e-9);
    for (const auto& e : g.elements) CHECK(std::abs(act(e, g.base).coords().norm() - 1.0) <= 1e-9);
}

TEST_CASE("singular and coarse grids") {
    const OrbitGrid at_zero = build_orbit_grid(ball(0, 0, 0), ClosedSubgroup::full_so3(), 0.1, kWhole);
    CHECK(at_zero.singular);
    CHECK(at_zero.m() == 1);
    const OrbitGrid on_axis = build_orbit_grid(ball(0, 0, 0.5), ClosedSubgroup::circle({0, 0, 1}), 0.1, kWhole);
    CHECK(on_axis.singular);
    CHECK(on_axis.m() == 1);
    const OrbitGrid coarse = build_orbit_grid(ball(0.3, 0, 0), ClosedSubgroup::circle({0, 0, 1}), 0.31, kWhole);
    CHECK(coarse.m() == 1);
}

TEST_CASE("torus grids") {
    const Point x = torus2(0.12, 0.87);
    for (auto g : {ClosedSubgroup::torus_line(1, 0), ClosedSubgroup::torus_line(2, -1), ClosedSubgroup::full_torus(2)}) {
        for (double h : {0.01, 0.03, 0.1, 0.2}) {
            const OrbitGrid grid = build_orbit_grid(x, g, h, kWhole);
            const double bound = std::max(1.0, std::pow(grid.hypercube_side / (2 * h), grid.orbit_dim));
            CHECK(static_cast<double>(grid.m()) >= bound - 1e-9);
            if (grid.m() > 1) CHECK(min_pairwise(grid) >= 2 * h - 1e-9);
        }
    }
}

TEST_CASE("translation grids") {
    const double sides[] = {2.0, 1.0, 3.0};
    const Point x(CovariateSpace::box(sides), vec({1.9, 0.5, 0.1}));
    const auto g = ClosedSubgroup::axis_translations(3, 0b101);
    const OrbitGrid grid = build_orbit_grid(x, g, 0.1, CompactNeighborhood::cube(1.0));
    CHECK(grid.orbit_dim == 2);
    CHECK(static_cast<double>(grid.m()) >= std::pow(grid.hypercube_side / 0.2, 2) - 1e-9);
    CHECK(min_pairwise(grid) >= 0.2 - 1e-9);
    for (const auto& e : grid.elements) CHECK(act(e, x)[1] == doctest::Approx(0.5));
}

TEST_CASE("halving h never decreases m") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        const Point x = sample_point(CovariateSpace::unit_ball(), PointLaw::UniformSpace, rng);
        const double h = rng.uniform(0.05, 0.6);
        for (auto g : {ClosedSubgroup::circle({0.2, 0.3, 1}), ClosedSubgroup::full_so3()}) {
            CHECK(build_orbit_grid(x, g, h / 2, kWhole).m() >= build_orbit_grid(x, g, h, kWhole).m());
        }
    }
}

TEST_CASE("grids are deterministic and stay on the orbit") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const Point x = sample_point(CovariateSpace::unit_ball(), PointLaw::UniformSpace, rng);
        const auto g = ClosedSubgroup::circle({rng.gaussian(), rng.gaussian(), rng.gaussian()});
        const OrbitGrid a = build_orbit_grid(x, g, 0.07, kWhole), b = build_orbit_grid(x, g, 0.07, kWhole);
        REQUIRE(a.m() == b.m());
        for (std::size_t k = 0; k < a.m(); ++k) {
            const Point pa = act(a.elements[k], x), pb = act(b.elements[k], x);
            CHECK(max_abs_diff(pa.coords(), pb.coords()) == 0.0);
            // Same distance to the axis and same height along it.
            const Eigen::Vector3d xv(x[0], x[1], x[2]), pv(pa[0], pa[1], pa[2]);
            CHECK(std::abs(pv.dot(g.axis()) - xv.dot(g.axis())) <= 1e-9);
            CHECK(std::abs(pv.norm() - xv.norm()) <= 1e-9);
            CHECK_NOTHROW(recover_group_element(x, pa, g));
        }
    }
}

TEST_CASE("recover group element examples") {
    const Point x = ball(0.3, -0.4, 0.2);
    CHECK(group_distance(recover_group_element(x, x, ClosedSubgroup::full_so3()), Rotation{}) <= 1e-12);

    const GroupElement r = recover_group_element(sphere(1, 0, 0), sphere(0, 1, 0), ClosedSubgroup::full_so3());
    CHECK(group_distance(r, GroupElement::rotation({0, 0, 1}, kPi / 2)) <= 1e-12);

    const GroupElement s = recover_group_element(torus2(0.2, 0.2), torus2(0.9, 0.5), ClosedSubgroup::full_torus(2));
    CHECK(max_abs_diff(std::get<TorusShift>(s.variant()).shift, vec({0.7, 0.3})) <= 1e-12);

    const Point target = act(GroupElement::rotation({0, 0, 1}, 1.3), x);
    const GroupElement c = recover_group_element(x, target, ClosedSubgroup::circle({0, 0, 1}));
    CHECK(max_abs_diff(act(c, x).coords(), target.coords()) <= 1e-9);

    try {
        recover_group_element(x, ball(0.3, -0.4, 0.5), ClosedSubgroup::circle({0, 0, 1}));
        FAIL("expected an off-orbit error");
    } catch (const OffOrbitError& e) {
        CHECK(e.deviation() == doctest::Approx(0.3));
    }
    CHECK_THROWS_AS(recover_group_element(torus2(0.2, 0.2), torus2(0.5, 0.3), ClosedSubgroup::torus_line(1, 0)),
                    OffOrbitError);
}

TEST_CASE("packing oracle finds no violations") {
    Rng rng(10);
    const OracleReport r = packing_oracle(300, rng);
    CHECK(r.pass);
    CHECK(r.observed == 0.0);
}
