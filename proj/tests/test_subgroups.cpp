#include <doctest.h>

#include <algorithm>
#include <set>

#include "symreg/errors.hpp"
#include "symreg/subgroup.hpp"
#include "test_util.hpp"

using namespace symreg;
using namespace testutil;

TEST_CASE("orbit dimensions") {
    const auto ball3 = CovariateSpace::unit_ball();
    CHECK(orbit_dimension(ClosedSubgroup::full_so3(), ball3) == 2);
    CHECK(orbit_dimension(ClosedSubgroup::trivial(ParentGroup::so3()), ball3) == 0);
    CHECK(orbit_dimension(ClosedSubgroup::trivial(ParentGroup::torus(2)), CovariateSpace::torus(2)) == 0);
    CHECK(orbit_dimension(ClosedSubgroup::circle({0, 0, 1}), CovariateSpace::unit_sphere()) == 1);
    CHECK(orbit_dimension(ClosedSubgroup::torus_line(1, 2), CovariateSpace::torus(2)) == 1);
    CHECK(orbit_dimension(ClosedSubgroup::full_torus(3), CovariateSpace::torus(3)) == 3);
    const double sides[] = {1, 1, 1};
    CHECK(orbit_dimension(ClosedSubgroup::axis_translations(3, 0b101), CovariateSpace::box(sides)) == 2);
    CHECK_THROWS_AS(orbit_dimension(ClosedSubgroup::full_so3(), CovariateSpace::torus(2)), IncompatibleError);
    CHECK_THROWS_AS(orbit_dimension(ClosedSubgroup::full_torus(2), CovariateSpace::torus(3)), IncompatibleError);
}

TEST_CASE("canonical parameters") {
    CHECK(ClosedSubgroup::circle({0, 0, -2}) == ClosedSubgroup::circle({0, 0, 1}));
    CHECK(ClosedSubgroup::torus_line(-1, -2) == ClosedSubgroup::torus_line(1, 2));
    CHECK(ClosedSubgroup::axis_translations(2, 0) == ClosedSubgroup::trivial(ParentGroup::box_translations(2)));
    CHECK_THROWS_AS(ClosedSubgroup::torus_line(2, 4), DomainError);
    CHECK_THROWS_AS(ClosedSubgroup::torus_line(0, 0), DomainError);
}

TEST_CASE("hausdorff distance examples") {
    const auto u = CompactNeighborhood::whole_group();
    const double eps = 0.02;
    const auto z = ClosedSubgroup::circle({0, 0, 1});
    CHECK(hausdorff_U_distance(z, z, u, eps) == 0.0);
    CHECK(hausdorff_U_distance(ClosedSubgroup::full_so3(), ClosedSubgroup::full_so3(), u, 0.1) == 0.0);

    const double d_trivial = hausdorff_U_distance(ClosedSubgroup::trivial(ParentGroup::so3()), z, u, eps);
    CHECK(std::abs(d_trivial - kPi) <= 2 * eps);

    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        Eigen::Vector3d a(rng.gaussian(), rng.gaussian(), rng.gaussian());
        Eigen::Vector3d b(rng.gaussian(), rng.gaussian(), rng.gaussian());
        a.normalize();
        b.normalize();
        if (a.dot(b) < 0) b = -b;
        const double d = hausdorff_U_distance(ClosedSubgroup::circle(a), ClosedSubgroup::circle(b), u, eps);
        CHECK(d <= 2 * std::acos(std::min(1.0, a.dot(b))) + 2 * eps);
        const double back = hausdorff_U_distance(ClosedSubgroup::circle(b), ClosedSubgroup::circle(a), u, eps);
        CHECK(std::abs(d - back) <= 1e-12);
    }

    CHECK_THROWS_AS(hausdorff_U_distance(z, z, u, 0.0), DomainError);
    CHECK_THROWS_AS(hausdorff_U_distance(z, ClosedSubgroup::full_torus(2), u, 0.1), IncompatibleError);
}

TEST_CASE("hausdorff distance on the torus and for translations") {
    const auto u = CompactNeighborhood::whole_group();
    const double eps = 0.01;
    // Every point of T^2 is within half a diagonal of the trivial group.
    const double d = hausdorff_U_distance(ClosedSubgroup::trivial(ParentGroup::torus(2)), ClosedSubgroup::full_torus(2),
                                          u, eps);
    CHECK(std::abs(d - std::sqrt(0.5)) <= 2 * eps);
    // The line (1,0) against T^2: farthest point is (.,1/2).
    const double line = hausdorff_U_distance(ClosedSubgroup::torus_line(1, 0), ClosedSubgroup::full_torus(2), u, eps);
    CHECK(std::abs(line - 0.5) <= 2 * eps);

    const auto cube = CompactNeighborhood::cube(1.0);
    const double tr = hausdorff_U_distance(ClosedSubgroup::axis_translations(2, 0b01),
                                           ClosedSubgroup::axis_translations(2, 0b11), cube, 0.05);
    CHECK(std::abs(tr - 1.0) <= 0.1);
}

TEST_CASE("triangle inequality on net approximations") {
    const auto u = CompactNeighborhood::whole_group();
    const double eps = 0.05;
    const auto a = ClosedSubgroup::circle({1, 0, 0});
    const auto b = ClosedSubgroup::circle({1, 1, 0});
    const auto c = ClosedSubgroup::circle({0, 0.3, 1});
    const double ab = hausdorff_U_distance(a, b, u, eps), bc = hausdorff_U_distance(b, c, u, eps),
                 ac = hausdorff_U_distance(a, c, u, eps);
    CHECK(ac <= ab + bc + 4 * eps);
}

TEST_CASE("delta cover for SO(3)") {
    const auto so3 = ParentGroup::so3();
    const auto coarse = delta_cover(so3, 4.0);
    CHECK(std::find(coarse.begin(), coarse.end(), ClosedSubgroup::trivial(so3)) != coarse.end());
    CHECK(std::find(coarse.begin(), coarse.end(), ClosedSubgroup::full_so3()) != coarse.end());
    CHECK(coarse.size() >= 3);

    const auto cover = delta_cover(so3, 0.5);
    std::vector<Eigen::Vector3d> axes;
    std::set<int> strata;
    for (const auto& g : cover) {
        strata.insert(orbit_dimension(g, CovariateSpace::unit_ball()));
        if (g.family() == SubgroupFamily::Circle3) axes.push_back(g.axis());
    }
    CHECK(strata == std::set<int>{0, 1, 2});
    CHECK(std::is_sorted(cover.begin(), cover.end(), canonical_less));

    Rng rng(5);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        Eigen::Vector3d v(rng.gaussian(), rng.gaussian(), rng.gaussian());
        v.normalize();
        double best = 10.0;
        for (const auto& a : axes) best = std::min(best, 2 * std::acos(std::min(1.0, std::abs(v.dot(a)))));
        worst = std::max(worst, best);
    }
    CHECK(worst <= 0.5);
}

TEST_CASE("delta cover for the torus") {
    const auto t2 = ParentGroup::torus(2);
    const auto cover = delta_cover(t2, 0.5);
    auto has = [&](const ClosedSubgroup& g) { return std::find(cover.begin(), cover.end(), g) != cover.end(); };
    CHECK(has(ClosedSubgroup::trivial(t2)));
    CHECK(has(ClosedSubgroup::full_torus(2)));
    CHECK(has(ClosedSubgroup::torus_line(1, 0)));
    CHECK(has(ClosedSubgroup::torus_line(0, 1)));
    CHECK(has(ClosedSubgroup::torus_line(1, 1)));
    CHECK(has(ClosedSubgroup::torus_line(1, -1)));

    // Every line of height <= 6 is within delta of the cover.
    const auto u = CompactNeighborhood::whole_group();
    for (int p = 0; p <= 6; ++p)
        for (int q = -6; q <= 6; ++q) {
            if (std::gcd(p, q) != 1) continue;
            const auto line = ClosedSubgroup::torus_line(p, q);
            double best = 10.0;
            for (const auto& g : cover)
                if (g.family() == SubgroupFamily::TorusLine) best = std::min(best, hausdorff_U_distance(line, g, u, 0.01));
            CHECK(best <= 0.5 + 0.02);
        }

    CHECK(delta_cover(ParentGroup::torus(1), 0.3).size() == 2);
    CHECK(delta_cover(ParentGroup::box_translations(3), 0.3).size() == 8);
}

TEST_CASE("delta schedule") {
    CHECK(delta_schedule(1, 1, 3, 2, 1, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(delta_schedule(1000, 1, 3, 2, 1, 1) == doctest::Approx(0.0707106781).epsilon(1e-9));
    // L enters squared, so doubling it scales delta by 2^(-1/min(beta,1)).
    CHECK(delta_schedule(50, 0.5, 3, 2, 2, 1) / delta_schedule(50, 0.5, 3, 2, 1, 1) ==
          doctest::Approx(std::pow(2.0, -2.0)).epsilon(1e-12));
    CHECK(delta_schedule(50, 1, 3, 2, 2, 1) / delta_schedule(50, 1, 3, 2, 1, 1) ==
          doctest::Approx(std::pow(2.0, -1.0)).epsilon(1e-12));
    CHECK(delta_schedule(50, 1, 3, 2, 1, 2) / delta_schedule(50, 1, 3, 2, 1, 1) == doctest::Approx(0.5));
    double prev = 1e9;
    for (int n = 1; n < 100000; n *= 3) {
        const double d = delta_schedule(n, 1, 3, 2, 1, 1);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(delta_schedule(1e12, 1, 3, 2, 1, 1) < 1e-3);
}

TEST_CASE("catalog round trip") {
    std::vector<ClosedSubgroup> gs{ClosedSubgroup::trivial(ParentGroup::so3()), ClosedSubgroup::circle({0.3, -0.4, 0.5}),
                                   ClosedSubgroup::full_so3(), ClosedSubgroup::torus_line(2, -3),
                                   ClosedSubgroup::full_torus(2), ClosedSubgroup::axis_translations(3, 0b110)};
    const std::string text = format_catalog(gs);
    const auto back = parse_catalog("# header\n" + text);
    REQUIRE(back.size() == gs.size());
    for (std::size_t i = 0; i < gs.size(); ++i) {
        CHECK(back[i].label() == gs[i].label());
        if (gs[i].family() == SubgroupFamily::Circle3) {
            CHECK((back[i].axis() - gs[i].axis()).norm() < 1e-15);
        } else {
            CHECK(back[i] == gs[i]);
        }
    }
    CHECK_THROWS_AS(ClosedSubgroup::parse("bogus 1 2"), DomainError);
}
