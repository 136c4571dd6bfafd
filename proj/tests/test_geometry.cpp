#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "torsio/geometry.hpp"

using namespace torsio;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Central difference with one Richardson extrapolation step.
template <typename F>
double richardson(F f, double x, double h) {
    auto central = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2.0 * hh); };
    return (4.0 * central(h / 2) - central(h)) / 3.0;
}

std::array<Vec3, 4> random_tet(Rng& rng) {
    while (true) {
        std::array<Vec3, 4> pts;
        for (auto& p : pts) p = Vec3(rng.uniform01(), rng.uniform01(), rng.uniform01());
        double v6 = (pts[1] - pts[0]).cross(pts[2] - pts[0]).dot(pts[3] - pts[0]);
        double lmin = 1e9;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) lmin = std::min(lmin, (pts[i] - pts[j]).norm());
        if (std::abs(v6) > 1e-2 && lmin > 5e-2) return pts;
    }
}

std::array<double, 6> squared_lengths(const std::array<Vec3, 4>& pts) {
    std::array<double, 6> m{};
    for (int k = 0; k < 6; ++k) {
        Vec3 d = pts[kTetEdgeSlots[k][0]] - pts[kTetEdgeSlots[k][1]];
        m[static_cast<std::size_t>(k)] = d.squaredNorm();
    }
    return m;
}

}  // namespace

TEST_CASE("right-corner tetrahedron metric values") {
    auto t = Triangulation::builtin("B3");
    Placement p;
    p.coords[0] = {0, 0, 0};
    p.coords[1] = {1, 0, 0};
    p.coords[2] = {0, 1, 0};
    p.coords[3] = {0, 0, 1};
    auto mc = metric_cache(t, p);
    CHECK_THAT(mc.vol6[0], WithinAbs(1.0, 1e-14));
    // dihedral at edge {0,3}: local edge index 2 in the slot ordering
    CHECK_THAT(mc.theta[0][2], WithinAbs(std::numbers::pi / 2, 1e-13));
}

TEST_CASE("regular tetrahedron dihedral angle") {
    std::array<double, 6> m;
    m.fill(1.0);
    for (int k = 0; k < 6; ++k)
        CHECK_THAT(dihedral_from_squared_lengths(m, k), WithinAbs(std::acos(1.0 / 3.0), 1e-13));
}

TEST_CASE("signed volume is alternating") {
    Rng rng(7);
    auto pts = random_tet(rng);
    Placement p;
    for (int i = 0; i < 4; ++i) p.coords[i] = pts[static_cast<std::size_t>(i)];
    double v = six_volume({0, 1, 2, 3}, p);
    CHECK_THAT(six_volume({1, 0, 2, 3}, p), WithinRel(-v, 1e-12));
    CHECK_THAT(six_volume({0, 1, 3, 2}, p), WithinRel(-v, 1e-12));
    CHECK_THAT(six_volume({1, 0, 3, 2}, p), WithinRel(v, 1e-12));
}

TEST_CASE("flat star after a 1-4 subdivision has zero defects") {
    auto t = Triangulation::builtin("B3");
    Placement p;
    p.coords[0] = {0, 0, 0};
    p.coords[1] = {1, 0, 0};
    p.coords[2] = {0, 1, 0};
    p.coords[3] = {0, 0, 1};
    auto t2 = t.apply_pachner({PachnerMove::Kind::one_four, 0, 4});
    auto p2 = extend_placement_barycentric(t2, p, 4, {0, 1, 2, 3}, 11);
    auto mc = metric_cache(t2, p2);
    int inner = 0;
    for (std::size_t e = 0; e < t2.edges().size(); ++e) {
        if (t2.edges()[e].boundary) continue;
        ++inner;
        CHECK_THAT(mc.defect[e], WithinAbs(0.0, 1e-12));
    }
    CHECK(inner == 4);
}

TEST_CASE("length gradient") {
    Placement p;
    p.coords[0] = {3, 4, 0};
    p.coords[1] = {0, 0, 0};
    auto g = d_length_d_coords(0, 1, p);
    CHECK_THAT(g.dp.x(), WithinAbs(3.0 / 5.0, 1e-14));
    CHECK_THAT(g.dp.y(), WithinAbs(4.0 / 5.0, 1e-14));
    CHECK(g.dp == -g.dq);

    SECTION("matches finite differences") {
        Rng rng(123);
        for (int trial = 0; trial < 20; ++trial) {
            Vec3 a(rng.uniform01(), rng.uniform01(), rng.uniform01());
            Vec3 b(rng.uniform01(), rng.uniform01(), rng.uniform01());
            if ((a - b).norm() < 1e-2) continue;
            Placement q;
            q.coords[0] = a;
            q.coords[1] = b;
            auto gr = d_length_d_coords(0, 1, q);
            for (int axis = 0; axis < 3; ++axis) {
                double fd = richardson(
                    [&](double x) {
                        Vec3 aa = a;
                        aa[axis] = x;
                        return (aa - b).norm();
                    },
                    a[axis], 1e-5 * (a - b).norm());
                CHECK_THAT(gr.dp[axis], WithinAbs(fd, 1e-8 * std::max(1.0, std::abs(fd))));
            }
        }
    }
}

TEST_CASE("dihedral angle derivative matches Richardson finite differences") {
    Rng rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        auto pts = random_tet(rng);
        auto m = squared_lengths(pts);
        std::array<double, 6> l{};
        for (int k = 0; k < 6; ++k)
            l[static_cast<std::size_t>(k)] = std::sqrt(m[static_cast<std::size_t>(k)]);
        for (int local = 0; local < 6; ++local) {
            auto dm = dihedral_gradient_squared(m, local);
            double rownorm = 0.0;
            std::array<double, 6> analytic{};
            for (int j = 0; j < 6; ++j) {
                analytic[static_cast<std::size_t>(j)] =
                    2.0 * l[static_cast<std::size_t>(j)] * dm[static_cast<std::size_t>(j)];
                rownorm = std::max(rownorm, std::abs(analytic[static_cast<std::size_t>(j)]));
            }
            for (int j = 0; j < 6; ++j) {
                double fd = richardson(
                    [&](double lj) {
                        auto mm = m;
                        mm[static_cast<std::size_t>(j)] = lj * lj;
                        return dihedral_from_squared_lengths(mm, local);
                    },
                    l[static_cast<std::size_t>(j)], 1e-4);
                INFO("trial " << trial << " local " << local << " wrt " << j);
                CHECK_THAT(analytic[static_cast<std::size_t>(j)],
                           WithinAbs(fd, 1e-6 * (rownorm + 1e-9)));
            }
        }
        ++checked;
    }
    CHECK(checked >= 100);

    SECTION("opposite-edge derivative is positive on the regular tetrahedron") {
        std::array<double, 6> m;
        m.fill(1.0);
        // edge 0 = (0,1); opposite edge 5 = (2,3)
        auto dm = dihedral_gradient_squared(m, 0);
        CHECK(2.0 * dm[5] > 0.0);
    }
}

TEST_CASE("Schlaefli identity per tetrahedron") {
    Rng rng(9);
    for (int trial = 0; trial < 25; ++trial) {
        auto pts = random_tet(rng);
        auto m = squared_lengths(pts);
        for (int j = 0; j < 6; ++j) {
            double sum = 0.0;
            for (int local = 0; local < 6; ++local) {
                auto dm = dihedral_gradient_squared(m, local);
                double l_local = std::sqrt(m[static_cast<std::size_t>(local)]);
                double l_j = std::sqrt(m[static_cast<std::size_t>(j)]);
                sum += l_local * 2.0 * l_j * dm[static_cast<std::size_t>(j)];
            }
            CHECK_THAT(sum, WithinAbs(0.0, 1e-9));
        }
    }
}

TEST_CASE("motion velocities") {
    MotionGenerator tr{{1, 0, 0, 0, 0, 0}};
    CHECK(motion_velocity(tr, Vec3(5, -2, 7)) == Vec3(1, 0, 0));
    MotionGenerator rot{{0, 0, 0, 0, 0, 1}};
    CHECK((motion_velocity(rot, Vec3(1, 0, 0)) - Vec3(0, 1, 0)).norm() < 1e-15);

    SECTION("first-order isometry") {
        Rng rng(31);
        for (int trial = 0; trial < 50; ++trial) {
            MotionGenerator g;
            for (auto& c : g.c) c = rng.uniform(-2, 2);
            Vec3 x(rng.uniform01(), rng.uniform01(), rng.uniform01());
            Vec3 y(rng.uniform01(), rng.uniform01(), rng.uniform01());
            double d = (x - y).dot(motion_velocity(g, x) - motion_velocity(g, y));
            CHECK_THAT(d, WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("random placement determinism and guard") {
    auto t = Triangulation::builtin("S2xI");
    auto p1 = random_placement(t, 42);
    auto p2 = random_placement(t, 42);
    REQUIRE(p1.coords.size() == p2.coords.size());
    for (const auto& [v, x] : p1.coords) CHECK(x == p2.at(v));
    CHECK(passes_guard(t, p1));

    SECTION("coincident vertices fail the guard") {
        Placement bad = p1;
        bad.coords[1] = bad.coords[0];
        CHECK_FALSE(passes_guard(t, bad));
    }
}

TEST_CASE("isometry motions preserve all edge lengths to first order") {
    auto t = Triangulation::builtin("solid-torus");
    auto p = random_placement(t, 5);
    Rng rng(77);
    MotionGenerator g;
    for (auto& c : g.c) c = rng.uniform(-1, 1);
    for (const auto& ec : t.edges()) {
        auto gr = d_length_d_coords(ec.ends[0], ec.ends[1], p);
        double dl = gr.dp.dot(motion_velocity(g, p.at(ec.ends[0]))) +
                    gr.dq.dot(motion_velocity(g, p.at(ec.ends[1])));
        CHECK_THAT(dl, WithinAbs(0.0, 1e-12));
    }
}
