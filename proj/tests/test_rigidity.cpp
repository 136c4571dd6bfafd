#include <catch2/catch_amalgamated.hpp>

#include "torsio/rigidity.hpp"

using namespace torsio;

namespace {

// Subdivide lowest-index tetrahedra until `n` inner vertices exist.
std::pair<Triangulation, Placement> with_inner_vertices(Triangulation t, int n,
                                                        std::uint64_t seed) {
    Placement p = random_placement(t, seed);
    while (static_cast<int>(t.inner_vertices().size()) < n) {
        VertexId fresh = t.max_vertex_id() + 1;
        auto around = t.tets()[0];
        auto t2 = t.apply_pachner({PachnerMove::Kind::one_four, 0, fresh});
        p = extend_placement_barycentric(t2, p, fresh, around, seed + static_cast<std::uint64_t>(fresh));
        t = std::move(t2);
    }
    return {std::move(t), std::move(p)};
}

int interior_rank(const Triangulation& t, const Placement& p, const std::vector<int>& edges) {
    auto cols = interior_columns(t);
    Matrix m(static_cast<Eigen::Index>(edges.size()), cols.count());
    for (std::size_t i = 0; i < edges.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = edge_rigidity_row(t, p, cols, edges[i]);
    return rigidity_detail::svd_rank(m);
}

}  // namespace

TEST_CASE("interior construction sizes") {
    SECTION("S3 after three subdivisions") {
        // closed manifold: every vertex is inner, 5 original + 3 new
        auto [t, p] = with_inner_vertices(Triangulation::builtin("S3"), 8, 17);
        REQUIRE(t.inner_vertices().size() == 8);
        auto rc = rigid_construction_interior(t, p);
        CHECK(rc.edges.size() == 18);  // 3*8 - 6
    }
    SECTION("B3 with three inner vertices") {
        auto [t, p] = with_inner_vertices(Triangulation::builtin("B3"), 3, 29);
        auto rc = rigid_construction_interior(t, p);
        CHECK(rc.edges.size() == 9);  // 3*3 - 6 + 6
    }
    SECTION("solid torus with its three interior cone vertices") {
        auto t = Triangulation::builtin("solid-torus");
        auto p = random_placement(t, 3);
        auto rc = rigid_construction_interior(t, p);
        CHECK(rc.edges.size() == 9);  // 3*3 - 6 + 6
    }
}

TEST_CASE("greedy output is minimal") {
    auto [t, p] = with_inner_vertices(Triangulation::builtin("B3"), 3, 41);
    auto rc = rigid_construction_interior(t, p);
    int full = interior_rank(t, p, rc.edges);
    CHECK(full == static_cast<int>(rc.edges.size()));
    for (std::size_t drop = 0; drop < rc.edges.size(); ++drop) {
        std::vector<int> reduced;
        for (std::size_t i = 0; i < rc.edges.size(); ++i)
            if (i != drop) reduced.push_back(rc.edges[i]);
        CHECK(interior_rank(t, p, reduced) == full - 1);
    }
}

TEST_CASE("selection is stable across seeds") {
    for (const char* name : {"S2xI", "T2xI"}) {
        auto t = Triangulation::builtin(name);
        auto rc0 = rigid_construction_interior(t, random_placement(t, 100));
        for (std::uint64_t s = 101; s < 106; ++s) {
            auto rc = rigid_construction_interior(t, random_placement(t, s));
            INFO(name);
            CHECK(rc.edges == rc0.edges);
        }
        auto sc0 = rigid_construction_surface(t, random_placement(t, 100), 0);
        for (std::uint64_t s = 101; s < 106; ++s) {
            auto sc = rigid_construction_surface(t, random_placement(t, s), 0);
            CHECK(sc.edges == sc0.edges);
        }
    }
}

TEST_CASE("surface constructions and complements") {
    SECTION("four-vertex sphere keeps all six edges") {
        auto t = Triangulation::builtin("B3");
        auto p = random_placement(t, 7);
        auto rc = rigid_construction_surface(t, p, 0);
        CHECK(rc.edges.size() == 6);
        CHECK(rc.complement.empty());
    }
    SECTION("spheres always have empty complement") {
        auto t = Triangulation::builtin("S2xI");
        auto p = random_placement(t, 8);
        for (int c = 0; c < 2; ++c) {
            auto rc = rigid_construction_surface(t, p, c);
            CHECK(rc.complement.empty());
        }
    }
    SECTION("tori have complement of size six") {
        for (const char* name : {"solid-torus", "T2xI"}) {
            auto t = Triangulation::builtin(name);
            auto p = random_placement(t, 9);
            for (std::size_t c = 0; c < t.num_boundary_components(); ++c) {
                auto rc = rigid_construction_surface(t, p, static_cast<int>(c));
                INFO(name);
                CHECK(rc.complement.size() == 6);
                CHECK(rc.edges.size() == 3 * t.boundary_components()[c].vertices.size() - 6);
            }
        }
    }
}
