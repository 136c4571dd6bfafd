#include <catch2/catch_amalgamated.hpp>

#include "torsio/triangulation.hpp"

using namespace torsio;

TEST_CASE("single tetrahedron counts") {
    auto t = Triangulation::from_tetrahedra({{0, 1, 2, 3}});
    CHECK(t.vertex_count() == 4);
    CHECK(t.edges().size() == 6);
    for (const auto& e : t.edges()) CHECK(e.boundary);
    CHECK(t.faces().size() == 4);
    for (const auto& f : t.faces()) CHECK(f.boundary);
    REQUIRE(t.num_boundary_components() == 1);
    CHECK(t.boundary_components()[0].euler() == 2);
    CHECK(t.is_simplicial());
}

TEST_CASE("boundary of the 4-simplex is a closed manifold") {
    auto t = Triangulation::builtin("S3");
    CHECK(t.vertex_count() == 5);
    CHECK(t.tets().size() == 5);
    CHECK(t.edges().size() == 10);
    CHECK(t.faces().size() == 10);
    CHECK(t.num_boundary_components() == 0);
    CHECK(t.euler_characteristic() == 0);
}

TEST_CASE("inconsistent orientation tuples are rejected") {
    CHECK_THROWS_AS(Triangulation::from_tetrahedra({{0, 1, 2, 3}, {0, 1, 2, 4}}),
                    NonOrientableError);
    // consistent version passes
    CHECK_NOTHROW(Triangulation::from_tetrahedra({{0, 1, 2, 3}, {1, 0, 2, 4}}));
}

TEST_CASE("degenerate and non-manifold inputs are rejected") {
    CHECK_THROWS_AS(Triangulation::from_tetrahedra({{0, 1, 2, 2}}), DegenerateError);
    // three tetrahedra on one face
    CHECK_THROWS_AS(Triangulation::from_tetrahedra({{0, 1, 2, 3}, {1, 0, 2, 4}, {0, 1, 2, 5}}),
                    NonManifoldError);
}

TEST_CASE("builtin manifolds validate") {
    SECTION("B3") {
        auto t = Triangulation::builtin("B3");
        CHECK(t.num_boundary_components() == 1);
        CHECK(t.boundary_components()[0].faces.size() == 4);
    }
    SECTION("S2xI") {
        auto t = Triangulation::builtin("S2xI");
        CHECK(t.vertex_count() == 12);
        CHECK(t.tets().size() == 24);
        REQUIRE(t.num_boundary_components() == 2);
        CHECK(t.boundary_components()[0].euler() == 2);
        CHECK(t.boundary_components()[1].euler() == 2);
        CHECK(t.euler_characteristic() == 2);
    }
    SECTION("solid-torus") {
        auto t = Triangulation::builtin("solid-torus");
        CHECK(t.vertex_count() == 12);
        CHECK(t.tets().size() == 24);
        REQUIRE(t.num_boundary_components() == 1);
        CHECK(t.boundary_components()[0].euler() == 0);
        CHECK(t.boundary_components()[0].vertices.size() == 9);
        CHECK(t.euler_characteristic() == 0);
        CHECK(t.inner_vertices().size() == 3);
    }
    SECTION("T2xI") {
        auto t = Triangulation::builtin("T2xI");
        CHECK(t.vertex_count() == 21);
        CHECK(t.tets().size() == 84);
        REQUIRE(t.num_boundary_components() == 2);
        CHECK(t.boundary_components()[0].euler() == 0);
        CHECK(t.boundary_components()[1].euler() == 0);
        CHECK(t.inner_vertices().size() == 7);
    }
    SECTION("S2xS1") {
        auto t = Triangulation::builtin("S2xS1");
        CHECK(t.vertex_count() == 8);
        CHECK(t.tets().size() == 24);
        CHECK(t.num_boundary_components() == 0);
        CHECK(t.euler_characteristic() == 0);
        CHECK_FALSE(t.is_simplicial());
    }
    CHECK_THROWS_AS(Triangulation::builtin("K3"), UnknownNameError);
}

TEST_CASE("chi of boundary is twice chi of manifold") {
    for (const char* name : {"B3", "S3", "S2xI", "solid-torus", "T2xI", "S2xS1"}) {
        auto t = Triangulation::builtin(name);
        int chi_bd = 0;
        for (const auto& c : t.boundary_components()) chi_bd += c.euler();
        INFO(name);
        CHECK(chi_bd == 2 * t.euler_characteristic());
    }
}

TEST_CASE("closed surface components satisfy E = 3N - 3chi") {
    for (const char* name : {"B3", "S2xI", "solid-torus", "T2xI"}) {
        auto t = Triangulation::builtin(name);
        for (const auto& c : t.boundary_components()) {
            INFO(name);
            CHECK(static_cast<int>(c.edges.size()) ==
                  3 * static_cast<int>(c.vertices.size()) - 3 * c.euler());
        }
    }
}

TEST_CASE("2-3 move on two tetrahedra sharing a face") {
    auto t = Triangulation::from_tetrahedra({{0, 1, 2, 3}, {1, 0, 2, 4}});
    int shared = -1;
    for (std::size_t f = 0; f < t.faces().size(); ++f)
        if (t.faces()[f].uses.size() == 2) shared = static_cast<int>(f);
    REQUIRE(shared >= 0);
    auto t2 = t.apply_pachner({PachnerMove::Kind::two_three, shared, -1});
    CHECK(t2.tets().size() == 3);
    // one new inner edge {3,4}
    int inner = 0;
    for (const auto& e : t2.edges())
        if (!e.boundary) {
            ++inner;
            CHECK(e.ends == std::array<VertexId, 2>{3, 4});
            CHECK(e.uses.size() == 3);
        }
    CHECK(inner == 1);
    CHECK(t2.num_boundary_components() == 1);

    SECTION("3-2 undoes it") {
        int eid = -1;
        for (std::size_t e = 0; e < t2.edges().size(); ++e)
            if (!t2.edges()[e].boundary) eid = static_cast<int>(e);
        auto t3 = t2.apply_pachner({PachnerMove::Kind::three_two, eid, -1});
        CHECK(t3.tets().size() == 2);
        CHECK(t3.edges().size() == t.edges().size());
        CHECK(t3.faces().size() == t.faces().size());
        // same vertex sets of tetrahedra
        auto canon = [](const Triangulation& x) {
            std::vector<std::array<VertexId, 4>> v;
            for (auto tet : x.tets()) {
                std::sort(tet.begin(), tet.end());
                v.push_back(tet);
            }
            std::sort(v.begin(), v.end());
            return v;
        };
        CHECK(canon(t3) == canon(t));
    }
}

TEST_CASE("1-4 move inside a tetrahedron") {
    auto t = Triangulation::builtin("B3");
    auto t2 = t.apply_pachner({PachnerMove::Kind::one_four, 0, 4});
    CHECK(t2.tets().size() == 4);
    CHECK(t2.vertex_count() == 5);
    CHECK_FALSE(t2.is_boundary_vertex(4));
    CHECK(t2.num_boundary_components() == 1);
    CHECK(t2.boundary_components()[0].faces.size() == 4);

    SECTION("4-1 undoes it") {
        auto t3 = t2.apply_pachner({PachnerMove::Kind::four_one, 4, -1});
        CHECK(t3.tets().size() == 1);
        CHECK(t3.vertex_count() == 4);
    }
}

TEST_CASE("pachner moves preserve manifold data on builtins") {
    for (const char* name : {"S3", "S2xI", "solid-torus"}) {
        auto t = Triangulation::builtin(name);
        auto moves23 = t.applicable_moves(PachnerMove::Kind::two_three);
        REQUIRE_FALSE(moves23.empty());
        auto t2 = t.apply_pachner(moves23.front());
        INFO(name);
        CHECK(t2.tets().size() == t.tets().size() + 1);
        CHECK(t2.num_boundary_components() == t.num_boundary_components());
        for (std::size_t c = 0; c < t.num_boundary_components(); ++c) {
            CHECK(t2.boundary_components()[c].vertices == t.boundary_components()[c].vertices);
            CHECK(t2.boundary_components()[c].faces.size() ==
                  t.boundary_components()[c].faces.size());
        }
        auto moves14 = t.applicable_moves(PachnerMove::Kind::one_four);
        auto t3 = t.apply_pachner(moves14.front());
        CHECK(t3.tets().size() == t.tets().size() + 3);
        CHECK(t3.inner_vertices().size() == t.inner_vertices().size() + 1);
    }
}

TEST_CASE("2-3 move with a pre-existing apex pair stays valid") {
    // on S3 every apex pair is already an edge; the move creates a second
    // edge class with the same endpoints
    auto t = Triangulation::builtin("S3");
    auto moves = t.applicable_moves(PachnerMove::Kind::two_three);
    REQUIRE_FALSE(moves.empty());
    auto t2 = t.apply_pachner(moves.front());
    CHECK(t2.tets().size() == 6);
    CHECK_FALSE(t2.is_simplicial());
    CHECK(t2.euler_characteristic() == 0);
}
