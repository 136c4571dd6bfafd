#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "torsio/cli.hpp"

using namespace torsio;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("torsio_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("manifold json round-trip is bit-exact") {
    auto t = Triangulation::builtin("S2xI");
    auto p = random_placement(t, 99);
    Json j = manifold_to_json(t, &p);
    // serialize through text, as the CLI would
    std::stringstream ss;
    ss << j.dump(2);
    Json j2;
    ss >> j2;
    LoadedManifold lm = manifold_from_json(j2);
    REQUIRE(lm.p.has_value());
    CHECK(lm.t.tets() == t.tets());
    CHECK(lm.t.edges().size() == t.edges().size());
    for (VertexId v : t.vertices()) {
        CHECK(lm.p->at(v).x() == p.at(v).x());
        CHECK(lm.p->at(v).y() == p.at(v).y());
        CHECK(lm.p->at(v).z() == p.at(v).z());
    }
}

TEST_CASE("self-glue recipe reconstructs the quotient") {
    auto m = Triangulation::builtin("S2xI");
    GluingMap gm;
    gm.component1 = 0;
    gm.component2 = 1;
    for (VertexId v : {0, 1, 2, 3}) gm.vertex_map[v] = v + 8;
    Placement p = random_placement(m, 5);
    for (VertexId v : {0, 1, 2, 3}) p.coords[v + 8] = p.at(v);
    REQUIRE(passes_guard(m, p));
    Json j = self_glue_recipe_to_json(m, &p, gm);
    LoadedManifold lm = manifold_from_json(j);
    CHECK(lm.t.vertex_count() == 8);
    CHECK(lm.t.num_boundary_components() == 0);
    CHECK_FALSE(lm.t.is_simplicial());
}

TEST_CASE("malformed manifolds are rejected as parse errors") {
    CHECK_THROWS_AS(manifold_from_json(Json::parse(R"({"tetrahedra": [[0,1,2]]})")), ParseError);
    CHECK_THROWS_AS(manifold_from_json(Json::parse(R"({"x": 1})")), ParseError);
    CHECK_THROWS_AS(load_manifold("builtin:NOPE"), UnknownNameError);
    CHECK_THROWS_AS(load_manifold("/nonexistent/path.json"), ParseError);
}

TEST_CASE("grassmann element serialization is canonical") {
    auto reg = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges({2, 5}));
    auto a2 = GrassmannElement::generator(reg, reg->a_index(2));
    auto s5 = GrassmannElement::generator(reg, reg->astar_index(5));
    auto u = GrassmannElement::scalar(reg, 1.5) + a2 * s5 * 2.0;
    Json j = element_to_json(u);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["monomial"].empty());
    CHECK(j[0]["coefficient"] == 1.5);
    CHECK(j[1]["monomial"] == Json::array({"a[2]", "a*[5]"}));
    CHECK(j[1]["coefficient"] == 2.0);
}

TEST_CASE("cmd_invariant") {
    TempDir dir;
    std::ostringstream sink;

    SECTION("closed builtin passes") {
        RunConfig cfg;
        cfg.command = "invariant";
        cfg.manifold = "builtin:S3";
        cfg.seeds = 3;
        CHECK(cmd_invariant(cfg, sink) == 0);
    }
    SECTION("malformed json exits 2") {
        std::ofstream(dir.file("bad.json")) << "{ not json";
        RunConfig cfg;
        cfg.manifold = dir.file("bad.json");
        CHECK(cmd_invariant(cfg, sink) == 2);
    }
    SECTION("impossible tolerance exits 4") {
        RunConfig cfg;
        cfg.manifold = "builtin:B3";
        cfg.seeds = 4;
        cfg.tolerance = 1e-18;
        CHECK(cmd_invariant(cfg, sink) == 4);
    }
    SECTION("boundary manifold from a file with coordinates") {
        auto t = Triangulation::builtin("B3");
        auto p = random_placement(t, 3);
        write_json(dir.file("b3.json"), manifold_to_json(t, &p));
        RunConfig cfg;
        cfg.manifold = dir.file("b3.json");
        cfg.seeds = 2;
        cfg.report = dir.file("report.json");
        CHECK(cmd_invariant(cfg, sink) == 0);
        Json rep = load_json(dir.file("report.json"));
        CHECK(rep["max_relative_spread"].get<double>() <= 1e-6);
    }
}

TEST_CASE("cmd_verify") {
    std::ostringstream sink;
    RunConfig cfg;
    SECTION("single fast suite") {
        cfg.suite = "berezin-axioms";
        CHECK(cmd_verify(cfg, sink) == 0);
    }
    SECTION("unknown suite exits 2") {
        cfg.suite = "bogus";
        CHECK(cmd_verify(cfg, sink) == 2);
    }
    SECTION("minor oracle suite") {
        cfg.suite = "minor-oracle";
        cfg.seed = 4;
        CHECK(cmd_verify(cfg, sink) == 0);
    }
}

TEST_CASE("cmd_glue end to end") {
    TempDir dir;
    std::ostringstream sink;
    GluingFixture fx = ball_pair_fixture(5);
    write_json(dir.file("m1.json"), manifold_to_json(fx.m1, &fx.p1));
    write_json(dir.file("m2.json"), manifold_to_json(fx.m2, &fx.p2));
    write_json(dir.file("map.json"), gluing_map_to_json(fx.map));

    RunConfig cfg;
    cfg.command = "glue";
    cfg.manifold = dir.file("m1.json");
    cfg.manifold2 = dir.file("m2.json");
    cfg.map_path = dir.file("map.json");
    cfg.out = dir.file("glued.json");
    cfg.report = dir.file("report.json");
    REQUIRE(cmd_glue(cfg, sink) == 0);

    Json rep = load_json(dir.file("report.json"));
    double composed = rep["composed"].get<double>();
    double direct = rep["direct"].get<double>();
    CHECK(std::abs(std::abs(composed / direct) - 1.0) <= 1e-6);

    LoadedManifold glued = manifold_from_json(load_json(dir.file("glued.json")));
    CHECK(glued.t.vertex_count() == 5);
    CHECK(glued.t.num_boundary_components() == 0);

    SECTION("mismatched coordinates exit 3") {
        Placement bad = fx.p2;
        bad.coords[1] += Vec3(0.25, 0, 0);
        write_json(dir.file("m2bad.json"), manifold_to_json(fx.m2, &bad));
        cfg.manifold2 = dir.file("m2bad.json");
        cfg.out.clear();
        CHECK(cmd_glue(cfg, sink) == 3);
    }
    SECTION("transport repairs a rigidly moved placement") {
        Eigen::AngleAxisd rot(0.4, Vec3(0, 0, 1));
        Placement moved = fx.p2;
        for (auto& [v, x] : moved.coords) x = rot * x + Vec3(1, 2, 3);
        write_json(dir.file("m2moved.json"), manifold_to_json(fx.m2, &moved));
        cfg.manifold2 = dir.file("m2moved.json");
        cfg.transport = true;
        cfg.out.clear();
        CHECK(cmd_glue(cfg, sink) == 0);
    }
}

TEST_CASE("cmd_glue self-glue") {
    TempDir dir;
    std::ostringstream sink;
    auto m = Triangulation::builtin("S2xI");
    auto p = random_placement(m, 17);
    for (VertexId v : {0, 1, 2, 3}) p.coords[v + 8] = p.at(v);
    REQUIRE(passes_guard(m, p));
    write_json(dir.file("m.json"), manifold_to_json(m, &p));
    GluingMap gm;
    gm.component1 = 0;
    gm.component2 = 1;
    for (VertexId v : {0, 1, 2, 3}) gm.vertex_map[v] = v + 8;
    write_json(dir.file("map.json"), gluing_map_to_json(gm));

    RunConfig cfg;
    cfg.command = "glue";
    cfg.manifold = dir.file("m.json");
    cfg.map_path = dir.file("map.json");
    cfg.self_glue_flag = true;
    cfg.out = dir.file("glued.json");
    cfg.report = dir.file("report.json");
    REQUIRE(cmd_glue(cfg, sink) == 0);

    Json rep = load_json(dir.file("report.json"));
    CHECK(rep["direct_structurally_zero"].get<bool>());
    CHECK(rep["direct"].get<double>() == 0.0);
    // the reconstructed quotient from the written recipe
    LoadedManifold glued = manifold_from_json(load_json(dir.file("glued.json")));
    CHECK(glued.t.num_boundary_components() == 0);
    CHECK(glued.t.vertex_count() == 8);
}
