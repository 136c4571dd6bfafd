#pragma once

/// Command-line entry points.
///
///   torsio invariant --manifold <file|builtin:NAME> [--seed N] [--seeds K]
///                    [--tolerance T] [--out report.json]
///   torsio verify    --suite <name|all> [--seed N] [--out report.json]
///   torsio glue      --manifold A --manifold2 B --map map.json
///                    [--transport] [--out glued.json] [--report report.json]
///   torsio glue      --manifold A --map map.json --self-glue [...]
///
/// Exit codes: 0 success, 2 parse error, 3 geometry/gluing failure,
/// 4 tolerance breach. TORSIO_SEED provides the default seed.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <string>

#include "torsio/io.hpp"
#include "torsio/verification.hpp"

namespace torsio {

struct RunConfig {
    std::string command;
    std::string manifold, manifold2, map_path, suite = "all", out, report;
    std::uint64_t seed = 0;
    int seeds = 1;
    double tolerance = 1e-6;
    bool self_glue_flag = false;
    bool transport = false;
};

namespace cli_detail {

inline void emit(const RunConfig& cfg, const Json& j, std::ostream& os) {
    os << j.dump(2) << "\n";
    if (!cfg.report.empty()) write_json(cfg.report, j);
    if (!cfg.out.empty() && cfg.command != "glue") write_json(cfg.out, j);
}

inline void print_suite(const SuiteResult& sr, std::ostream& os) {
    os << "suite " << sr.suite << "\n";
    for (const auto& c : sr.checks) {
        os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(52)
           << c.name << "  measured " << std::scientific << std::setprecision(3)
           << c.measured << "  tolerance " << c.tolerance;
        if (!c.note.empty()) os << "  [" << c.note << "]";
        os << std::defaultfloat << "\n";
    }
}

inline Json suite_to_json(const SuiteResult& sr) {
    Json j;
    j["suite"] = sr.suite;
    j["pass"] = sr.pass();
    Json checks = Json::array();
    for (const auto& c : sr.checks)
        checks.push_back({{"name", c.name},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"note", c.note}});
    j["checks"] = std::move(checks);
    return j;
}

inline Json manifold_summary(const Triangulation& t) {
    Json j;
    j["vertices"] = t.vertex_count();
    j["tetrahedra"] = t.tets().size();
    j["edges"] = t.edges().size();
    j["faces"] = t.faces().size();
    j["boundary_components"] = t.num_boundary_components();
    j["simplicial"] = t.is_simplicial();
    Json chis = Json::array();
    for (const auto& c : t.boundary_components()) chis.push_back(c.euler());
    j["boundary_euler"] = std::move(chis);
    return j;
}

}  // namespace cli_detail

// ---------------------------------------------------------------------------

inline int cmd_invariant(const RunConfig& cfg, std::ostream& os) {
    LoadedManifold lm;
    try {
        lm = load_manifold(cfg.manifold);
    } catch (const ParseError& e) {
        os << "parse error: " << e.what() << "\n";
        return 2;
    }
    try {
        Json report;
        report["command"] = "invariant";
        report["manifold"] = cli_detail::manifold_summary(lm.t);
        report["seed"] = cfg.seed;
        report["seeds"] = cfg.seeds;
        os << "manifold: " << cfg.manifold << "  boundary components: "
           << lm.t.num_boundary_components() << "\n";

        if (lm.t.num_boundary_components() == 0) {
            std::vector<double> vals;
            bool zero = true;
            for (int s = 0; s < cfg.seeds; ++s) {
                auto ev = invariant_closed_eval(lm.t, derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
                vals.push_back(ev.value.value());
                zero = zero && ev.structurally_zero;
            }
            double spread = relative_spread(vals);
            report["values"] = vals;
            report["structurally_zero"] = zero;
            report["max_relative_spread"] = spread;
            report["invariant"] = vals.front();
            os << "closed invariant: " << std::setprecision(15) << vals.front()
               << "  (spread " << spread << " over " << cfg.seeds << " seeds)\n";
            cli_detail::emit(cfg, report, os);
            return spread <= cfg.tolerance ? 0 : 4;
        }

        Triangulation t = ensure_inner_vertices(lm.t, 3);
        Placement base;
        if (lm.p) {
            // keep the supplied coordinates, sample only refinement vertices
            Placement partial = *lm.p;
            base = resample_interior(t, partial, derive_seed(cfg.seed, 0xf));
            for (const auto& [v, x] : lm.p->coords) base.coords[v] = x;
            if (!passes_guard(t, base))
                base = resample_interior(t, *lm.p, derive_seed(cfg.seed, 0xf));
        } else {
            base = random_placement(t, cfg.seed);
        }

        // combinatorial stability of the rigid construction across seeds
        RigidConstruction rc0 = rigid_construction_interior(t, base);
        std::vector<double> scalars;
        std::vector<GeneratingFunction> gfs;
        for (int s = 0; s < cfg.seeds; ++s) {
            Placement p = (s == 0 && cfg.seeds == 1)
                              ? base
                              : resample_interior(t, base, derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(s)));
            RigidConstruction rc = rigid_construction_interior(t, p);
            if (rc.edges != rc0.edges)
                throw RankDeficientError("rigid construction unstable across seeds");
            InvariantOptions opt;
            opt.seed = derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(s));
            gfs.push_back(generating_invariant(t, p, opt));
            scalars.push_back(gfs.back().scalar_value());
        }
        double spread = relative_spread(scalars);
        // track singleton coefficients as well
        for (int c : gfs.front().boundary) {
            for (int d : gfs.front().boundary) {
                std::vector<double> vals;
                for (const auto& gf : gfs) vals.push_back(gf.coefficient({c}, {d}));
                spread = std::max(spread, relative_spread(vals));
            }
        }
        report["values"] = scalars;
        report["max_relative_spread"] = spread;
        report["generating_function"] = generating_function_to_json(gfs.front(), t);
        os << "boundary invariant (scalar coefficient): " << std::setprecision(15)
           << scalars.front() << "\n"
           << "eligible boundary edges: " << gfs.front().boundary.size()
           << "  max relative spread: " << spread << " over " << cfg.seeds << " seeds\n";
        cli_detail::emit(cfg, report, os);
        return spread <= cfg.tolerance ? 0 : 4;
    } catch (const Error& e) {
        os << "geometry failure: " << e.what() << "\n";
        return 3;
    }
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& os) {
    std::vector<std::string> names;
    if (cfg.suite == "all")
        names = suite_names();
    else
        names.push_back(cfg.suite);
    Json report;
    report["command"] = "verify";
    report["seed"] = cfg.seed;
    Json suites = Json::array();
    bool all_pass = true;
    try {
        for (const auto& name : names) {
            SuiteResult sr = run_suite(name, cfg.seed);
            cli_detail::print_suite(sr, os);
            suites.push_back(cli_detail::suite_to_json(sr));
            all_pass = all_pass && sr.pass();
        }
    } catch (const UnknownNameError& e) {
        os << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        os << "geometry failure: " << e.what() << "\n";
        return 3;
    }
    report["suites"] = std::move(suites);
    report["pass"] = all_pass;
    cli_detail::emit(cfg, report, os);
    return all_pass ? 0 : 4;
}

// Writes ready-to-glue example inputs: the ball pair and the solid-torus
// pair with their gluing maps, and the sphere cylinder with its self-gluing
// map, all placed from the configured seed.
inline int cmd_fixtures(const RunConfig& cfg, std::ostream& os) {
    std::string dir = cfg.out.empty() ? "." : cfg.out;
    try {
        std::filesystem::create_directories(dir);
        GluingFixture ball = ball_pair_fixture(cfg.seed);
        write_json(dir + "/ball1.json", manifold_to_json(ball.m1, &ball.p1));
        write_json(dir + "/ball2.json", manifold_to_json(ball.m2, &ball.p2));
        write_json(dir + "/ball-map.json", gluing_map_to_json(ball.map));

        GluingFixture st = solid_torus_pair_fixture(cfg.seed);
        write_json(dir + "/torus1.json", manifold_to_json(st.m1, &st.p1));
        write_json(dir + "/torus2.json", manifold_to_json(st.m2, &st.p2));
        write_json(dir + "/torus-map.json", gluing_map_to_json(st.map));

        Triangulation cyl = Triangulation::builtin("S2xI");
        Placement p = random_placement(cyl, cfg.seed);
        GluingMap gm;
        gm.component1 = 0;
        gm.component2 = 1;
        for (VertexId v : {0, 1, 2, 3}) gm.vertex_map[v] = v + 8;
        for (VertexId v : {0, 1, 2, 3}) p.coords[v + 8] = p.at(v);
        if (!passes_guard(cyl, p)) p = random_placement(cyl, derive_seed(cfg.seed, 1));
        write_json(dir + "/cylinder.json", manifold_to_json(cyl, &p));
        write_json(dir + "/cylinder-map.json", gluing_map_to_json(gm));
        os << "fixture files written to " << dir << "\n";
        return 0;
    } catch (const Error& e) {
        os << "fixture generation failed: " << e.what() << "\n";
        return 3;
    }
}

inline int cmd_glue(const RunConfig& cfg, std::ostream& os) {
    LoadedManifold a, b;
    GluingMap gm;
    try {
        a = load_manifold(cfg.manifold);
        gm = gluing_map_from_json(load_json(cfg.map_path));
        if (!cfg.self_glue_flag) b = load_manifold(cfg.manifold2);
    } catch (const ParseError& e) {
        os << "parse error: " << e.what() << "\n";
        return 2;
    }
    try {
        Json report;
        report["command"] = "glue";
        Placement p1 = a.p ? *a.p : random_placement(a.t, cfg.seed);

        if (cfg.self_glue_flag) {
            SelfGlueOutcome oc;
            // enforce the identification on the supplied placement
            for (const auto& [v, w] : gm.vertex_map) p1.coords[w] = p1.at(v);
            if (!passes_guard(a.t, p1))
                throw GeneralPositionError("identified placement fails the guard");
            Glued g = self_glue(a.t, p1, gm);
            oc = verify_self_glue_on(a.t, p1, gm, cfg.seed);
            report["manifold"] = cli_detail::manifold_summary(g.t);
            report["composed"] = oc.composed;
            report["composed_over_scale"] = oc.composed_abs / std::max(oc.scale, 1e-300);
            report["direct"] = oc.direct_value;
            report["direct_structurally_zero"] = oc.direct_structural_zero;
            report["script_rank_gap"] = oc.rank_gap;
            os << "self-glued manifold: " << g.t.vertex_count() << " vertices, "
               << g.t.tets().size() << " tetrahedra\n"
               << "composed value: " << oc.composed << "  direct: " << oc.direct_value
               << "\n";
            if (!cfg.out.empty()) write_json(cfg.out, self_glue_recipe_to_json(a.t, &p1, gm));
            cli_detail::emit(cfg, report, os);
            return 0;
        }

        Placement p2 = b.p ? *b.p : random_placement(b.t, derive_seed(cfg.seed, 1));
        if (cfg.transport) {
            std::map<VertexId, Vec3> target;
            for (const auto& [v, w] : gm.vertex_map) target[w] = p1.at(v);
            p2 = transport_placement(b.t, p2, gm.component2, target);
        }
        GluingFixture fx{"cli", a.t, b.t, p1, p2, gm};
        Glued g = glue(a.t, p1, b.t, p2, gm);
        report["manifold"] = cli_detail::manifold_summary(g.t);
        if (g.t.num_boundary_components() == 0) {
            ComposeOutcome oc = verify_gluing_fixture(fx, derive_seed(cfg.seed, 2));
            report["composed"] = oc.composed;
            report["direct"] = oc.direct;
            report["difference"] = oc.composed - oc.direct;
            report["abs_ratio_minus_one"] = oc.rel_error;
            report["sign_flag"] = oc.sign_flag;
            os << "glued manifold: " << g.t.vertex_count() << " vertices, "
               << g.t.tets().size() << " tetrahedra (closed)\n"
               << std::setprecision(15) << "composed: " << oc.composed
               << "\ndirect:   " << oc.direct << "\ndifference: " << oc.composed - oc.direct
               << "\n";
        } else {
            os << "glued manifold: " << g.t.vertex_count() << " vertices, "
               << g.t.tets().size() << " tetrahedra, " << g.t.num_boundary_components()
               << " boundary components\n";
        }
        if (!cfg.out.empty()) {
            if (g.t.is_simplicial())
                write_json(cfg.out, manifold_to_json(g.t, &g.p));
            else
                os << "note: glued complex is a quotient; writing skipped\n";
        }
        cli_detail::emit(cfg, report, os);
        return 0;
    } catch (const Error& e) {
        os << "gluing failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace torsio
