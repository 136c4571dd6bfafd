#pragma once

/// Named verification suites: the checks behind `torsio verify` and the
/// acceptance run. Each suite pits an implementation path against an
/// independent route (finite differences, brute-force Berezin expansion,
/// brute-force operator traces, or a second construction of the same
/// invariant) and reports measured residuals against fixed tolerances.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "torsio/complexes.hpp"
#include "torsio/gluing.hpp"
#include "torsio/grassmann.hpp"

namespace torsio {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    CheckResult& add(const std::string& name, double measured, double tolerance,
                     std::string note = {}) {
        checks.push_back({name, measured, tolerance, measured <= tolerance, std::move(note)});
        return checks.back();
    }
};

inline const std::vector<std::string>& builtin_manifold_names() {
    static const std::vector<std::string> names = {"S3",          "B3",   "S2xI",
                                                   "S2xS1",       "solid-torus",
                                                   "T2xI"};
    return names;
}

namespace verification_detail {

struct PreparedManifold {
    Triangulation t;
    Placement p;
    MetricCache mc;
    RigidConstruction rc_int;
    std::vector<RigidConstruction> rc_surf;
    std::vector<int> eligible;
};

inline PreparedManifold prepare_manifold(const std::string& name, std::uint64_t seed) {
    Triangulation t = ensure_inner_vertices(Triangulation::builtin(name), 3);
    Placement p = random_placement(t, seed);
    MetricCache mc = metric_cache(t, p);
    RigidConstruction rc = rigid_construction_interior(t, p);
    std::vector<RigidConstruction> surf;
    for (std::size_t c = 0; c < t.num_boundary_components(); ++c)
        surf.push_back(rigid_construction_surface(t, p, static_cast<int>(c)));
    std::vector<int> eligible = eligible_boundary_edges(surf);
    return {std::move(t), std::move(p), std::move(mc), std::move(rc), std::move(surf),
            std::move(eligible)};
}

}  // namespace verification_detail

// ---------------------------------------------------------------------------
// Gluing fixtures
// ---------------------------------------------------------------------------

struct GluingFixture {
    std::string name;
    Triangulation m1, m2;
    Placement p1, p2;
    GluingMap map;
};

// A ball glued to a once-subdivided mirrored ball along the common sphere;
// the result is the five-vertex three-sphere.
inline GluingFixture ball_pair_fixture(std::uint64_t seed) {
    GluingFixture fx;
    fx.name = "ball-pair";
    fx.m1 = Triangulation::builtin("B3");
    fx.p1 = random_placement(fx.m1, seed);
    fx.m2 = Triangulation::from_tetrahedra({{0, 1, 3, 2}})
                .apply_pachner({PachnerMove::Kind::one_four, 0, 4});
    for (VertexId v : {0, 1, 2, 3}) fx.map.vertex_map[v] = v;
    Placement boundary;
    for (VertexId v : {0, 1, 2, 3}) boundary.coords[v] = fx.p1.at(v);
    fx.p2 = resample_interior(fx.m2, boundary, derive_seed(seed, 7));
    return fx;
}

// Two copies of the cone-prism solid torus glued by the transpose of its
// lattice boundary torus, which exchanges meridian and longitude; the result
// is a genus-one Heegaard splitting of the three-sphere.
inline GluingFixture solid_torus_pair_fixture(std::uint64_t seed) {
    GluingFixture fx;
    fx.name = "solid-torus-pair";
    fx.m1 = Triangulation::builtin("solid-torus");
    fx.p1 = random_placement(fx.m1, seed);
    auto sigma = [](VertexId w) -> VertexId {
        if (w >= 9) return w + 3;  // cone vertices move out of the way
        return 3 * (w % 3) + (w / 3);
    };
    std::vector<std::array<VertexId, 4>> tets2;
    for (auto t : fx.m1.tets())
        tets2.push_back({sigma(t[0]), sigma(t[1]), sigma(t[2]), sigma(t[3])});
    fx.m2 = Triangulation::from_tetrahedra(tets2);
    for (VertexId v : fx.m1.boundary_components()[0].vertices) fx.map.vertex_map[v] = v;
    Placement boundary;
    for (VertexId v : fx.m1.boundary_components()[0].vertices)
        boundary.coords[v] = fx.p1.at(v);
    fx.p2 = resample_interior(fx.m2, boundary, derive_seed(seed, 7));
    return fx;
}

struct ComposeOutcome {
    double composed = 0.0;
    double direct = 0.0;
    double ratio = 0.0;     // composed / direct
    int sign_flag = 0;      // sign of the ratio
    double rel_error = 0.0; // | |ratio| - 1 |
};

// Evaluates both sides of the composition law on a fixture whose glued
// result is closed.
inline ComposeOutcome verify_gluing_fixture(const GluingFixture& fx, std::uint64_t direct_seed) {
    Glued g = glue(fx.m1, fx.p1, fx.m2, fx.p2, fx.map);
    if (g.t.num_boundary_components() != 0)
        throw ShapeMismatchError("gluing fixture must produce a closed manifold");

    int c1 = fx.map.component1, c2 = fx.map.component2;
    RigidConstruction rc1 = rigid_construction_surface(fx.m1, fx.p1, c1);
    RigidConstruction rc2 = transport_surface_rc(rc1, fx.m1, fx.m2, c2, fx.map.vertex_map);

    auto side_overrides = [&](const Triangulation& m, const Placement& p, int comp,
                              const RigidConstruction& rc_gamma) {
        std::vector<RigidConstruction> out;
        for (std::size_t c = 0; c < m.num_boundary_components(); ++c) {
            if (static_cast<int>(c) == comp)
                out.push_back(rc_gamma);
            else
                out.push_back(rigid_construction_surface(m, p, static_cast<int>(c)));
        }
        return out;
    };

    InvariantOptions o1;
    o1.seed = fx.p1.seed;
    o1.plan = {PlanSpec::Kind::glue_adapted, c1, {}};
    o1.surface_override = side_overrides(fx.m1, fx.p1, c1, rc1);
    GeneratingFunction I1 = generating_invariant(fx.m1, fx.p1, o1);

    InvariantOptions o2;
    o2.seed = fx.p2.seed;
    o2.plan = {PlanSpec::Kind::glue_adapted, c2, {}};
    o2.surface_override = side_overrides(fx.m2, fx.p2, c2, rc2);
    GeneratingFunction I2 = generating_invariant(fx.m2, fx.p2, o2);

    GammaData gd;
    const auto& bc1 = fx.m1.boundary_components().at(static_cast<std::size_t>(c1));
    gd.n_gamma = static_cast<int>(bc1.vertices.size());
    gd.tau_gamma = surface_complex(fx.m1, fx.p1, c1, rc1).tau();
    MetricCache mc1 = metric_cache(fx.m1, fx.p1);
    gd.gamma_length_sq = LogScalar::one();
    for (int e : bc1.edges)
        gd.gamma_length_sq =
            gd.gamma_length_sq * LogScalar::from(mc1.length[static_cast<std::size_t>(e)]).pow(2);
    for (int e : rc1.complement) {
        const auto& ec = fx.m1.edge(e);
        int partner = gluing_detail::find_component_edge(
            fx.m2, c2, fx.map.vertex_map.at(ec.ends[0]), fx.map.vertex_map.at(ec.ends[1]));
        gd.side1_edges.push_back(e);
        gd.side2_edges.push_back(partner);
        int joint = g.edge_map1[static_cast<std::size_t>(e)];
        if (joint != g.edge_map2[static_cast<std::size_t>(partner)])
            throw Error("glued edge pair disagrees with the edge maps");
        gd.joint_edges.push_back(joint);
    }
    for (int e : I1.boundary)
        if (std::find(gd.side1_edges.begin(), gd.side1_edges.end(), e) == gd.side1_edges.end())
            gd.side1_rest[e] = g.edge_map1[static_cast<std::size_t>(e)];
    for (int e : I2.boundary)
        if (std::find(gd.side2_edges.begin(), gd.side2_edges.end(), e) == gd.side2_edges.end())
            gd.side2_rest[e] = g.edge_map2[static_cast<std::size_t>(e)];

    GeneratingFunction composed = compose_invariants(I1, I2, gd);

    ComposeOutcome out;
    out.composed = composed.scalar_value();
    out.direct = invariant_closed(g.t, direct_seed);
    if (out.direct != 0.0) {
        out.ratio = out.composed / out.direct;
        out.sign_flag = out.ratio > 0 ? 1 : -1;
        out.rel_error = std::abs(std::abs(out.ratio) - 1.0);
    } else {
        out.rel_error = std::abs(out.composed);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Self-gluing fixtures (the zero lemmas)
// ---------------------------------------------------------------------------

struct SelfGlueOutcome {
    double composed = 0.0;       // the composition formula's value
    double composed_abs = 0.0;
    double scale = 0.0;          // magnitude of the same expression generically
    double direct_value = 0.0;   // invariant of the glued manifold
    bool direct_structural_zero = false;
    double rank_gap = 1.0;       // sigma_min/sigma_max of the glued script block
};

// Evaluates the self-gluing composition formula on an explicitly identified
// placement, plus the direct invariant and rank data of the glued manifold.
inline SelfGlueOutcome verify_self_glue_on(const Triangulation& m, const Placement& p,
                                           const GluingMap& gm, std::uint64_t seed) {
    const auto& bottom =
        m.boundary_components().at(static_cast<std::size_t>(gm.component1));

    Glued g = self_glue(m, p, gm);

    RigidConstruction rc_bottom = rigid_construction_surface(m, p, gm.component1);
    RigidConstruction rc_top = transport_surface_rc(rc_bottom, m, m, gm.component2, gm.vertex_map);

    // The integral over the glued pairs needs exactly the coefficients where
    // each glued generator comes from one of the two copies. Evaluating only
    // those through bordered determinants also survives the inner-block
    // degeneration this fixture is designed to produce.
    std::vector<int> fam1 = rc_bottom.complement;
    std::vector<int> fam2;
    for (int e : fam1) {
        const auto& ec = m.edge(e);
        fam2.push_back(gluing_detail::find_component_edge(
            m, gm.component2, gm.vertex_map.at(ec.ends[0]), gm.vertex_map.at(ec.ends[1])));
    }
    std::vector<std::vector<int>> choices;
    for (std::uint64_t bits = 0; bits < (1ull << fam1.size()); ++bits) {
        std::vector<int> pick;
        for (std::size_t i = 0; i < fam1.size(); ++i)
            pick.push_back((bits & (1ull << i)) ? fam2[i] : fam1[i]);
        choices.push_back(pick);
    }
    std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
    for (const auto& C : choices)
        for (const auto& D : choices) pairs.push_back({C, D});

    auto build_gf = [&](const Placement& pl) {
        InvariantOptions o;
        o.seed = pl.seed;
        o.plan = {PlanSpec::Kind::glue_adapted, gm.component1, {}};
        std::vector<RigidConstruction> overrides;
        for (std::size_t c = 0; c < m.num_boundary_components(); ++c) {
            if (static_cast<int>(c) == gm.component1)
                overrides.push_back(rc_bottom);
            else if (static_cast<int>(c) == gm.component2)
                overrides.push_back(rc_top);
            else
                overrides.push_back(rigid_construction_surface(m, pl, static_cast<int>(c)));
        }
        o.surface_override = std::move(overrides);
        o.retry_budget = 1;  // the identified placement must not be resampled
        o.phi_pairs = pairs;
        return generating_invariant(m, pl, o);
    };
    GeneratingFunction I = build_gf(p);

    GammaData gd;
    gd.n_gamma = static_cast<int>(bottom.vertices.size());
    gd.tau_gamma = surface_complex(m, p, gm.component1, rc_bottom).tau();
    MetricCache mc = metric_cache(m, p);
    gd.gamma_length_sq = LogScalar::one();
    for (int e : bottom.edges)
        gd.gamma_length_sq =
            gd.gamma_length_sq * LogScalar::from(mc.length[static_cast<std::size_t>(e)]).pow(2);
    gd.side1_edges = fam1;
    gd.side2_edges = fam2;
    for (int e : fam1) gd.joint_edges.push_back(g.edge_map1[static_cast<std::size_t>(e)]);

    GeneratingFunction rhs = self_glue_compose(I, gd);

    SelfGlueOutcome out;
    out.composed = rhs.scalar_value();
    out.composed_abs = std::abs(out.composed);

    // magnitude scale: the same expression with an unconstrained placement
    Placement generic = random_placement(m, derive_seed(seed, 0x5eed));
    GeneratingFunction Ig = build_gf(generic);
    double mag = std::max(I.magnitude(), Ig.magnitude());
    out.scale = std::abs(gd.prefactor().value()) * mag;

    auto ev = invariant_closed_eval(g.t, derive_seed(seed, 0xd1));
    out.direct_value = ev.value.value();
    out.direct_structural_zero = ev.structurally_zero;

    // rank deficiency of the glued script matrix
    {
        const Triangulation& tg = ev.t;
        const Placement& pg = ev.p;
        MetricCache mcg = metric_cache(tg, pg);
        RigidConstruction rcg = rigid_construction_interior(tg, pg);
        ScriptMatrix sm = build_script_matrix(tg, mcg, rcg, {});
        if (sm.m.rows() > 0) {
            Eigen::JacobiSVD<Matrix> svd(sm.m);
            double topv = svd.singularValues()(0);
            out.rank_gap =
                topv == 0.0 ? 0.0 : svd.singularValues()(svd.singularValues().size() - 1) / topv;
        }
    }
    return out;
}

// Self-glues the two boundary components of S2xI or T2xI: top shell forced
// onto the bottom shell's coordinates, then the composition formula.
inline SelfGlueOutcome verify_self_glue(const std::string& name, std::uint64_t seed) {
    Triangulation m = Triangulation::builtin(name);
    if (m.num_boundary_components() != 2)
        throw ShapeMismatchError("self-glue fixture needs two boundary components");
    const auto& bottom = m.boundary_components()[0];
    const auto& top = m.boundary_components()[1];
    VertexId shift = top.vertices.front() - bottom.vertices.front();

    GluingMap gm;
    gm.component1 = 0;
    gm.component2 = 1;
    for (VertexId v : bottom.vertices) gm.vertex_map[v] = v + shift;

    Placement p;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 32) throw GeneralPositionError("no identified placement found");
        p = random_placement(m, derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        for (VertexId v : bottom.vertices) p.coords[v + shift] = p.at(v);
        if (passes_guard(m, p)) break;
    }
    return verify_self_glue_on(m, p, gm, seed);
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

inline SuiteResult suite_complex_identities(std::uint64_t seed, int nseeds) {
    SuiteResult sr{"complex-identities", {}};
    for (const auto& name : builtin_manifold_names()) {
        double worst = 0.0;
        double worst_sym = 0.0;
        for (int s = 0; s < nseeds; ++s) {
            auto pm = verification_detail::prepare_manifold(name, derive_seed(seed, static_cast<std::uint64_t>(s)));
            ChainComplex cx = build_complex(
                {pm.t, pm.p, pm.mc, pm.rc_int, pm.rc_surf, pm.eligible, pm.eligible, {}});
            auto res = theorem1_residuals(cx);
            for (double r : res) worst = std::max(worst, r);

            ScriptMatrix sm = build_script_matrix(pm.t, pm.mc, pm.rc_int, pm.rc_surf);
            if (sm.m.rows() > 0) {
                double asym = (sm.m - sm.m.transpose()).cwiseAbs().maxCoeff();
                worst_sym = std::max(worst_sym, asym / (sm.m.norm() + 1e-300));
            }
        }
        sr.add(std::string(name) + ": max theorem-1 residual", worst, 1e-8);
        sr.add(std::string(name) + ": script f3 asymmetry", worst_sym, 1e-9);
    }
    return sr;
}

inline SuiteResult suite_derivatives(std::uint64_t seed, int ntets) {
    SuiteResult sr{"derivatives", {}};
    Rng rng(seed);
    auto richardson = [](const std::function<double(double)>& f, double x, double h) {
        auto central = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2.0 * hh); };
        return (4.0 * central(h / 2) - central(h)) / 3.0;
    };
    double worst_angle = 0.0, worst_len = 0.0;
    int done = 0;
    while (done < ntets) {
        std::array<Vec3, 4> pts;
        for (auto& q : pts) q = Vec3(rng.uniform01(), rng.uniform01(), rng.uniform01());
        double v6 = (pts[1] - pts[0]).cross(pts[2] - pts[0]).dot(pts[3] - pts[0]);
        double lmin = 1e9;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) lmin = std::min(lmin, (pts[i] - pts[j]).norm());
        // the reference differences need curvature headroom, so very flat
        // tetrahedra are excluded from the sample
        if (std::abs(v6) < 5e-2 || lmin < 1e-1) continue;
        ++done;

        std::array<double, 6> m{};
        for (int k = 0; k < 6; ++k)
            m[static_cast<std::size_t>(k)] =
                (pts[kTetEdgeSlots[k][0]] - pts[kTetEdgeSlots[k][1]]).squaredNorm();
        for (int local = 0; local < 6; ++local) {
            auto dm = dihedral_gradient_squared(m, local);
            double rownorm = 1e-9;
            std::array<double, 6> analytic{};
            for (int j = 0; j < 6; ++j) {
                double lj = std::sqrt(m[static_cast<std::size_t>(j)]);
                analytic[static_cast<std::size_t>(j)] = 2.0 * lj * dm[static_cast<std::size_t>(j)];
                rownorm = std::max(rownorm, std::abs(analytic[static_cast<std::size_t>(j)]));
            }
            for (int j = 0; j < 6; ++j) {
                double lj = std::sqrt(m[static_cast<std::size_t>(j)]);
                double fd = richardson(
                    [&](double l) {
                        auto mm = m;
                        mm[static_cast<std::size_t>(j)] = l * l;
                        return dihedral_from_squared_lengths(mm, local);
                    },
                    lj, 1e-4 * lj);
                worst_angle = std::max(
                    worst_angle, std::abs(analytic[static_cast<std::size_t>(j)] - fd) / rownorm);
            }
        }
        // length gradient on one edge
        Placement q;
        for (int i = 0; i < 4; ++i) q.coords[i] = pts[static_cast<std::size_t>(i)];
        auto gr = d_length_d_coords(0, 1, q);
        for (int axis = 0; axis < 3; ++axis) {
            double fd = richardson(
                [&](double x) {
                    Vec3 aa = pts[0];
                    aa[axis] = x;
                    return (aa - pts[1]).norm();
                },
                pts[0][axis], 1e-5);
            worst_len = std::max(worst_len, std::abs(gr.dp[axis] - fd));
        }
    }
    sr.add("dihedral angle rows vs Richardson differences", worst_angle, 1e-6);
    sr.add("length gradients vs Richardson differences", worst_len, 1e-6);
    return sr;
}

inline SuiteResult suite_placement_independence(std::uint64_t seed, int nseeds) {
    SuiteResult sr{"placement-independence", {}};
    for (const char* name : {"S3", "S2xS1"}) {
        std::vector<double> vals;
        Triangulation t = Triangulation::builtin(name);
        for (int s = 0; s < nseeds; ++s)
            vals.push_back(invariant_closed(t, derive_seed(seed, static_cast<std::uint64_t>(s))));
        sr.add(std::string(name) + ": closed invariant spread", relative_spread(vals), 1e-6);
    }
    for (const char* name : {"B3", "solid-torus"}) {
        Triangulation t = ensure_inner_vertices(Triangulation::builtin(name), 3);
        Placement base = random_placement(t, seed);
        auto eligible = eligible_boundary_edges(
            {rigid_construction_surface(t, base, 0)});
        std::vector<std::vector<int>> Cs = {{}}, Ds = {{}};
        if (eligible.size() >= 2) {
            Cs.push_back({eligible[0]});
            Ds.push_back({eligible[1]});
            Cs.push_back({eligible[0], eligible[1]});
            Ds.push_back({eligible[1], eligible[2 % eligible.size()]});
        }
        double worst = 0.0;
        for (std::size_t k = 0; k < Cs.size(); ++k) {
            std::vector<double> vals;
            for (int s = 0; s < nseeds; ++s) {
                Placement p = resample_interior(t, base, derive_seed(seed, 100 + static_cast<std::uint64_t>(s)));
                InvariantOptions opt;
                opt.seed = derive_seed(seed, 100 + static_cast<std::uint64_t>(s));
                vals.push_back(invariant_boundary(t, p, Cs[k], Ds[k], opt));
            }
            worst = std::max(worst, relative_spread(vals));
        }
        sr.add(std::string(name) + ": boundary coefficient spread", worst, 1e-6);
    }
    return sr;
}

inline SuiteResult suite_pachner(std::uint64_t seed) {
    SuiteResult sr{"pachner", {}};
    for (const char* name : {"S3", "S2xS1", "solid-torus"}) {
        Triangulation t = Triangulation::builtin(name);
        bool closed = t.num_boundary_components() == 0;

        auto moves23 = t.applicable_moves(PachnerMove::Kind::two_three);
        auto moves14 = t.applicable_moves(PachnerMove::Kind::one_four);
        Rng rng(derive_seed(seed, 0x77));
        PachnerMove mv23 = moves23.at(rng.index(moves23.size()));
        PachnerMove mv14 = moves14.at(rng.index(moves14.size()));
        Triangulation t23 = t.apply_pachner(mv23);
        Triangulation t14 = t.apply_pachner(mv14);

        if (closed) {
            double base = invariant_closed(t, seed);
            double v23 = invariant_closed(t23, seed);
            double v14 = invariant_closed(t14, seed);
            double scale = std::max({std::abs(base), std::abs(v23), std::abs(v14), 1e-300});
            sr.add(std::string(name) + ": 2-3 move drift", std::abs(v23 - base) / scale, 1e-6);
            sr.add(std::string(name) + ": 1-4 move drift", std::abs(v14 - base) / scale, 1e-6);
            if (base == 0.0) {
                // structurally zero manifolds must stay exactly zero
                sr.checks[sr.checks.size() - 2].pass = (v23 == 0.0);
                sr.checks.back().pass = (v14 == 0.0);
            }
        } else {
            // boundary fixed: compare generating-function coefficients.
            // Interior moves renumber edge classes, so boundary edges are
            // matched across triangulations by their endpoints.
            Triangulation tr = ensure_inner_vertices(t, 3);
            Placement p = random_placement(tr, seed);
            struct Eval {
                Triangulation t;
                GeneratingFunction gf;
            };
            auto eval = [&](const Triangulation& tm) {
                Triangulation trm = ensure_inner_vertices(tm, 3);
                Placement pm = resample_interior(trm, p, derive_seed(seed, 0x99));
                InvariantOptions opt;
                opt.seed = derive_seed(seed, 0x99);
                GeneratingFunction gf = generating_invariant(trm, pm, opt);
                return Eval{std::move(trm), std::move(gf)};
            };
            Eval base = eval(t);
            double worst = 0.0;
            for (const Triangulation& variant : {t23, t14}) {
                Eval gv = eval(variant);
                auto corresponding = [&](int e) {
                    const auto& ends = base.t.edge(e).ends;
                    for (int e2 : gv.gf.boundary)
                        if (gv.t.edge(e2).ends == ends) return e2;
                    throw Error("boundary edge lost across a Pachner move");
                };
                double scale = std::max(base.gf.magnitude(), 1e-300);
                double diff = std::abs(gv.gf.scalar_value() - base.gf.scalar_value());
                for (int c : base.gf.boundary)
                    for (int d : base.gf.boundary)
                        diff = std::max(diff,
                                        std::abs(gv.gf.coefficient({corresponding(c)},
                                                                   {corresponding(d)}) -
                                                 base.gf.coefficient({c}, {d})));
                worst = std::max(worst, diff / scale);
            }
            sr.add(std::string(name) + ": move drift over coefficients", worst, 1e-6);
        }
    }
    return sr;
}

inline SuiteResult suite_minor_oracle(std::uint64_t seed) {
    SuiteResult sr{"minor-oracle", {}};
    Rng rng(seed);
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
        Matrix M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M(i, j) = rng.uniform(-1, 1);
        std::vector<int> edges;
        for (int e = 0; e < n; ++e) edges.push_back(e);
        auto reg = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges(edges));
        auto ef = minor_generating_function(M, reg, edges);
        for (std::uint64_t rm = 0; rm < (1ull << n); ++rm) {
            for (std::uint64_t cm = 0; cm < (1ull << n); ++cm) {
                if (std::popcount(rm) != std::popcount(cm)) continue;
                std::vector<int> R, S;
                for (int e = 0; e < n; ++e) {
                    if (rm & (1ull << e)) R.push_back(e);
                    if (cm & (1ull << e)) S.push_back(e);
                }
                Matrix sub(static_cast<Eigen::Index>(R.size()),
                           static_cast<Eigen::Index>(S.size()));
                for (std::size_t i = 0; i < R.size(); ++i)
                    for (std::size_t j = 0; j < S.size(); ++j)
                        sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                            M(R[i], S[j]);
                double expected = R.empty() ? 1.0 : sub.determinant();
                double got = coefficient_at(ef, R, S);
                worst = std::max(worst, std::abs(got - expected) / (1.0 + std::abs(expected)));
            }
        }
    }
    sr.add("exp f coefficients vs determinant minors (n <= 5)", worst, 1e-10);

    // bordered minors through the inner-edge reduction
    double worst_phi = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        int q = 1 + static_cast<int>(rng.index(3));
        int p = 1 + static_cast<int>(rng.index(3));
        ScriptMatrix sm;
        for (int e = 0; e < q; ++e) sm.inner.push_back(e);
        for (int e = 0; e < p; ++e) sm.boundary.push_back(q + e);
        sm.all = sm.inner;
        sm.all.insert(sm.all.end(), sm.boundary.begin(), sm.boundary.end());
        sm.m = Matrix(q + p, q + p);
        for (int i = 0; i < q + p; ++i)
            for (int j = 0; j < q + p; ++j) sm.m(i, j) = rng.uniform(-1, 1);
        for (int i = 0; i < q; ++i) sm.m(i, i) += 2.0;
        auto phi = phi_schur(sm);
        double scale = phi.scale.value();
        for (int c : sm.boundary)
            for (int d : sm.boundary) {
                std::vector<int> rows = sm.inner, cols = sm.inner;
                rows.push_back(c);
                cols.push_back(d);
                Matrix sub = sm.block(rows, cols);
                double expected = sub.determinant();
                double got = scale * coefficient_at(phi.element, {c}, {d});
                worst_phi = std::max(worst_phi, std::abs(got - expected) / (1.0 + std::abs(expected)));
            }
    }
    sr.add("phi coefficients vs bordered minors", worst_phi, 1e-9);
    return sr;
}

inline SuiteResult suite_berezin_axioms() {
    SuiteResult sr{"berezin-axioms", {}};
    auto reg = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges({0, 1}));
    auto one = GrassmannElement::scalar(reg, 1.0);
    auto a = GrassmannElement::generator(reg, reg->a_index(0));
    auto b = GrassmannElement::generator(reg, reg->a_index(1));

    bool ax1 = berezin_integral(one, reg->a_index(0)).is_zero();
    bool ax2 = (berezin_integral(a, reg->a_index(0)) - one).is_zero();
    auto gh = b * a;  // g = b free of a
    bool ax3 = (berezin_integral(gh, reg->a_index(0)) - b).is_zero();

    sr.add("int da = 0", ax1 ? 0.0 : 1.0, 0.0);
    sr.add("int a da = 1", ax2 ? 0.0 : 1.0, 0.0);
    sr.add("int g h da = g int h da", ax3 ? 0.0 : 1.0, 0.0);
    return sr;
}

inline SuiteResult suite_gluing(std::uint64_t seed, int nseeds) {
    SuiteResult sr{"gluing", {}};
    for (auto maker : {&ball_pair_fixture, &solid_torus_pair_fixture}) {
        std::string name;
        double worst = 0.0;
        int flag = 0;
        bool flag_consistent = true;
        for (int s = 0; s < nseeds; ++s) {
            GluingFixture fx = maker(derive_seed(seed, static_cast<std::uint64_t>(s)));
            name = fx.name;
            ComposeOutcome oc = verify_gluing_fixture(fx, derive_seed(seed, 1000 + static_cast<std::uint64_t>(s)));
            worst = std::max(worst, oc.rel_error);
            if (flag == 0) flag = oc.sign_flag;
            if (oc.sign_flag != flag) flag_consistent = false;
        }
        auto& c = sr.add(name + ": |composed/direct| - 1", worst, 1e-6,
                         std::string("sign flag ") + (flag > 0 ? "+1" : "-1"));
        c.pass = c.pass && flag_consistent;
        if (!flag_consistent) c.note = "sign flag varies across seeds";
    }
    return sr;
}

// The self-gluing vanishing holds when the glued surface carries Grassmann
// generators (positive genus): identifying and integrating them realizes the
// glued manifold's degenerate minors. A sphere carries no generators, the
// formula degenerates to a bare scalar, and that scalar is the identity
// normalization of the coinciding-ends cylinder (it equals +1 exactly, as
// the composition law on cylinder gluings forces). The spherical composed
// check below is therefore expected to fail; it is kept as stated, and the
// cylinder normalization is recorded alongside it.
inline SuiteResult suite_zero_lemmas(std::uint64_t seed, int nseeds) {
    SuiteResult sr{"zero-lemmas", {}};
    for (const char* name : {"S2xI", "T2xI"}) {
        double worst = 0.0, worst_gap = 0.0, worst_norm = 0.0;
        bool all_zero = true;
        for (int s = 0; s < nseeds; ++s) {
            SelfGlueOutcome oc = verify_self_glue(name, derive_seed(seed, static_cast<std::uint64_t>(s)));
            worst = std::max(worst, oc.composed_abs / std::max(oc.scale, 1e-300));
            worst_gap = std::max(worst_gap, oc.rank_gap);
            worst_norm = std::max(worst_norm, std::abs(oc.composed - 1.0));
            all_zero = all_zero && oc.direct_structural_zero && oc.direct_value == 0.0;
        }
        sr.add(std::string(name) + ": |composed| / scale", worst, 1e-8);
        if (std::string(name) == "S2xI")
            sr.add("S2xI: |composed - 1| (cylinder normalization)", worst_norm, 1e-6);
        sr.add(std::string(name) + ": glued script rank gap", worst_gap, 1e-8);
        sr.add(std::string(name) + ": direct invariant structurally zero",
               all_zero ? 0.0 : 1.0, 0.0);
    }
    return sr;
}

inline SuiteResult suite_trace_formula(std::uint64_t seed, int nkernels) {
    SuiteResult sr{"trace-formula", {}};
    Rng rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < nkernels; ++trial) {
        int n = 1 + static_cast<int>(rng.index(2));
        auto reg = kernel_registry(n);
        GrassmannElement K(reg);
        std::uint64_t full = (1ull << (4 * n)) - 1;
        for (int k = 0; k < 10; ++k) K.add(rng.next_u64() & full, rng.uniform(-2, 2));

        double direct = kernel_trace(K, n);
        // independent route: operator matrix on the monomial basis
        double brute = 0.0;
        std::vector<int> descending;
        for (int g = 2 * n - 1; g >= 0; --g) descending.push_back(g);
        for (std::uint64_t bmask = 0; bmask < (1ull << (2 * n)); ++bmask) {
            GrassmannElement f = GrassmannElement::scalar(reg, 1.0);
            for (int g = 0; g < 2 * n; ++g)
                if (bmask & (1ull << g)) f = f * GrassmannElement::generator(reg, g);
            GrassmannElement af = multiple_integral(f * K, descending);
            brute += af.coefficient(bmask << (2 * n));
        }
        worst = std::max(worst, std::abs(direct - brute));
    }
    sr.add("kernel trace vs operator trace (n <= 2)", worst, 1e-12);
    return sr;
}

inline std::vector<std::string> suite_names() {
    return {"complex-identities", "derivatives",   "placement-independence",
            "pachner",            "minor-oracle",  "berezin-axioms",
            "gluing",             "zero-lemmas",   "trace-formula"};
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
    if (name == "complex-identities") return suite_complex_identities(seed, 3);
    if (name == "derivatives") return suite_derivatives(seed, 100);
    if (name == "placement-independence") return suite_placement_independence(seed, 10);
    if (name == "pachner") return suite_pachner(seed);
    if (name == "minor-oracle") return suite_minor_oracle(seed);
    if (name == "berezin-axioms") return suite_berezin_axioms();
    if (name == "gluing") return suite_gluing(seed, 5);
    if (name == "zero-lemmas") return suite_zero_lemmas(seed, 3);
    if (name == "trace-formula") return suite_trace_formula(seed, 50);
    throw UnknownNameError("unknown verification suite: " + name);
}

}  // namespace torsio
