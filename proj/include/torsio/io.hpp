#pragma once

/// File formats.
///
/// Manifold file (canonical, bit-exact round-trip):
///   {
///     "format": "torsio-manifold", "version": 1,
///     "vertices": [ids...],
///     "tetrahedra": [[a,b,c,d], ...],
///     "coordinates": {"id": [x,y,z], ...}        // optional
///   }
/// Quotient manifolds (self-gluings) cannot be reconstructed from a plain
/// tetrahedron list, so they are written as a construction recipe holding
/// the simplicial base plus the gluing map, and are rebuilt on load:
///   { "format": "torsio-manifold", "version": 1,
///     "construction": {"kind": "self-glue", "component1": c1,
///                      "component2": c2, "map": [[v,w], ...]},
///     "base": { ...manifold... } }
///
/// Gluing map file:
///   { "map": [[v1,v2], ...], "component1": c1, "component2": c2 }
///
/// Grassmann elements serialize as (monomial, coefficient) pairs in the
/// canonical generator order.

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "torsio/gluing.hpp"
#include "torsio/grassmann.hpp"

namespace torsio {

using Json = nlohmann::json;

struct LoadedManifold {
    Triangulation t;
    std::optional<Placement> p;
};

inline Json manifold_to_json(const Triangulation& t, const Placement* p = nullptr) {
    Json j;
    j["format"] = "torsio-manifold";
    j["version"] = 1;
    j["vertices"] = t.vertices();
    Json tets = Json::array();
    for (const auto& tet : t.tets()) tets.push_back(tet);
    j["tetrahedra"] = std::move(tets);
    if (p) {
        Json coords = Json::object();
        for (const auto& [v, x] : p->coords)
            coords[std::to_string(v)] = {x.x(), x.y(), x.z()};
        j["coordinates"] = std::move(coords);
    }
    return j;
}

inline Json self_glue_recipe_to_json(const Triangulation& base, const Placement* p,
                                     const GluingMap& gm) {
    Json j;
    j["format"] = "torsio-manifold";
    j["version"] = 1;
    Json c;
    c["kind"] = "self-glue";
    c["component1"] = gm.component1;
    c["component2"] = gm.component2;
    Json pairs = Json::array();
    for (const auto& [v, w] : gm.vertex_map) pairs.push_back({v, w});
    c["map"] = std::move(pairs);
    j["construction"] = std::move(c);
    j["base"] = manifold_to_json(base, p);
    return j;
}

inline GluingMap gluing_map_from_json(const Json& j) {
    GluingMap gm;
    try {
        gm.component1 = j.value("component1", 0);
        gm.component2 = j.value("component2", 0);
        for (const auto& pr : j.at("map"))
            gm.vertex_map[pr.at(0).get<VertexId>()] = pr.at(1).get<VertexId>();
    } catch (const Json::exception& e) {
        throw ParseError(std::string("gluing map: ") + e.what());
    }
    return gm;
}

inline Json gluing_map_to_json(const GluingMap& gm) {
    Json j;
    j["component1"] = gm.component1;
    j["component2"] = gm.component2;
    Json pairs = Json::array();
    for (const auto& [v, w] : gm.vertex_map) pairs.push_back({v, w});
    j["map"] = std::move(pairs);
    return j;
}

inline LoadedManifold manifold_from_json(const Json& j) {
    try {
        if (j.contains("construction")) {
            const Json& c = j.at("construction");
            if (c.at("kind") != "self-glue")
                throw ParseError("unknown construction kind");
            LoadedManifold base = manifold_from_json(j.at("base"));
            if (!base.p) throw ParseError("self-glue recipe needs base coordinates");
            GluingMap gm;
            gm.component1 = c.at("component1").get<int>();
            gm.component2 = c.at("component2").get<int>();
            for (const auto& pr : c.at("map"))
                gm.vertex_map[pr.at(0).get<VertexId>()] = pr.at(1).get<VertexId>();
            Glued g = self_glue(base.t, *base.p, gm);
            return {std::move(g.t), std::move(g.p)};
        }
        std::vector<std::array<VertexId, 4>> tets;
        for (const auto& tet : j.at("tetrahedra")) {
            if (tet.size() != 4) throw ParseError("tetrahedron tuple must have four entries");
            tets.push_back({tet.at(0).get<VertexId>(), tet.at(1).get<VertexId>(),
                            tet.at(2).get<VertexId>(), tet.at(3).get<VertexId>()});
        }
        LoadedManifold out{Triangulation::from_tetrahedra(tets), std::nullopt};
        if (j.contains("vertices")) {
            std::vector<VertexId> declared = j.at("vertices").get<std::vector<VertexId>>();
            std::vector<VertexId> derived = out.t.vertices();
            std::sort(declared.begin(), declared.end());
            if (declared != derived)
                throw ParseError("vertex list does not match the tetrahedra");
        }
        if (j.contains("coordinates")) {
            Placement p;
            for (const auto& [key, val] : j.at("coordinates").items()) {
                if (val.size() != 3) throw ParseError("coordinates must be 3-vectors");
                p.coords[std::stoi(key)] =
                    Vec3(val.at(0).get<double>(), val.at(1).get<double>(), val.at(2).get<double>());
            }
            for (VertexId v : out.t.vertices())
                if (!p.has(v)) throw ParseError("missing coordinates for a vertex");
            out.p = std::move(p);
        }
        return out;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("manifold: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ParseError("manifold: bad vertex id key in coordinates");
    }
}

// Accepts a file path or a "builtin:<name>" reference.
inline LoadedManifold load_manifold(const std::string& ref) {
    if (ref.rfind("builtin:", 0) == 0)
        return {Triangulation::builtin(ref.substr(8)), std::nullopt};
    std::ifstream in(ref);
    if (!in) throw ParseError("cannot open manifold file: " + ref);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("manifold json: ") + e.what());
    }
    return manifold_from_json(j);
}

inline void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("json: ") + e.what());
    }
    return j;
}

// Canonical serialization of a Grassmann element: terms in ascending
// canonical monomial order, each as the list of generator names.
inline Json element_to_json(const GrassmannElement& u) {
    Json terms = Json::array();
    const auto& reg = *u.registry();
    for (const auto& [mask, c] : u.terms()) {
        Json names = Json::array();
        for (std::size_t g = 0; g < reg.size(); ++g)
            if (mask & (1ull << g)) names.push_back(reg.name(static_cast<int>(g)));
        terms.push_back({{"monomial", std::move(names)}, {"coefficient", c}});
    }
    return terms;
}

inline Json generating_function_to_json(const GeneratingFunction& gf, const Triangulation& t) {
    Json j;
    j["scale"] = gf.scale.value();
    j["scale_log10"] = gf.scale.zero() ? 0.0 : gf.scale.log / std::log(10.0);
    j["scale_sign"] = gf.scale.sign;
    Json edges = Json::array();
    for (int e : gf.boundary)
        edges.push_back({{"id", e}, {"ends", t.edge(e).ends}});
    j["boundary_edges"] = std::move(edges);
    j["terms"] = element_to_json(gf.element);
    return j;
}

}  // namespace torsio
