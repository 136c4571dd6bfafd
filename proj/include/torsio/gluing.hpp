#pragma once

/// Gluing of manifolds along boundary components and the composition of
/// invariant generating functions.
///
/// Gluing identifies one boundary component of M1 with one of M2 (or two
/// components of one manifold) through a simplicial, orientation-reversing
/// vertex bijection whose two sides carry identical coordinates. The glued
/// surface becomes interior; its edge and face classes are merged pairwise
/// at the instance level, so chords and doubled cells stay distinct.
///
/// The composed generating function is
///     (-1)^{N_Gamma} tau_Gamma^2 / prod_{Gamma edges} l^2
///         * integral of I_{M1} I_{M2} over the da*_i da_i pairs of E_Gamma,
/// with tau_Gamma the torsion of 0 -> e(3) -> (dx)_Gamma -> (dl)_mrc -> 0.

#include <map>
#include <vector>

#include "torsio/common.hpp"
#include "torsio/complexes.hpp"
#include "torsio/grassmann.hpp"
#include "torsio/rigidity.hpp"

namespace torsio {

struct GluingMap {
    int component1 = 0;
    int component2 = 0;
    std::map<VertexId, VertexId> vertex_map;  // Gamma1 vertex -> Gamma2 vertex
};

struct Glued {
    Triangulation t;
    Placement p;
    std::vector<int> edge_map1;  // edge id in M1 -> edge id in the result
    std::vector<int> edge_map2;  // edge id in M2 -> edge id in the result
    std::map<VertexId, VertexId> vertex_map2;  // M2 vertex -> result vertex
    std::vector<int> gamma_edges;              // glued surface edges, result ids
    std::vector<VertexId> gamma_vertices;      // result ids (= M1 labels)
};

namespace gluing_detail {

inline int find_component_edge(const Triangulation& t, int component, VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    const auto& bc = t.boundary_components().at(static_cast<std::size_t>(component));
    for (int e : bc.edges) {
        const auto& ec = t.edge(e);
        if (ec.ends[0] == u && ec.ends[1] == v) return e;
    }
    throw IncompatibleBoundaryError("gluing map does not send edges to edges");
}

inline int find_component_face(const Triangulation& t, int component,
                               std::array<VertexId, 3> f) {
    std::sort(f.begin(), f.end());
    const auto& bc = t.boundary_components().at(static_cast<std::size_t>(component));
    for (int id : bc.faces)
        if (t.face(id).verts == f) return id;
    throw IncompatibleBoundaryError("gluing map does not send faces to faces");
}

inline void check_bijection(const BoundaryComponent& from, const BoundaryComponent& to,
                            const std::map<VertexId, VertexId>& vmap) {
    if (vmap.size() != from.vertices.size())
        throw IncompatibleBoundaryError("gluing map has the wrong domain size");
    std::set<VertexId> image;
    for (VertexId v : from.vertices) {
        auto it = vmap.find(v);
        if (it == vmap.end())
            throw IncompatibleBoundaryError("gluing map misses a vertex of the surface");
        if (!std::binary_search(to.vertices.begin(), to.vertices.end(), it->second))
            throw IncompatibleBoundaryError("gluing map leaves the target surface");
        image.insert(it->second);
    }
    if (image.size() != to.vertices.size())
        throw IncompatibleBoundaryError("gluing map is not a bijection onto the target");
}

inline void check_placements(const Placement& p1, const Placement& p2,
                             const std::map<VertexId, VertexId>& vmap) {
    for (const auto& [v, w] : vmap) {
        const Vec3& a = p1.at(v);
        const Vec3& b = p2.at(w);
        if (a.x() != b.x() || a.y() != b.y() || a.z() != b.z())
            throw PlacementMismatchError("glued surfaces carry different coordinates");
    }
}

inline void reject_duplicate_tets(const Triangulation& t) {
    std::set<std::array<VertexId, 4>> seen;
    for (auto tet : t.tets()) {
        std::sort(tet.begin(), tet.end());
        if (!seen.insert(tet).second)
            throw IncompatibleBoundaryError("glued manifold has duplicate tetrahedra");
    }
}

}  // namespace gluing_detail

inline Glued glue(const Triangulation& m1, const Placement& p1, const Triangulation& m2,
                  const Placement& p2, const GluingMap& gm) {
    const auto& bc1 = m1.boundary_components().at(static_cast<std::size_t>(gm.component1));
    const auto& bc2 = m2.boundary_components().at(static_cast<std::size_t>(gm.component2));
    gluing_detail::check_bijection(bc1, bc2, gm.vertex_map);
    gluing_detail::check_placements(p1, p2, gm.vertex_map);

    // relabel M2 out of M1's id range
    VertexId off = std::max(m1.max_vertex_id(), m2.max_vertex_id()) + 1;
    std::map<VertexId, VertexId> relabel;
    for (VertexId v : m2.vertices()) relabel[v] = v + off;
    Triangulation m2r = m2.quotient(relabel, {}, {});

    Triangulation du = m1.disjoint_union(m2r);
    std::size_t t1count = m1.tets().size();

    auto du_edge_of_m1 = [&](int e) {
        const EdgeUse& u = m1.edge(e).uses.front();
        return du.tet_edge_class(u.tet, u.local);
    };
    auto du_edge_of_m2 = [&](int e) {
        const EdgeUse& u = m2.edge(e).uses.front();
        return du.tet_edge_class(static_cast<int>(t1count) + u.tet, u.local);
    };
    auto du_face_of_m1 = [&](int f) {
        const FaceUse& u = m1.face(f).uses.front();
        return du.tet_face_class(u.tet, u.local);
    };
    auto du_face_of_m2 = [&](int f) {
        const FaceUse& u = m2.face(f).uses.front();
        return du.tet_face_class(static_cast<int>(t1count) + u.tet, u.local);
    };

    std::vector<std::array<int, 2>> edge_merge, face_merge;
    for (int e : bc1.edges) {
        const auto& ec = m1.edge(e);
        int e2 = gluing_detail::find_component_edge(m2, gm.component2,
                                                    gm.vertex_map.at(ec.ends[0]),
                                                    gm.vertex_map.at(ec.ends[1]));
        edge_merge.push_back({du_edge_of_m1(e), du_edge_of_m2(e2)});
    }
    for (int f : bc1.faces) {
        const auto& fc = m1.face(f);
        int f2 = gluing_detail::find_component_face(
            m2, gm.component2,
            {gm.vertex_map.at(fc.verts[0]), gm.vertex_map.at(fc.verts[1]),
             gm.vertex_map.at(fc.verts[2])});
        face_merge.push_back({du_face_of_m1(f), du_face_of_m2(f2)});
    }

    std::map<VertexId, VertexId> ident;
    for (const auto& [v, w] : gm.vertex_map) ident[w + off] = v;

    Glued out;
    out.t = du.quotient(ident, edge_merge, face_merge);
    gluing_detail::reject_duplicate_tets(out.t);

    auto final_edge_of_m1 = [&](int e) {
        const EdgeUse& u = m1.edge(e).uses.front();
        return out.t.tet_edge_class(u.tet, u.local);
    };
    auto final_edge_of_m2 = [&](int e) {
        const EdgeUse& u = m2.edge(e).uses.front();
        return out.t.tet_edge_class(static_cast<int>(t1count) + u.tet, u.local);
    };
    for (std::size_t e = 0; e < m1.edges().size(); ++e)
        out.edge_map1.push_back(final_edge_of_m1(static_cast<int>(e)));
    for (std::size_t e = 0; e < m2.edges().size(); ++e)
        out.edge_map2.push_back(final_edge_of_m2(static_cast<int>(e)));
    for (VertexId v : m2.vertices()) {
        VertexId r = v + off;
        auto it = ident.find(r);
        out.vertex_map2[v] = (it == ident.end()) ? r : it->second;
    }
    for (int e : bc1.edges) out.gamma_edges.push_back(final_edge_of_m1(e));
    std::sort(out.gamma_edges.begin(), out.gamma_edges.end());
    out.gamma_vertices = bc1.vertices;

    for (int e : out.gamma_edges)
        if (out.t.edge(e).boundary) throw Error("glued surface edge stayed on the boundary");

    out.p.coords = p1.coords;
    out.p.seed = p1.seed;
    for (VertexId v : m2.vertices()) {
        VertexId r = out.vertex_map2.at(v);
        if (!out.p.has(r)) out.p.coords[r] = p2.at(v);
    }
    return out;
}

// Gluing two boundary components of one manifold (the vertex map runs from
// component1 to component2; component2's labels are the ones that disappear).
inline Glued self_glue(const Triangulation& m, const Placement& p, const GluingMap& gm) {
    if (gm.component1 == gm.component2)
        throw IncompatibleBoundaryError("self-gluing needs two distinct components");
    const auto& bca = m.boundary_components().at(static_cast<std::size_t>(gm.component1));
    const auto& bcb = m.boundary_components().at(static_cast<std::size_t>(gm.component2));
    gluing_detail::check_bijection(bca, bcb, gm.vertex_map);
    gluing_detail::check_placements(p, p, gm.vertex_map);

    std::vector<std::array<int, 2>> edge_merge, face_merge;
    for (int e : bca.edges) {
        const auto& ec = m.edge(e);
        int e2 = gluing_detail::find_component_edge(m, gm.component2,
                                                    gm.vertex_map.at(ec.ends[0]),
                                                    gm.vertex_map.at(ec.ends[1]));
        edge_merge.push_back({e, e2});
    }
    for (int f : bca.faces) {
        const auto& fc = m.face(f);
        face_merge.push_back({f, gluing_detail::find_component_face(
                                     m, gm.component2,
                                     {gm.vertex_map.at(fc.verts[0]), gm.vertex_map.at(fc.verts[1]),
                                      gm.vertex_map.at(fc.verts[2])})});
    }
    std::map<VertexId, VertexId> ident;
    for (const auto& [v, w] : gm.vertex_map) ident[w] = v;

    Glued out;
    out.t = m.quotient(ident, edge_merge, face_merge);
    gluing_detail::reject_duplicate_tets(out.t);

    auto final_edge = [&](int e) {
        const EdgeUse& u = m.edge(e).uses.front();
        return out.t.tet_edge_class(u.tet, u.local);
    };
    for (std::size_t e = 0; e < m.edges().size(); ++e)
        out.edge_map1.push_back(final_edge(static_cast<int>(e)));
    out.edge_map2 = out.edge_map1;
    for (int e : bca.edges) out.gamma_edges.push_back(final_edge(e));
    std::sort(out.gamma_edges.begin(), out.gamma_edges.end());
    out.gamma_vertices = bca.vertices;

    out.p.seed = p.seed;
    for (VertexId v : out.t.vertices()) out.p.coords[v] = p.at(v);
    return out;
}

// ---------------------------------------------------------------------------
// Surface complex and its torsion
// ---------------------------------------------------------------------------

struct SurfaceComplexData {
    Matrix g1, g2;
    std::vector<VertexId> pinned;  // A, B, C on the surface
    LogScalar minor_g1, minor_g2;
    double residual = 0.0;  // |g2 g1| / (|g2| |g1|)

    LogScalar tau() const { return minor_g1 / minor_g2; }
};

inline SurfaceComplexData surface_complex(const Triangulation& t, const Placement& p,
                                          int component, const RigidConstruction& rc,
                                          std::vector<VertexId> pinned = {}) {
    const auto& bc = t.boundary_components().at(static_cast<std::size_t>(component));
    std::size_t n = bc.vertices.size();
    SurfaceComplexData sd;

    sd.g1 = Matrix::Zero(static_cast<Eigen::Index>(3 * n), 6);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& x = p.at(bc.vertices[i]);
        for (int axis = 0; axis < 3; ++axis) {
            Eigen::Index r = static_cast<Eigen::Index>(3 * i) + axis;
            sd.g1(r, axis) = 1.0;
            for (int rot = 0; rot < 3; ++rot) {
                Vec3 er = Vec3::Zero();
                er[rot] = 1.0;
                sd.g1(r, 3 + rot) = er.cross(x)[axis];
            }
        }
    }
    sd.g2 = Matrix::Zero(static_cast<Eigen::Index>(rc.edges.size()),
                         static_cast<Eigen::Index>(3 * n));
    for (std::size_t i = 0; i < rc.edges.size(); ++i)
        sd.g2.row(static_cast<Eigen::Index>(i)) = surface_rigidity_row(t, p, bc, rc.edges[i]);

    sd.residual = (sd.g2.norm() * sd.g1.norm() == 0.0)
                      ? 0.0
                      : (sd.g2 * sd.g1).norm() / (sd.g2.norm() * sd.g1.norm());

    if (pinned.empty()) {
        // lowest-id affinely independent triple on the surface
        for (std::size_t i = 0; i + 2 < n && pinned.empty(); ++i) {
            VertexId A = bc.vertices[0], B = bc.vertices[1];
            VertexId C = bc.vertices[2 + i];
            if ((p.at(B) - p.at(A)).cross(p.at(C) - p.at(A)).norm() > 1e-9)
                pinned = {A, B, C};
        }
        if (pinned.empty()) throw DegenerateGeometryError("surface vertices are collinear");
    }
    sd.pinned = pinned;

    auto coord_row = [&](VertexId v, int axis) {
        auto it = std::lower_bound(bc.vertices.begin(), bc.vertices.end(), v);
        if (it == bc.vertices.end() || *it != v)
            throw Error("pinned vertex not on the surface");
        return static_cast<Eigen::Index>(3 * (it - bc.vertices.begin()) + axis);
    };
    std::vector<Eigen::Index> pinned_rows = {
        coord_row(pinned[0], 0), coord_row(pinned[0], 1), coord_row(pinned[0], 2),
        coord_row(pinned[1], 1), coord_row(pinned[1], 2), coord_row(pinned[2], 2)};

    Matrix m1(6, 6);
    for (int i = 0; i < 6; ++i) m1.row(i) = sd.g1.row(pinned_rows[static_cast<std::size_t>(i)]);
    Matrix m2(static_cast<Eigen::Index>(rc.edges.size()),
              static_cast<Eigen::Index>(3 * n) - 6);
    {
        Eigen::Index cj = 0;
        for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(3 * n); ++c) {
            bool skip = false;
            for (Eigen::Index pr : pinned_rows) skip |= (pr == c);
            if (skip) continue;
            m2.col(cj++) = sd.g2.col(c);
        }
    }
    sd.minor_g1 = log_det(m1);
    sd.minor_g2 = log_det(m2);
    if (sd.minor_g1.zero() || sd.minor_g2.zero())
        throw SingularMinorError("surface complex plan minor vanished");
    return sd;
}

inline LogScalar surface_torsion(const Triangulation& t, const Placement& p, int component,
                                 const RigidConstruction& rc) {
    return surface_complex(t, p, component, rc).tau();
}

// Transports a surface rigid construction through a gluing map (endpoint
// lookup in the target component).
inline RigidConstruction transport_surface_rc(const RigidConstruction& rc,
                                              const Triangulation& t1,
                                              const Triangulation& t2, int component2,
                                              const std::map<VertexId, VertexId>& vmap) {
    RigidConstruction out;
    out.context = RigidConstruction::Context::surface;
    out.component = component2;
    for (int e : rc.edges) {
        const auto& ec = t1.edge(e);
        out.edges.push_back(gluing_detail::find_component_edge(
            t2, component2, vmap.at(ec.ends[0]), vmap.at(ec.ends[1])));
    }
    for (int e : rc.complement) {
        const auto& ec = t1.edge(e);
        out.complement.push_back(gluing_detail::find_component_edge(
            t2, component2, vmap.at(ec.ends[0]), vmap.at(ec.ends[1])));
    }
    std::sort(out.edges.begin(), out.edges.end());
    std::sort(out.complement.begin(), out.complement.end());
    return out;
}

// ---------------------------------------------------------------------------
// Composition of generating functions
// ---------------------------------------------------------------------------

struct GammaData {
    int n_gamma = 0;
    LogScalar tau_gamma;
    LogScalar gamma_length_sq;  // product of l^2 over all edges of Gamma
    // aligned lists over E_Gamma: generator edges on each side and the joint id
    std::vector<int> side1_edges, side2_edges, joint_edges;
    // remaining boundary edges: side id -> joint id
    std::map<int, int> side1_rest, side2_rest;

    LogScalar prefactor() const {
        LogScalar sgn = LogScalar::from(n_gamma % 2 == 0 ? 1.0 : -1.0);
        return sgn * tau_gamma.pow(2) / gamma_length_sq;
    }
};

namespace gluing_detail {

inline std::vector<std::pair<int, double>> generator_map(const GeneratorRegistry& from,
                                                         const GeneratorRegistry& to,
                                                         const std::map<int, int>& edge_map) {
    std::vector<std::pair<int, double>> gm(from.size(), {-1, 0.0});
    for (const auto& [e, je] : edge_map) {
        gm[static_cast<std::size_t>(from.a_index(e))] = {to.a_index(je), 1.0};
        gm[static_cast<std::size_t>(from.astar_index(e))] = {to.astar_index(je), 1.0};
    }
    return gm;
}

}  // namespace gluing_detail

inline GeneratingFunction compose_invariants(const GeneratingFunction& I1,
                                             const GeneratingFunction& I2,
                                             const GammaData& gd) {
    if (gd.side1_edges.size() != gd.joint_edges.size() ||
        gd.side2_edges.size() != gd.joint_edges.size())
        throw ShapeMismatchError("gamma edge lists are not aligned");

    std::vector<int> joint = gd.joint_edges;
    for (const auto& [e, je] : gd.side1_rest) joint.push_back(je);
    for (const auto& [e, je] : gd.side2_rest) joint.push_back(je);
    std::sort(joint.begin(), joint.end());
    joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
    auto reg_joint = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges(joint));

    std::map<int, int> em1 = gd.side1_rest, em2 = gd.side2_rest;
    for (std::size_t k = 0; k < gd.joint_edges.size(); ++k) {
        em1[gd.side1_edges[k]] = gd.joint_edges[k];
        em2[gd.side2_edges[k]] = gd.joint_edges[k];
    }
    GrassmannElement u1 = transport(
        I1.element, reg_joint, gluing_detail::generator_map(*I1.element.registry(), *reg_joint, em1));
    GrassmannElement u2 = transport(
        I2.element, reg_joint, gluing_detail::generator_map(*I2.element.registry(), *reg_joint, em2));

    GrassmannElement prod = u1 * u2;
    GrassmannElement reduced =
        multiple_integral(prod, edge_pair_differentials(*reg_joint, gd.joint_edges));

    std::vector<int> rest;
    for (int e : joint)
        if (std::find(gd.joint_edges.begin(), gd.joint_edges.end(), e) == gd.joint_edges.end())
            rest.push_back(e);
    auto reg_rest = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges(rest));
    std::map<int, int> down;
    for (int e : rest) down[e] = e;
    GrassmannElement out = transport(
        reduced, reg_rest, gluing_detail::generator_map(*reg_joint, *reg_rest, down));

    GeneratingFunction g;
    g.element = std::move(out);
    g.boundary = rest;
    g.scale = I1.scale * I2.scale * gd.prefactor();
    return g;
}

// The self-gluing analogue: one generating function whose two component
// generator families are identified before integrating.
inline GeneratingFunction self_glue_compose(const GeneratingFunction& I, const GammaData& gd) {
    if (gd.side1_edges.size() != gd.joint_edges.size() ||
        gd.side2_edges.size() != gd.joint_edges.size())
        throw ShapeMismatchError("gamma edge lists are not aligned");

    std::vector<int> joint = gd.joint_edges;
    for (const auto& [e, je] : gd.side1_rest) joint.push_back(je);
    std::sort(joint.begin(), joint.end());
    joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
    auto reg_joint = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges(joint));

    std::map<int, int> em = gd.side1_rest;
    for (std::size_t k = 0; k < gd.joint_edges.size(); ++k) {
        em[gd.side1_edges[k]] = gd.joint_edges[k];
        em[gd.side2_edges[k]] = gd.joint_edges[k];
    }
    GrassmannElement u = transport(
        I.element, reg_joint, gluing_detail::generator_map(*I.element.registry(), *reg_joint, em));
    GrassmannElement reduced =
        multiple_integral(u, edge_pair_differentials(*reg_joint, gd.joint_edges));

    std::vector<int> rest;
    for (int e : joint)
        if (std::find(gd.joint_edges.begin(), gd.joint_edges.end(), e) == gd.joint_edges.end())
            rest.push_back(e);
    auto reg_rest = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges(rest));
    std::map<int, int> down;
    for (int e : rest) down[e] = e;
    GrassmannElement out = transport(
        reduced, reg_rest, gluing_detail::generator_map(*reg_joint, *reg_rest, down));

    GeneratingFunction g;
    g.element = std::move(out);
    g.boundary = rest;
    g.scale = I.scale * gd.prefactor();
    return g;
}

// Rigid-motion transport of a whole placement so that the chosen boundary
// component lands on prescribed coordinates (orthogonal Procrustes). Throws
// when no Euclidean motion achieves the target within tolerance.
inline Placement transport_placement(const Triangulation& t, const Placement& p, int component,
                                     const std::map<VertexId, Vec3>& target,
                                     double tol = 1e-9) {
    const auto& bc = t.boundary_components().at(static_cast<std::size_t>(component));
    if (target.size() != bc.vertices.size())
        throw PlacementMismatchError("transport target has the wrong vertex count");
    Vec3 mean_src = Vec3::Zero(), mean_dst = Vec3::Zero();
    for (VertexId v : bc.vertices) {
        mean_src += p.at(v);
        mean_dst += target.at(v);
    }
    mean_src /= static_cast<double>(bc.vertices.size());
    mean_dst /= static_cast<double>(bc.vertices.size());
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    for (VertexId v : bc.vertices)
        H += (p.at(v) - mean_src) * (target.at(v) - mean_dst).transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d R = svd.matrixV() * svd.matrixU().transpose();
    if (R.determinant() < 0) {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1;
        R = svd.matrixV() * flip * svd.matrixU().transpose();
    }
    Placement out;
    out.seed = p.seed;
    for (const auto& [v, x] : p.coords) out.coords[v] = R * (x - mean_src) + mean_dst;
    double err = 0.0;
    for (VertexId v : bc.vertices) err = std::max(err, (out.at(v) - target.at(v)).norm());
    if (err > tol)
        throw PlacementMismatchError("boundary placements are not related by a rigid motion");
    // snap exactly onto the target so gluing's bit-equality check passes
    for (VertexId v : bc.vertices) out.coords[v] = target.at(v);
    return out;
}

}  // namespace torsio
