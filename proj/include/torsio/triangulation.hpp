#pragma once

/// Combinatorial model of compact oriented triangulated 3-manifolds with
/// boundary.
///
/// Edges and faces are first-class *classes* of simplex instances rather than
/// vertex sets: a pair of vertices may carry several distinct edges. Genuine
/// simplicial complexes have one class per vertex set; quotient builds
/// (self-gluings such as the S2xS1 fixture) may not, and are flagged via
/// is_simplicial().
///
/// Orientation is fixed by the tetrahedron tuples as given: the construction
/// requires the induced orientations of the two sides of every inner face to
/// be opposite, and rejects the input otherwise. Signed volumes and dihedral
/// angle signs downstream all derive from this tuple orientation.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "torsio/common.hpp"

namespace torsio {

// Local slot pairs of the six edges of a tetrahedron tuple.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdgeSlots = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Local face k omits tuple slot k; slots listed in tuple order.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaceSlots = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

struct EdgeUse {
    int tet = -1;
    int local = -1;  // index into kTetEdgeSlots
};

struct FaceUse {
    int tet = -1;
    int local = -1;  // index into kTetFaceSlots
};

struct EdgeClass {
    std::array<VertexId, 2> ends{};  // sorted
    std::vector<EdgeUse> uses;
    bool boundary = false;
    int component = -1;  // boundary component index when boundary
};

struct FaceClass {
    std::array<VertexId, 3> verts{};  // sorted
    std::vector<FaceUse> uses;
    bool boundary = false;
    int component = -1;
};

struct BoundaryComponent {
    std::vector<VertexId> vertices;  // sorted
    std::vector<int> edges;          // edge class ids, sorted
    std::vector<int> faces;          // face class ids, sorted

    int euler() const {
        return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
               static_cast<int>(faces.size());
    }
};

struct PachnerMove {
    enum class Kind { two_three, three_two, one_four, four_one };
    Kind kind;
    int locus = -1;            // face id / edge id / tet index / vertex id
    VertexId new_vertex = -1;  // fresh id for one_four
};

namespace detail {

// Orientation class of an ordered triple relative to its sorted order:
// +1 if the permutation is even, -1 otherwise.
inline int triple_parity(std::array<VertexId, 3> t) {
    int sign = 1;
    if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
    if (t[1] > t[2]) { std::swap(t[1], t[2]); sign = -sign; }
    if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
    return sign;
}

// Parity of an ordered 4-tuple relative to its sorted order.
inline int tuple_parity(std::array<VertexId, 4> t) {
    int sign = 1;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3 - i; ++j)
            if (t[j] > t[j + 1]) { std::swap(t[j], t[j + 1]); sign = -sign; }
    return sign;
}

// Induced orientation sign of face `local` of tuple `tet`, relative to the
// sorted order of the face vertices.
inline int induced_face_sign(const std::array<VertexId, 4>& tet, int local) {
    std::array<VertexId, 3> tri{tet[kTetFaceSlots[local][0]],
                                tet[kTetFaceSlots[local][1]],
                                tet[kTetFaceSlots[local][2]]};
    int omit_sign = (local % 2 == 0) ? 1 : -1;
    return omit_sign * triple_parity(tri);
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

class Triangulation {
  public:
    // Instance-level construction input: tokens partition the edge and face
    // instances into classes. from_tetrahedra derives tokens from vertex
    // sets; gluing and Pachner codepaths supply explicit partitions.
    struct Skeleton {
        std::vector<std::array<VertexId, 4>> tets;
        std::vector<std::array<std::int64_t, 6>> edge_token;
        std::vector<std::array<std::int64_t, 4>> face_token;
    };

    static Triangulation from_tetrahedra(const std::vector<std::array<VertexId, 4>>& tets) {
        Skeleton s;
        s.tets = tets;
        std::map<std::array<VertexId, 2>, std::int64_t> ekey;
        std::map<std::array<VertexId, 3>, std::int64_t> fkey;
        std::set<std::array<VertexId, 4>> tet_sets;
        s.edge_token.resize(tets.size());
        s.face_token.resize(tets.size());
        for (std::size_t t = 0; t < tets.size(); ++t) {
            std::array<VertexId, 4> sorted = tets[t];
            std::sort(sorted.begin(), sorted.end());
            for (int i = 0; i < 3; ++i)
                if (sorted[i] == sorted[i + 1])
                    throw DegenerateError("tetrahedron with repeated vertex");
            if (!tet_sets.insert(sorted).second)
                throw NonManifoldError("duplicate tetrahedron vertex set");
            for (int k = 0; k < 6; ++k) {
                std::array<VertexId, 2> e{tets[t][kTetEdgeSlots[k][0]],
                                          tets[t][kTetEdgeSlots[k][1]]};
                if (e[0] > e[1]) std::swap(e[0], e[1]);
                auto it = ekey.emplace(e, static_cast<std::int64_t>(ekey.size())).first;
                s.edge_token[t][k] = it->second;
            }
            for (int k = 0; k < 4; ++k) {
                std::array<VertexId, 3> f{tets[t][kTetFaceSlots[k][0]],
                                          tets[t][kTetFaceSlots[k][1]],
                                          tets[t][kTetFaceSlots[k][2]]};
                std::sort(f.begin(), f.end());
                auto it = fkey.emplace(f, static_cast<std::int64_t>(fkey.size())).first;
                s.face_token[t][k] = it->second;
            }
        }
        return from_skeleton(std::move(s));
    }

    static Triangulation from_skeleton(Skeleton s) {
        Triangulation t;
        t.build(std::move(s));
        return t;
    }

    static Triangulation builtin(const std::string& name);

    // --- accessors ---------------------------------------------------------

    const std::vector<VertexId>& vertices() const { return vertices_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    const std::vector<std::array<VertexId, 4>>& tets() const { return tets_; }
    const std::vector<EdgeClass>& edges() const { return edges_; }
    const std::vector<FaceClass>& faces() const { return faces_; }
    const EdgeClass& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }
    const FaceClass& face(int id) const { return faces_[static_cast<std::size_t>(id)]; }
    int tet_edge_class(int tet, int local) const { return tet_edge_[static_cast<std::size_t>(tet)][local]; }
    int tet_face_class(int tet, int local) const { return tet_face_[static_cast<std::size_t>(tet)][local]; }
    const std::vector<BoundaryComponent>& boundary_components() const { return components_; }
    std::size_t num_boundary_components() const { return components_.size(); }
    bool is_simplicial() const { return simplicial_; }

    bool is_boundary_vertex(VertexId v) const {
        return boundary_vertices_.count(v) > 0;
    }

    std::vector<VertexId> inner_vertices() const {
        std::vector<VertexId> out;
        for (VertexId v : vertices_)
            if (!is_boundary_vertex(v)) out.push_back(v);
        return out;
    }

    std::vector<int> inner_edges() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (!edges_[i].boundary) out.push_back(static_cast<int>(i));
        return out;
    }

    int euler_characteristic() const {
        return static_cast<int>(vertices_.size()) - static_cast<int>(edges_.size()) +
               static_cast<int>(faces_.size()) - static_cast<int>(tets_.size());
    }

    // Unique edge class with the given endpoints. Throws if the pair is
    // ambiguous (quotient complexes) or absent.
    int find_edge(VertexId u, VertexId v) const {
        if (u > v) std::swap(u, v);
        int found = -1;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            if (edges_[i].ends[0] == u && edges_[i].ends[1] == v) {
                if (found >= 0) throw Error("edge lookup by endpoints is ambiguous");
                found = static_cast<int>(i);
            }
        }
        if (found < 0) throw Error("no edge with the given endpoints");
        return found;
    }

    VertexId max_vertex_id() const { return vertices_.empty() ? -1 : vertices_.back(); }

    // --- Pachner moves ------------------------------------------------------

    Triangulation apply_pachner(const PachnerMove& mv) const;

    std::vector<PachnerMove> applicable_moves(PachnerMove::Kind kind) const;

    // --- low-level quotient builder (used by gluing and builtins) -----------

    // Identifies vertex ids via `vmap` (id -> id, identity where absent) and
    // merges edge/face classes whose token pairs are listed in `edge_merge`
    // and `face_merge` (pairs of current class ids). Other classes remain
    // distinct even when their vertex sets collide after relabeling.
    Triangulation quotient(const std::map<VertexId, VertexId>& vmap,
                           const std::vector<std::array<int, 2>>& edge_merge,
                           const std::vector<std::array<int, 2>>& face_merge) const {
        Skeleton s;
        s.tets.reserve(tets_.size());
        for (const auto& tet : tets_) {
            std::array<VertexId, 4> mapped = tet;
            for (auto& v : mapped) {
                auto it = vmap.find(v);
                if (it != vmap.end()) v = it->second;
            }
            s.tets.push_back(mapped);
        }
        detail::UnionFind eu(static_cast<int>(edges_.size()));
        for (const auto& pr : edge_merge) eu.unite(pr[0], pr[1]);
        detail::UnionFind fu(static_cast<int>(faces_.size()));
        for (const auto& pr : face_merge) fu.unite(pr[0], pr[1]);
        s.edge_token.resize(tets_.size());
        s.face_token.resize(tets_.size());
        for (std::size_t t = 0; t < tets_.size(); ++t) {
            for (int k = 0; k < 6; ++k) s.edge_token[t][k] = eu.find(tet_edge_[t][k]);
            for (int k = 0; k < 4; ++k) s.face_token[t][k] = fu.find(tet_face_[t][k]);
        }
        return from_skeleton(std::move(s));
    }

    // Tetrahedron indices grouped by connected component (via shared faces),
    // each group sorted, groups ordered by smallest tetrahedron index.
    std::vector<std::vector<int>> connected_components() const {
        detail::UnionFind uf(static_cast<int>(tets_.size()));
        for (const auto& fc : faces_)
            if (fc.uses.size() == 2) uf.unite(fc.uses[0].tet, fc.uses[1].tet);
        std::map<int, std::vector<int>> groups;
        for (std::size_t t = 0; t < tets_.size(); ++t)
            groups[uf.find(static_cast<int>(t))].push_back(static_cast<int>(t));
        std::vector<std::vector<int>> out;
        for (auto& [root, g] : groups) out.push_back(std::move(g));
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        return out;
    }

    // The sub-triangulation spanned by the given tetrahedra, plus the map
    // from its edge class ids back to this triangulation's ids.
    std::pair<Triangulation, std::vector<int>> subcomplex(const std::vector<int>& tet_ids) const {
        Skeleton s;
        for (int t : tet_ids) {
            s.tets.push_back(tets_[static_cast<std::size_t>(t)]);
            s.edge_token.push_back({});
            s.face_token.push_back({});
            for (int k = 0; k < 6; ++k) s.edge_token.back()[k] = tet_edge_[static_cast<std::size_t>(t)][k];
            for (int k = 0; k < 4; ++k) s.face_token.back()[k] = tet_face_[static_cast<std::size_t>(t)][k];
        }
        Triangulation sub = from_skeleton(std::move(s));
        std::vector<int> edge_map(sub.edges().size());
        for (std::size_t e = 0; e < sub.edges().size(); ++e) {
            const EdgeUse& u = sub.edges()[e].uses.front();
            edge_map[e] = tet_edge_[static_cast<std::size_t>(tet_ids[static_cast<std::size_t>(u.tet)])][u.local];
        }
        return {std::move(sub), std::move(edge_map)};
    }

    // Disjoint union with `other` (vertex sets must not intersect); used as a
    // staging step by gluing. Class tokens stay separate.
    Triangulation disjoint_union(const Triangulation& other) const {
        Skeleton s;
        s.tets = tets_;
        s.tets.insert(s.tets.end(), other.tets_.begin(), other.tets_.end());
        s.edge_token.resize(s.tets.size());
        s.face_token.resize(s.tets.size());
        std::int64_t eoff = static_cast<std::int64_t>(edges_.size());
        std::int64_t foff = static_cast<std::int64_t>(faces_.size());
        for (std::size_t t = 0; t < tets_.size(); ++t) {
            for (int k = 0; k < 6; ++k) s.edge_token[t][k] = tet_edge_[t][k];
            for (int k = 0; k < 4; ++k) s.face_token[t][k] = tet_face_[t][k];
        }
        for (std::size_t t = 0; t < other.tets_.size(); ++t) {
            for (int k = 0; k < 6; ++k)
                s.edge_token[tets_.size() + t][k] = other.tet_edge_[t][k] + eoff;
            for (int k = 0; k < 4; ++k)
                s.face_token[tets_.size() + t][k] = other.tet_face_[t][k] + foff;
        }
        return from_skeleton(std::move(s));
    }

  private:
    std::vector<VertexId> vertices_;
    std::vector<std::array<VertexId, 4>> tets_;
    std::vector<EdgeClass> edges_;
    std::vector<FaceClass> faces_;
    std::vector<std::array<int, 6>> tet_edge_;
    std::vector<std::array<int, 4>> tet_face_;
    std::vector<BoundaryComponent> components_;
    std::set<VertexId> boundary_vertices_;
    bool simplicial_ = true;

    void build(Skeleton s);
    void validate_links() const;
    void compute_boundary();
};

// ---------------------------------------------------------------------------

inline void Triangulation::build(Skeleton s) {
    if (s.tets.empty()) throw DegenerateError("empty tetrahedron list");
    tets_ = std::move(s.tets);

    std::set<VertexId> vset;
    std::set<std::array<VertexId, 4>> tet_sets;
    bool dup_tets = false;
    for (const auto& tet : tets_) {
        std::array<VertexId, 4> sorted = tet;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < 3; ++i)
            if (sorted[i] == sorted[i + 1])
                throw DegenerateError("tetrahedron with repeated vertex");
        if (!tet_sets.insert(sorted).second) dup_tets = true;
        for (VertexId v : tet) vset.insert(v);
    }
    vertices_.assign(vset.begin(), vset.end());

    // Group instances by token, then renumber classes deterministically by
    // (vertex set, first instance).
    struct Proto {
        std::vector<std::pair<int, int>> uses;  // (tet, local)
    };
    std::map<std::int64_t, Proto> eproto, fproto;
    for (std::size_t t = 0; t < tets_.size(); ++t) {
        for (int k = 0; k < 6; ++k) eproto[s.edge_token[t][k]].uses.push_back({static_cast<int>(t), k});
        for (int k = 0; k < 4; ++k) fproto[s.face_token[t][k]].uses.push_back({static_cast<int>(t), k});
    }

    auto edge_ends = [&](int t, int k) {
        std::array<VertexId, 2> e{tets_[static_cast<std::size_t>(t)][kTetEdgeSlots[k][0]],
                                  tets_[static_cast<std::size_t>(t)][kTetEdgeSlots[k][1]]};
        if (e[0] > e[1]) std::swap(e[0], e[1]);
        return e;
    };
    auto face_verts = [&](int t, int k) {
        std::array<VertexId, 3> f{tets_[static_cast<std::size_t>(t)][kTetFaceSlots[k][0]],
                                  tets_[static_cast<std::size_t>(t)][kTetFaceSlots[k][1]],
                                  tets_[static_cast<std::size_t>(t)][kTetFaceSlots[k][2]]};
        std::sort(f.begin(), f.end());
        return f;
    };

    std::vector<std::pair<std::array<VertexId, 2>, const Proto*>> eview;
    for (auto& [tok, p] : eproto) {
        std::sort(p.uses.begin(), p.uses.end());
        auto ends = edge_ends(p.uses[0].first, p.uses[0].second);
        for (auto [t, k] : p.uses)
            if (edge_ends(t, k) != ends)
                throw Error("edge class with inconsistent endpoints");
        eview.push_back({ends, &p});
    }
    std::sort(eview.begin(), eview.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second->uses[0] < b.second->uses[0];
    });

    std::vector<std::pair<std::array<VertexId, 3>, const Proto*>> fview;
    for (auto& [tok, p] : fproto) {
        std::sort(p.uses.begin(), p.uses.end());
        auto fv = face_verts(p.uses[0].first, p.uses[0].second);
        for (auto [t, k] : p.uses)
            if (face_verts(t, k) != fv) throw Error("face class with inconsistent vertices");
        fview.push_back({fv, &p});
    }
    std::sort(fview.begin(), fview.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second->uses[0] < b.second->uses[0];
    });

    edges_.clear();
    faces_.clear();
    tet_edge_.assign(tets_.size(), {});
    tet_face_.assign(tets_.size(), {});
    simplicial_ = !dup_tets;
    for (std::size_t i = 0; i < eview.size(); ++i) {
        EdgeClass ec;
        ec.ends = eview[i].first;
        for (auto [t, k] : eview[i].second->uses) {
            ec.uses.push_back({t, k});
            tet_edge_[static_cast<std::size_t>(t)][k] = static_cast<int>(i);
        }
        if (i > 0 && edges_.back().ends == ec.ends) simplicial_ = false;
        edges_.push_back(std::move(ec));
    }
    for (std::size_t i = 0; i < fview.size(); ++i) {
        FaceClass fc;
        fc.verts = fview[i].first;
        if (fview[i].second->uses.size() > 2)
            throw NonManifoldError("face contained in more than two tetrahedra");
        for (auto [t, k] : fview[i].second->uses) {
            fc.uses.push_back({t, k});
            tet_face_[static_cast<std::size_t>(t)][k] = static_cast<int>(i);
        }
        if (i > 0 && faces_.back().verts == fc.verts) simplicial_ = false;
        faces_.push_back(std::move(fc));
    }

    // Orientation: the two sides of every inner face must induce opposite
    // orientations, with the tuples taken exactly as given.
    for (const auto& fc : faces_) {
        if (fc.uses.size() != 2) continue;
        int s0 = detail::induced_face_sign(tets_[static_cast<std::size_t>(fc.uses[0].tet)], fc.uses[0].local);
        int s1 = detail::induced_face_sign(tets_[static_cast<std::size_t>(fc.uses[1].tet)], fc.uses[1].local);
        if (s0 == s1)
            throw NonOrientableError("tetrahedron tuples are not coherently oriented");
    }

    compute_boundary();
    validate_links();
}

inline void Triangulation::compute_boundary() {
    for (auto& fc : faces_) fc.boundary = (fc.uses.size() == 1);

    // Edge boundary status falls out of the link walk in validate_links; set
    // it here directly from incident faces so ordering of checks is free.
    std::vector<std::vector<int>> edge_faces(edges_.size());
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& fc = faces_[f];
        const FaceUse& u = fc.uses[0];
        const auto& slots = kTetFaceSlots[u.local];
        // the three edges of this face, resolved through its first instance
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                int sa = slots[a], sb = slots[b];
                for (int k = 0; k < 6; ++k) {
                    if ((kTetEdgeSlots[k][0] == sa && kTetEdgeSlots[k][1] == sb) ||
                        (kTetEdgeSlots[k][0] == sb && kTetEdgeSlots[k][1] == sa)) {
                        edge_faces[static_cast<std::size_t>(tet_edge_[static_cast<std::size_t>(u.tet)][k])]
                            .push_back(static_cast<int>(f));
                    }
                }
            }
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        edges_[e].boundary = false;
        for (int f : edge_faces[e])
            if (faces_[static_cast<std::size_t>(f)].boundary) edges_[e].boundary = true;
    }

    boundary_vertices_.clear();
    for (const auto& fc : faces_)
        if (fc.boundary)
            for (VertexId v : fc.verts) boundary_vertices_.insert(v);

    // Boundary components: union-find of boundary faces across boundary edges.
    std::vector<int> bfaces;
    for (std::size_t f = 0; f < faces_.size(); ++f)
        if (faces_[f].boundary) bfaces.push_back(static_cast<int>(f));
    std::map<int, int> bindex;
    for (std::size_t i = 0; i < bfaces.size(); ++i) bindex[bfaces[i]] = static_cast<int>(i);
    detail::UnionFind uf(static_cast<int>(bfaces.size()));
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (!edges_[e].boundary) continue;
        std::vector<int> incident;
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            if (!faces_[f].boundary) continue;
            // face f contains edge e?
            const FaceUse& u = faces_[f].uses[0];
            for (int k = 0; k < 6; ++k) {
                int sa = kTetEdgeSlots[k][0], sb = kTetEdgeSlots[k][1];
                const auto& slots = kTetFaceSlots[u.local];
                bool in_face = (sa == slots[0] || sa == slots[1] || sa == slots[2]) &&
                               (sb == slots[0] || sb == slots[1] || sb == slots[2]);
                if (in_face && tet_edge_[static_cast<std::size_t>(u.tet)][k] == static_cast<int>(e)) {
                    incident.push_back(static_cast<int>(f));
                    break;
                }
            }
        }
        if (incident.size() != 2)
            throw NonManifoldError("boundary edge not contained in exactly two boundary faces");
        uf.unite(bindex[incident[0]], bindex[incident[1]]);
    }

    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < bfaces.size(); ++i)
        groups[uf.find(static_cast<int>(i))].push_back(bfaces[i]);

    components_.clear();
    for (auto& [root, fls] : groups) {
        BoundaryComponent bc;
        bc.faces = fls;
        std::set<int> es;
        std::set<VertexId> vs;
        for (int f : fls) {
            const auto& fc = faces_[static_cast<std::size_t>(f)];
            for (VertexId v : fc.verts) vs.insert(v);
            const FaceUse& u = fc.uses[0];
            const auto& slots = kTetFaceSlots[u.local];
            for (int k = 0; k < 6; ++k) {
                int sa = kTetEdgeSlots[k][0], sb = kTetEdgeSlots[k][1];
                bool in_face = (sa == slots[0] || sa == slots[1] || sa == slots[2]) &&
                               (sb == slots[0] || sb == slots[1] || sb == slots[2]);
                if (in_face) es.insert(tet_edge_[static_cast<std::size_t>(u.tet)][k]);
            }
        }
        bc.edges.assign(es.begin(), es.end());
        bc.vertices.assign(vs.begin(), vs.end());
        components_.push_back(std::move(bc));
    }
    std::sort(components_.begin(), components_.end(),
              [](const BoundaryComponent& a, const BoundaryComponent& b) {
                  return a.vertices.front() < b.vertices.front();
              });
    for (std::size_t c = 0; c < components_.size(); ++c) {
        for (int e : components_[c].edges) edges_[static_cast<std::size_t>(e)].component = static_cast<int>(c);
        for (int f : components_[c].faces) faces_[static_cast<std::size_t>(f)].component = static_cast<int>(c);
    }
}

inline void Triangulation::validate_links() const {
    // Edge links: the tetrahedra around an edge form one cycle (inner) or one
    // open path whose free sides are boundary faces.
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& ec = edges_[e];
        // side faces of each use
        std::map<int, std::vector<int>> face_to_use;  // face class -> use indices
        std::vector<std::array<int, 2>> side(ec.uses.size());
        for (std::size_t u = 0; u < ec.uses.size(); ++u) {
            int t = ec.uses[u].tet;
            int sa = kTetEdgeSlots[ec.uses[u].local][0];
            int sb = kTetEdgeSlots[ec.uses[u].local][1];
            int idx = 0;
            for (int s = 0; s < 4; ++s) {
                if (s == sa || s == sb) continue;
                // face omitting slot s contains the edge
                side[u][idx++] = tet_face_[static_cast<std::size_t>(t)][s];
            }
            face_to_use[side[u][0]].push_back(static_cast<int>(u));
            face_to_use[side[u][1]].push_back(static_cast<int>(u));
        }
        int open_ends = 0;
        for (auto& [f, us] : face_to_use) {
            bool bnd = faces_[static_cast<std::size_t>(f)].boundary;
            if (us.size() == 1 && !bnd)
                throw NonManifoldError("inner face with a single tetrahedron at an edge");
            if (us.size() == 2 && bnd)
                throw NonManifoldError("boundary face shared by two tetrahedra at an edge");
            if (us.size() > 2) throw NonManifoldError("edge link branches");
            if (us.size() == 1) ++open_ends;
        }
        if (ec.boundary && open_ends != 2)
            throw NonManifoldError("boundary edge link is not an interval");
        if (!ec.boundary && open_ends != 0)
            throw NonManifoldError("inner edge link is not a circle");
        // connectivity of the use graph
        detail::UnionFind uf(static_cast<int>(ec.uses.size()));
        for (auto& [f, us] : face_to_use)
            if (us.size() == 2) uf.unite(us[0], us[1]);
        int root = uf.find(0);
        for (std::size_t u = 1; u < ec.uses.size(); ++u)
            if (uf.find(static_cast<int>(u)) != root)
                throw NonManifoldError("edge link is disconnected");
    }

    // Vertex links: Euler characteristic 2 (inner, sphere) or 1 (boundary,
    // disk), and connectivity of the tetrahedron fan.
    for (VertexId v : vertices_) {
        std::set<int> ve, vf;
        std::vector<int> vt;
        for (std::size_t t = 0; t < tets_.size(); ++t) {
            bool has = false;
            for (int s = 0; s < 4; ++s)
                if (tets_[t][s] == v) has = true;
            if (!has) continue;
            vt.push_back(static_cast<int>(t));
            for (int k = 0; k < 6; ++k) {
                const auto& sl = kTetEdgeSlots[k];
                if (tets_[t][sl[0]] == v || tets_[t][sl[1]] == v)
                    ve.insert(tet_edge_[t][k]);
            }
            for (int k = 0; k < 4; ++k) {
                const auto& sl = kTetFaceSlots[k];
                if (tets_[t][sl[0]] == v || tets_[t][sl[1]] == v || tets_[t][sl[2]] == v)
                    vf.insert(tet_face_[t][k]);
            }
        }
        int chi = static_cast<int>(ve.size()) - static_cast<int>(vf.size()) +
                  static_cast<int>(vt.size());
        bool bnd = boundary_vertices_.count(v) > 0;
        if (chi != (bnd ? 1 : 2))
            throw NonManifoldError("vertex link has wrong Euler characteristic");
        std::map<int, int> tindex;
        for (std::size_t i = 0; i < vt.size(); ++i) tindex[vt[i]] = static_cast<int>(i);
        detail::UnionFind uf(static_cast<int>(vt.size()));
        for (int f : vf) {
            const auto& fc = faces_[static_cast<std::size_t>(f)];
            if (fc.uses.size() == 2)
                uf.unite(tindex.at(fc.uses[0].tet), tindex.at(fc.uses[1].tet));
        }
        int root = uf.find(0);
        for (std::size_t i = 1; i < vt.size(); ++i)
            if (uf.find(static_cast<int>(i)) != root)
                throw NonManifoldError("vertex link is disconnected");
    }
}

// ---------------------------------------------------------------------------
// Pachner moves
// ---------------------------------------------------------------------------

inline Triangulation Triangulation::apply_pachner(const PachnerMove& mv) const {
    using Kind = PachnerMove::Kind;

    // Skeleton of the current complex; surviving classes keep their ids as
    // tokens, new classes get fresh tokens past the current ranges.
    Skeleton s;
    s.tets = tets_;
    s.edge_token.resize(tets_.size());
    s.face_token.resize(tets_.size());
    for (std::size_t t = 0; t < tets_.size(); ++t) {
        for (int k = 0; k < 6; ++k) s.edge_token[t][k] = tet_edge_[t][k];
        for (int k = 0; k < 4; ++k) s.face_token[t][k] = tet_face_[t][k];
    }
    std::int64_t next_e = static_cast<std::int64_t>(edges_.size());
    std::int64_t next_f = static_cast<std::int64_t>(faces_.size());

    auto edge_token_in = [&](int t, VertexId u, VertexId v) {
        for (int k = 0; k < 6; ++k) {
            VertexId a = tets_[static_cast<std::size_t>(t)][kTetEdgeSlots[k][0]];
            VertexId b = tets_[static_cast<std::size_t>(t)][kTetEdgeSlots[k][1]];
            if ((a == u && b == v) || (a == v && b == u)) return s.edge_token[static_cast<std::size_t>(t)][k];
        }
        throw NotApplicableError("edge not found in tetrahedron");
    };
    auto face_token_in = [&](int t, VertexId u, VertexId v, VertexId w) {
        for (int k = 0; k < 4; ++k) {
            std::array<VertexId, 3> f{tets_[static_cast<std::size_t>(t)][kTetFaceSlots[k][0]],
                                      tets_[static_cast<std::size_t>(t)][kTetFaceSlots[k][1]],
                                      tets_[static_cast<std::size_t>(t)][kTetFaceSlots[k][2]]};
            std::sort(f.begin(), f.end());
            std::array<VertexId, 3> q{u, v, w};
            std::sort(q.begin(), q.end());
            if (f == q) return s.face_token[static_cast<std::size_t>(t)][k];
        }
        throw NotApplicableError("face not found in tetrahedron");
    };

    auto erase_tets = [&](std::vector<int> idx) {
        std::sort(idx.rbegin(), idx.rend());
        for (int i : idx) {
            s.tets.erase(s.tets.begin() + i);
            s.edge_token.erase(s.edge_token.begin() + i);
            s.face_token.erase(s.face_token.begin() + i);
        }
    };

    struct NewTet {
        std::array<VertexId, 4> v;
        std::array<std::int64_t, 6> et;
        std::array<std::int64_t, 4> ft;
    };
    auto push_new = [&](const NewTet& nt) {
        s.tets.push_back(nt.v);
        s.edge_token.push_back(nt.et);
        s.face_token.push_back(nt.ft);
    };

    // token lookup helpers for assembling a new tetrahedron
    auto assemble = [&](std::array<VertexId, 4> tv,
                        const std::map<std::pair<VertexId, VertexId>, std::int64_t>& etok,
                        const std::map<std::array<VertexId, 3>, std::int64_t>& ftok) {
        NewTet nt;
        nt.v = tv;
        for (int k = 0; k < 6; ++k) {
            VertexId a = tv[kTetEdgeSlots[k][0]], b = tv[kTetEdgeSlots[k][1]];
            if (a > b) std::swap(a, b);
            nt.et[k] = etok.at({a, b});
        }
        for (int k = 0; k < 4; ++k) {
            std::array<VertexId, 3> f{tv[kTetFaceSlots[k][0]], tv[kTetFaceSlots[k][1]],
                                      tv[kTetFaceSlots[k][2]]};
            std::sort(f.begin(), f.end());
            nt.ft[k] = ftok.at(f);
        }
        return nt;
    };

    if (mv.kind == Kind::two_three) {
        int fid = mv.locus;
        if (fid < 0 || fid >= static_cast<int>(faces_.size()))
            throw NotApplicableError("no such face");
        const FaceClass& fc = faces_[static_cast<std::size_t>(fid)];
        if (fc.uses.size() != 2) throw NotApplicableError("2-3 move needs an inner face");
        int t1 = fc.uses[0].tet, t2 = fc.uses[1].tet;
        VertexId d = tets_[static_cast<std::size_t>(t1)][fc.uses[0].local];
        VertexId e = tets_[static_cast<std::size_t>(t2)][fc.uses[1].local];
        if (d == e) throw NotApplicableError("2-3 move on a pillow configuration");

        // Order (a,b,c) so that (a,b,c,d) is an even permutation of t1's tuple.
        std::array<VertexId, 3> abc{fc.verts[0], fc.verts[1], fc.verts[2]};
        {
            const auto& tup = tets_[static_cast<std::size_t>(t1)];
            // parity of (abc,d) as rearrangement of tup
            auto parity_vs = [&](const std::array<VertexId, 4>& want) {
                std::array<int, 4> perm{};
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        if (want[i] == tup[j]) perm[i] = j;
                int sign = 1;
                for (int i = 0; i < 4; ++i)
                    for (int j = i + 1; j < 4; ++j)
                        if (perm[i] > perm[j]) sign = -sign;
                return sign;
            };
            if (parity_vs({abc[0], abc[1], abc[2], d}) < 0) std::swap(abc[0], abc[1]);
        }
        VertexId a = abc[0], b = abc[1], c = abc[2];

        std::map<std::pair<VertexId, VertexId>, std::int64_t> etok;
        auto put_edge = [&](VertexId u, VertexId v, std::int64_t tok) {
            if (u > v) std::swap(u, v);
            etok[{u, v}] = tok;
        };
        put_edge(a, b, edge_token_in(t1, a, b));
        put_edge(b, c, edge_token_in(t1, b, c));
        put_edge(c, a, edge_token_in(t1, c, a));
        put_edge(a, d, edge_token_in(t1, a, d));
        put_edge(b, d, edge_token_in(t1, b, d));
        put_edge(c, d, edge_token_in(t1, c, d));
        put_edge(a, e, edge_token_in(t2, a, e));
        put_edge(b, e, edge_token_in(t2, b, e));
        put_edge(c, e, edge_token_in(t2, c, e));
        put_edge(d, e, next_e++);

        std::map<std::array<VertexId, 3>, std::int64_t> ftok;
        auto put_face = [&](VertexId u, VertexId v, VertexId w, std::int64_t tok) {
            std::array<VertexId, 3> f{u, v, w};
            std::sort(f.begin(), f.end());
            ftok[f] = tok;
        };
        put_face(a, b, d, face_token_in(t1, a, b, d));
        put_face(b, c, d, face_token_in(t1, b, c, d));
        put_face(c, a, d, face_token_in(t1, c, a, d));
        put_face(a, b, e, face_token_in(t2, a, b, e));
        put_face(b, c, e, face_token_in(t2, b, c, e));
        put_face(c, a, e, face_token_in(t2, c, a, e));
        put_face(a, d, e, next_f++);
        put_face(b, d, e, next_f++);
        put_face(c, d, e, next_f++);

        erase_tets({t1, t2});
        push_new(assemble({b, a, d, e}, etok, ftok));
        push_new(assemble({c, b, d, e}, etok, ftok));
        push_new(assemble({a, c, d, e}, etok, ftok));
        return from_skeleton(std::move(s));
    }

    if (mv.kind == Kind::three_two) {
        int eid = mv.locus;
        if (eid < 0 || eid >= static_cast<int>(edges_.size()))
            throw NotApplicableError("no such edge");
        const EdgeClass& ec = edges_[static_cast<std::size_t>(eid)];
        if (ec.boundary || ec.uses.size() != 3)
            throw NotApplicableError("3-2 move needs an inner edge with three tetrahedra");
        VertexId d = ec.ends[0], e = ec.ends[1];
        std::set<int> tset;
        std::set<VertexId> rimset;
        for (const auto& u : ec.uses) {
            tset.insert(u.tet);
            for (int sft = 0; sft < 4; ++sft) {
                VertexId w = tets_[static_cast<std::size_t>(u.tet)][sft];
                if (w != d && w != e) rimset.insert(w);
            }
        }
        if (tset.size() != 3 || rimset.size() != 3)
            throw NotApplicableError("3-2 move region is degenerate");
        std::vector<int> tlist(tset.begin(), tset.end());
        // Rim pair of each tetrahedron: (r, r') with (r', r, d, e) even.
        // Chaining those oriented pairs yields a consistent cycle (a,b,c).
        std::map<VertexId, VertexId> succ;
        for (int t : tlist) {
            const auto& tup = tets_[static_cast<std::size_t>(t)];
            std::vector<VertexId> rim;
            for (VertexId w : tup)
                if (w != d && w != e) rim.push_back(w);
            auto parity_vs = [&](std::array<VertexId, 4> want) {
                std::array<int, 4> perm{};
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        if (want[i] == tup[j]) perm[i] = j;
                int sign = 1;
                for (int i = 0; i < 4; ++i)
                    for (int j = i + 1; j < 4; ++j)
                        if (perm[i] > perm[j]) sign = -sign;
                return sign;
            };
            // orientation matching the 2-3 construction (x1, x0, d, e)
            VertexId r0 = rim[0], r1 = rim[1];
            if (parity_vs({r1, r0, d, e}) > 0)
                succ[r0] = r1;
            else
                succ[r1] = r0;
        }
        if (succ.size() != 3) throw NotApplicableError("3-2 rim is not a cycle");
        VertexId a = succ.begin()->first;
        VertexId b = succ.at(a);
        VertexId c = succ.at(b);
        if (succ.at(c) != a) throw NotApplicableError("3-2 rim is not a cycle");

        auto tet_with = [&](VertexId u, VertexId v) {
            for (int t : tlist) {
                const auto& tup = tets_[static_cast<std::size_t>(t)];
                bool hu = false, hv = false;
                for (VertexId w : tup) {
                    hu |= (w == u);
                    hv |= (w == v);
                }
                if (hu && hv) return t;
            }
            throw NotApplicableError("3-2 region lookup failed");
        };

        std::map<std::pair<VertexId, VertexId>, std::int64_t> etok;
        auto put_edge = [&](VertexId u, VertexId v, std::int64_t tok) {
            if (u > v) std::swap(u, v);
            etok[{u, v}] = tok;
        };
        put_edge(a, b, edge_token_in(tet_with(a, b), a, b));
        put_edge(b, c, edge_token_in(tet_with(b, c), b, c));
        put_edge(c, a, edge_token_in(tet_with(c, a), c, a));
        for (VertexId r : {a, b, c}) {
            put_edge(r, d, edge_token_in(tet_with(r, d), r, d));
            put_edge(r, e, edge_token_in(tet_with(r, e), r, e));
        }

        std::map<std::array<VertexId, 3>, std::int64_t> ftok;
        auto put_face = [&](VertexId u, VertexId v, VertexId w, std::int64_t tok) {
            std::array<VertexId, 3> f{u, v, w};
            std::sort(f.begin(), f.end());
            ftok[f] = tok;
        };
        auto face_tet = [&](VertexId u, VertexId v, VertexId w) {
            for (int t : tlist) {
                const auto& tup = tets_[static_cast<std::size_t>(t)];
                int hits = 0;
                for (VertexId x : tup) hits += (x == u || x == v || x == w);
                if (hits == 3) return t;
            }
            throw NotApplicableError("3-2 region lookup failed");
        };
        for (auto [u, v] : {std::pair{a, b}, {b, c}, {c, a}}) {
            put_face(u, v, d, face_token_in(face_tet(u, v, d), u, v, d));
            put_face(u, v, e, face_token_in(face_tet(u, v, e), u, v, e));
        }
        put_face(a, b, c, next_f++);

        erase_tets(tlist);
        // inverse of the 2-3 construction above
        push_new(assemble({a, b, c, d}, etok, ftok));
        push_new(assemble({b, a, c, e}, etok, ftok));
        return from_skeleton(std::move(s));
    }

    if (mv.kind == Kind::one_four) {
        int t = mv.locus;
        if (t < 0 || t >= static_cast<int>(tets_.size()))
            throw NotApplicableError("no such tetrahedron");
        VertexId w = mv.new_vertex;
        if (w < 0 || std::binary_search(vertices_.begin(), vertices_.end(), w))
            throw NotApplicableError("1-4 move needs a fresh vertex id");
        const auto tup = tets_[static_cast<std::size_t>(t)];

        std::map<std::pair<VertexId, VertexId>, std::int64_t> etok;
        auto put_edge = [&](VertexId u, VertexId v, std::int64_t tok) {
            if (u > v) std::swap(u, v);
            etok[{u, v}] = tok;
        };
        for (int k = 0; k < 6; ++k)
            put_edge(tup[kTetEdgeSlots[k][0]], tup[kTetEdgeSlots[k][1]],
                     s.edge_token[static_cast<std::size_t>(t)][k]);
        for (VertexId v : tup) put_edge(v, w, next_e++);

        std::map<std::array<VertexId, 3>, std::int64_t> ftok;
        auto put_face = [&](VertexId u, VertexId v, VertexId x, std::int64_t tok) {
            std::array<VertexId, 3> f{u, v, x};
            std::sort(f.begin(), f.end());
            ftok[f] = tok;
        };
        for (int k = 0; k < 4; ++k)
            put_face(tup[kTetFaceSlots[k][0]], tup[kTetFaceSlots[k][1]], tup[kTetFaceSlots[k][2]],
                     s.face_token[static_cast<std::size_t>(t)][k]);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) put_face(tup[i], tup[j], w, next_f++);

        erase_tets({t});
        for (int k = 0; k < 4; ++k) {
            std::array<VertexId, 4> nt = tup;
            nt[k] = w;
            // replacing slot k by the cone point keeps the tuple coherent
            push_new(assemble(nt, etok, ftok));
        }
        return from_skeleton(std::move(s));
    }

    // four_one
    VertexId w = mv.locus;
    std::vector<int> star;
    for (std::size_t t = 0; t < tets_.size(); ++t)
        for (int k = 0; k < 4; ++k)
            if (tets_[t][k] == w) star.push_back(static_cast<int>(t));
    if (star.size() != 4 || is_boundary_vertex(w))
        throw NotApplicableError("4-1 move needs an inner vertex with four tetrahedra");
    std::set<VertexId> ring;
    for (int t : star)
        for (VertexId v : tets_[static_cast<std::size_t>(t)])
            if (v != w) ring.insert(v);
    if (ring.size() != 4) throw NotApplicableError("4-1 star is degenerate");

    // Reconstruct the outer tetrahedron from one star tet: replace w by the
    // missing ring vertex in the slot of w, preserving orientation parity.
    int t0 = star[0];
    std::array<VertexId, 4> tup = tets_[static_cast<std::size_t>(t0)];
    VertexId missing = -1;
    for (VertexId v : ring) {
        bool found = false;
        for (VertexId x : tup) found |= (x == v);
        if (!found) missing = v;
    }
    for (auto& x : tup)
        if (x == w) x = missing;

    std::map<std::pair<VertexId, VertexId>, std::int64_t> etok;
    auto put_edge = [&](VertexId u, VertexId v, std::int64_t tok) {
        if (u > v) std::swap(u, v);
        etok[{u, v}] = tok;
    };
    std::map<std::array<VertexId, 3>, std::int64_t> ftok;
    auto put_face = [&](VertexId u, VertexId v, VertexId x, std::int64_t tok) {
        std::array<VertexId, 3> f{u, v, x};
        std::sort(f.begin(), f.end());
        ftok[f] = tok;
    };
    // outer faces and edges of the star survive
    for (int t : star) {
        const auto& tt = tets_[static_cast<std::size_t>(t)];
        for (int k = 0; k < 6; ++k) {
            VertexId a = tt[kTetEdgeSlots[k][0]], b = tt[kTetEdgeSlots[k][1]];
            if (a == w || b == w) continue;
            put_edge(a, b, s.edge_token[static_cast<std::size_t>(t)][k]);
        }
        for (int k = 0; k < 4; ++k) {
            if (tt[k] != w) continue;  // face opposite w is the outer face
            const auto& sl = kTetFaceSlots[k];
            put_face(tt[sl[0]], tt[sl[1]], tt[sl[2]], s.face_token[static_cast<std::size_t>(t)][k]);
        }
    }
    erase_tets(star);
    push_new(assemble(tup, etok, ftok));
    return from_skeleton(std::move(s));
}

inline std::vector<PachnerMove> Triangulation::applicable_moves(PachnerMove::Kind kind) const {
    using Kind = PachnerMove::Kind;
    std::vector<PachnerMove> out;
    if (kind == Kind::two_three) {
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            const auto& fc = faces_[f];
            if (fc.uses.size() != 2) continue;
            VertexId d = tets_[static_cast<std::size_t>(fc.uses[0].tet)][fc.uses[0].local];
            VertexId e = tets_[static_cast<std::size_t>(fc.uses[1].tet)][fc.uses[1].local];
            if (d == e) continue;
            out.push_back({kind, static_cast<int>(f), -1});
        }
    } else if (kind == Kind::three_two) {
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const auto& ec = edges_[e];
            if (ec.boundary || ec.uses.size() != 3) continue;
            std::set<int> tset;
            std::set<VertexId> rim;
            for (const auto& u : ec.uses) {
                tset.insert(u.tet);
                for (VertexId v : tets_[static_cast<std::size_t>(u.tet)])
                    if (v != ec.ends[0] && v != ec.ends[1]) rim.insert(v);
            }
            if (tset.size() != 3 || rim.size() != 3) continue;
            out.push_back({kind, static_cast<int>(e), -1});
        }
    } else if (kind == Kind::one_four) {
        for (std::size_t t = 0; t < tets_.size(); ++t)
            out.push_back({kind, static_cast<int>(t), max_vertex_id() + 1});
    } else {
        for (VertexId v : inner_vertices()) {
            int count = 0;
            for (const auto& tet : tets_)
                for (VertexId x : tet)
                    if (x == v) ++count;
            if (count == 4) out.push_back({kind, v, -1});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Builtin manifolds
// ---------------------------------------------------------------------------

namespace detail {

// Flips tuples (last two slots) along a face-matching sweep until the whole
// list is coherently oriented; input must be connected and orientable.
inline std::vector<std::array<VertexId, 4>> orient_coherently(
    std::vector<std::array<VertexId, 4>> tets) {
    std::map<std::array<VertexId, 3>, std::vector<std::pair<int, int>>> by_face;
    for (std::size_t t = 0; t < tets.size(); ++t)
        for (int k = 0; k < 4; ++k) {
            std::array<VertexId, 3> f{tets[t][kTetFaceSlots[k][0]], tets[t][kTetFaceSlots[k][1]],
                                      tets[t][kTetFaceSlots[k][2]]};
            std::sort(f.begin(), f.end());
            by_face[f].push_back({static_cast<int>(t), k});
        }
    // Local face indices go stale once a tuple is flipped; resolve faces of
    // the current tuple by vertex set instead.
    auto face_sign_in = [&](int t, const std::array<VertexId, 3>& f) {
        const auto& tup = tets[static_cast<std::size_t>(t)];
        for (int k = 0; k < 4; ++k) {
            std::array<VertexId, 3> g{tup[kTetFaceSlots[k][0]], tup[kTetFaceSlots[k][1]],
                                      tup[kTetFaceSlots[k][2]]};
            std::sort(g.begin(), g.end());
            if (g == f) return induced_face_sign(tup, k);
        }
        throw Error("orient_coherently: face lookup failed");
    };
    std::vector<int> state(tets.size(), 0);  // 0 unvisited, 1 fixed
    std::vector<int> stack{0};
    state[0] = 1;
    while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        for (int k = 0; k < 4; ++k) {
            std::array<VertexId, 3> f{tets[static_cast<std::size_t>(t)][kTetFaceSlots[k][0]],
                                      tets[static_cast<std::size_t>(t)][kTetFaceSlots[k][1]],
                                      tets[static_cast<std::size_t>(t)][kTetFaceSlots[k][2]]};
            std::sort(f.begin(), f.end());
            for (auto [t2, k2] : by_face.at(f)) {
                if (t2 == t) continue;
                int s1 = face_sign_in(t, f);
                int s2 = face_sign_in(t2, f);
                if (state[static_cast<std::size_t>(t2)] == 0) {
                    if (s1 == s2)
                        std::swap(tets[static_cast<std::size_t>(t2)][2], tets[static_cast<std::size_t>(t2)][3]);
                    state[static_cast<std::size_t>(t2)] = 1;
                    stack.push_back(t2);
                } else if (s1 == s2) {
                    throw NonOrientableError("complex admits no coherent orientation");
                }
            }
        }
    }
    for (int st : state)
        if (st == 0) throw Error("orient_coherently: disconnected complex");
    return tets;
}

// Prism triangulation of surface x [0, layers]: each sorted surface triangle
// (a,b,c) between shells L and L+1 yields tets (a,b,c,a'), (b,c,a',b'),
// (c,a',b',c'). Shell L vertex of label v is v + L*shell_size.
inline std::vector<std::array<VertexId, 4>> prism_layers(
    const std::vector<std::array<VertexId, 3>>& surface_faces, int shell_size, int layers) {
    std::vector<std::array<VertexId, 4>> tets;
    for (int L = 0; L < layers; ++L) {
        int lo = L * shell_size, hi = (L + 1) * shell_size;
        for (auto f : surface_faces) {
            std::sort(f.begin(), f.end());
            VertexId a = f[0] + lo, b = f[1] + lo, c = f[2] + lo;
            VertexId a1 = f[0] + hi, b1 = f[1] + hi, c1 = f[2] + hi;
            tets.push_back({a, b, c, a1});
            tets.push_back({b, c, a1, b1});
            tets.push_back({c, a1, b1, c1});
        }
    }
    return tets;
}

inline std::vector<std::array<VertexId, 3>> sphere_faces() {
    return {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
}

// Seven-vertex triangulation of the torus (the K7 triangulation).
inline std::vector<std::array<VertexId, 3>> torus_faces() {
    std::vector<std::array<VertexId, 3>> f;
    for (int i = 0; i < 7; ++i) {
        f.push_back({i, (i + 1) % 7, (i + 3) % 7});
        f.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    return f;
}

}  // namespace detail

inline Triangulation Triangulation::builtin(const std::string& name) {
    using detail::orient_coherently;
    using detail::prism_layers;

    if (name == "B3") {
        return from_tetrahedra({{0, 1, 2, 3}});
    }
    if (name == "S3") {
        std::vector<std::array<VertexId, 4>> tets;
        for (VertexId k = 0; k < 5; ++k) {
            std::array<VertexId, 4> t{};
            int idx = 0;
            for (VertexId v = 0; v < 5; ++v)
                if (v != k) t[idx++] = v;
            if (k % 2 == 1) std::swap(t[2], t[3]);
            tets.push_back(t);
        }
        return from_tetrahedra(orient_coherently(tets));
    }
    if (name == "S2xI") {
        return from_tetrahedra(orient_coherently(prism_layers(detail::sphere_faces(), 4, 2)));
    }
    if (name == "solid-torus") {
        // Triangle x S^1 over the homogeneous 3x3 lattice torus: vertex (i,j)
        // is 3i+j, meridian in the j direction, side diagonals along (1,1).
        // That diagonal pattern makes each prism a Schoenhardt cell, so every
        // prism is coned from an interior vertex 9+i.
        std::vector<std::array<VertexId, 4>> tets;
        auto v = [](int i, int j) {
            return static_cast<VertexId>(3 * (((i % 3) + 3) % 3) + (((j % 3) + 3) % 3));
        };
        for (int i = 0; i < 3; ++i) {
            VertexId c = 9 + i;
            tets.push_back({c, v(i, 0), v(i, 1), v(i, 2)});
            tets.push_back({c, v(i + 1, 0), v(i + 1, 1), v(i + 1, 2)});
            for (int j = 0; j < 3; ++j) {
                tets.push_back({c, v(i, j), v(i, j + 1), v(i + 1, j + 1)});
                tets.push_back({c, v(i, j), v(i + 1, j), v(i + 1, j + 1)});
            }
        }
        return from_tetrahedra(orient_coherently(tets));
    }
    if (name == "T2xI") {
        return from_tetrahedra(orient_coherently(prism_layers(detail::torus_faces(), 7, 2)));
    }
    if (name == "S2xS1") {
        Triangulation base = builtin("S2xI");
        // glue the shell-2 sphere (vertices 8..11) onto the shell-0 sphere
        const auto& comps = base.boundary_components();
        int top = -1, bottom = -1;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (comps[c].vertices.front() == 0) bottom = static_cast<int>(c);
            else top = static_cast<int>(c);
        }
        std::map<VertexId, VertexId> vmap;
        for (VertexId v : comps[static_cast<std::size_t>(top)].vertices) vmap[v] = v - 8;
        std::vector<std::array<int, 2>> edge_merge, face_merge;
        auto find_bottom_edge = [&](VertexId u, VertexId v) {
            for (int e : comps[static_cast<std::size_t>(bottom)].edges) {
                const auto& ec = base.edge(e);
                if ((ec.ends[0] == u && ec.ends[1] == v) || (ec.ends[0] == v && ec.ends[1] == u))
                    return e;
            }
            throw Error("S2xS1 fixture: bottom edge not found");
        };
        for (int e : comps[static_cast<std::size_t>(top)].edges)
            edge_merge.push_back({e, find_bottom_edge(vmap.at(base.edge(e).ends[0]),
                                                      vmap.at(base.edge(e).ends[1]))});
        auto find_bottom_face = [&](std::array<VertexId, 3> f) {
            std::sort(f.begin(), f.end());
            for (int id : comps[static_cast<std::size_t>(bottom)].faces)
                if (base.face(id).verts == f) return id;
            throw Error("S2xS1 fixture: bottom face not found");
        };
        for (int id : comps[static_cast<std::size_t>(top)].faces) {
            auto fv = base.face(id).verts;
            face_merge.push_back({id, find_bottom_face({vmap.at(fv[0]), vmap.at(fv[1]), vmap.at(fv[2])})});
        }
        return base.quotient(vmap, edge_merge, face_merge);
    }
    throw UnknownNameError("unknown builtin manifold: " + name);
}

}  // namespace torsio
