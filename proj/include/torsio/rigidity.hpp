#pragma once

/// Minimal rigid constructions of edges.
///
/// Interior context: a minimal set of inner edges whose fixed lengths,
/// together with rigidity of every boundary component, leave only global
/// Euclidean motions. Its rigidity rows live over the column basis
/// [inner vertex coordinates] ++ [6 sway parameters per boundary component],
/// and the target rank is 3*(#inner vertices) + 6m - 6.
///
/// Surface context: a minimal set of edges of one boundary component whose
/// fixed lengths make the component move only as a whole; target rank
/// 3*N - 6 over the component's vertex coordinates.
///
/// Selection is a greedy scan in ascending edge id, which for placements in
/// general position picks a basis of the generic rigidity matroid, hence is
/// placement-independent.

#include <vector>

#include "torsio/common.hpp"
#include "torsio/geometry.hpp"
#include "torsio/triangulation.hpp"

namespace torsio {

struct RigidConstruction {
    enum class Context { interior, surface };
    Context context = Context::interior;
    int component = -1;          // surface context: boundary component index
    std::vector<int> edges;      // selected edge class ids, ascending
    std::vector<int> complement; // candidates not selected, ascending
};

namespace rigidity_detail {

inline int svd_rank(const Matrix& m, double rel_tol = 1e-8) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    double top = svd.singularValues()(0);
    if (top == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > rel_tol * top) ++r;
    return r;
}

struct GreedyResult {
    std::vector<int> selected;
    std::vector<int> complement;
};

template <typename RowFn>
GreedyResult greedy_rank(const std::vector<int>& candidates, int target_rank, int cols,
                         RowFn row_of) {
    GreedyResult out;
    Matrix acc(0, cols);
    int rank = 0;
    for (int e : candidates) {
        if (rank == target_rank) {
            out.complement.push_back(e);
            continue;
        }
        Matrix trial(acc.rows() + 1, cols);
        trial.topRows(acc.rows()) = acc;
        trial.row(acc.rows()) = row_of(e);
        int r = svd_rank(trial);
        if (r > rank) {
            acc = std::move(trial);
            rank = r;
            out.selected.push_back(e);
        } else {
            out.complement.push_back(e);
        }
    }
    if (rank != target_rank)
        throw RankDeficientError("rigid construction: target rank unreachable");
    return out;
}

}  // namespace rigidity_detail

// Column basis of the interior rigidity problem: inner vertex coordinates in
// ascending vertex order (x,y,z per vertex), then 6 sway parameters per
// boundary component in component order.
struct InteriorColumns {
    std::vector<VertexId> inner;  // ascending
    int m = 0;

    int count() const { return 3 * static_cast<int>(inner.size()) + 6 * m; }
    int coord_col(VertexId v, int axis) const {
        auto it = std::lower_bound(inner.begin(), inner.end(), v);
        return 3 * static_cast<int>(it - inner.begin()) + axis;
    }
    int sway_col(int component, int param) const {
        return 3 * static_cast<int>(inner.size()) + 6 * component + param;
    }
    bool is_inner(VertexId v) const {
        return std::binary_search(inner.begin(), inner.end(), v);
    }
};

inline InteriorColumns interior_columns(const Triangulation& t) {
    InteriorColumns c;
    c.inner = t.inner_vertices();
    c.m = static_cast<int>(t.num_boundary_components());
    return c;
}

// The d(length) row of one edge over the interior columns. Boundary vertices
// contribute through the sway of their component: velocity t + r x x.
inline Eigen::RowVectorXd edge_rigidity_row(const Triangulation& t, const Placement& p,
                                            const InteriorColumns& cols, int edge) {
    const auto& ec = t.edge(edge);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(cols.count());
    auto g = d_length_d_coords(ec.ends[0], ec.ends[1], p);
    auto add_endpoint = [&](VertexId v, const Vec3& grad) {
        if (cols.is_inner(v)) {
            for (int axis = 0; axis < 3; ++axis) row(cols.coord_col(v, axis)) += grad[axis];
            return;
        }
        // dl contribution of a sway (t, r): grad . t + (x_v cross grad) . r
        int comp = -1;
        for (std::size_t c = 0; c < t.boundary_components().size(); ++c) {
            const auto& bc = t.boundary_components()[c];
            if (std::binary_search(bc.vertices.begin(), bc.vertices.end(), v))
                comp = static_cast<int>(c);
        }
        if (comp < 0) throw Error("boundary vertex without component");
        Vec3 rot = p.at(v).cross(grad);
        for (int k = 0; k < 3; ++k) {
            row(cols.sway_col(comp, k)) += grad[k];
            row(cols.sway_col(comp, 3 + k)) += rot[k];
        }
    };
    add_endpoint(g.p, g.dp);
    add_endpoint(g.q, g.dq);
    return row;
}

// Greedy interior minimal rigid construction; `preselect` seeds the scan (its
// rows must be independent) and is used when assembling glued manifolds.
inline RigidConstruction rigid_construction_interior(const Triangulation& t, const Placement& p,
                                                     const std::vector<int>& preselect = {}) {
    InteriorColumns cols = interior_columns(t);
    int target = cols.count() - 6;
    std::vector<int> candidates = preselect;
    for (int e : t.inner_edges())
        if (std::find(preselect.begin(), preselect.end(), e) == preselect.end())
            candidates.push_back(e);
    auto res = rigidity_detail::greedy_rank(
        candidates, target, cols.count(),
        [&](int e) { return edge_rigidity_row(t, p, cols, e); });
    if (!preselect.empty()) {
        // a preselect that fails to be independent is a caller bug
        for (int e : preselect)
            if (std::find(res.selected.begin(), res.selected.end(), e) == res.selected.end())
                throw RankDeficientError("preselected rigid construction is dependent");
    }
    RigidConstruction rc;
    rc.context = RigidConstruction::Context::interior;
    rc.edges = std::move(res.selected);
    for (int e : res.complement)
        if (!t.edge(e).boundary) rc.complement.push_back(e);
    std::sort(rc.edges.begin(), rc.edges.end());
    std::sort(rc.complement.begin(), rc.complement.end());
    return rc;
}

// Surface rigidity row: d(length) over the 3N coordinates of the component's
// vertices.
inline Eigen::RowVectorXd surface_rigidity_row(const Triangulation& t, const Placement& p,
                                               const BoundaryComponent& bc, int edge) {
    const auto& ec = t.edge(edge);
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(3 * bc.vertices.size());
    auto g = d_length_d_coords(ec.ends[0], ec.ends[1], p);
    auto col = [&](VertexId v, int axis) {
        auto it = std::lower_bound(bc.vertices.begin(), bc.vertices.end(), v);
        if (it == bc.vertices.end() || *it != v) throw Error("edge endpoint outside component");
        return 3 * static_cast<int>(it - bc.vertices.begin()) + axis;
    };
    for (int axis = 0; axis < 3; ++axis) {
        row(col(g.p, axis)) += g.dp[axis];
        row(col(g.q, axis)) += g.dq[axis];
    }
    return row;
}

inline RigidConstruction rigid_construction_surface(const Triangulation& t, const Placement& p,
                                                    int component,
                                                    const std::vector<int>& preselect = {}) {
    const auto& bc = t.boundary_components().at(static_cast<std::size_t>(component));
    int target = 3 * static_cast<int>(bc.vertices.size()) - 6;
    std::vector<int> candidates = preselect;
    for (int e : bc.edges)
        if (std::find(preselect.begin(), preselect.end(), e) == preselect.end())
            candidates.push_back(e);
    auto res = rigidity_detail::greedy_rank(
        candidates, target, 3 * static_cast<int>(bc.vertices.size()),
        [&](int e) { return surface_rigidity_row(t, p, bc, e); });
    if (!preselect.empty()) {
        for (int e : preselect)
            if (std::find(res.selected.begin(), res.selected.end(), e) == res.selected.end())
                throw RankDeficientError("preselected surface construction is dependent");
    }
    RigidConstruction rc;
    rc.context = RigidConstruction::Context::surface;
    rc.component = component;
    rc.edges = std::move(res.selected);
    rc.complement = std::move(res.complement);
    std::sort(rc.edges.begin(), rc.edges.end());
    std::sort(rc.complement.begin(), rc.complement.end());
    return rc;
}

}  // namespace torsio
