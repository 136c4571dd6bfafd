#pragma once

/// Euclidean placement of triangulation vertices and all metric quantities
/// with their exact first derivatives.
///
/// Coordinates realize every tetrahedron in R^3; tetrahedra are allowed to
/// intersect, so nothing is assumed about embeddings. Dihedral angles are
/// *signed*: the angle of tetrahedron t at any of its edges carries the sign
/// of t's oriented volume. With that convention the angle sums around an
/// edge telescope to locally constant windings, which is what makes the
/// deficit rows of the chain complex exact under vertex motions. For a
/// positively realized tetrahedron the angles are the usual ones in (0, pi).
///
/// Angle defects: omega_i = 2*pi - sum_t theta_signed(t, i) at inner edges,
/// alpha_i = -sum_t theta_signed(t, i) at boundary edges. Their derivative
/// rows in the edge lengths coincide: -sum_t sign(V_t) * dtheta_t.

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "torsio/common.hpp"
#include "torsio/triangulation.hpp"

namespace torsio {

struct Placement {
    std::map<VertexId, Vec3> coords;
    std::uint64_t seed = 0;

    const Vec3& at(VertexId v) const {
        auto it = coords.find(v);
        if (it == coords.end()) throw Error("vertex has no coordinates");
        return it->second;
    }
    bool has(VertexId v) const { return coords.count(v) > 0; }
};

struct MotionGenerator {
    // (tx, ty, tz, rx, ry, rz) in the fixed basis of e(3); rotations about
    // the coordinate origin.
    std::array<double, 6> c{};

    Vec3 translation() const { return {c[0], c[1], c[2]}; }
    Vec3 rotation() const { return {c[3], c[4], c[5]}; }
};

inline Vec3 motion_velocity(const MotionGenerator& g, const Vec3& x) {
    return g.translation() + g.rotation().cross(x);
}

// Signed 6*Volume of the tuple as stored.
inline double six_volume(const std::array<VertexId, 4>& tet, const Placement& p) {
    Vec3 a = p.at(tet[1]) - p.at(tet[0]);
    Vec3 b = p.at(tet[2]) - p.at(tet[0]);
    Vec3 c = p.at(tet[3]) - p.at(tet[0]);
    return a.cross(b).dot(c);
}

// --------------------------------------------------------------------------
// Dihedral angles from squared edge lengths.
//
// Local edge k of a tetrahedron joins tuple slots kTetEdgeSlots[k]. For the
// edge (i,j) with remaining slots (k,l) put u = Pj-Pi, p = Pk-Pi, q = Pl-Pi;
// then with dot products expressed in squared lengths m,
//     theta = atan2( sqrt(m_u * G), m_u*(p.q) - (u.p)(u.q) ),
// where G = Gram determinant of (u,p,q) = 36 V^2. theta lies in (0, pi).
// --------------------------------------------------------------------------

namespace metric_detail {

struct EdgeFrame {
    // indices into the local 6-edge basis
    int ij, ik, il, jk, jl, kl;
};

inline EdgeFrame edge_frame(int local_edge) {
    int i = kTetEdgeSlots[local_edge][0];
    int j = kTetEdgeSlots[local_edge][1];
    int k = -1, l = -1;
    for (int s = 0; s < 4; ++s)
        if (s != i && s != j) (k < 0 ? k : l) = s;
    auto eidx = [](int a, int b) {
        if (a > b) std::swap(a, b);
        for (int e = 0; e < 6; ++e)
            if (kTetEdgeSlots[e][0] == a && kTetEdgeSlots[e][1] == b) return e;
        return -1;
    };
    return {eidx(i, j), eidx(i, k), eidx(i, l), eidx(j, k), eidx(j, l), eidx(k, l)};
}

struct AngleTerms {
    double mu, a, b, g, N, G, s;  // s = sqrt(mu*G)
};

inline AngleTerms angle_terms(const std::array<double, 6>& m, const EdgeFrame& f) {
    AngleTerms t;
    t.mu = m[static_cast<std::size_t>(f.ij)];
    t.a = 0.5 * (t.mu + m[static_cast<std::size_t>(f.ik)] - m[static_cast<std::size_t>(f.jk)]);
    t.b = 0.5 * (t.mu + m[static_cast<std::size_t>(f.il)] - m[static_cast<std::size_t>(f.jl)]);
    t.g = 0.5 * (m[static_cast<std::size_t>(f.ik)] + m[static_cast<std::size_t>(f.il)] -
                 m[static_cast<std::size_t>(f.kl)]);
    double mp = m[static_cast<std::size_t>(f.ik)];
    double mq = m[static_cast<std::size_t>(f.il)];
    t.N = t.mu * t.g - t.a * t.b;
    t.G = t.mu * (mp * mq - t.g * t.g) - t.a * (t.a * mq - t.g * t.b) +
          t.b * (t.a * t.g - mp * t.b);
    double sg = t.mu * t.G;
    if (sg <= 0.0) throw DegenerateTetrahedronError("flat tetrahedron in dihedral angle");
    t.s = std::sqrt(sg);
    return t;
}

}  // namespace metric_detail

// Unsigned dihedral angle at local edge `local` from the six squared lengths
// m (indexed by kTetEdgeSlots).
inline double dihedral_from_squared_lengths(const std::array<double, 6>& m, int local) {
    auto f = metric_detail::edge_frame(local);
    auto t = metric_detail::angle_terms(m, f);
    return std::atan2(t.s, t.N);
}

// d theta / d m over the six squared lengths. Evaluated in extended
// precision: the entries feed the defect derivative matrix, whose analytic
// symmetry is asserted at 1e-9 of its norm, and near-flat dihedral angles
// amplify double rounding past that.
inline std::array<double, 6> dihedral_gradient_squared(const std::array<double, 6>& m,
                                                       int local) {
    using metric_detail::edge_frame;
    using L = long double;
    auto f = edge_frame(local);

    L mu = m[static_cast<std::size_t>(f.ij)];
    L mp = m[static_cast<std::size_t>(f.ik)];
    L mq = m[static_cast<std::size_t>(f.il)];
    L a = 0.5L * (mu + mp - static_cast<L>(m[static_cast<std::size_t>(f.jk)]));
    L b = 0.5L * (mu + mq - static_cast<L>(m[static_cast<std::size_t>(f.jl)]));
    L g = 0.5L * (mp + mq - static_cast<L>(m[static_cast<std::size_t>(f.kl)]));
    L N = mu * g - a * b;
    L G = mu * (mp * mq - g * g) - a * (a * mq - g * b) + b * (a * g - mp * b);
    L sg = mu * G;
    if (sg <= 0.0L) throw DegenerateTetrahedronError("flat tetrahedron in dihedral gradient");
    L s = std::sqrt(sg);

    // cofactors of the Gram matrix [[mu,a,b],[a,mp,g],[b,g,mq]]
    L C11 = mp * mq - g * g;
    L C22 = mu * mq - b * b;
    L C33 = mu * mp - a * a;
    L C12 = g * b - a * mq;
    L C13 = a * g - mp * b;
    L C23 = a * b - mu * g;

    std::array<L, 6> da{}, db{}, dg{}, dmu{};
    dmu[static_cast<std::size_t>(f.ij)] = 1.0L;
    da[static_cast<std::size_t>(f.ij)] = 0.5L;
    da[static_cast<std::size_t>(f.ik)] = 0.5L;
    da[static_cast<std::size_t>(f.jk)] = -0.5L;
    db[static_cast<std::size_t>(f.ij)] = 0.5L;
    db[static_cast<std::size_t>(f.il)] = 0.5L;
    db[static_cast<std::size_t>(f.jl)] = -0.5L;
    dg[static_cast<std::size_t>(f.ik)] = 0.5L;
    dg[static_cast<std::size_t>(f.il)] = 0.5L;
    dg[static_cast<std::size_t>(f.kl)] = -0.5L;

    std::array<double, 6> out{};
    L denom = s * s + N * N;
    for (std::size_t e = 0; e < 6; ++e) {
        L dmp = (static_cast<int>(e) == f.ik) ? 1.0L : 0.0L;
        L dmq = (static_cast<int>(e) == f.il) ? 1.0L : 0.0L;
        L dG = C11 * dmu[e] + C22 * dmp + C33 * dmq + 2.0L * C12 * da[e] +
               2.0L * C13 * db[e] + 2.0L * C23 * dg[e];
        L dN = g * dmu[e] + mu * dg[e] - b * da[e] - a * db[e];
        L ds = (G * dmu[e] + mu * dG) / (2.0L * s);
        out[e] = static_cast<double>((N * ds - s * dN) / denom);
    }
    return out;
}

// --------------------------------------------------------------------------
// MetricCache
// --------------------------------------------------------------------------

struct MetricCache {
    std::vector<double> length;                      // per edge class
    std::vector<double> vol6;                        // signed 6V per tetrahedron
    std::vector<std::array<double, 6>> theta;        // unsigned dihedral per (tet, local edge)
    std::vector<double> defect;                      // omega (inner) or alpha (boundary) per edge

    double omega(int edge) const { return defect[static_cast<std::size_t>(edge)]; }
};

inline std::array<double, 6> tet_squared_lengths(const Triangulation& t, int tet,
                                                 const MetricCache& mc) {
    std::array<double, 6> m{};
    for (int k = 0; k < 6; ++k) {
        double l = mc.length[static_cast<std::size_t>(t.tet_edge_class(tet, k))];
        m[static_cast<std::size_t>(k)] = l * l;
    }
    return m;
}

inline MetricCache metric_cache(const Triangulation& t, const Placement& p) {
    MetricCache mc;
    mc.length.resize(t.edges().size());
    for (std::size_t e = 0; e < t.edges().size(); ++e) {
        const auto& ec = t.edges()[e];
        double l = (p.at(ec.ends[0]) - p.at(ec.ends[1])).norm();
        if (l <= 0.0) throw ZeroLengthError("zero edge length");
        mc.length[e] = l;
    }
    mc.vol6.resize(t.tets().size());
    mc.theta.resize(t.tets().size());
    for (std::size_t tt = 0; tt < t.tets().size(); ++tt) {
        mc.vol6[tt] = six_volume(t.tets()[tt], p);
        if (mc.vol6[tt] == 0.0)
            throw DegenerateTetrahedronError("tetrahedron with zero volume");
        auto m = tet_squared_lengths(t, static_cast<int>(tt), mc);
        for (int k = 0; k < 6; ++k)
            mc.theta[tt][static_cast<std::size_t>(k)] = dihedral_from_squared_lengths(m, k);
    }
    mc.defect.assign(t.edges().size(), 0.0);
    for (std::size_t tt = 0; tt < t.tets().size(); ++tt) {
        double sgn = mc.vol6[tt] > 0 ? 1.0 : -1.0;
        for (int k = 0; k < 6; ++k)
            mc.defect[static_cast<std::size_t>(t.tet_edge_class(static_cast<int>(tt), k))] -=
                sgn * mc.theta[tt][static_cast<std::size_t>(k)];
    }
    for (std::size_t e = 0; e < t.edges().size(); ++e)
        if (!t.edges()[e].boundary) mc.defect[e] += 2.0 * std::numbers::pi;
    return mc;
}

// Row of d length / d coordinates for one edge: +unit vector at P, -unit at Q.
struct LengthGradient {
    VertexId p, q;
    Vec3 dp, dq;
};

inline LengthGradient d_length_d_coords(VertexId u, VertexId v, const Placement& pl) {
    Vec3 d = pl.at(u) - pl.at(v);
    double l = d.norm();
    if (l <= 0.0) throw ZeroLengthError("zero edge length");
    Vec3 e = d / l;
    return {u, v, e, -e};
}

// d theta / d l over the local 6-edge basis of a tetrahedron (unsigned theta).
inline std::array<double, 6> d_angle_d_lengths(const Triangulation& t, int tet, int local,
                                               const MetricCache& mc) {
    auto m = tet_squared_lengths(t, tet, mc);
    auto dm = dihedral_gradient_squared(m, local);
    std::array<double, 6> out{};
    for (int k = 0; k < 6; ++k) {
        double l = mc.length[static_cast<std::size_t>(t.tet_edge_class(tet, k))];
        out[static_cast<std::size_t>(k)] = 2.0 * l * dm[static_cast<std::size_t>(k)];
    }
    return out;
}

// --------------------------------------------------------------------------
// Random placements with the general-position guard
// --------------------------------------------------------------------------

struct GeneralPositionOptions {
    double min_six_volume = 1e-6;
    double min_length = 1e-3;
    int max_attempts = 64;
};

inline bool passes_guard(const Triangulation& t, const Placement& p,
                         const GeneralPositionOptions& opt = {}) {
    for (const auto& ec : t.edges()) {
        double l = (p.at(ec.ends[0]) - p.at(ec.ends[1])).norm();
        if (!(l > opt.min_length)) return false;
    }
    for (const auto& tet : t.tets())
        if (!(std::abs(six_volume(tet, p)) > opt.min_six_volume)) return false;
    return true;
}

inline Placement random_placement(const Triangulation& t, std::uint64_t seed,
                                  const GeneralPositionOptions& opt = {}) {
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
        Placement p;
        p.seed = seed;
        Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        for (VertexId v : t.vertices()) {
            Vec3 x(rng.uniform01(), rng.uniform01(), rng.uniform01());
            p.coords[v] = x;
        }
        if (passes_guard(t, p, opt)) return p;
    }
    throw GeneralPositionError("no general-position placement within retry budget");
}

// Extends a placement with coordinates for a 1-4 subdivision vertex: the
// barycenter of the subdivided tetrahedron, deterministically perturbed until
// the guard passes on the refined triangulation.
inline Placement extend_placement_barycentric(const Triangulation& refined,
                                              const Placement& base, VertexId fresh,
                                              const std::array<VertexId, 4>& around,
                                              std::uint64_t seed,
                                              const GeneralPositionOptions& opt = {}) {
    Vec3 bary = Vec3::Zero();
    for (VertexId v : around) bary += base.at(v);
    bary /= 4.0;
    double scale = 0.0;
    for (VertexId v : around) scale = std::max(scale, (base.at(v) - bary).norm());
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        Placement p = base;
        Vec3 jitter(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        p.coords[fresh] = bary + 0.05 * scale * jitter;
        p.seed = base.seed;
        if (passes_guard(refined, p, opt)) return p;
    }
    throw GeneralPositionError("no admissible subdivision point within retry budget");
}

}  // namespace torsio
