#pragma once

/// Finite-dimensional Grassmann algebra with Berezin integration.
///
/// Monomials are stored against the registry's canonical generator order
/// (ascending index); every sign in the algebra derives from sorting
/// permutation parity against that order. Coefficients are plain doubles;
/// the large scalar prefactors of the invariants stay outside the elements
/// as LogScalar factors.
///
/// Conventions fixed here and used everywhere:
///  * multiplication sign = parity of the merge permutation;
///  * the Berezin integral strips the generator from the right:
///    integrating u da kills terms without a and moves a rightmost first;
///  * multiple integrals apply the *leftmost* differential first, and the
///    per-edge differential pair is written da* da, so integrating the pair
///    over a a* gives +1;
///  * generating functions pair edge i with generators a_i (rows of the
///    script matrix, dl side) and a*_i (columns, defect side).

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "torsio/common.hpp"
#include "torsio/complexes.hpp"

namespace torsio {

class GeneratorRegistry {
  public:
    explicit GeneratorRegistry(std::vector<std::string> names, std::vector<int> star = {})
        : names_(std::move(names)), star_(std::move(star)) {
        if (names_.size() > 64)
            throw ShapeMismatchError("at most 64 Grassmann generators are supported");
        if (star_.empty()) star_.assign(names_.size(), 0);
    }

    // Two generators per edge, a[e] then a*[e], edges ascending.
    static GeneratorRegistry for_edges(std::vector<int> edges) {
        std::sort(edges.begin(), edges.end());
        std::vector<std::string> names;
        std::vector<int> star;
        GeneratorRegistry r({});
        for (int e : edges) {
            names.push_back("a[" + std::to_string(e) + "]");
            star.push_back(0);
            names.push_back("a*[" + std::to_string(e) + "]");
            star.push_back(1);
            r.edge_rank_[e] = static_cast<int>(r.edge_rank_.size());
        }
        r.names_ = std::move(names);
        r.star_ = std::move(star);
        if (r.names_.size() > 64)
            throw ShapeMismatchError("at most 64 Grassmann generators are supported");
        return r;
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
    bool is_star(int i) const { return star_[static_cast<std::size_t>(i)] != 0; }

    int a_index(int edge) const { return 2 * edge_rank_.at(edge); }
    int astar_index(int edge) const { return 2 * edge_rank_.at(edge) + 1; }
    bool has_edge(int edge) const { return edge_rank_.count(edge) > 0; }

    bool operator==(const GeneratorRegistry& o) const {
        return names_ == o.names_ && star_ == o.star_;
    }

  private:
    std::vector<std::string> names_;
    std::vector<int> star_;
    std::map<int, int> edge_rank_;
};

using RegistryPtr = std::shared_ptr<const GeneratorRegistry>;

namespace grassmann_detail {

// parity sign of moving every generator of `b` through the generators of `a`
// that exceed it (merge of two ascending disjoint words)
inline int merge_sign(std::uint64_t a, std::uint64_t b) {
    int inversions = 0;
    while (b) {
        int j = std::countr_zero(b);
        inversions += std::popcount(a >> (j + 1));
        b &= b - 1;
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace grassmann_detail

class GrassmannElement {
  public:
    GrassmannElement() = default;
    explicit GrassmannElement(RegistryPtr reg) : reg_(std::move(reg)) {}

    static GrassmannElement scalar(RegistryPtr reg, double c) {
        GrassmannElement e(std::move(reg));
        if (c != 0.0) e.terms_[0] = c;
        return e;
    }

    static GrassmannElement generator(RegistryPtr reg, int index) {
        GrassmannElement e(std::move(reg));
        e.terms_[1ull << index] = 1.0;
        return e;
    }

    const RegistryPtr& registry() const { return reg_; }
    const std::map<std::uint64_t, double>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    double coefficient(std::uint64_t mask) const {
        auto it = terms_.find(mask);
        return it == terms_.end() ? 0.0 : it->second;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (const auto& [k, v] : terms_) m = std::max(m, std::abs(v));
        return m;
    }

    void set(std::uint64_t mask, double c) {
        if (c == 0.0)
            terms_.erase(mask);
        else
            terms_[mask] = c;
    }

    void add(std::uint64_t mask, double c) { set(mask, coefficient(mask) + c); }

    GrassmannElement operator+(const GrassmannElement& o) const {
        require_same_registry(o);
        GrassmannElement r = *this;
        for (const auto& [k, v] : o.terms_) r.add(k, v);
        return r;
    }

    GrassmannElement operator-(const GrassmannElement& o) const {
        require_same_registry(o);
        GrassmannElement r = *this;
        for (const auto& [k, v] : o.terms_) r.add(k, -v);
        return r;
    }

    GrassmannElement operator*(double c) const {
        GrassmannElement r(reg_);
        if (c != 0.0)
            for (const auto& [k, v] : terms_) r.terms_[k] = c * v;
        return r;
    }

    GrassmannElement operator*(const GrassmannElement& o) const {
        require_same_registry(o);
        GrassmannElement r(reg_);
        for (const auto& [ka, va] : terms_) {
            for (const auto& [kb, vb] : o.terms_) {
                if (ka & kb) continue;  // repeated generator
                double s = grassmann_detail::merge_sign(ka, kb);
                r.add(ka | kb, s * va * vb);
            }
        }
        return r;
    }

    void require_same_registry(const GrassmannElement& o) const {
        if (!reg_ || !o.reg_ || !(*reg_ == *o.reg_))
            throw RegistryMismatchError("elements live in different Grassmann algebras");
    }

  private:
    RegistryPtr reg_;
    std::map<std::uint64_t, double> terms_;
};

inline GrassmannElement operator*(double c, const GrassmannElement& e) { return e * c; }

// exp of an even element via the (finite) Taylor series.
inline GrassmannElement exponential(const GrassmannElement& u) {
    for (const auto& [k, v] : u.terms())
        if (std::popcount(k) % 2 != 0)
            throw OddInputError("exponential of an element with odd-degree terms");
    GrassmannElement acc = GrassmannElement::scalar(u.registry(), 1.0);
    GrassmannElement power = acc;
    for (int k = 1; !power.is_zero(); ++k) {
        power = power * u * (1.0 / k);
        acc = acc + power;
        if (k > 64) throw Error("exponential failed to terminate");
    }
    return acc;
}

// Berezin integral over one generator.
inline GrassmannElement berezin_integral(const GrassmannElement& u, int gen) {
    GrassmannElement r(u.registry());
    std::uint64_t bit = 1ull << gen;
    for (const auto& [k, v] : u.terms()) {
        if (!(k & bit)) continue;
        int above = std::popcount(k >> (gen + 1));
        double s = (above % 2 == 0) ? 1.0 : -1.0;
        r.add(k & ~bit, s * v);
    }
    return r;
}

// Iterated integral; the first entry of `gens` is the differential adjacent
// to the integrand and is applied first.
inline GrassmannElement multiple_integral(const GrassmannElement& u, const std::vector<int>& gens) {
    GrassmannElement r = u;
    for (int g : gens) r = berezin_integral(r, g);
    return r;
}

// The differential list of prod_{e in edges} da*_e da_e in ascending edge
// order (pair order da* then da, leftmost applied first).
inline std::vector<int> edge_pair_differentials(const GeneratorRegistry& reg,
                                                std::vector<int> edges) {
    std::sort(edges.begin(), edges.end());
    std::vector<int> gens;
    for (int e : edges) {
        gens.push_back(reg.astar_index(e));
        gens.push_back(reg.a_index(e));
    }
    return gens;
}

// Transports an element into another registry along a generator map
// gen -> (target gen, sign). Terms hitting a repeated target vanish.
inline GrassmannElement transport(const GrassmannElement& u, RegistryPtr target,
                                  const std::vector<std::pair<int, double>>& gen_map) {
    GrassmannElement r(std::move(target));
    for (const auto& [mask, v] : u.terms()) {
        std::vector<int> word;
        double coeff = v;
        std::uint64_t rest = mask;
        bool dead = false;
        while (rest) {
            int g = std::countr_zero(rest);
            rest &= rest - 1;
            auto [tg, s] = gen_map.at(static_cast<std::size_t>(g));
            if (tg < 0) { dead = true; break; }
            coeff *= s;
            word.push_back(tg);
        }
        if (dead) continue;
        // insertion sort, tracking parity; duplicates kill the term
        int sign = 1;
        bool repeated = false;
        for (std::size_t i = 1; i < word.size() && !repeated; ++i) {
            for (std::size_t j = i; j > 0; --j) {
                if (word[j - 1] == word[j]) { repeated = true; break; }
                if (word[j - 1] > word[j]) {
                    std::swap(word[j - 1], word[j]);
                    sign = -sign;
                } else {
                    break;
                }
            }
        }
        if (repeated) continue;
        std::uint64_t out = 0;
        for (int g : word) out |= 1ull << g;
        r.add(out, sign * coeff);
    }
    return r;
}

// Coefficient at the interleaved monomial a_{C1} a*_{D1} a_{C2} a*_{D2} ...
// (sign-corrected from canonical storage).
inline double coefficient_at(const GrassmannElement& u, const std::vector<int>& C,
                             const std::vector<int>& D) {
    if (C.size() != D.size()) throw ShapeMismatchError("C and D must have equal size");
    const GeneratorRegistry& reg = *u.registry();
    std::vector<int> word;
    for (std::size_t k = 0; k < C.size(); ++k) {
        word.push_back(reg.a_index(C[k]));
        word.push_back(reg.astar_index(D[k]));
    }
    int sign = 1;
    for (std::size_t i = 1; i < word.size(); ++i) {
        for (std::size_t j = i; j > 0 && word[j - 1] > word[j]; --j) {
            std::swap(word[j - 1], word[j]);
            sign = -sign;
        }
    }
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i > 0 && word[i] == word[i - 1]) return 0.0;  // repeated generator
        mask |= 1ull << word[i];
    }
    return sign * u.coefficient(mask);
}

// ---------------------------------------------------------------------------
// Generating functions
// ---------------------------------------------------------------------------

// exp of the bilinear form sum_ij M_ij a_i a*_j for a square matrix over the
// given edge list (rows = unstarred = dl side).
inline GrassmannElement minor_generating_function(const Matrix& m, RegistryPtr reg,
                                                  const std::vector<int>& edges) {
    if (m.rows() != m.cols() || m.rows() != static_cast<Eigen::Index>(edges.size()))
        throw ShapeMismatchError("minor generating function needs a square matrix over the edges");
    GrassmannElement f(reg);
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = 0; j < edges.size(); ++j) {
            double c = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (c == 0.0) continue;
            GrassmannElement term =
                GrassmannElement::generator(reg, reg->a_index(edges[i])) *
                GrassmannElement::generator(reg, reg->astar_index(edges[j]));
            f = f + term * c;
        }
    return exponential(f);
}

// The script matrix: rows and columns over E = E_inner ++ eligible boundary
// edges, entries d(defect_j)/d(l_i) at (row i, col j) -- rows are the dl side.
struct ScriptMatrix {
    Matrix m;
    std::vector<int> inner;     // ascending
    std::vector<int> boundary;  // ascending
    std::vector<int> all;       // inner ++ boundary, ascending

    Matrix block(const std::vector<int>& rows, const std::vector<int>& cols) const {
        auto pos = [&](int e) {
            auto it = std::lower_bound(all.begin(), all.end(), e);
            return static_cast<Eigen::Index>(it - all.begin());
        };
        Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    m(pos(rows[i]), pos(cols[j]));
        return out;
    }
};

inline ScriptMatrix build_script_matrix(const Triangulation& t, const MetricCache& mc,
                                        const RigidConstruction& rc_interior,
                                        const std::vector<RigidConstruction>& rc_surface) {
    ScriptMatrix sm;
    sm.inner = rc_interior.complement;
    sm.boundary = eligible_boundary_edges(rc_surface);
    sm.all = sm.inner;
    sm.all.insert(sm.all.end(), sm.boundary.begin(), sm.boundary.end());
    std::sort(sm.all.begin(), sm.all.end());
    LabeledMatrix f3 = build_f3_full(t, mc);
    std::vector<Label> rows, cols;
    for (int e : sm.all) rows.push_back(Label::defect(e));
    for (int e : sm.all) cols.push_back(Label::length(e));
    // transpose of the defect-by-length slice: rows become the dl side
    sm.m = f3.minor_matrix(rows, cols).transpose();
    return sm;
}

// Phi = integral of exp f over the inner-edge pairs, reduced by the Schur
// complement: scale * exp(Schur form on the boundary edges) with
// scale = det(inner block). Requires the inner block to be invertible, which
// is the acyclicity of the C = D = {} complex.
struct PhiResult {
    GrassmannElement element;  // over GeneratorRegistry::for_edges(boundary)
    LogScalar scale;
    std::vector<int> boundary;
};

// Phi restricted to prescribed coefficient pairs, each computed as a
// bordered determinant minor(rows (inner, C), cols (inner, D)). Unlike the
// Schur route this works when the inner block is singular (then most
// bordered minors vanish too, but not necessarily all).
inline PhiResult phi_bordered(const ScriptMatrix& sm,
                              const std::vector<std::pair<std::vector<int>, std::vector<int>>>& pairs) {
    auto reg = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges(sm.boundary));
    std::vector<LogScalar> minors;
    LogScalar scale0;  // largest magnitude
    for (const auto& [C, D] : pairs) {
        std::vector<int> rows = sm.inner, cols = sm.inner;
        rows.insert(rows.end(), C.begin(), C.end());
        cols.insert(cols.end(), D.begin(), D.end());
        LogScalar det = log_det(sm.block(rows, cols));
        if (!det.zero() && (scale0.zero() || det.log > scale0.log)) {
            scale0 = det;
            scale0.sign = 1;
        }
        minors.push_back(det);
    }
    if (scale0.zero()) scale0 = LogScalar::one();

    PhiResult r{GrassmannElement(reg), scale0, sm.boundary};
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (minors[k].zero()) continue;
        const auto& [C, D] = pairs[k];
        // stored coefficient: undo the interleave sign of coefficient_at
        std::vector<int> word;
        for (std::size_t i = 0; i < C.size(); ++i) {
            word.push_back(reg->a_index(C[i]));
            word.push_back(reg->astar_index(D[i]));
        }
        int sign = 1;
        bool repeated = false;
        for (std::size_t i = 1; i < word.size(); ++i) {
            for (std::size_t j = i; j > 0 && word[j - 1] >= word[j]; --j) {
                if (word[j - 1] == word[j]) { repeated = true; break; }
                std::swap(word[j - 1], word[j]);
                sign = -sign;
            }
            if (repeated) break;
        }
        if (repeated) continue;
        std::uint64_t mask = 0;
        for (int g : word) mask |= 1ull << g;
        double c = sign * minors[k].sign * std::exp(minors[k].log - scale0.log);
        r.element.set(mask, c);
    }
    return r;
}

inline PhiResult phi_schur(const ScriptMatrix& sm) {
    Matrix A = sm.block(sm.inner, sm.inner);
    LogScalar detA = log_det(A);
    if (!sm.inner.empty()) {
        Eigen::JacobiSVD<Matrix> svd(A);
        double top = svd.singularValues()(0);
        if (top == 0.0 ||
            svd.singularValues()(svd.singularValues().size() - 1) <= 1e-8 * top)
            throw SingularMinorError("inner script block is singular; Phi is not Schur-reducible");
    }
    Matrix B = sm.block(sm.inner, sm.boundary);
    Matrix C = sm.block(sm.boundary, sm.inner);
    Matrix S = sm.block(sm.boundary, sm.boundary);
    Matrix schur = sm.inner.empty() ? S : Matrix(S - C * A.lu().solve(B));
    auto reg = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges(sm.boundary));
    PhiResult r{minor_generating_function(schur, reg, sm.boundary), detA, sm.boundary};
    return r;
}

// ---------------------------------------------------------------------------
// The invariant generating function
// ---------------------------------------------------------------------------

struct GeneratingFunction {
    GrassmannElement element;   // over the boundary-edge registry
    LogScalar scale;            // tau prefactor x volume factor x det(inner block)
    std::vector<int> boundary;  // eligible boundary edges (evaluated triangulation ids)

    double coefficient(const std::vector<int>& C, const std::vector<int>& D) const {
        return scale.value() * coefficient_at(element, C, D);
    }
    double scalar_value() const { return scale.value() * element.coefficient(0); }
    double magnitude() const { return std::abs(scale.value()) * element.max_abs_coefficient(); }
};

// Generating function of a placed manifold with boundary. The caller chooses
// the plan (standard plans need three inner vertices up front; glue-adapted
// plans pin a component's sway block). Retries resample inner coordinates
// only, so the boundary data stays fixed. A disjoint union yields the
// product of its components' generating functions over the combined
// generator set.
inline GeneratingFunction generating_invariant(const Triangulation& t, const Placement& p0,
                                               const InvariantOptions& opt = {}) {
    auto comps = t.connected_components();
    if (comps.size() > 1) {
        if (opt.interior_override || !opt.surface_override.empty() ||
            opt.plan.kind != PlanSpec::Kind::standard || opt.phi_pairs)
            throw ShapeMismatchError("plan overrides need a connected manifold");
        std::vector<GrassmannElement> elements;
        std::vector<std::vector<int>> parent_bd;
        LogScalar scale = LogScalar::one();
        std::vector<int> joint;
        for (std::size_t k = 0; k < comps.size(); ++k) {
            auto [sub, emap] = t.subcomplex(comps[k]);
            Placement ps;
            ps.seed = p0.seed;
            for (VertexId v : sub.vertices()) ps.coords[v] = p0.at(v);
            InvariantOptions o = opt;
            o.seed = derive_seed(opt.seed, 0xd15 + k);
            GeneratingFunction g = generating_invariant(sub, ps, o);
            std::vector<int> bd;
            for (int e : g.boundary) bd.push_back(emap[static_cast<std::size_t>(e)]);
            joint.insert(joint.end(), bd.begin(), bd.end());
            elements.push_back(std::move(g.element));
            parent_bd.push_back(std::move(bd));
            scale = scale * g.scale;
        }
        std::sort(joint.begin(), joint.end());
        auto reg = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges(joint));
        GrassmannElement prod = GrassmannElement::scalar(reg, 1.0);
        for (std::size_t k = 0; k < elements.size(); ++k) {
            // the component registry pairs generators 2i, 2i+1 with its i-th
            // boundary edge, and parent_bd was collected in that order
            std::vector<std::pair<int, double>> gm(elements[k].registry()->size(), {-1, 0.0});
            for (std::size_t i = 0; i < parent_bd[k].size(); ++i) {
                gm[2 * i] = {reg->a_index(parent_bd[k][i]), 1.0};
                gm[2 * i + 1] = {reg->astar_index(parent_bd[k][i]), 1.0};
            }
            prod = prod * transport(elements[k], reg, gm);
        }
        GeneratingFunction out;
        out.element = std::move(prod);
        out.scale = scale;
        out.boundary = joint;
        return out;
    }

    if (t.num_boundary_components() == 0) {
        auto ev = evaluate_invariant(t, p0, {}, {}, opt);
        GeneratingFunction g;
        auto reg = std::make_shared<GeneratorRegistry>(GeneratorRegistry::for_edges({}));
        g.element = GrassmannElement::scalar(reg, 1.0);
        g.scale = ev.value;
        return g;
    }
    Placement p = p0;
    for (int attempt = 0; attempt < opt.retry_budget; ++attempt) {
        try {
            MetricCache mc = metric_cache(t, p);
            RigidConstruction rc_int = opt.interior_override
                                           ? *opt.interior_override
                                           : rigid_construction_interior(t, p);
            std::vector<RigidConstruction> rc_surf;
            if (!opt.surface_override.empty()) {
                rc_surf = opt.surface_override;
            } else {
                for (std::size_t c = 0; c < t.num_boundary_components(); ++c)
                    rc_surf.push_back(rigid_construction_surface(t, p, static_cast<int>(c)));
            }
            ChainComplex cx = build_complex({t, p, mc, rc_int, rc_surf, {}, {}, opt.plan});
            TorsionResult tr = torsion(cx, opt.torsion);  // validates minors 1,2,4,5

            ScriptMatrix sm = build_script_matrix(t, mc, rc_int, rc_surf);
            PhiResult phi = opt.phi_pairs ? phi_bordered(sm, *opt.phi_pairs) : phi_schur(sm);

            GeneratingFunction g;
            g.element = std::move(phi.element);
            g.boundary = std::move(phi.boundary);
            g.scale = tr.minor1 * tr.minor5 / (tr.minor2 * tr.minor4) *
                      volume_length_factor(t, mc) * phi.scale;
            return g;
        } catch (const SingularMinorError&) {
            if (attempt + 1 >= opt.retry_budget) throw;
        }
        p = resample_interior(t, p0, derive_seed(opt.seed, 0xc000 + static_cast<std::uint64_t>(attempt)));
    }
    throw GeneralPositionError("generating function evaluation exhausted retry budget");
}

// ---------------------------------------------------------------------------
// Trace of a kernel operator
// ---------------------------------------------------------------------------

// Registry layout for kernels: a_1..a_{2n} at indices 0..2n-1, b_1..b_{2n}
// at indices 2n..4n-1.
inline RegistryPtr kernel_registry(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= 2 * n; ++i) names.push_back("a" + std::to_string(i));
    for (int i = 1; i <= 2 * n; ++i) names.push_back("b" + std::to_string(i));
    return std::make_shared<GeneratorRegistry>(GeneratorRegistry(names));
}

// Trace A = integral of K(a, -a) da_{2n} ... da_1.
inline double kernel_trace(const GrassmannElement& K, int n) {
    const auto& reg = *K.registry();
    if (reg.size() != static_cast<std::size_t>(4 * n))
        throw OddGeneratorCountError("kernel registry must hold 2n + 2n generators");
    // substitute b_i -> -a_i
    std::vector<std::pair<int, double>> gen_map;
    for (int g = 0; g < 2 * n; ++g) gen_map.push_back({g, 1.0});
    for (int g = 0; g < 2 * n; ++g) gen_map.push_back({g, -1.0});
    GrassmannElement sub = transport(K, K.registry(), gen_map);
    // da_{2n} first, then down to da_1
    std::vector<int> gens;
    for (int g = 2 * n - 1; g >= 0; --g) gens.push_back(g);
    GrassmannElement r = multiple_integral(sub, gens);
    for (const auto& [mask, v] : r.terms())
        if (mask != 0) throw Error("kernel trace left residual generators");
    return r.coefficient(0);
}

}  // namespace torsio
