#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace torsio {

using Vec3 = Eigen::Vector3d;
using Matrix = Eigen::MatrixXd;
using VertexId = int;

// ---------------------------------------------------------------------------
// Error hierarchy. Every failure mode of the library throws one of these.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TORSIO_DEFINE_ERROR(Name)                                          \
    struct Name : Error {                                                  \
        explicit Name(const std::string& msg) : Error(msg) {}              \
    }

TORSIO_DEFINE_ERROR(DegenerateError);           // repeated vertex in a tuple
TORSIO_DEFINE_ERROR(NonManifoldError);          // bad face/edge/vertex link
TORSIO_DEFINE_ERROR(NonOrientableError);        // incoherent tuple orientations
TORSIO_DEFINE_ERROR(NotApplicableError);        // Pachner move locus mismatch
TORSIO_DEFINE_ERROR(UnknownNameError);          // unknown builtin manifold
TORSIO_DEFINE_ERROR(GeneralPositionError);      // guard failed after retries
TORSIO_DEFINE_ERROR(DegenerateTetrahedronError);
TORSIO_DEFINE_ERROR(ZeroLengthError);
TORSIO_DEFINE_ERROR(RankDeficientError);
TORSIO_DEFINE_ERROR(MissingInnerVerticesError);
TORSIO_DEFINE_ERROR(DegenerateGeometryError);
TORSIO_DEFINE_ERROR(SingularMinorError);        // plan minor below threshold
TORSIO_DEFINE_ERROR(EdgeNotEligibleError);
TORSIO_DEFINE_ERROR(RegistryMismatchError);
TORSIO_DEFINE_ERROR(OddInputError);             // exp of an odd element
TORSIO_DEFINE_ERROR(ShapeMismatchError);
TORSIO_DEFINE_ERROR(OddGeneratorCountError);
TORSIO_DEFINE_ERROR(IncompatibleBoundaryError);
TORSIO_DEFINE_ERROR(PlacementMismatchError);
TORSIO_DEFINE_ERROR(ParseError);

#undef TORSIO_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Deterministic random source. All randomness in the library flows through
// this: a Mersenne Twister (mt19937_64) whose uniform doubles are produced by
// the fixed 53-bit mapping below, so runs are reproducible across platforms.
// ---------------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t next_u64() { return engine_(); }

    // integer in [0, n)
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(next_u64() % n);
    }

  private:
    std::mt19937_64 engine_;
};

// Derives the seed for retry attempt k from a base seed (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Scalar kept as sign * exp(log) so long products of volumes, squared lengths
// and determinants neither overflow nor underflow before the final ratio.
// ---------------------------------------------------------------------------

struct LogScalar {
    int sign = 0;       // -1, 0, +1
    double log = 0.0;   // natural log of |value|; unused when sign == 0

    LogScalar() = default;

    static LogScalar from(double v) {
        LogScalar s;
        if (v == 0.0) return s;
        s.sign = v > 0 ? 1 : -1;
        s.log = std::log(std::abs(v));
        return s;
    }

    static LogScalar one() { return from(1.0); }

    bool zero() const { return sign == 0; }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log); }

    LogScalar operator*(const LogScalar& o) const {
        LogScalar r;
        if (sign == 0 || o.sign == 0) return r;
        r.sign = sign * o.sign;
        r.log = log + o.log;
        return r;
    }

    LogScalar operator/(const LogScalar& o) const {
        if (o.sign == 0) throw DegenerateGeometryError("division by zero LogScalar");
        LogScalar r;
        if (sign == 0) return r;
        r.sign = sign * o.sign;
        r.log = log - o.log;
        return r;
    }

    LogScalar pow(int k) const {
        LogScalar r;
        if (sign == 0) return k == 0 ? one() : r;
        r.sign = (k % 2 == 0) ? 1 : sign;
        r.log = log * k;
        return r;
    }

    LogScalar negate() const {
        LogScalar r = *this;
        r.sign = -r.sign;
        return r;
    }
};

// log|det| and sign of a square matrix via full-pivot LU.
inline LogScalar log_det(const Matrix& m) {
    if (m.rows() != m.cols()) throw ShapeMismatchError("log_det: matrix not square");
    if (m.rows() == 0) return LogScalar::one();
    Eigen::FullPivLU<Matrix> lu(m);
    LogScalar r;
    if (lu.rank() < m.rows()) return r;  // exactly singular
    double logabs = 0.0;
    int sign = lu.permutationP().determinant() * lu.permutationQ().determinant();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double d = lu.matrixLU()(i, i);
        if (d == 0.0) return r;
        if (d < 0) sign = -sign;
        logabs += std::log(std::abs(d));
    }
    r.sign = sign;
    r.log = logabs;
    return r;
}

// Relative spread of a set of values: (max - min) / max |v|, and 0 when all
// values coincide (covers the all-zero case of structurally zero invariants).
inline double relative_spread(const std::vector<double>& vals) {
    if (vals.size() < 2) return 0.0;
    double lo = vals[0], hi = vals[0], amax = std::abs(vals[0]);
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        amax = std::max(amax, std::abs(v));
    }
    if (hi == lo) return 0.0;
    return (hi - lo) / std::max(amax, 1e-300);
}

}  // namespace torsio
