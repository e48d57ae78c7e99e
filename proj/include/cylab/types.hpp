#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cylab {

using cplx = std::complex<double>;

// Ambient coordinate order used everywhere: (z, x1, x2, y).
enum Coord : int { kZ = 0, kX1 = 1, kX2 = 2, kY = 3 };

inline const char* coord_name(int i) {
    static const char* names[4] = {"z", "x1", "x2", "y"};
    return names[i];
}

struct AmbientPoint {
    std::array<cplx, 4> v{};

    AmbientPoint() = default;
    AmbientPoint(cplx z, cplx x1, cplx x2, cplx y) : v{z, x1, x2, y} {}

    cplx z() const { return v[kZ]; }
    cplx x1() const { return v[kX1]; }
    cplx x2() const { return v[kX2]; }
    cplx y() const { return v[kY]; }

    cplx& operator[](int i) { return v[static_cast<size_t>(i)]; }
    cplx operator[](int i) const { return v[static_cast<size_t>(i)]; }

    double norm() const {
        double s = 0;
        for (const auto& c : v) s += std::norm(c);
        return std::sqrt(s);
    }
};

// Weights of the C* action t.(z,x1,x2,y) = (t z, t^3 x1, t^3 x2, t^2 y); the
// defining polynomial x1^2 + x2^2 + y^3 is homogeneous of degree 6.
struct WeightSystem {
    std::array<int, 4> w{1, 3, 3, 2};
    int degree = 6;

    int weight(int coord) const { return w[static_cast<size_t>(coord)]; }
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct SingularChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MetricDegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TangencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExcludedLocusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExperimentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integer power by repeated multiplication; exact for powers of exact inputs.
inline cplx ipow(cplx base, int e) {
    if (e < 0) return 1.0 / ipow(base, -e);
    cplx r = 1.0;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline double ipow(double base, int e) {
    if (e < 0) return 1.0 / ipow(base, -e);
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// t . p under the weighted action. Integer weights use exact repeated
// multiplication; the principal branch would be used for fractional ones.
AmbientPoint weighted_scale(cplx t, const AmbientPoint& p, const WeightSystem& ws = {});

}  // namespace cylab
