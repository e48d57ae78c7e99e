#include "cylab/sampling.hpp"

#include <cmath>

namespace cylab {

uint64_t mix_bits(uint64_t seed, uint64_t index, uint64_t stream) {
    uint64_t x = seed ^ (index * 0x9E3779B97F4A7C15ull) ^ (stream * 0xBF58476D1CE4E5B9ull);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

double u01(uint64_t seed, uint64_t index, uint64_t stream) {
    return static_cast<double>(mix_bits(seed, index, stream) >> 11) * 0x1.0p-53;
}

double uniform(uint64_t seed, uint64_t index, uint64_t stream, double lo, double hi) {
    return lo + (hi - lo) * u01(seed, index, stream);
}

CoverPoint random_cover_pair(uint64_t seed, uint64_t index, double lo, double hi) {
    // Area-uniform modulus in [lo, hi].
    auto modulus = [&](uint64_t stream) {
        const double u = u01(seed, index, stream);
        return std::sqrt(lo * lo + (hi * hi - lo * lo) * u);
    };
    const double r1 = modulus(0), r2 = modulus(1);
    const double a1 = 2.0 * M_PI * u01(seed, index, 2);
    const double a2 = 2.0 * M_PI * u01(seed, index, 3);
    return {std::polar(r1, a1), std::polar(r2, a2)};
}

AmbientPoint unit_cone_direction(uint64_t seed, uint64_t index) {
    const CoverPoint c = random_cover_pair(seed, index, 0.4, 1.0);
    AmbientPoint w = quotient_map_a2(c.z1, c.z2);
    const double R = ambient_R(w);
    if (!(R > 0)) throw SamplingError("unit_cone_direction: degenerate cover pair");
    // R scales by |t| under the weighted action.
    return weighted_scale(1.0 / R, w);
}

AmbientPoint v_fiber_point(const AmbientPoint& cone_dir, double radius, cplx kappa) {
    const double R0 = ambient_R(cone_dir);
    if (!(R0 > 0)) throw SamplingError("v_fiber_point: degenerate direction");
    AmbientPoint p = weighted_scale(radius / R0, cone_dir);
    const SurfacePoly fiber = SurfacePoly::v_fiber(kappa);
    // Newton in the coordinate with the largest gradient.
    for (int it = 0; it < 40; ++it) {
        const cplx f = fiber.eval(p);
        if (std::abs(f) < 1e-14 * fiber.magnitude_scale(p)) return p;
        const auto g = fiber.gradient(p);
        int best = kX1;
        double mag = std::abs(g[kX1]);
        for (int c : {kX2, kY}) {
            if (std::abs(g[static_cast<size_t>(c)]) > mag) {
                mag = std::abs(g[static_cast<size_t>(c)]);
                best = c;
            }
        }
        if (mag < 1e-300) throw SamplingError("v_fiber_point: gradient collapsed");
        p[best] -= f / g[static_cast<size_t>(best)];
    }
    if (std::abs(fiber.eval(p)) < 1e-10 * fiber.magnitude_scale(p)) return p;
    throw SamplingError("v_fiber_point: Newton correction did not converge");
}

namespace {

// z from the defining equation through the compensated evaluation, so the
// stored point satisfies F = 0 down to the storage rounding of z itself
// (essential when the monomials nearly cancel along the central fiber).
void resolve_z(const HypersurfaceFamily& X, AmbientPoint& p) {
    SurfacePoly rest;
    rest.nvars = 4;
    rest.a = 0.0;
    rest.b = X.b;
    p[kZ] = 0.0;
    p[kZ] = -rest.eval(p) / X.a;
}

}  // namespace

AmbientPoint family_fiber_point(const HypersurfaceFamily& X, cplx z, const AmbientPoint& xhat) {
    const cplx t = std::pow(z, 1.0 / 6.0);
    AmbientPoint p = weighted_scale(t, xhat);
    resolve_z(X, p);
    return p;
}

AmbientPoint central_fiber_point(const HypersurfaceFamily& X, const AmbientPoint& cone_dir,
                                 double R_target) {
    const double R0 = ambient_R(cone_dir);
    if (!(R0 > 0)) throw SamplingError("central_fiber_point: degenerate direction");
    AmbientPoint p = weighted_scale(R_target / R0, cone_dir);
    resolve_z(X, p);
    return p;
}

std::vector<std::array<cplx, 3>> cxa2_cover_samples(uint64_t seed, int count, double scale_lo,
                                                    double scale_hi) {
    std::vector<std::array<cplx, 3>> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        const uint64_t idx = static_cast<uint64_t>(i);
        const CoverPoint c = random_cover_pair(seed, idx, 0.3, 1.0);
        const double s = uniform(seed, idx, 7, scale_lo, scale_hi);
        const double az = uniform(seed, idx, 8, 0.3, 1.0) * s;
        const double ph = 2.0 * M_PI * u01(seed, idx, 9);
        out.push_back({std::polar(az, ph), s * c.z1, s * c.z2});
    }
    return out;
}

std::vector<AmbientPoint> cxa2_points(uint64_t seed, int count, double scale_lo, double scale_hi) {
    std::vector<AmbientPoint> pts;
    pts.reserve(static_cast<size_t>(count));
    for (const auto& c : cxa2_cover_samples(seed, count, scale_lo, scale_hi))
        pts.push_back(cxa2_cover(c[0], c[1], c[2]));
    return pts;
}

}  // namespace cylab
