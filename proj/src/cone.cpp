#include "cylab/cone.hpp"

#include <cmath>

namespace cylab {

AmbientPoint weighted_scale(cplx t, const AmbientPoint& p, const WeightSystem& ws) {
    if (t == cplx(0.0)) throw DomainError("weighted_scale: t must be nonzero");
    AmbientPoint q;
    for (int i = 0; i < 4; ++i) q[i] = ipow(t, ws.weight(i)) * p[i];
    return q;
}

AmbientPoint quotient_map_a2(cplx z1, cplx z2) {
    const cplx c1 = z1 * z1 * z1;
    const cplx c2 = z2 * z2 * z2;
    AmbientPoint p;
    p[kZ] = 0.0;
    p[kX1] = 0.5 * (c1 + c2);
    p[kX2] = (c1 - c2) / cplx(0.0, 2.0);
    p[kY] = kZeta * z1 * z2;
    return p;
}

AmbientPoint cxa2_cover(cplx z, cplx z1, cplx z2) {
    AmbientPoint p = quotient_map_a2(z1, z2);
    p[kZ] = z;
    return p;
}

double radial_cubic_largest_root(double s, double sigma) {
    if (s <= 0.0 && sigma <= 0.0) return 0.0;
    // Scale so that the reduced coefficients are O(1): T, sigma and s scale
    // like m, m^2 and m^3 under x -> t.x with m = |t|^2.
    const double m = std::max(std::cbrt(s), std::sqrt(sigma));
    const double sh = s / (m * m * m);
    const double gh = sigma / (m * m);
    double T;
    const double disc = sh * sh - gh * gh * gh;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        T = std::cbrt(sh + root) + std::cbrt(sh - root);
    } else {
        // Three real roots; the largest is 2 sqrt(sigma) cos(phi/3).
        const double phi = std::acos(std::clamp(sh / (gh * std::sqrt(gh)), -1.0, 1.0));
        T = 2.0 * std::sqrt(gh) * std::cos(phi / 3.0);
    }
    // Newton polish on the scaled cubic; residual tolerance 1e-13.
    for (int it = 0; it < 4; ++it) {
        const double f = T * T * T - 3.0 * gh * T - 2.0 * sh;
        if (std::abs(f) < 1e-13) break;
        const double fp = 3.0 * (T * T - gh);
        if (fp <= 0.0) break;
        T -= f / fp;
    }
    return m * T;
}

double r2_a2(cplx x1, cplx x2, cplx y) {
    const double s = std::norm(x1) + std::norm(x2);
    const double sigma = std::norm(y);
    return radial_cubic_largest_root(s, sigma);
}

double ambient_R2(cplx x1, cplx x2, cplx y) {
    const double s = std::norm(x1) + std::norm(x2);
    const double sigma = std::norm(y);
    const double u = s * s + sigma * sigma * sigma;
    return std::pow(u, 1.0 / 6.0);
}

double ambient_rho2(const AmbientPoint& p) {
    return std::norm(p.z()) + ambient_R2(p);
}

ScalarJet r2_a2_jet(const AmbientPoint& p) {
    const cplx x1 = p.x1(), x2 = p.x2(), y = p.y();
    const double s = std::norm(x1) + std::norm(x2);
    const double sigma = std::norm(y);
    ScalarJet jet;
    const double T = radial_cubic_largest_root(s, sigma);
    jet.value = T;
    const double denom = T * T - sigma;
    if (!(denom > 0.0)) {
        // Vertex (s = sigma = 0); the extension is continuous with zero jet.
        return jet;
    }
    // Implicit derivatives of T^3 - 3 sigma T - 2 s = 0.
    const double Ts = 2.0 / (3.0 * denom);
    const double Tg = T / denom;
    const double Tss = -8.0 * T / (9.0 * denom * denom * denom);
    const double Tsg = -(2.0 / 3.0) * (2.0 * T * Tg - 1.0) / (denom * denom);
    const double Tgg = (T - (T * T + sigma) * Tg) / (denom * denom);

    const std::array<cplx, 2> x{x1, x2};
    // ds/dx_j = conj(x_j), dsigma/dy = conj(y).
    jet.grad[kX1] = Ts * std::conj(x1);
    jet.grad[kX2] = Ts * std::conj(x2);
    jet.grad[kY] = Tg * std::conj(y);

    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            cplx h = Tss * x[static_cast<size_t>(k)] * std::conj(x[static_cast<size_t>(j)]);
            if (j == k) h += Ts;
            jet.hess.at(kX1 + j, kX1 + k) = h;
        }
    for (int j = 0; j < 2; ++j) {
        const cplx hxj_y = Tsg * std::conj(x[static_cast<size_t>(j)]) * y;
        jet.hess.at(kX1 + j, kY) = hxj_y;
        jet.hess.at(kY, kX1 + j) = std::conj(hxj_y);
    }
    jet.hess.at(kY, kY) = Tgg * sigma + Tg;
    return jet;
}

ScalarJet ambient_R2_jet(const AmbientPoint& p) {
    const cplx x1 = p.x1(), x2 = p.x2(), y = p.y();
    const double s = std::norm(x1) + std::norm(x2);
    const double sigma = std::norm(y);
    const double u = s * s + sigma * sigma * sigma;
    ScalarJet jet;
    if (u <= 0.0) return jet;
    const double u16 = std::pow(u, 1.0 / 6.0);
    jet.value = u16;
    const double c1 = u16 / (6.0 * u);           // (1/6) u^{-5/6}
    const double c2 = -5.0 * c1 / (6.0 * u);     // -(5/36) u^{-11/6}

    std::array<cplx, 4> du{};
    du[kX1] = 2.0 * s * std::conj(x1);
    du[kX2] = 2.0 * s * std::conj(x2);
    du[kY] = 3.0 * sigma * sigma * std::conj(y);

    CMat duu(4);
    const std::array<cplx, 2> x{x1, x2};
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            cplx h = 2.0 * x[static_cast<size_t>(k)] * std::conj(x[static_cast<size_t>(j)]);
            if (j == k) h += 2.0 * s;
            duu.at(kX1 + j, kX1 + k) = h;
        }
    duu.at(kY, kY) = 9.0 * sigma * sigma;

    for (int j = 0; j < 4; ++j) jet.grad[static_cast<size_t>(j)] = c1 * du[static_cast<size_t>(j)];
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
            jet.hess.at(j, k) =
                c2 * du[static_cast<size_t>(j)] * std::conj(du[static_cast<size_t>(k)]) + c1 * duu.at(j, k);
    return jet;
}

ScalarJet ambient_rho2_jet(const AmbientPoint& p) {
    ScalarJet jet = ambient_R2_jet(p);
    jet.value += std::norm(p.z());
    jet.grad[kZ] += std::conj(p.z());
    jet.hess.at(kZ, kZ) += 1.0;
    return jet;
}

}  // namespace cylab
