#pragma once

#include <utility>
#include <vector>

#include "cylab/types.hpp"

namespace cylab {

// Defining polynomial  F = a z + b y + c + x1^2 + x2^2 + y^3 (+ extra terms).
// nvars = 4 for hypersurfaces of C^4, 3 for surfaces in the x-space C^3
// (z is then not a variable). The same struct covers X_{a,b}, the cone
// cylinder (a = b = 0), the A2 cone (nvars = 3, c = 0) and the smoothed
// fibers {kappa + f = 0}.
struct SurfacePoly {
    cplx a{0.0};
    cplx b{0.0};
    cplx c{0.0};
    int nvars = 4;
    std::vector<std::pair<std::array<int, 4>, cplx>> extra;

    cplx eval(const AmbientPoint& p) const;
    // F(p + delta) by the exact polynomial shift expansion, so displacements
    // far below one ulp of the coordinates still register. Standard family
    // part only (no extra terms).
    cplx eval_shifted(const AmbientPoint& p, const std::array<cplx, 4>& delta) const;
    std::array<cplx, 4> gradient(const AmbientPoint& p) const;
    // Natural magnitude of the gradient entries at p, for singular-point
    // thresholds.
    double gradient_scale(const AmbientPoint& p) const;
    // Holomorphic second derivative along one coordinate, for validity radii.
    cplx second_diag(const AmbientPoint& p, int coord) const;
    // Sum of absolute monomial magnitudes; scale for cancellation-aware
    // residual tests.
    double magnitude_scale(const AmbientPoint& p) const;

    int first_var() const { return nvars == 4 ? kZ : kX1; }
    bool is_var(int coord) const { return nvars == 4 || coord != kZ; }

    static SurfacePoly x_ab(cplx a, cplx b);      // a z + b y + f(x) = 0 in C^4
    static SurfacePoly cone_cylinder();           // f(x) = 0 in C^4
    static SurfacePoly a2_cone();                 // f(x) = 0 in C^3
    static SurfacePoly v_fiber(cplx kappa);       // kappa + f(x) = 0 in C^3
};

// Family X_{a,b} = { a z + b y + x1^2 + x2^2 + y^3 = 0 }, a != 0. Members
// with a = 0 only appear as degeneration-classification inputs and are
// rejected here.
struct HypersurfaceFamily {
    cplx a{1.0};
    cplx b{0.0};

    HypersurfaceFamily() = default;
    HypersurfaceFamily(cplx a_, cplx b_) : a(a_), b(b_) {
        if (a == cplx(0.0)) throw DomainError("HypersurfaceFamily: a must be nonzero");
    }
    SurfacePoly poly() const { return SurfacePoly::x_ab(a, b); }

    // Coefficients of F_t^{-1} X_{a,b}: t^{1-d} a z + t^{2-d} b y + f(x) = 0.
    HypersurfaceFamily degenerated(cplx t, const WeightSystem& ws = {}) const {
        if (t == cplx(0.0)) throw DomainError("degenerated: t must be nonzero");
        const int d = ws.degree;
        return HypersurfaceFamily(a * ipow(t, 1 - d), b * ipow(t, 2 - d));
    }
};

}  // namespace cylab
