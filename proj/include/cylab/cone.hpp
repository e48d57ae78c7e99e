#pragma once

#include "cylab/smallmat.hpp"
#include "cylab/types.hpp"

namespace cylab {

// Fixed cube root of -1 used by the quotient parametrization.
inline const cplx kZeta = std::polar(1.0, M_PI / 3.0);

// Z_3 quotient parametrization of the A2 surface x1^2 + x2^2 + y^3 = 0:
// (z1,z2) -> ((z1^3+z2^3)/2, (z1^3-z2^3)/(2i), zeta z1 z2). Returns a point
// with z = 0.
AmbientPoint quotient_map_a2(cplx z1, cplx z2);

// Same map with a C factor passed through.
AmbientPoint cxa2_cover(cplx z, cplx z1, cplx z2);

// Largest real root of T^3 - 3 sigma T - 2 s = 0 for s, sigma >= 0,
// solved in scaled variables and polished by Newton. This is the
// homogeneous extension of the squared radial function of the A2 cone:
// on the surface it reduces to
//   (s + sqrt(s^2 - sigma^3))^{1/3} + (s - sqrt(s^2 - sigma^3))^{1/3}.
double radial_cubic_largest_root(double s, double sigma);

// Squared radius r^2 on (the homogeneous extension of) the A2 cone.
double r2_a2(cplx x1, cplx x2, cplx y);
inline double r2_a2(const AmbientPoint& p) { return r2_a2(p.x1(), p.x2(), p.y()); }

// Ambient radial functions. R^2 = ((|x1|^2+|x2|^2)^2 + |y|^6)^{1/6} is a
// smooth degree-2 homogeneous substitute for r^2 off the cone;
// rho^2 = |z|^2 + R^2.
double ambient_R2(cplx x1, cplx x2, cplx y);
inline double ambient_R2(const AmbientPoint& p) { return ambient_R2(p.x1(), p.x2(), p.y()); }
double ambient_rho2(const AmbientPoint& p);

inline double ambient_R(const AmbientPoint& p) { return std::sqrt(ambient_R2(p)); }
inline double ambient_rho(const AmbientPoint& p) { return std::sqrt(ambient_rho2(p)); }

// Value, holomorphic gradient and mixed complex Hessian of a real scalar.
// Gradient slots follow the ambient coordinate order; for functions of the
// x-part only, the z slot is zero.
struct ScalarJet {
    double value = 0;
    std::array<cplx, 4> grad{};  // d/dv_j
    CMat hess;                   // d^2/dv_j dvbar_k, 4x4
    ScalarJet() : hess(4) {}
};

// Closed-form jets obtained by implicit differentiation of the defining
// cubic (r^2) and by direct differentiation (R^2, rho^2). These back the
// projection solver and the high-precision length comparisons; the finite
// difference engine is checked against them.
ScalarJet r2_a2_jet(const AmbientPoint& p);
ScalarJet ambient_R2_jet(const AmbientPoint& p);
ScalarJet ambient_rho2_jet(const AmbientPoint& p);

}  // namespace cylab
