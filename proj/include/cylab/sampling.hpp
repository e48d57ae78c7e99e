#pragma once

#include <vector>

#include "cylab/cone.hpp"
#include "cylab/surface.hpp"

namespace cylab {

// Stateless counter-based generator: every draw is a pure function of
// (seed, index, stream), so parallel sampling is reproducible for any
// worker count.
uint64_t mix_bits(uint64_t seed, uint64_t index, uint64_t stream);
double u01(uint64_t seed, uint64_t index, uint64_t stream);              // [0,1)
double uniform(uint64_t seed, uint64_t index, uint64_t stream, double lo, double hi);

struct CoverPoint {
    cplx z1, z2;
};

// (z1, z2) with |z_i| in [lo, hi], uniform in angle and area.
CoverPoint random_cover_pair(uint64_t seed, uint64_t index, double lo = 0.0, double hi = 10.0);

// Cover direction with both moduli bounded away from zero, pushed to the
// surface and normalized to R = 1 by a weighted scaling.
AmbientPoint unit_cone_direction(uint64_t seed, uint64_t index);

// Point of { kappa + f = 0 } obtained by a one-coordinate Newton correction
// of the scaled cone direction; radius = target value of R.
AmbientPoint v_fiber_point(const AmbientPoint& cone_dir, double radius, cplx kappa = 1.0);

// Point of X_{a,b} with |z| = rho_target and fiber direction xhat on
// { a + f = 0 }: x = z^{1/6} . xhat and z resolved exactly from the
// defining equation. R ~ rho^{1/6} R(xhat).
AmbientPoint family_fiber_point(const HypersurfaceFamily& X, cplx z, const AmbientPoint& xhat);

// Point of the z = 0 slice of X_{a,b=0} (the central fiber V0): x = t . dir,
// z = -f(x)/a. R = rho up to rounding; these are the canonical Region-I
// samples.
AmbientPoint central_fiber_point(const HypersurfaceFamily& X, const AmbientPoint& cone_dir, double R_target);

// C x A2 cover samples (z, z1, z2) with R comparable to |z|.
std::vector<std::array<cplx, 3>> cxa2_cover_samples(uint64_t seed, int count, double scale_lo = 0.5,
                                                    double scale_hi = 3.0);

// Ambient points of C x A2 from the cover samples.
std::vector<AmbientPoint> cxa2_points(uint64_t seed, int count, double scale_lo = 0.5,
                                      double scale_hi = 3.0);

}  // namespace cylab
