#pragma once

#include <vector>

#include "cylab/fit.hpp"
#include "cylab/smallmat.hpp"

namespace cylab {

using Vec3 = std::array<double, 3>;

// Gibbons-Hawking data with collinear monopole centers on the x3-axis
// (closed-form connection 1-form) and half-unit charges:
//   V = sum 1/(2 |x - p_i|),  theta = (1/2) sum ((x3 - c_i)/r_i) dphi.
struct GHData {
    std::vector<double> center_z{-1.0, 0.0, 1.0};
    double v_extra_quadratic = 0.0;  // non-harmonic perturbation for controls
    double fd_rel = 1e-3;

    double potential(const Vec3& x) const;
    Vec3 grad_potential(const Vec3& x) const;
    Vec3 theta(const Vec3& x) const;  // Cartesian components
    double min_center_distance(const Vec3& x) const;
};

// 4x4 metric V dx.dx + V^{-1}(dt + theta)^2 in coordinates (x1, x2, x3, t).
RMat gh_metric(const GHData& gh, const Vec3& x);

// Max |dtheta - *dV| component residual at x (finite differences).
double gh_monopole_residual(const GHData& gh, const Vec3& x);

// Curvature norms by finite differences of the metric; the fiber direction
// is Killing so only spatial derivatives enter.
double gh_ricci_norm(const GHData& gh, const Vec3& x);
double gh_riemann_norm(const GHData& gh, const Vec3& x);

double gh_ricci_residual(const GHData& gh, const std::vector<Vec3>& samples);

// log |g - g_cone| against log radius, where g_cone carries the same total
// charge at coincident centers and the deviation is the Frobenius norm of
// the spatial (potential-sector) block. The fiber-sector components decay
// slower and are reported separately by the experiment, not fitted.
DecayFit gh_cone_decay_fit(const GHData& gh, const std::vector<double>& radii,
                           const std::vector<Vec3>& directions);

double gh_spatial_block_deviation(const GHData& gh, const GHData& cone, const Vec3& x);

}  // namespace cylab
