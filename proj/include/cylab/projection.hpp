#pragma once

#include "cylab/geometry.hpp"
#include "cylab/surface.hpp"

namespace cylab {

struct ProjectionOptions {
    int max_iterations = 30;
    double tol = 1e-12;
    bool multi_seed_probe = false;
};

// Nearest-point projection onto {F = 0} with respect to the ambient cone
// metric ddbar rho^2 (ddbar R^2 for targets in the x-space C^3). The
// displacement is the primary unknown of the KKT iteration, so its relative
// accuracy survives even when it is many orders of magnitude below the
// coordinate scale.
struct ProjectionResult {
    AmbientPoint source;
    AmbientPoint target;              // source + delta, rounded
    std::array<cplx, 4> delta{};      // exact displacement, the primary unknown
    cplx lambda{0.0};
    int iterations = 0;
    double residual = 0;       // |F(target)| / magnitude scale
    double displacement = 0;   // cone-metric length of the displacement
    double stationarity = 0;   // angle residual of grad d^2 against grad F
    bool multi_minimum_suspect = false;
};

ProjectionResult nearest_point(const AmbientPoint& p, const SurfacePoly& target,
                               const ProjectionOptions& opt = {});

// Coefficient ratio (G^* Omega_target) / Omega_source at p, through the
// holomorphic part of the projection differential.
cplx pullback_volume_ratio(const AmbientPoint& p, const Chart& source_chart,
                           const VolumeFormSpec& omega_source, const SurfacePoly& target,
                           const VolumeFormSpec& omega_target, const FDConfig& cfg = {});

// Real 6x6 differential of the projection in charts sharing free-coordinate
// slots (source and target charts both solve `solve_coord`), written as
// I + E with E assembled from finite differences of the displacement field.
struct ProjectionDifferential {
    RMat M;         // dG in [Re; Im] chart coordinates
    RMat E;         // M - I
    double condition = 1;
};
ProjectionDifferential projection_differential(const AmbientPoint& p, const SurfacePoly& source,
                                               const SurfacePoly& target, int solve_coord,
                                               const FDConfig& cfg = {});

// Operator norm |J_b - J|_omega of the pulled-back complex structure error,
// measured against the metric form `g` at p (in the same chart).
double complex_structure_error(const AmbientPoint& p, const SurfacePoly& source,
                               const SurfacePoly& target, int solve_coord, const CMat& g,
                               const FDConfig& cfg = {});

// J_b as a real 6x6 matrix (for the almost-complex-structure property test).
RMat pulled_back_complex_structure(const ProjectionDifferential& dG);

}  // namespace cylab
