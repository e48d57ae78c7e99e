#pragma once

#include <vector>

#include "cylab/cone.hpp"
#include "cylab/fd.hpp"

namespace cylab {

// Holomorphic volume form given as a wedge of ambient coordinate
// differentials over a polynomial denominator, e.g. dx1^dx2/(3y^2) on the A2
// cone or dx1^dx2^dy on X_{a,b}.
struct VolumeFormSpec {
    std::array<int, 3> wedge{kX1, kX2, kY};
    int nwedge = 3;
    std::function<cplx(const AmbientPoint&)> denom;  // empty -> 1

    static VolumeFormSpec x_ab();     // dx1 ^ dx2 ^ dy
    static VolumeFormSpec a2();       // dx1 ^ dx2 / (3 y^2)
    static VolumeFormSpec cxa2();     // dz ^ dx1 ^ dx2 / (3 y^2)
    static VolumeFormSpec flat(std::array<int, 3> coords, int n);
};

// Coefficient of the form in the chart's ordered free-coordinate wedge,
// with the solved differential eliminated through dF = 0.
cplx volume_form_coeff(const AmbientPoint& p, const Chart& chart, const VolumeFormSpec& form);

// Ricci potential h = log det(ddbar phi) - log |Omega_chart|^2, normalized
// so that flat space with phi = |w|^2 and Omega = dw1^dw2^dw3 gives h = 0.
// Throws MetricDegeneracyError when the form is not positive.
double ricci_potential(const ScalarField& phi, const Chart& chart, const AmbientPoint& at,
                       const VolumeFormSpec& form, const FDConfig& cfg = {});

// Same, from a precomputed metric and form coefficient.
double ricci_potential_from(const CMat& metric, cplx form_coeff);

// Complex-trace Laplacian tr g^{jk} d_j d_kbar u.
double laplacian(const CMat& metric, const ScalarField& u, const Chart& chart, const AmbientPoint& at,
                 const FDConfig& cfg = {});

using MetricField = std::function<CMat(const AmbientPoint&)>;

// Length of a polyline given by free-coordinate vertices under a
// midpoint-evaluated metric. |xi|^2 = xi^H g xi, anchored so that a straight
// coordinate segment in the flat metric has its coordinate length.
double curve_length(const MetricField& g, const Chart& chart,
                    const std::vector<std::array<cplx, 3>>& vertices);

// Polyline refinement (vertex doubling through the chart), for convergence
// checks.
std::vector<std::array<cplx, 3>> refine_polyline(const Chart& chart,
                                                 const std::vector<std::array<cplx, 3>>& vertices);

}  // namespace cylab
