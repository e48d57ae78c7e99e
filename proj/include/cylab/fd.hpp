#pragma once

#include <functional>
#include <span>

#include "cylab/chart.hpp"
#include "cylab/smallmat.hpp"

namespace cylab {

using ScalarField = std::function<double(const AmbientPoint&)>;

struct FDConfig {
    // Per-coordinate step rel_step * max(1, |coordinate|). The default keeps
    // the rounding floor of second differences near 1e-10 in double
    // precision; legal range (1e-9, 1e-2).
    double rel_step = 4e-3;
    int richardson = 2;  // 1 = plain central differences, 2 = one extrapolation
    double chart_threshold = 1e-6;

    void validate() const {
        if (!(rel_step > 1e-9 && rel_step < 1e-2))
            throw DomainError("FDConfig: rel_step outside (1e-9, 1e-2)");
    }
};

// Mixed complex Hessian d^2 phi / dw_j dwbar_k on the chart's free
// coordinates, Hermitian by construction. Stencil points are re-solved onto
// the surface through the chart.
CMat ddbar(const ScalarField& phi, const Chart& chart, const AmbientPoint& at, const FDConfig& cfg = {});

struct DdbarResult {
    CMat h;
    double trunc_estimate = 0;  // max-entry Richardson deviation
};
DdbarResult ddbar_with_error(const ScalarField& phi, const Chart& chart, const AmbientPoint& at,
                             const FDConfig& cfg = {});

// Holomorphic gradient d phi / dw_j on the chart's free coordinates.
std::array<cplx, 3> fd_gradient(const ScalarField& phi, const Chart& chart, const AmbientPoint& at,
                                const FDConfig& cfg = {});

// d/dt phi(w + t xi) at t = 0 for a real curve through the chart point; xi is
// a complex displacement of the free coordinates.
double directional_derivative(const ScalarField& phi, const Chart& chart, const AmbientPoint& at,
                              std::span<const cplx> xi, const FDConfig& cfg = {});

}  // namespace cylab
