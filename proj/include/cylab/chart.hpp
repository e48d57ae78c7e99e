#pragma once

#include <span>

#include "cylab/surface.hpp"
#include "cylab/types.hpp"

namespace cylab {

// Local holomorphic coordinates on {F = 0} by solving one ambient
// coordinate via the implicit function theorem; the remaining coordinates
// (in the fixed ambient order) are free. A chart with solved = -1 is a free
// chart on a coordinate subspace, used for flat model spaces and for the
// C^2 cover parameters.
struct Chart {
    SurfacePoly surface;
    int solved = -1;
    std::array<int, 3> free_idx{};
    int nfree = 0;
    AmbientPoint base;
    double validity_radius = 0;

    // Point with the given free-coordinate values; the solved coordinate is
    // re-solved by Newton seeded at `hint` (or the base point).
    AmbientPoint at(std::span<const cplx> freevals, const AmbientPoint* hint = nullptr) const;

    std::array<cplx, 3> free_values(const AmbientPoint& p) const {
        std::array<cplx, 3> w{};
        for (int i = 0; i < nfree; ++i) w[static_cast<size_t>(i)] = p[free_idx[static_cast<size_t>(i)]];
        return w;
    }

    static Chart free_space(std::array<int, 3> coords, int n, const AmbientPoint& base);
};

// Chart at p with the solved coordinate maximizing the gradient magnitude
// (earliest coordinate wins ties). Throws SingularChartError when the whole
// gradient collapses, ChartError when p is not on the surface.
Chart build_chart(const AmbientPoint& p, const SurfacePoly& surface, double threshold = 1e-6);

// Chart solving a prescribed coordinate (used by experiments where the
// gradient ranking is known, e.g. the global z-chart of X_{a,b}).
Chart chart_solving(int coord, const AmbientPoint& p, const SurfacePoly& surface);

}  // namespace cylab
