#include "cylab/chart.hpp"

#include <cmath>

namespace cylab {

namespace {

void fill_free_indices(Chart& c) {
    c.nfree = 0;
    for (int i = 0; i < 4; ++i) {
        if (!c.surface.is_var(i) || i == c.solved) continue;
        c.free_idx[static_cast<size_t>(c.nfree++)] = i;
    }
}

double validity_estimate(const AmbientPoint& p, const SurfacePoly& s, int solved) {
    const cplx fw = s.gradient(p)[static_cast<size_t>(solved)];
    const cplx fww = s.second_diag(p, solved);
    return 0.5 * std::abs(fw) / (std::abs(fww) + 1e-30);
}

}  // namespace

AmbientPoint Chart::at(std::span<const cplx> freevals, const AmbientPoint* hint) const {
    AmbientPoint p = hint ? *hint : base;
    for (int i = 0; i < nfree; ++i) p[free_idx[static_cast<size_t>(i)]] = freevals[static_cast<size_t>(i)];
    if (solved < 0) return p;

    const double tol = 1e-13 * surface.magnitude_scale(p);
    for (int it = 0; it < 20; ++it) {
        const cplx f = surface.eval(p);
        if (std::abs(f) <= tol) return p;
        const cplx fw = surface.gradient(p)[static_cast<size_t>(solved)];
        if (std::abs(fw) < 1e-300) throw ChartError("chart Newton: derivative collapsed");
        p[solved] -= f / fw;
    }
    if (std::abs(surface.eval(p)) <= 10.0 * tol) return p;
    throw ChartError("chart Newton did not converge within 20 iterations");
}

Chart Chart::free_space(std::array<int, 3> coords, int n, const AmbientPoint& base) {
    Chart c;
    c.solved = -1;
    c.free_idx = coords;
    c.nfree = n;
    c.base = base;
    c.validity_radius = std::numeric_limits<double>::infinity();
    // Free charts carry no surface; mark every coordinate as a variable.
    c.surface.nvars = 4;
    return c;
}

Chart build_chart(const AmbientPoint& p, const SurfacePoly& surface, double threshold) {
    const double fscale = 1.0 + ipow(p.norm(), WeightSystem{}.degree);
    if (std::abs(surface.eval(p)) > 1e-8 * fscale)
        throw ChartError("build_chart: point is not on the surface");

    const auto g = surface.gradient(p);
    double gnorm = 0;
    for (int i = 0; i < 4; ++i)
        if (surface.is_var(i)) gnorm = std::max(gnorm, std::abs(g[static_cast<size_t>(i)]));

    if (gnorm <= 1e-12 * (surface.gradient_scale(p) + 1e-30) || gnorm == 0.0)
        throw SingularChartError("build_chart: all partial derivatives vanish");

    int best = -1;
    double bestmag = -1.0;
    for (int i = 0; i < 4; ++i) {
        if (!surface.is_var(i)) continue;
        const double m = std::abs(g[static_cast<size_t>(i)]);
        if (m > bestmag) {
            bestmag = m;
            best = i;
        }
    }
    if (bestmag < threshold * gnorm)
        throw SingularChartError("build_chart: solved-coordinate gradient below threshold");

    Chart c;
    c.surface = surface;
    c.solved = best;
    c.base = p;
    fill_free_indices(c);
    c.validity_radius = validity_estimate(p, surface, best);
    return c;
}

Chart chart_solving(int coord, const AmbientPoint& p, const SurfacePoly& surface) {
    const auto g = surface.gradient(p);
    if (!surface.is_var(coord) || std::abs(g[static_cast<size_t>(coord)]) < 1e-300)
        throw SingularChartError("chart_solving: coordinate gradient vanishes");
    Chart c;
    c.surface = surface;
    c.solved = coord;
    c.base = p;
    fill_free_indices(c);
    c.validity_radius = validity_estimate(p, surface, coord);
    return c;
}

}  // namespace cylab
