#include "cylab/fit.hpp"

#include <cmath>

namespace cylab {

double DecayFit::decades() const {
    if (x_min <= 0 || x_max <= 0) return 0;
    return std::log10(x_max / x_min);
}

DecayFit fit_loglog(const std::vector<std::pair<double, double>>& xy) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(xy.size());
    double xmin = 0, xmax = 0;
    for (const auto& [x, y] : xy) {
        if (!(x > 0) || y == 0.0 || !std::isfinite(y)) continue;
        pts.emplace_back(std::log(x), std::log(std::abs(y)));
        if (pts.size() == 1) {
            xmin = xmax = x;
        } else {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    }
    DecayFit f;
    f.n = static_cast<int>(pts.size());
    f.x_min = xmin;
    f.x_max = xmax;
    if (pts.size() < 2) throw DomainError("fit_loglog: need at least 2 usable points");

    double sx = 0, sy = 0;
    for (const auto& [lx, ly] : pts) {
        sx += lx;
        sy += ly;
    }
    const double n = static_cast<double>(pts.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [lx, ly] : pts) {
        sxx += (lx - mx) * (lx - mx);
        sxy += (lx - mx) * (ly - my);
    }
    if (sxx == 0.0) throw DomainError("fit_loglog: degenerate abscissas");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (const auto& [lx, ly] : pts) {
        const double r = ly - (f.intercept + f.slope * lx);
        ss += r * r;
    }
    f.stderr_ = pts.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
    return f;
}

}  // namespace cylab
