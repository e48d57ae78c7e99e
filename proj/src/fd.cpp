#include "cylab/fd.hpp"

#include <cmath>

namespace cylab {

namespace {

struct StencilEval {
    const ScalarField& phi;
    const Chart& chart;
    const AmbientPoint& at;
    std::array<cplx, 3> w0;

    double operator()(const std::array<cplx, 3>& offset) const {
        std::array<cplx, 3> w = w0;
        for (int i = 0; i < chart.nfree; ++i) w[static_cast<size_t>(i)] += offset[static_cast<size_t>(i)];
        const AmbientPoint p = chart.at(std::span<const cplx>(w.data(), static_cast<size_t>(chart.nfree)), &at);
        const double v = phi(p);
        if (!std::isfinite(v)) throw EvaluationError("finite-difference stencil hit a non-finite value");
        return v;
    }
};

// Direction d of coordinate j: d = 0 real axis, d = 1 imaginary axis.
inline cplx axis(int d) { return d == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0); }

double snapped_step(double h, double coord_mag) {
    // Snap so that (w + h) - w is exact; reduces cancellation noise.
    const double base = std::max(1.0, coord_mag);
    volatile double tmp = base + h;
    return tmp - base;
}

CMat ddbar_level(const StencilEval& ev, int nfree, const std::array<double, 3>& steps) {
    CMat H(nfree);
    std::array<cplx, 3> off{};
    const double center = ev(off);
    for (int j = 0; j < nfree; ++j) {
        const double h = steps[static_cast<size_t>(j)];
        double second[2];
        for (int d = 0; d < 2; ++d) {
            off = {};
            off[static_cast<size_t>(j)] = axis(d) * h;
            const double fp = ev(off);
            off[static_cast<size_t>(j)] = -axis(d) * h;
            const double fm = ev(off);
            second[d] = (fp - 2.0 * center + fm) / (h * h);
        }
        H.at(j, j) = 0.25 * (second[0] + second[1]);
    }
    for (int j = 0; j < nfree; ++j)
        for (int k = j + 1; k < nfree; ++k) {
            const double hj = steps[static_cast<size_t>(j)];
            const double hk = steps[static_cast<size_t>(k)];
            double mixed[2][2];
            for (int dj = 0; dj < 2; ++dj)
                for (int dk = 0; dk < 2; ++dk) {
                    double sum = 0;
                    for (int sj = -1; sj <= 1; sj += 2)
                        for (int sk = -1; sk <= 1; sk += 2) {
                            off = {};
                            off[static_cast<size_t>(j)] = axis(dj) * (sj * hj);
                            off[static_cast<size_t>(k)] = axis(dk) * (sk * hk);
                            sum += sj * sk * ev(off);
                        }
                    mixed[dj][dk] = sum / (4.0 * hj * hk);
                }
            // d/dw = (d_a - i d_b)/2, d/dwbar = (d_a + i d_b)/2.
            const cplx hjk =
                0.25 * cplx(mixed[0][0] + mixed[1][1], mixed[0][1] - mixed[1][0]);
            H.at(j, k) = hjk;
            H.at(k, j) = std::conj(hjk);
        }
    return H;
}

std::array<double, 3> base_steps(const Chart& chart, const AmbientPoint& at, double rel) {
    std::array<double, 3> h{};
    for (int j = 0; j < chart.nfree; ++j) {
        const double mag = std::abs(at[chart.free_idx[static_cast<size_t>(j)]]);
        h[static_cast<size_t>(j)] = snapped_step(rel * std::max(1.0, mag), mag);
    }
    return h;
}

}  // namespace

DdbarResult ddbar_with_error(const ScalarField& phi, const Chart& chart, const AmbientPoint& at,
                             const FDConfig& cfg) {
    cfg.validate();
    StencilEval ev{phi, chart, at, chart.free_values(at)};
    const auto h1 = base_steps(chart, at, cfg.rel_step);
    CMat coarse = ddbar_level(ev, chart.nfree, h1);
    DdbarResult out;
    if (cfg.richardson <= 1) {
        coarse.hermitize();
        out.h = coarse;
        return out;
    }
    auto h2 = h1;
    for (auto& v : h2) v *= 0.5;
    CMat fine = ddbar_level(ev, chart.nfree, h2);
    CMat extrap(chart.nfree);
    double err = 0;
    for (int i = 0; i < chart.nfree; ++i)
        for (int j = 0; j < chart.nfree; ++j) {
            const cplx diff = (fine.at(i, j) - coarse.at(i, j)) / 3.0;
            extrap.at(i, j) = fine.at(i, j) + diff;
            err = std::max(err, std::abs(diff));
        }
    extrap.hermitize();
    out.h = extrap;
    out.trunc_estimate = err;
    return out;
}

CMat ddbar(const ScalarField& phi, const Chart& chart, const AmbientPoint& at, const FDConfig& cfg) {
    return ddbar_with_error(phi, chart, at, cfg).h;
}

std::array<cplx, 3> fd_gradient(const ScalarField& phi, const Chart& chart, const AmbientPoint& at,
                                const FDConfig& cfg) {
    cfg.validate();
    StencilEval ev{phi, chart, at, chart.free_values(at)};
    const auto steps = base_steps(chart, at, cfg.rel_step);
    std::array<cplx, 3> g{};
    std::array<cplx, 3> off{};
    auto central = [&](int j, int d, double h) {
        off = {};
        off[static_cast<size_t>(j)] = axis(d) * h;
        const double fp = ev(off);
        off[static_cast<size_t>(j)] = -axis(d) * h;
        const double fm = ev(off);
        return (fp - fm) / (2.0 * h);
    };
    for (int j = 0; j < chart.nfree; ++j) {
        const double h = steps[static_cast<size_t>(j)];
        double da = central(j, 0, h), db = central(j, 1, h);
        if (cfg.richardson > 1) {
            const double da2 = central(j, 0, 0.5 * h), db2 = central(j, 1, 0.5 * h);
            da = da2 + (da2 - da) / 3.0;
            db = db2 + (db2 - db) / 3.0;
        }
        g[static_cast<size_t>(j)] = 0.5 * cplx(da, -db);
    }
    return g;
}

double directional_derivative(const ScalarField& phi, const Chart& chart, const AmbientPoint& at,
                              std::span<const cplx> xi, const FDConfig& cfg) {
    cfg.validate();
    StencilEval ev{phi, chart, at, chart.free_values(at)};
    auto along = [&](double t) {
        std::array<cplx, 3> off{};
        for (int i = 0; i < chart.nfree; ++i) off[static_cast<size_t>(i)] = t * xi[static_cast<size_t>(i)];
        return ev(off);
    };
    const double h = cfg.rel_step;
    double d1 = (along(h) - along(-h)) / (2.0 * h);
    if (cfg.richardson > 1) {
        const double d2 = (along(0.5 * h) - along(-0.5 * h)) / h;
        d1 = d2 + (d2 - d1) / 3.0;
    }
    return d1;
}

}  // namespace cylab
