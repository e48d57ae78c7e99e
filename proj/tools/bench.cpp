// Timing comparison between the serial reference loop and the OpenMP kernels
// for the sampling-heavy workloads. Run with no arguments.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "cylab/ale.hpp"
#include "cylab/experiments.hpp"
#include "cylab/harmonic.hpp"
#include "cylab/parallel.hpp"
#include "cylab/sampling.hpp"

using namespace cylab;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %.2fx\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("workers available: %d\n\n", par::max_workers());

    // Kernel 1: Ricci potentials of the glued metric along rays.
    {
        const HypersurfaceFamily X(1.0, 0.0);
        GluingConfig glue;
        std::vector<AmbientPoint> pts;
        for (int d = 0; d < 4; ++d) {
            const AmbientPoint dir = unit_cone_direction(7, static_cast<uint64_t>(d));
            for (double R : geometric_radii(2048.0, 2097152.0, 24))
                pts.push_back(central_fiber_point(X, dir, R));
        }
        std::vector<ResidualRow> r1, r2;
        const double s = time_ms([&] { r1 = ricci_residual_map(X, glue, pts, {}, 1); });
        const double p = time_ms([&] { r2 = ricci_residual_map(X, glue, pts, {}, 0); });
        double dev = 0;
        for (size_t i = 0; i < r1.size(); ++i) dev = std::max(dev, std::abs(r1[i].h - r2[i].h));
        report("ricci residual map", s, p);
        std::printf("  serial/parallel result deviation: %g\n", dev);
    }

    // Kernel 2: harmonic-catalog Laplacians on the cover.
    {
        const auto covers = cxa2_cover_samples(11, 600);
        std::vector<double> out1(covers.size()), out2(covers.size());
        auto kernel = [&](std::vector<double>& out, int workers) {
            par::for_each(static_cast<std::int64_t>(covers.size()), [&](std::int64_t i) {
                const std::vector<std::array<cplx, 3>> one{covers[static_cast<size_t>(i)]};
                out[static_cast<size_t>(i)] =
                    check_harmonic([](const AmbientPoint& q) { return eval_u2(q); }, one);
            }, workers);
        };
        const double s = time_ms([&] { kernel(out1, 1); });
        const double p = time_ms([&] { kernel(out2, 0); });
        double dev = 0;
        for (size_t i = 0; i < out1.size(); ++i) dev = std::max(dev, std::abs(out1[i] - out2[i]));
        report("harmonic laplacians", s, p);
        std::printf("  serial/parallel result deviation: %g\n", dev);
    }

    // Kernel 3: Gibbons-Hawking Ricci residuals.
    {
        GHData gh;
        std::vector<Vec3> xs;
        for (int i = 0; i < 200; ++i) {
            const double r = uniform(3, static_cast<uint64_t>(i), 0, 2.0, 10.0);
            const double c = uniform(3, static_cast<uint64_t>(i), 1, -0.8, 0.8);
            const double a = uniform(3, static_cast<uint64_t>(i), 2, 0.0, 6.283185307179586);
            const double s = std::sqrt(1.0 - c * c);
            xs.push_back({r * s * std::cos(a), r * s * std::sin(a), r * c});
        }
        std::vector<double> out1(xs.size()), out2(xs.size());
        auto kernel = [&](std::vector<double>& out, int workers) {
            par::for_each(static_cast<std::int64_t>(xs.size()), [&](std::int64_t i) {
                out[static_cast<size_t>(i)] = gh_ricci_norm(gh, xs[static_cast<size_t>(i)]);
            }, workers);
        };
        const double s = time_ms([&] { kernel(out1, 1); });
        const double p = time_ms([&] { kernel(out2, 0); });
        double dev = 0;
        for (size_t i = 0; i < out1.size(); ++i) dev = std::max(dev, std::abs(out1[i] - out2[i]));
        report("gibbons-hawking ricci", s, p);
        std::printf("  serial/parallel result deviation: %g\n", dev);
    }

    return 0;
}
