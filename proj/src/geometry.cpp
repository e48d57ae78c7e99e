#include "cylab/geometry.hpp"

#include <cmath>

namespace cylab {

VolumeFormSpec VolumeFormSpec::x_ab() {
    VolumeFormSpec f;
    f.wedge = {kX1, kX2, kY};
    f.nwedge = 3;
    return f;
}

VolumeFormSpec VolumeFormSpec::a2() {
    VolumeFormSpec f;
    f.wedge = {kX1, kX2, kY};
    f.nwedge = 2;
    f.denom = [](const AmbientPoint& p) { return 3.0 * p.y() * p.y(); };
    return f;
}

VolumeFormSpec VolumeFormSpec::cxa2() {
    VolumeFormSpec f;
    f.wedge = {kZ, kX1, kX2};
    f.nwedge = 3;
    f.denom = [](const AmbientPoint& p) { return 3.0 * p.y() * p.y(); };
    return f;
}

VolumeFormSpec VolumeFormSpec::flat(std::array<int, 3> coords, int n) {
    VolumeFormSpec f;
    f.wedge = coords;
    f.nwedge = n;
    return f;
}

cplx volume_form_coeff(const AmbientPoint& p, const Chart& chart, const VolumeFormSpec& form) {
    if (form.nwedge != chart.nfree)
        throw ChartError("volume_form_coeff: form degree does not match chart dimension");

    std::array<cplx, 4> grad{};
    cplx fsolved = 1.0;
    if (chart.solved >= 0) {
        grad = chart.surface.gradient(p);
        fsolved = grad[static_cast<size_t>(chart.solved)];
        double gnorm = 0;
        for (int i = 0; i < 4; ++i)
            if (chart.surface.is_var(i)) gnorm = std::max(gnorm, std::abs(grad[static_cast<size_t>(i)]));
        if (std::abs(fsolved) < 1e-12 * (gnorm + 1e-300))
            throw ChartError("volume_form_coeff: solved-coordinate gradient below tolerance");
    }

    CMat M(chart.nfree);
    for (int r = 0; r < form.nwedge; ++r) {
        const int coord = form.wedge[static_cast<size_t>(r)];
        for (int c = 0; c < chart.nfree; ++c) {
            const int fc = chart.free_idx[static_cast<size_t>(c)];
            if (coord == fc)
                M.at(r, c) = 1.0;
            else if (coord == chart.solved)
                M.at(r, c) = -grad[static_cast<size_t>(fc)] / fsolved;
            else
                M.at(r, c) = 0.0;
        }
    }
    cplx coeff = determinant(M);
    if (form.denom) coeff /= form.denom(p);
    return coeff;
}

double ricci_potential_from(const CMat& metric, cplx form_coeff) {
    const cplx det = determinant(metric);
    if (std::abs(det.imag()) > 1e-8 * (1.0 + std::abs(det.real())))
        throw MetricDegeneracyError("ricci_potential: metric determinant is not real");
    if (!(det.real() > 0.0)) throw MetricDegeneracyError("ricci_potential: non-positive metric volume");
    return std::log(det.real()) - std::log(std::norm(form_coeff));
}

double ricci_potential(const ScalarField& phi, const Chart& chart, const AmbientPoint& at,
                       const VolumeFormSpec& form, const FDConfig& cfg) {
    const CMat g = ddbar(phi, chart, at, cfg);
    return ricci_potential_from(g, volume_form_coeff(at, chart, form));
}

double laplacian(const CMat& metric, const ScalarField& u, const Chart& chart, const AmbientPoint& at,
                 const FDConfig& cfg) {
    const CMat gi = inverse(metric);
    const CMat H = ddbar(u, chart, at, cfg);
    return trace(gi * H).real();
}

double curve_length(const MetricField& g, const Chart& chart,
                    const std::vector<std::array<cplx, 3>>& vertices) {
    if (vertices.size() < 2) throw DomainError("curve_length: need at least 2 points");
    double total = 0;
    for (size_t i = 0; i + 1 < vertices.size(); ++i) {
        std::array<cplx, 3> mid{};
        std::array<cplx, 3> xi{};
        for (int j = 0; j < chart.nfree; ++j) {
            const size_t sj = static_cast<size_t>(j);
            mid[sj] = 0.5 * (vertices[i][sj] + vertices[i + 1][sj]);
            xi[sj] = vertices[i + 1][sj] - vertices[i][sj];
        }
        AmbientPoint pm;
        try {
            pm = chart.at(std::span<const cplx>(mid.data(), static_cast<size_t>(chart.nfree)));
        } catch (const ChartError&) {
            throw ChartError("curve_length: chart break along the polyline, resample the curve");
        }
        const CMat gm = g(pm);
        cplx q = 0;
        for (int a = 0; a < chart.nfree; ++a)
            for (int b = 0; b < chart.nfree; ++b)
                q += std::conj(xi[static_cast<size_t>(a)]) * gm.at(a, b) * xi[static_cast<size_t>(b)];
        if (!(q.real() > 0)) throw MetricDegeneracyError("curve_length: non-positive segment energy");
        total += std::sqrt(q.real());
    }
    return total;
}

std::vector<std::array<cplx, 3>> refine_polyline(const Chart& chart,
                                                 const std::vector<std::array<cplx, 3>>& vertices) {
    std::vector<std::array<cplx, 3>> out;
    out.reserve(vertices.size() * 2 - 1);
    for (size_t i = 0; i + 1 < vertices.size(); ++i) {
        out.push_back(vertices[i]);
        std::array<cplx, 3> mid{};
        for (int j = 0; j < chart.nfree; ++j)
            mid[static_cast<size_t>(j)] = 0.5 * (vertices[i][static_cast<size_t>(j)] + vertices[i + 1][static_cast<size_t>(j)]);
        out.push_back(mid);
    }
    out.push_back(vertices.back());
    return out;
}

}  // namespace cylab
