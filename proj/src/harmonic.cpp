#include "cylab/harmonic.hpp"

#include <cmath>

#include "cylab/fit.hpp"

namespace cylab {

double eval_u2(const AmbientPoint& p) { return 2.0 * std::norm(p.z()) - r2_a2(p); }

double eval_u1(const AmbientPoint& p, double beta) {
    const double r2 = r2_a2(p);
    const double sigma = std::norm(p.y());
    const double den = r2 * r2 - sigma;
    if (den <= 1e-12 * (r2 * r2 + sigma + 1e-300))
        throw ExcludedLocusError("eval_u1: radial denominator degenerates at the vertex");
    const double num = -2.0 * beta * std::imag(p.x1() * std::conj(p.x2()));
    return (2.0 / 3.0) * num / den;
}

LinearField LinearField::diagonal(cplx cz, cplx cx1, cplx cx2, cplx cy) {
    LinearField f;
    f.A.at(kZ, kZ) = cz;
    f.A.at(kX1, kX1) = cx1;
    f.A.at(kX2, kX2) = cx2;
    f.A.at(kY, kY) = cy;
    return f;
}

LinearField LinearField::w1(double beta) {
    LinearField f;
    f.A.at(kX1, kX2) = cplx(0.0, beta);
    f.A.at(kX2, kX1) = cplx(0.0, -beta);
    return f;
}

LinearField LinearField::w2() { return diagonal(1.0, -1.5, -1.5, -1.0); }

LinearField LinearField::v_generator() { return diagonal(1.0, 0.5, 0.5, 1.0 / 3.0); }

LinearField LinearField::euler3() { return diagonal(0.0, 1.0, 1.0, 1.0); }

double real_field_action(const LinearField& W, const ScalarField& phi, const AmbientPoint& p,
                         const FDConfig& cfg) {
    const auto xi = W.displacement(p);
    auto along = [&](double t) {
        AmbientPoint q = p;
        for (int j = 0; j < 4; ++j) q[j] += t * xi[static_cast<size_t>(j)];
        const double v = phi(q);
        if (!std::isfinite(v)) throw EvaluationError("real_field_action: non-finite value");
        return v;
    };
    const double h = cfg.rel_step;
    double d1 = (along(h) - along(-h)) / (2.0 * h);
    if (cfg.richardson > 1) {
        const double d2 = (along(0.5 * h) - along(-0.5 * h)) / h;
        d1 = d2 + (d2 - d1) / 3.0;
    }
    return 0.5 * d1;
}

double tangency_residual(const LinearField& W, const SurfacePoly& s,
                         const std::vector<AmbientPoint>& samples) {
    double worst = 0;
    for (const auto& p : samples)
        worst = std::max(worst, std::abs(W.apply_to(s, p)) / s.magnitude_scale(p));
    return worst;
}

cplx lie_derivative_volume(const LinearField& W, const FormAlgebra& form,
                           const SurfacePoly* tangent_to, const std::vector<AmbientPoint>* samples) {
    if (tangent_to && samples) {
        if (tangency_residual(W, *tangent_to, *samples) > 1e-11)
            throw TangencyError("lie_derivative_volume: field is not tangent to the surface");
    }
    // The wedge block must map to itself and the denominator variable must
    // rescale; otherwise L_W Omega is not proportional to Omega.
    std::array<bool, 4> in_wedge{};
    for (int r = 0; r < form.nwedge; ++r) in_wedge[static_cast<size_t>(form.wedge[static_cast<size_t>(r)])] = true;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) {
            if (i == j) continue;
            const cplx c = W.A.at(i, j);
            if (c == cplx(0.0)) continue;
            if (in_wedge[static_cast<size_t>(j)] && !in_wedge[static_cast<size_t>(i)])
                throw TangencyError("lie_derivative_volume: field does not preserve the wedge block");
            if (j == form.denom_var || i == form.denom_var)
                throw TangencyError("lie_derivative_volume: field mixes the denominator variable");
        }
    cplx lambda = 0;
    for (int r = 0; r < form.nwedge; ++r) {
        const int j = form.wedge[static_cast<size_t>(r)];
        lambda += W.A.at(j, j);
    }
    if (form.denom_var >= 0)
        lambda -= static_cast<double>(form.denom_exp) * W.A.at(form.denom_var, form.denom_var);
    return lambda;
}

HypersurfaceFamily phi_action_on_family(cplx t, const HypersurfaceFamily& X) {
    // Substituting Phi_{-t} into a z + b y + f = 0 scales the z and f terms
    // by e^{-t/2} and the y term by e^{-t/6}; renormalizing the leading
    // coefficient leaves b -> e^{t/3} b.
    return HypersurfaceFamily(X.a, std::exp(t / 3.0) * X.b);
}

namespace {
double rho_tilde2(const AmbientPoint& p) { return std::norm(p.z()) + r2_a2(p); }
}  // namespace

double radial_identity_residual(const std::vector<AmbientPoint>& samples, const FDConfig& cfg) {
    const LinearField V = LinearField::v_generator();
    double worst = 0;
    for (const auto& p : samples) {
        const double lhs = real_field_action(V, rho_tilde2, p, cfg);
        const double val = rho_tilde2(p);
        const double res = std::abs(lhs - (4.0 / 9.0) * val - (5.0 / 18.0) * eval_u2(p));
        worst = std::max(worst, res / std::max(1.0, val));
    }
    return worst;
}

TaylorFit taylor_expansion_check(const std::vector<AmbientPoint>& samples,
                                 const std::vector<double>& ts, double first_order_coeff) {
    TaylorFit out;
    for (const double t : ts) {
        const AutomorphismPhi phi{cplx(t, 0.0)};
        double e = 0;
        for (const auto& p : samples) {
            const double pulled = std::exp(-4.0 * t / 9.0) * rho_tilde2(phi.apply(p));
            const double lin = rho_tilde2(p) + first_order_coeff * eval_u2(p) * t;
            e = std::max(e, std::abs(pulled - lin));
        }
        out.samples.emplace_back(t, e);
    }
    const DecayFit fit = fit_loglog(out.samples);
    out.slope = fit.slope;
    out.stderr_ = fit.stderr_;
    return out;
}

double check_harmonic(const std::function<double(const AmbientPoint&)>& u,
                      const std::vector<std::array<cplx, 3>>& cover_samples, const FDConfig& cfg) {
    double worst = 0;
    const CMat flat = CMat::identity(3);
    for (const auto& c : cover_samples) {
        AmbientPoint base;
        base[kZ] = c[0];
        base[kX1] = c[1];
        base[kX2] = c[2];
        const Chart chart = Chart::free_space({kZ, kX1, kX2}, 3, base);
        auto field = [&u](const AmbientPoint& q) {
            return u(cxa2_cover(q[kZ], q[kX1], q[kX2]));
        };
        worst = std::max(worst, std::abs(laplacian(flat, field, chart, base, cfg)));
    }
    return worst;
}

}  // namespace cylab
