#include "cylab/projection.hpp"

#include <cmath>

namespace cylab {

namespace {

// Ambient cone-metric Hessian on the target's variable block.
CMat ambient_metric(const SurfacePoly& target, const AmbientPoint& q, std::array<int, 4>& idx, int& m) {
    m = 0;
    for (int i = 0; i < 4; ++i)
        if (target.is_var(i)) idx[static_cast<size_t>(m++)] = i;
    const ScalarJet jet = target.nvars == 4 ? ambient_rho2_jet(q) : ambient_R2_jet(q);
    CMat G(m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) G.at(a, b) = jet.hess.at(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(b)]);
    G.hermitize();
    return G;
}

struct KktState {
    AmbientPoint q;
    cplx lambda{0.0};
    double feas = 0;
    double stat = 0;
};

ProjectionResult solve_from(const AmbientPoint& p, const SurfacePoly& target, 
                            const std::array<cplx, 4>& seed_delta, const ProjectionOptions& opt) {
    ProjectionResult out;
    out.source = p;

    std::array<int, 4> idx{};
    int m = 0;
    // The displacement is the primary unknown; the moved point is only ever
    // formed for smooth quantities (metric, gradient), never to evaluate the
    // defining polynomial, which uses the exact shift expansion instead. The
    // stationarity condition forces delta into the metric-normal direction,
    // so the state is just the multiplier; the z-shift seed enters as the
    // first geometry evaluation point, which keeps the linearization sane
    // when the b-term offset is large.
    std::array<cplx, 4> delta{};
    auto moved = [&]() {
        AmbientPoint q = p;
        for (int i = 0; i < 4; ++i) q[i] += delta[static_cast<size_t>(i)];
        return q;
    };

    cplx lambda = 0.0;
    cplx lambda_prev = 0.0;
    double prev_abs_f = std::numeric_limits<double>::infinity();
    const double f0 = std::abs(target.eval_shifted(p, delta));
    bool converged = false;
    int it = 0;
    std::array<cplx, CMat::kCap> v{};
    for (; it < opt.max_iterations; ++it) {
        AmbientPoint q = moved();
        if (it == 0)
            for (int i = 0; i < 4; ++i) q[i] += seed_delta[static_cast<size_t>(i)];
        const CMat G = ambient_metric(target, q, idx, m);
        if (hermitian_eigenvalues(G)[0] <= 0)
            throw ConvergenceError("nearest_point: ambient metric degenerate near the singular rays");
        const auto grad = target.gradient(q);
        std::array<cplx, CMat::kCap> u{};
        for (int a = 0; a < m; ++a) u[static_cast<size_t>(a)] = std::conj(grad[idx[static_cast<size_t>(a)]]);
        v = u;
        if (!solve_inplace(G, v)) throw ConvergenceError("nearest_point: metric solve failed");
        double mm = 0;
        for (int a = 0; a < m; ++a) mm += (grad[idx[static_cast<size_t>(a)]] * v[static_cast<size_t>(a)]).real();
        if (!(mm > 0)) throw ConvergenceError("nearest_point: gradient pairing not positive");

        const cplx f = target.eval_shifted(p, delta);
        cplx dlam = f / mm;
        if (std::abs(f) > 2.0 * prev_abs_f && it > 1) {
            // Damp towards the previous multiplier when the residual grows.
            dlam = 0.5 * (lambda_prev - lambda);
        }
        prev_abs_f = std::abs(f);
        lambda_prev = lambda;
        lambda += dlam;

        delta = {};
        for (int a = 0; a < m; ++a) delta[static_cast<size_t>(idx[static_cast<size_t>(a)])] = -lambda * v[static_cast<size_t>(a)];

        // Increment-based convergence: the multiplier (hence the
        // displacement) has stabilized in relative terms.
        if (std::abs(dlam) <= 1e-13 * std::abs(lambda)) {
            converged = true;
            ++it;
            break;
        }
        if (lambda == cplx(0.0) && std::abs(f) <= 1e-30 * target.magnitude_scale(q)) {
            converged = true;
            ++it;
            break;
        }
    }

    const cplx f = target.eval_shifted(p, delta);
    const double scale = target.magnitude_scale(moved());
    if (!converged && std::abs(f) > 1e-10 * (f0 + 1e-300) && std::abs(f) > 1e-24 * scale)
        throw ConvergenceError("nearest_point did not converge: |F| = " + std::to_string(std::abs(f)) +
                               " after " + std::to_string(it) + " iterations");

    const AmbientPoint q = moved();
    out.target = q;
    out.delta = delta;
    out.lambda = lambda;
    out.iterations = it;
    out.residual = std::abs(f) / scale;

    // Displacement and stationarity with the metric at the target.
    const CMat G = ambient_metric(target, q, idx, m);
    cplx energy = 0;
    std::array<cplx, CMat::kCap> gd{};
    for (int a = 0; a < m; ++a) {
        cplx s = 0;
        for (int b = 0; b < m; ++b) s += G.at(a, b) * delta[static_cast<size_t>(idx[static_cast<size_t>(b)])];
        gd[static_cast<size_t>(a)] = s;
        energy += std::conj(delta[static_cast<size_t>(idx[static_cast<size_t>(a)])]) * s;
    }
    out.displacement = std::sqrt(std::max(0.0, energy.real()));

    const auto grad = target.gradient(q);
    double gd_norm = 0, u_norm = 0;
    cplx inner = 0;
    for (int a = 0; a < m; ++a) {
        const cplx ua = std::conj(grad[idx[static_cast<size_t>(a)]]);
        gd_norm += std::norm(gd[static_cast<size_t>(a)]);
        u_norm += std::norm(ua);
        inner += std::conj(ua) * gd[static_cast<size_t>(a)];
    }
    if (gd_norm > 0 && u_norm > 0) {
        const double proj = std::norm(inner) / u_norm;
        out.stationarity = std::sqrt(std::max(0.0, gd_norm - proj) / gd_norm);
    }
    return out;
}

}  // namespace

ProjectionResult nearest_point(const AmbientPoint& p, const SurfacePoly& target,
                               const ProjectionOptions& opt) {
    std::array<cplx, 4> seed{};
    if (target.nvars == 4 && target.a != cplx(0.0))
        seed[kZ] = -(target.b / target.a) * p.y();
    ProjectionResult r = solve_from(p, target, seed, opt);
    if (opt.multi_seed_probe) {
        ProjectionResult alt = solve_from(p, target, {}, opt);
        double dist2 = 0;
        for (int i = 0; i < 4; ++i) dist2 += std::norm(alt.target[i] - r.target[i]);
        const double sep = std::sqrt(dist2);
        if (sep > 1e-6 * (1.0 + p.norm()) &&
            std::abs(alt.displacement - r.displacement) < 1e-6 * (r.displacement + 1e-300))
            r.multi_minimum_suspect = true;
    }
    return r;
}

cplx pullback_volume_ratio(const AmbientPoint& p, const Chart& source_chart,
                           const VolumeFormSpec& omega_source, const SurfacePoly& target,
                           const VolumeFormSpec& omega_target, const FDConfig& cfg) {
    const ProjectionResult center = nearest_point(p, target);
    const Chart target_chart = build_chart(center.target, target);

    const int n = source_chart.nfree;
    const auto w0 = source_chart.free_values(p);

    auto projected_coords = [&](const std::array<cplx, 3>& w) {
        const AmbientPoint q =
            source_chart.at(std::span<const cplx>(w.data(), static_cast<size_t>(n)), &p);
        ProjectionResult r = nearest_point(q, target);
        return target_chart.free_values(r.target);
    };

    // Holomorphic part of the differential: dw'/dw = (d/du - i d/dv)/2.
    CMat J(n);
    for (int j = 0; j < n; ++j) {
        const double h = cfg.rel_step * std::max(1.0, std::abs(w0[static_cast<size_t>(j)]));
        std::array<std::array<cplx, 3>, 4> vals{};
        int slot = 0;
        for (int d = 0; d < 2; ++d)
            for (int s = -1; s <= 1; s += 2) {
                auto w = w0;
                w[static_cast<size_t>(j)] += (d == 0 ? cplx(s * h, 0) : cplx(0, s * h));
                vals[static_cast<size_t>(slot++)] = projected_coords(w);
            }
        for (int i = 0; i < n; ++i) {
            const cplx du = (vals[1][static_cast<size_t>(i)] - vals[0][static_cast<size_t>(i)]) / (2.0 * h);
            const cplx dv = (vals[3][static_cast<size_t>(i)] - vals[2][static_cast<size_t>(i)]) / (2.0 * h);
            J.at(i, j) = 0.5 * (du - cplx(0, 1) * dv);
        }
    }

    const cplx coeff_src = volume_form_coeff(p, source_chart, omega_source);
    const cplx coeff_tgt = volume_form_coeff(center.target, target_chart, omega_target);
    return coeff_tgt * determinant(J) / coeff_src;
}

ProjectionDifferential projection_differential(const AmbientPoint& p, const SurfacePoly& source,
                                               const SurfacePoly& target, int solve_coord,
                                               const FDConfig& cfg) {
    const Chart sc = chart_solving(solve_coord, p, source);
    const int n = sc.nfree;
    const auto w0 = sc.free_values(p);

    // Displacement of the shared free slots under the projection.
    auto disp = [&](const std::array<cplx, 3>& w) {
        const AmbientPoint q = sc.at(std::span<const cplx>(w.data(), static_cast<size_t>(n)), &p);
        const ProjectionResult r = nearest_point(q, target);
        std::array<cplx, 3> d{};
        for (int i = 0; i < n; ++i)
            d[static_cast<size_t>(i)] = r.delta[static_cast<size_t>(sc.free_idx[static_cast<size_t>(i)])];
        return d;
    };

    RMat E(2 * n);
    for (int j = 0; j < n; ++j) {
        const double h = cfg.rel_step * std::max(1.0, std::abs(w0[static_cast<size_t>(j)]));
        for (int d = 0; d < 2; ++d) {
            auto wp = w0, wm = w0;
            const cplx step = d == 0 ? cplx(h, 0) : cplx(0, h);
            wp[static_cast<size_t>(j)] += step;
            wm[static_cast<size_t>(j)] -= step;
            const auto dp = disp(wp);
            const auto dm = disp(wm);
            for (int i = 0; i < n; ++i) {
                const cplx de = (dp[static_cast<size_t>(i)] - dm[static_cast<size_t>(i)]) / (2.0 * h);
                E.at(i, d == 0 ? j : n + j) = de.real();
                E.at(n + i, d == 0 ? j : n + j) = de.imag();
            }
        }
    }

    ProjectionDifferential out;
    out.E = E;
    out.M = RMat::identity(2 * n) + E;
    // Crude conditioning guard on I + E.
    double emax = 0;
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) emax = std::max(emax, std::abs(E.at(i, j)));
    out.condition = (1.0 + emax) / std::max(1e-12, 1.0 - emax);
    return out;
}

RMat pulled_back_complex_structure(const ProjectionDifferential& dG) {
    const int n2 = dG.M.n;
    const int n = n2 / 2;
    RMat Jstd(n2);
    for (int i = 0; i < n; ++i) {
        Jstd.at(i, n + i) = -1.0;
        Jstd.at(n + i, i) = 1.0;
    }
    return inverse(dG.M) * Jstd * dG.M;
}

double complex_structure_error(const AmbientPoint& p, const SurfacePoly& source,
                               const SurfacePoly& target, int solve_coord, const CMat& g,
                               const FDConfig& cfg) {
    const ProjectionDifferential dG = projection_differential(p, source, target, solve_coord, cfg);
    if (dG.condition > 1e8)
        throw ConvergenceError("complex_structure_error: projection differential ill-conditioned");
    const int n2 = dG.M.n;
    const int n = n2 / 2;
    RMat Jstd(n2);
    for (int i = 0; i < n; ++i) {
        Jstd.at(i, n + i) = -1.0;
        Jstd.at(n + i, i) = 1.0;
    }
    // J_b - J = (I + E)^{-1} [J, E]; evaluated directly from E so the tiny
    // deformation survives in relative precision.
    const RMat commutator = Jstd * dG.E - dG.E * Jstd;
    const RMat diff = inverse(dG.M) * commutator;
    const RMat GR = hermitian_to_real_form(g);
    return operator_norm(diff, GR);
}

}  // namespace cylab
