#include "cylab/gluing.hpp"

#include <cmath>

#include "cylab/parallel.hpp"

namespace cylab {

double cutoff_gamma1(double s) {
    if (s <= 1.0) return 0.0;
    if (s >= 2.0) return 1.0;
    const double e1 = std::exp(-1.0 / (s - 1.0));
    const double e2 = std::exp(-1.0 / (2.0 - s));
    return e1 / (e1 + e2);
}

double cutoff_gamma1_max_slope() {
    double best = 0;
    for (int i = 1; i < 4096; ++i) {
        const double s = 1.0 + i / 4096.0;
        const double d = (cutoff_gamma1(s + 5e-7) - cutoff_gamma1(s - 5e-7)) / 1e-6;
        best = std::max(best, std::abs(d));
    }
    return best;
}

double glue_correction(const AmbientPoint& p, const GluingConfig& cfg) {
    if (cfg.psi_c == 0.0) return 0.0;
    const double rho = ambient_rho(p);
    const double R = ambient_R(p);
    const double g2 = cutoff_gamma2(R * std::pow(rho, -cfg.alpha_glue));
    if (g2 == 0.0) return 0.0;
    const double az = std::abs(p.z());
    if (az == 0.0) return 0.0;
    const double az13 = std::cbrt(az);
    const double r2 = r2_a2(p);
    return g2 * cfg.psi_c * az13 * az13 / (az13 + r2);
}

double approx_potential(const AmbientPoint& p, const GluingConfig& cfg) {
    cfg.validate();
    const double rho2 = ambient_rho2(p);
    if (!(rho2 > cfg.P * cfg.P))
        throw DomainError("approx_potential: point is in the core region rho <= P");
    return std::norm(p.z()) + r2_a2(p) + glue_correction(p, cfg);
}

const char* region_name(RegionLabel r) {
    switch (r) {
        case RegionLabel::AwaySingular: return "I";
        case RegionLabel::Intermediate: return "II";
        case RegionLabel::GluingBand: return "III";
        case RegionLabel::InnerCone: return "IV";
        case RegionLabel::NearSingular: return "V";
        case RegionLabel::Core: return "core";
    }
    return "?";
}

RegionLabel region_classify(double rho, double R, const GluingConfig& cfg) {
    if (!(rho > cfg.P)) return RegionLabel::Core;
    const double ra = std::pow(rho, cfg.alpha_glue);
    const double rd = std::pow(rho, 1.0 / cfg.d);
    if (R >= cfg.kappa * rho) return RegionLabel::AwaySingular;
    if (R >= 4.0 * ra) return RegionLabel::Intermediate;
    if (R >= ra) return RegionLabel::GluingBand;
    if (R >= 2.0 * rd / cfg.kappa) return RegionLabel::InnerCone;
    return RegionLabel::NearSingular;
}

RegionLabel region_classify(const AmbientPoint& p, const GluingConfig& cfg) {
    return region_classify(ambient_rho(p), ambient_R(p), cfg);
}

double weight_w(double rho, double R, const GluingConfig& cfg) {
    if (!(rho > cfg.P)) throw DomainError("weight_w: defined only for rho > P");
    const double s1 = R / (cfg.kappa * rho);
    if (s1 >= 1.0) return 1.0;
    const double wmid = s1;
    const double wnear = std::pow(rho, 1.0 / cfg.d - 1.0) / (cfg.kappa * cfg.kappa);
    // Lower blend between the near-ray branch and R/(kappa rho); the branches
    // agree at R = kappa^{-1} rho^{1/d}.
    const double sigma = 2.0 * cfg.kappa * R / std::pow(rho, 1.0 / cfg.d);
    const double t2 = cutoff_gamma1(sigma);
    const double base = t2 * wmid + (1.0 - t2) * wnear;
    // Upper blend into w = 1, placed below the R = kappa rho seam so that the
    // value never exceeds 1.
    const double t1 = cutoff_gamma1(2.0 * s1);
    return t1 * 1.0 + (1.0 - t1) * base;
}

double weight_w(const AmbientPoint& p, const GluingConfig& cfg) {
    return weight_w(ambient_rho(p), ambient_R(p), cfg);
}

namespace {

double gradient_norm_g(const std::array<cplx, 3>& a, const CMat& ginv, int n) {
    cplx s = 0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            s += a[static_cast<size_t>(j)] * ginv.at(j, k) * std::conj(a[static_cast<size_t>(k)]);
    return 2.0 * std::sqrt(std::max(0.0, s.real()));
}

double derivative_magnitude(int order, const ScalarField& f, const NormSamplePoint& sp, const CMat& g,
                            const FDConfig& fdc) {
    if (order == 0) return std::abs(f(sp.p));
    if (order == 1) return gradient_norm_g(fd_gradient(f, sp.chart, sp.p, fdc), inverse(g), sp.chart.nfree);
    return form_norm(ddbar(f, sp.chart, sp.p, fdc), g);
}

}  // namespace

double weighted_norm_estimate(const ScalarField& f, const MetricField& g,
                              const std::vector<NormSamplePoint>& samples, const WeightedNormSpec& spec,
                              const GluingConfig& cfg, const FDConfig& fdc) {
    spec.validate();
    if (samples.empty()) throw SamplingError("weighted_norm_estimate: no samples");
    double best = 0;
    int pair_failures = 0;
    size_t index = 0;
    for (const auto& sp : samples) {
        const double rho = ambient_rho(sp.p);
        if (!(rho > cfg.P)) throw DomainError("weighted_norm_estimate: sample below rho = P");
        const double w = weight_w(sp.p, cfg);
        const CMat gp = g(sp.p);
        double kth_mag = 0;
        for (int j = 0; j <= spec.k; ++j) {
            const double mag = derivative_magnitude(j, f, sp, gp, fdc);
            if (j == spec.k) kth_mag = mag;
            best = std::max(best, std::pow(rho, -spec.delta + j) * std::pow(w, -spec.tau + j) * mag);
        }

        // Holder pair at separation in [0.1, 0.5] rho w along the first chart
        // direction.
        const double frac = 0.1 + 0.1 * static_cast<double>(index % 5);
        ++index;
        const double target_len = frac * rho * w;
        const double gll = gp.at(0, 0).real();
        if (!(gll > 0)) {
            ++pair_failures;
            continue;
        }
        const double step = target_len / std::sqrt(gll);
        auto w0 = sp.chart.free_values(sp.p);
        auto w1 = w0;
        w1[0] += step;
        try {
            const AmbientPoint q =
                sp.chart.at(std::span<const cplx>(w1.data(), static_cast<size_t>(sp.chart.nfree)), &sp.p);
            const double rho_q = ambient_rho(q);
            if (!(rho_q > cfg.P)) throw DomainError("partner below P");
            const double w_q = weight_w(q, cfg);
            NormSamplePoint sq{q, sp.chart};
            const double mag_q = derivative_magnitude(spec.k, f, sq, g(q), fdc);
            const double Tp = std::pow(rho, -spec.delta + spec.k) * std::pow(w, -spec.tau + spec.k) * kth_mag;
            const double Tq =
                std::pow(rho_q, -spec.delta + spec.k) * std::pow(w_q, -spec.tau + spec.k) * mag_q;
            // Segment length under g at the base point (first-order).
            const double dist = step * std::sqrt(gll);
            const double holder =
                std::pow(rho, spec.holder) * std::pow(w, spec.holder) * std::abs(Tp - Tq) /
                std::pow(dist, spec.holder);
            best = std::max(best, holder);
        } catch (const std::exception&) {
            ++pair_failures;
        }
    }
    if (pair_failures * 5 > static_cast<int>(samples.size()))
        throw SamplingError("weighted_norm_estimate: insufficient Holder pair density");
    return best;
}

double equation_perturbation_magnitude(RegionLabel region, double D, double K, double b,
                                       const GluingConfig& cfg) {
    if (!(D > 0)) throw DomainError("equation_perturbation_magnitude: D must be positive");
    const int d = cfg.d;
    const double ra = std::pow(D, cfg.alpha_glue);
    const double rd = std::pow(D, 1.0 / d);
    auto require = [](bool ok, const char* what) {
        if (!ok) throw DomainError(std::string("equation_perturbation_magnitude: inconsistent (region, D, K): ") + what);
    };
    switch (region) {
        case RegionLabel::AwaySingular:
            return std::abs(b) * ipow(D, 2 - d);
        case RegionLabel::Intermediate:
            require(K > 0 && K < cfg.kappa * D && K / 2.0 > 2.0 * ra, "II needs K < kappa D and K/2 > 2 D^alpha");
            return std::abs(b) * ipow(K, 2 - d);
        case RegionLabel::GluingBand:
            require(K > ra && K < 2.0 * ra, "III needs K in (D^alpha, 2 D^alpha)");
            return std::abs(b) * ipow(K, 2 - d);
        case RegionLabel::InnerCone:
            require(K > cfg.kappa * rd && K < ra / 2.0, "IV needs K in (kappa D^{1/d}, D^alpha/2)");
            return std::abs(b) * ipow(K, 2 - d);
        case RegionLabel::NearSingular:
            return std::abs(b) * std::pow(D, static_cast<double>(2 - d) / d);
        case RegionLabel::Core:
            throw DomainError("equation_perturbation_magnitude: no core-region estimate");
    }
    throw DomainError("equation_perturbation_magnitude: unknown region");
}

double cone_gauge_constant() { return -2.0 * std::log(1.5); }

CMat cone_potential_metric(const Chart& chart, const AmbientPoint& p) {
    ScalarJet jet = r2_a2_jet(p);
    jet.hess.at(kZ, kZ) += 1.0;  // |z|^2 block
    const int n = chart.nfree;
    CMat J(4);  // ambient rows, chart columns (only first n columns used)
    std::array<cplx, 4> grad{};
    cplx fsolved = 1.0;
    if (chart.solved >= 0) {
        grad = chart.surface.gradient(p);
        fsolved = grad[static_cast<size_t>(chart.solved)];
        if (std::abs(fsolved) < 1e-300) throw ChartError("cone_potential_metric: degenerate chart");
    }
    for (int c = 0; c < n; ++c) {
        const int fc = chart.free_idx[static_cast<size_t>(c)];
        J.at(fc, c) = 1.0;
        if (chart.solved >= 0) J.at(chart.solved, c) = -grad[static_cast<size_t>(fc)] / fsolved;
    }
    CMat H(n);
    for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb) {
            cplx s = 0;
            for (int j = 0; j < 4; ++j) {
                if (J.at(j, a) == cplx(0.0)) continue;
                for (int k = 0; k < 4; ++k) {
                    if (J.at(k, bb) == cplx(0.0)) continue;
                    s += jet.hess.at(j, k) * J.at(j, a) * std::conj(J.at(k, bb));
                }
            }
            H.at(a, bb) = s;
        }
    H.hermitize();
    return H;
}

CMat glued_metric(const Chart& chart, const AmbientPoint& p, const GluingConfig& cfg, const FDConfig& fdc) {
    CMat g = cone_potential_metric(chart, p);
    if (cfg.psi_c != 0.0) {
        const double s_arg = ambient_R(p) * std::pow(ambient_rho(p), -cfg.alpha_glue);
        if (s_arg < 2.5) {
            auto corr = [&cfg](const AmbientPoint& q) { return glue_correction(q, cfg); };
            g = g + ddbar(corr, chart, p, fdc);
            g.hermitize();
        }
    }
    return g;
}

std::vector<ResidualRow> ricci_residual_map(const HypersurfaceFamily& X, const GluingConfig& cfg,
                                            const std::vector<AmbientPoint>& samples, const FDConfig& fdc,
                                            int workers, const std::vector<double>* design_rho) {
    const SurfacePoly source = SurfacePoly::x_ab(X.a, 0.0);  // samples live on X_{a,0}
    const bool deformed = X.b != cplx(0.0);
    const SurfacePoly target = X.poly();
    const VolumeFormSpec omega = VolumeFormSpec::x_ab();
    const double gauge = cone_gauge_constant();
    if (design_rho && design_rho->size() != samples.size())
        throw DomainError("ricci_residual_map: design_rho size mismatch");

    std::vector<ResidualRow> rows(samples.size());
    par::for_each(static_cast<std::int64_t>(samples.size()), [&](std::int64_t i) {
        const AmbientPoint& p = samples[static_cast<size_t>(i)];
        ResidualRow row;
        row.p = p;
        row.rho = design_rho ? (*design_rho)[static_cast<size_t>(i)] : ambient_rho(p);
        row.R = ambient_R(p);
        row.region = region_classify(row.rho, row.R, cfg);
        try {
            const Chart chart = build_chart(p, source);
            const CMat g = glued_metric(chart, p, cfg, fdc);
            cplx coeff = volume_form_coeff(p, chart, omega);
            if (deformed) coeff *= pullback_volume_ratio(p, chart, omega, target, omega, fdc);
            row.h = ricci_potential_from(g, coeff);
            row.h_minus_gauge = row.h - gauge;
        } catch (const std::exception& e) {
            row.failed = true;
            row.note = e.what();
        }
        rows[static_cast<size_t>(i)] = row;
    }, workers);

    int failures = 0;
    for (const auto& r : rows) failures += r.failed ? 1 : 0;
    if (failures * 5 > static_cast<int>(rows.size()))
        throw ExperimentError("ricci_residual_map: more than 20% chart failures");
    return rows;
}

double nonlinear_remainder(const CMat& g, const CMat& H) {
    const CMat A = inverse(g) * H;
    const CMat M = CMat::identity(g.n) + A;
    const cplx det = determinant(M);
    if (!(det.real() > 0) || std::abs(det.imag()) > 1e-8 * det.real())
        throw MetricDegeneracyError("nonlinear_remainder: perturbed metric not positive");
    return std::log(det.real()) - trace(A).real();
}

NonlinearSplitResult nonlinear_split_check(const std::vector<NonlinearSample>& samples,
                                           const std::vector<double>& epsilons) {
    NonlinearSplitResult out;
    std::vector<std::pair<double, double>> sweep;
    for (const double eps : epsilons) {
        double sup = 0;
        for (const auto& s : samples) {
            try {
                if (form_norm(s.hess_u, s.g) >= 0.1) continue;
                sup = std::max(sup, std::abs(nonlinear_remainder(s.g, s.hess_u.scaled(eps))));
            } catch (const MetricDegeneracyError&) {
                continue;
            }
        }
        sweep.emplace_back(eps, sup);
    }
    out.order_fit = fit_loglog(sweep);

    for (const auto& s : samples) {
        try {
            const double nu = form_norm(s.hess_u, s.g);
            const double nv = form_norm(s.hess_v, s.g);
            if (nu >= 0.1 || nv >= 0.1) {
                ++out.skipped;
                continue;
            }
            const double qu = nonlinear_remainder(s.g, s.hess_u);
            const double qv = nonlinear_remainder(s.g, s.hess_v);

            // Dual-route decomposition residual: Q from its own expansion
            // against F(u) - F(0) - Delta u assembled from separate
            // determinants.
            const cplx det_g = determinant(s.g);
            const cplx det_gu = determinant(s.g + s.hess_u);
            const double route2 = std::log(det_gu.real()) - std::log(det_g.real()) -
                                  trace(inverse(s.g) * s.hess_u).real();
            out.decomposition_residual = std::max(out.decomposition_residual, std::abs(qu - route2));

            const double denom = (nu + nv) * form_norm(s.hess_u - s.hess_v, s.g);
            if (denom > 1e-300) out.max_c = std::max(out.max_c, std::abs(qu - qv) / denom);
            ++out.used;
        } catch (const MetricDegeneracyError&) {
            ++out.skipped;
        }
    }
    return out;
}

ModelComparison model_comparison_away(const std::vector<AmbientPoint>& samples,
                                      const HypersurfaceFamily& X, const GluingConfig& cfg,
                                      const FDConfig& fdc) {
    const SurfacePoly source = X.poly();
    const SurfacePoly cylinder = SurfacePoly::cone_cylinder();
    ModelComparison out;
    for (const auto& p : samples) {
        try {
            const Chart sc = chart_solving(kY, p, source);
            const CMat g = glued_metric(sc, p, cfg, fdc);
            const ProjectionDifferential dG = projection_differential(p, source, cylinder, kY, fdc);
            const ProjectionResult pr = nearest_point(p, cylinder);
            const Chart tc = chart_solving(kY, pr.target, cylinder);
            const CMat g0 = cone_potential_metric(tc, pr.target);
            const RMat S = hermitian_to_real_form(g);
            const RMat T = hermitian_to_real_form(g0);
            const RMat pulled = dG.M.transposed() * T * dG.M;
            out.max_deviation = std::max(out.max_deviation, form_norm(pulled - S, S));
            ++out.used;
        } catch (const std::exception&) {
            ++out.skipped;
        }
    }
    return out;
}

ModelComparison model_comparison_near(const std::vector<AmbientPoint>& samples,
                                      const HypersurfaceFamily& X, const GluingConfig& cfg,
                                      double model_c, const FDConfig& fdc) {
    ModelComparison out;
    const SurfacePoly fiber = SurfacePoly::v_fiber(X.a);  // rescaled fiber target { a + f = 0 } with a = 1
    for (const auto& p : samples) {
        try {
            const cplx z0 = p.z();
            if (z0 == cplx(0.0)) throw DomainError("near comparison needs z0 != 0");
            const cplx t0 = std::pow(z0, 1.0 / 6.0);
            const double scale2 = std::pow(std::abs(z0), -1.0 / 3.0);

            // Rescaled source surface: a z0^{-5/6} zh + b z0^{-2/3} yh + a + f(xh) = 0.
            SurfacePoly rescaled;
            rescaled.nvars = 4;
            rescaled.a = X.a * ipow(t0, -5);
            rescaled.b = X.b * ipow(t0, -4);
            rescaled.c = X.a;

            AmbientPoint phat;
            phat[kZ] = 0.0;
            phat[kX1] = p.x1() / ipow(t0, 3);
            phat[kX2] = p.x2() / ipow(t0, 3);
            phat[kY] = p.y() / ipow(t0, 2);

            auto unrescale = [&](const AmbientPoint& q) {
                AmbientPoint u;
                u[kZ] = z0 + t0 * q.z();
                u[kX1] = ipow(t0, 3) * q.x1();
                u[kX2] = ipow(t0, 3) * q.x2();
                u[kY] = ipow(t0, 2) * q.y();
                return u;
            };

            // Solve the fiber coordinate with the largest gradient at the
            // projected point; shared by source and target charts.
            const ProjectionResult fp = nearest_point(phat, fiber);
            const auto fg = fiber.gradient(fp.target);
            int solve = kX1;
            double bestg = std::abs(fg[kX1]);
            for (int c : {kX2, kY}) {
                if (std::abs(fg[static_cast<size_t>(c)]) > bestg) {
                    bestg = std::abs(fg[static_cast<size_t>(c)]);
                    solve = c;
                }
            }

            const Chart sc = chart_solving(solve, phat, rescaled);
            auto potential_hat = [&](const AmbientPoint& q) {
                return scale2 * approx_potential(unrescale(q), cfg);
            };
            const CMat g_src = ddbar(potential_hat, sc, phat, fdc);

            // Model side: C x V1 with the stand-in fiber correction.
            const Chart tc = chart_solving(solve, fp.target, fiber);
            auto fiber_potential = [&](const AmbientPoint& q) {
                const double r2 = r2_a2(q);
                return std::norm(q.z()) + r2 + model_c / (1.0 + r2);
            };
            const CMat g_fiber2 = ddbar(fiber_potential, tc, fp.target, fdc);  // 2x2 fiber block
            // Assemble the product metric on the source chart slot order.
            CMat g_model(3);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const int ca = sc.free_idx[static_cast<size_t>(a)];
                    const int cb = sc.free_idx[static_cast<size_t>(b)];
                    if (ca == kZ && cb == kZ) {
                        g_model.at(a, b) = 1.0;
                    } else if (ca != kZ && cb != kZ) {
                        int fa = -1, fb = -1;
                        for (int t = 0; t < tc.nfree; ++t) {
                            if (tc.free_idx[static_cast<size_t>(t)] == ca) fa = t;
                            if (tc.free_idx[static_cast<size_t>(t)] == cb) fb = t;
                        }
                        g_model.at(a, b) = g_fiber2.at(fa, fb);
                    } else {
                        g_model.at(a, b) = 0.0;
                    }
                }

            // Differential of H: identity on zh, fiber projection on xh.
            const auto w0 = sc.free_values(phat);
            auto disp = [&](const std::array<cplx, 3>& w) {
                const AmbientPoint q = sc.at(std::span<const cplx>(w.data(), 3), &phat);
                AmbientPoint qf = q;
                qf[kZ] = 0.0;
                const ProjectionResult r = nearest_point(qf, fiber);
                std::array<cplx, 3> d{};
                for (int i = 0; i < 3; ++i) {
                    const int ci = sc.free_idx[static_cast<size_t>(i)];
                    d[static_cast<size_t>(i)] = ci == kZ ? cplx(0.0) : r.delta[static_cast<size_t>(ci)];
                }
                return d;
            };
            RMat E(6);
            for (int j = 0; j < 3; ++j) {
                const double h = fdc.rel_step * std::max(1.0, std::abs(w0[static_cast<size_t>(j)]));
                for (int d = 0; d < 2; ++d) {
                    auto wp = w0, wm = w0;
                    const cplx step = d == 0 ? cplx(h, 0) : cplx(0, h);
                    wp[static_cast<size_t>(j)] += step;
                    wm[static_cast<size_t>(j)] -= step;
                    const auto dp = disp(wp);
                    const auto dm = disp(wm);
                    for (int i = 0; i < 3; ++i) {
                        const cplx de = (dp[static_cast<size_t>(i)] - dm[static_cast<size_t>(i)]) / (2.0 * h);
                        E.at(i, d == 0 ? j : 3 + j) = de.real();
                        E.at(3 + i, d == 0 ? j : 3 + j) = de.imag();
                    }
                }
            }
            const RMat M = RMat::identity(6) + E;
            const RMat S = hermitian_to_real_form(g_src);
            const RMat T = hermitian_to_real_form(g_model);
            const RMat pulled = M.transposed() * T * M;
            out.max_deviation = std::max(out.max_deviation, form_norm(pulled - S, S));
            ++out.used;
        } catch (const std::exception&) {
            ++out.skipped;
        }
    }
    return out;
}

}  // namespace cylab
