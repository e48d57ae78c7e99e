#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylab/gluing.hpp"
#include "cylab/sampling.hpp"

using namespace cylab;

TEST_CASE("cutoff partition") {
    CHECK(cutoff_gamma1(0.5) == 0.0);
    CHECK(cutoff_gamma1(3.0) == 1.0);
    const double mid = cutoff_gamma1(1.5);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    CHECK(cutoff_gamma1(1.5) + cutoff_gamma2(1.5) == 1.0);
    // Monotone.
    double prev = 0;
    for (int i = 0; i <= 100; ++i) {
        const double v = cutoff_gamma1(1.0 + i / 100.0);
        CHECK(v >= prev);
        prev = v;
    }
    const double slope = cutoff_gamma1_max_slope();
    CHECK(slope > 1.0);
    CHECK(slope < 3.0);  // ~2 at the midpoint of this bump pair
}

TEST_CASE("glued potential collapses for c = 0") {
    GluingConfig cfg;
    cfg.psi_c = 0.0;
    const HypersurfaceFamily X1(1.0, 0.0);
    for (int i = 0; i < 40; ++i) {
        const AmbientPoint dir = unit_cone_direction(71, static_cast<uint64_t>(i));
        const double R = uniform(71, static_cast<uint64_t>(i), 5, 2e3, 1e6);
        const AmbientPoint p = central_fiber_point(X1, dir, R);
        const double expect = std::norm(p.z()) + r2_a2(p);
        CHECK(std::abs(approx_potential(p, cfg) - expect) <= 1e-12 * expect);
    }
    CHECK_THROWS_AS(approx_potential(AmbientPoint(1.0, 1.0, 0.0, 0.0), cfg), DomainError);

    // For c != 0: gamma2 = 0 far from the rays leaves |z|^2 + r^2; deep near
    // the ray the correction is c |z|^{2/3}/(|z|^{1/3} + r^2).
    cfg.psi_c = 1.0;
    const AmbientPoint far = central_fiber_point(X1, unit_cone_direction(73, 0), 1e5);
    CHECK(glue_correction(far, cfg) == 0.0);
    const AmbientPoint xh = v_fiber_point(unit_cone_direction(73, 1), 1.0);
    const AmbientPoint near = family_fiber_point(X1, cplx(1e5, 3e4), xh);
    const double az13 = std::cbrt(std::abs(near.z()));
    const double expect_corr = az13 * az13 / (az13 + r2_a2(near));
    CHECK(glue_correction(near, cfg) == doctest::Approx(expect_corr).epsilon(1e-12));
}

TEST_CASE("region classification") {
    GluingConfig cfg;
    const double rho = std::pow(2.0, 20);
    CHECK(region_classify(rho, rho, cfg) == RegionLabel::AwaySingular);
    CHECK(region_classify(rho, 1.5 * std::pow(rho, 0.9), cfg) == RegionLabel::GluingBand);
    CHECK(region_classify(rho, std::pow(rho, 1.0 / 6.0), cfg) == RegionLabel::NearSingular);
    CHECK(region_classify(0.5 * cfg.P, 1.0, cfg) == RegionLabel::Core);

    // Partition property: every point of a dense (rho, R) grid gets exactly
    // one label and the five labels tile by descending thresholds.
    int counts[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 400; ++i)
        for (int j = 0; j < 250; ++j) {
            const double r = cfg.P * std::pow(10.0, 8.0 * (i + 1) / 400.0);
            const double R = std::pow(10.0, -2.0 + (2.0 + std::log10(r)) * j / 249.0);
            counts[static_cast<int>(region_classify(r, R, cfg))]++;
        }
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] + counts[4] + counts[5] == 400 * 250);
    CHECK(counts[0] > 0);
    CHECK(counts[2] > 0);
    CHECK(counts[3] > 0);
    CHECK(counts[4] > 0);
    CHECK(counts[5] == 0);  // grid starts above P
    // Region II is populated once kappa rho > 4 rho^alpha, i.e. rho > 8^10.
    CHECK(region_classify(1e10, 4.5e9, cfg) == RegionLabel::Intermediate);
}

TEST_CASE("weight function branches") {
    GluingConfig cfg;  // kappa = 1/2
    const double rho = 1e5;
    CHECK(weight_w(rho, 4.0 * cfg.kappa * rho, cfg) == 1.0);
    const double Rnear = 0.25 * (1.0 / cfg.kappa) * std::pow(rho, 1.0 / 6.0);
    CHECK(weight_w(rho, Rnear, cfg) ==
          doctest::Approx(4.0 * std::pow(rho, -5.0 / 6.0)).epsilon(1e-12));
    // Middle branch is exact between the blend bands.
    const double Rmid = 0.1 * cfg.kappa * rho;
    CHECK(weight_w(rho, Rmid, cfg) == doctest::Approx(Rmid / (cfg.kappa * rho)).epsilon(1e-12));

    // Codomain (0, 1] and mid-band values between adjacent branch values.
    for (int i = 0; i <= 2000; ++i) {
        const double R = std::pow(10.0, -1.0 + 6.2 * i / 2000.0);
        const double w = weight_w(rho, R, cfg);
        CHECK(w > 0.0);
        CHECK(w <= 1.0);
    }
    // Upper blend: between R/(kappa rho) and 1.
    const double Rb = 0.75 * cfg.kappa * rho;
    const double wb = weight_w(rho, Rb, cfg);
    CHECK(wb >= Rb / (cfg.kappa * rho));
    CHECK(wb <= 1.0);
    // Lower blend: between the near-ray constant and the middle branch.
    const double Rc = 0.75 * (1.0 / cfg.kappa) * std::pow(rho, 1.0 / 6.0);
    const double wc = weight_w(rho, Rc, cfg);
    const double wnear = std::pow(rho, 1.0 / 6.0 - 1.0) / (cfg.kappa * cfg.kappa);
    CHECK(wc <= wnear * (1.0 + 1e-12));
    CHECK(wc >= Rc / (cfg.kappa * rho) * (1.0 - 1e-12));
}

TEST_CASE("equation perturbation magnitudes") {
    GluingConfig cfg;
    CHECK(equation_perturbation_magnitude(RegionLabel::AwaySingular, 1024.0, 0.0, 1.0, cfg) ==
          doctest::Approx(std::pow(2.0, -40)).epsilon(1e-14));
    CHECK(equation_perturbation_magnitude(RegionLabel::NearSingular, 4096.0, 0.0, 1.0, cfg) ==
          doctest::Approx(std::pow(2.0, -8)).epsilon(1e-14));
    CHECK(equation_perturbation_magnitude(RegionLabel::AwaySingular, 64.0, 0.0, 0.0, cfg) == 0.0);
    // K-band consistency checks.
    CHECK_THROWS_AS(
        equation_perturbation_magnitude(RegionLabel::GluingBand, 1024.0, 1.0, 1.0, cfg),
        DomainError);
    const double D = 1024.0, K = 1.4 * std::pow(D, cfg.alpha_glue);
    CHECK(equation_perturbation_magnitude(RegionLabel::GluingBand, D, K, 2.0, cfg) ==
          doctest::Approx(2.0 * std::pow(K, -4.0)).epsilon(1e-13));
}

TEST_CASE("weighted norm estimate calibration and algebra") {
    GluingConfig cfg;
    const HypersurfaceFamily X1(1.0, 0.0);
    std::vector<NormSamplePoint> samples;
    for (int i = 0; i < 25; ++i) {
        const AmbientPoint dir = unit_cone_direction(83, static_cast<uint64_t>(i));
        const double R = uniform(83, static_cast<uint64_t>(i), 3, 3e3, 3e5);
        const AmbientPoint p = central_fiber_point(X1, dir, R);
        samples.push_back({p, chart_solving(kY, p, X1.poly())});
    }
    auto metric = [&](const AmbientPoint& p) {
        // Evaluated on the matching chart of each sample; rebuilt per point.
        const Chart c = chart_solving(kY, p, SurfacePoly::x_ab(1.0, 0.0));
        return cone_potential_metric(c, p);
    };

    WeightedNormSpec spec;
    spec.delta = cfg.delta;
    spec.tau = cfg.tau;
    spec.k = 0;

    auto calib = [&](const AmbientPoint& p) {
        return std::pow(ambient_rho(p), spec.delta) * std::pow(weight_w(p, cfg), spec.tau);
    };
    const double est = weighted_norm_estimate(calib, metric, samples, spec, cfg);
    CHECK(est == doctest::Approx(1.0).epsilon(0.2));

    // A strictly lighter radial weight drives the estimate down as the grid
    // radius grows.
    auto lighter = [&](const AmbientPoint& p) { return std::pow(ambient_rho(p), spec.delta - 0.5); };
    const double est_light = weighted_norm_estimate(lighter, metric, samples, spec, cfg);
    CHECK(est_light < 0.1);

    // Norm algebra on identical samples: product bound and monotonicity in
    // both weights.
    auto f = [](const AmbientPoint& p) { return std::cos(0.1 * p.y().real()) * std::pow(ambient_rho(p), -0.4); };
    auto g = [](const AmbientPoint& p) { return 1.0 / (1.0 + std::pow(ambient_rho(p), 0.2)); };
    auto fg = [&](const AmbientPoint& p) { return f(p) * g(p); };
    WeightedNormSpec sa{-0.4, -0.1, 0, 0.5}, sb{-0.2, -0.1, 0, 0.5};
    WeightedNormSpec sum{-0.6, -0.2, 0, 0.5};
    const double nf = weighted_norm_estimate(f, metric, samples, sa, cfg);
    const double ng = weighted_norm_estimate(g, metric, samples, sb, cfg);
    const double nfg = weighted_norm_estimate(fg, metric, samples, sum, cfg);
    CHECK(nfg <= nf * ng * (1.0 + 1e-9));

    WeightedNormSpec smaller_delta{-0.5, -0.1, 0, 0.5};
    CHECK(weighted_norm_estimate(f, metric, samples, smaller_delta, cfg) >=
          weighted_norm_estimate(f, metric, samples, sa, cfg) * (1.0 - 1e-9));
    WeightedNormSpec bigger_tau{-0.4, -0.05, 0, 0.5};
    // tau' = -0.05 > tau = -0.1: since w <= 1, larger tau gives a larger
    // estimate (||.||_{a,b} <= ||.||_{a,d} for b < d).
    CHECK(weighted_norm_estimate(f, metric, samples, sa, cfg) <=
          weighted_norm_estimate(f, metric, samples, bigger_tau, cfg) * (1.0 + 1e-9));
}

TEST_CASE("kahler positivity of the glued form") {
    GluingConfig cfg;
    cfg.psi_c = 1.0;
    const HypersurfaceFamily X1(1.0, 0.0);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        AmbientPoint p;
        if (i % 2 == 0) {
            p = central_fiber_point(X1, unit_cone_direction(91, static_cast<uint64_t>(i)),
                                    uniform(91, static_cast<uint64_t>(i), 2, 2e3, 1e6));
        } else {
            const AmbientPoint xh = v_fiber_point(unit_cone_direction(91, static_cast<uint64_t>(i)),
                                                  uniform(91, static_cast<uint64_t>(i), 3, 1.0, 30.0));
            p = family_fiber_point(X1, std::polar(uniform(91, static_cast<uint64_t>(i), 4, 2e3, 1e6), 0.7), xh);
        }
        if (ambient_rho(p) <= cfg.P) continue;
        const Chart chart = build_chart(p, X1.poly());
        const CMat g = glued_metric(chart, p, cfg);
        const auto ev = hermitian_eigenvalues(g);
        CHECK(ev[0] > 0.0);
        ++checked;
    }
    CHECK(checked >= 50);
}

TEST_CASE("laplacian perturbation bound") {
    // |Delta_b u - Delta u| <= C (|grad(g_b - g)||grad u| + |g_b - g||hess u|)
    // with measured C < 5; g_b from the potential composed with the
    // projection to the b-deformed surface.
    GluingConfig cfg;
    const HypersurfaceFamily X1(1.0, 0.0);
    const SurfacePoly src = X1.poly();
    const SurfacePoly tgt = SurfacePoly::x_ab(1.0, 1.0);
    double worstC = 0;
    int used = 0;
    for (int i = 0; i < 12 && used < 10; ++i) {
        const AmbientPoint dir = unit_cone_direction(95, static_cast<uint64_t>(i));
        const AmbientPoint p = central_fiber_point(X1, dir, 3e3);
        const Chart chart = chart_solving(kY, p, src);
        auto phi = [&](const AmbientPoint& q) { return approx_potential(q, cfg); };
        auto phi_b = [&](const AmbientPoint& q) {
            return approx_potential(nearest_point(q, tgt).target, cfg);
        };
        const CMat g = ddbar(phi, chart, p);
        const CMat gb = ddbar(phi_b, chart, p);
        auto u = [&](const AmbientPoint& q) {
            const auto w = chart.free_values(q);
            double e = 0;
            for (int j = 0; j < 3; ++j)
                e += std::norm(w[static_cast<size_t>(j)] - chart.free_values(p)[static_cast<size_t>(j)]) /
                     std::max(1.0, std::norm(chart.free_values(p)[static_cast<size_t>(j)]));
            return std::exp(-e);
        };
        const CMat Hu = ddbar(u, chart, p);
        const double lap = trace(inverse(g) * Hu).real();
        const double lap_b = trace(inverse(gb) * Hu).real();

        const double dg = form_norm(gb - g, g);
        const double hu = form_norm(Hu, g);
        // Gradient of the metric difference along the first chart direction.
        const double h = 1e-3 * std::max(1.0, std::abs(chart.free_values(p)[0]));
        auto metric_diff_at = [&](cplx off) {
            auto w = chart.free_values(p);
            w[0] += off;
            const AmbientPoint q = chart.at(std::span<const cplx>(w.data(), 3), &p);
            return ddbar(phi_b, chart, q) - ddbar(phi, chart, q);
        };
        const CMat gplus = metric_diff_at(h);
        const CMat gminus = metric_diff_at(-h);
        const double grad_dg = form_norm((gplus - gminus).scaled(1.0 / (2.0 * h)), g);
        auto gradu = fd_gradient(u, chart, p);
        double gu = 0;
        for (int j = 0; j < 3; ++j) gu += std::norm(gradu[static_cast<size_t>(j)]);
        gu = 2.0 * std::sqrt(gu);

        const double lhs = std::abs(lap_b - lap);
        const double rhs = grad_dg * gu + dg * hu;
        if (rhs > 1e-14) {
            worstC = std::max(worstC, lhs / rhs);
            ++used;
        }
    }
    CHECK(used >= 5);
    CHECK(worstC < 5.0);
}

TEST_CASE("nonlinear remainder identities") {
    CMat g = CMat::identity(3);
    g.at(0, 0) = 2.0;
    g.at(1, 1) = 0.7;
    CMat H(3);
    H.at(0, 1) = cplx(0.01, 0.02);
    H.at(1, 0) = cplx(0.01, -0.02);
    H.at(2, 2) = 0.03;
    CHECK(nonlinear_remainder(g, CMat(3)) == 0.0);
    // Quadratic leading term: Q(eps H) / eps^2 -> -tr((g^{-1}H)^2)/2.
    const CMat A = inverse(g) * H;
    const double lead = -0.5 * trace(A * A).real();
    const double q1 = nonlinear_remainder(g, H.scaled(1e-3)) / 1e-6;
    CHECK(q1 == doctest::Approx(lead).epsilon(1e-2));
}

TEST_CASE("model comparisons") {
    GluingConfig cfg;
    const HypersurfaceFamily X1(1.0, 0.0);

    // Away: deviation decreases in D; exact cone input gives ~0.
    std::vector<AmbientPoint> lo, hi;
    for (int i = 0; i < 4; ++i) {
        const AmbientPoint dir = unit_cone_direction(97, static_cast<uint64_t>(i));
        lo.push_back(central_fiber_point(X1, dir, 1024.0 * (1.0 + 0.1 * i)));
        hi.push_back(central_fiber_point(X1, dir, 1048576.0 * (1.0 + 0.1 * i)));
    }
    const ModelComparison mlo = model_comparison_away(lo, X1, cfg);
    const ModelComparison mhi = model_comparison_away(hi, X1, cfg);
    CHECK(mlo.used == 4);
    CHECK(mhi.used == 4);
    CHECK(mhi.max_deviation < mlo.max_deviation);

    // Near: with a consistent stand-in the deviation is small; with a
    // mismatched one it plateaus at the stand-in's size.
    std::vector<AmbientPoint> nearpts;
    for (int i = 0; i < 3; ++i) {
        const AmbientPoint xh = v_fiber_point(unit_cone_direction(99, static_cast<uint64_t>(i)), 1.2);
        nearpts.push_back(family_fiber_point(X1, std::polar(3e4 * (i + 1.0), 0.2), xh));
    }
    const ModelComparison consistent = model_comparison_near(nearpts, X1, cfg, cfg.psi_c);
    const ModelComparison mismatched = model_comparison_near(nearpts, X1, cfg, 1.0);
    CHECK(consistent.used == 3);
    CHECK(mismatched.used == 3);
    CHECK(consistent.max_deviation < 0.05);
    CHECK(mismatched.max_deviation > 2.0 * consistent.max_deviation);
}
