#include <cmath>
#include <functional>

#include "cylab/ale.hpp"
#include "cylab/embeddings.hpp"
#include "cylab/harmonic.hpp"
#include "cylab/parallel.hpp"
#include "cylab/sampling.hpp"
#include "experiments_impl.hpp"

namespace cylab {

namespace {

std::vector<Vec3> ale_directions() {
    std::vector<Vec3> dirs = {{1.0, 0.0, 0.3},  {0.6, 0.8, 0.2},   {0.5, -0.5, 0.7},
                              {-0.8, 0.1, 0.55}, {0.2, -0.9, -0.4}, {-0.3, 0.4, -0.85}};
    for (auto& d : dirs) {
        const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        for (auto& c : d) c /= n;
    }
    return dirs;
}

}  // namespace

// ---------------------------------------------------------- projection ----

ExperimentOutcome run_projection_experiment(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/projection.csv");
    csv.comment("nearest-point displacements and pulled-back structure errors");
    csv.header({"kind", "rho", "value"});

    const double b = cfg.b;
    const HypersurfaceFamily X1(1.0, 0.0);
    const SurfacePoly src = X1.poly();
    const SurfacePoly tgt = SurfacePoly::x_ab(1.0, b);
    const GluingConfig& glue = cfg.glue;

    const auto radii = geometric_radii(cfg.radii_min > 0 ? cfg.radii_min : 4096.0,
                                       cfg.radii_max > 0 ? cfg.radii_max : 4194304.0,
                                       cfg.radii_count > 0 ? cfg.radii_count : 11);

    // Region I sweep along central-fiber rays. The design radius R is the
    // abscissa: every fitted quantity is independent of the z coordinate,
    // whose stored value is representation noise on the central fiber.
    std::vector<std::pair<double, double>> disp_pts, j_pts, vol_pts;
    double worst_stat = 0, worst_j2 = 0;
    for (int d = 0; d < 2; ++d) {
        const AmbientPoint dir = unit_cone_direction(cfg.seed, static_cast<uint64_t>(d));
        for (const double R : radii) {
            const AmbientPoint p = central_fiber_point(X1, dir, R);
            const double rho = R;
            const ProjectionResult pr = nearest_point(p, tgt);
            worst_stat = std::max(worst_stat, pr.stationarity);
            disp_pts.emplace_back(rho, pr.displacement);
            csv.row({"displacement-I", fmt(rho), fmt(pr.displacement)});

            const Chart sc = chart_solving(kY, p, src);
            const CMat g = glued_metric(sc, p, glue);
            const double jerr = complex_structure_error(p, src, tgt, kY, g);
            j_pts.emplace_back(rho, jerr);
            csv.row({"jerror-I", fmt(rho), fmt(jerr)});

            const cplx ratio = pullback_volume_ratio(p, sc, VolumeFormSpec::x_ab(), tgt,
                                                     VolumeFormSpec::x_ab());
            vol_pts.emplace_back(rho, std::abs(ratio - cplx(1.0)));
            csv.row({"volratio-I", fmt(rho), fmt(std::abs(ratio - cplx(1.0)))});

            const ProjectionDifferential dG = projection_differential(p, src, tgt, kY);
            const RMat Jb = pulled_back_complex_structure(dG);
            const RMat shouldbe = Jb * Jb + RMat::identity(6);
            worst_j2 = std::max(worst_j2, shouldbe.frobenius());
        }
    }
    const DecayFit disp_fit = fit_loglog(disp_pts);
    const DecayFit j_fit = fit_loglog(j_pts);
    const DecayFit vol_fit = fit_loglog(vol_pts);
    claims.add("region I displacement decays with slope <= -3 (equation offset b rho^{2-d} in metric length)",
               fit_json(disp_fit), disp_fit.slope <= -2.95 && disp_fit.decades() >= 3.0);
    claims.add("region I |J_b - J| decays with slope <= -3 over >= 3 decades",
               fit_json(j_fit), j_fit.slope <= -3.0 && j_fit.decades() >= 3.0);
    claims.add("region I |Omega_b/Omega - 1| decays with slope <= -3", fit_json(vol_fit),
               vol_fit.slope <= -3.0);
    claims.add("first-order optimality angle residual <= 1e-8", Json{{"max", worst_stat}},
               worst_stat <= 1e-8);
    claims.add("J_b^2 = -Id to 1e-7", Json{{"max_frobenius", worst_j2}}, worst_j2 < 1e-7);

    // Region V sweep along a bounded fiber direction.
    std::vector<std::pair<double, double>> jv_pts;
    {
        const AmbientPoint xh = v_fiber_point(unit_cone_direction(cfg.seed + 1, 0), 1.0);
        for (const double R : radii) {
            const AmbientPoint p = family_fiber_point(X1, std::polar(R, 0.37), xh);
            const double rho = R;
            const Chart sc = chart_solving(kY, p, src);
            const CMat g = glued_metric(sc, p, glue);
            const double jerr = complex_structure_error(p, src, tgt, kY, g);
            jv_pts.emplace_back(rho, jerr);
            csv.row({"jerror-V", fmt(rho), fmt(jerr)});
        }
    }
    const DecayFit jv_fit = fit_loglog(jv_pts);
    claims.add("region V |J_b - J| decays with slope in [-1.2, -0.3] (rho^{delta - 2/d} family)",
               fit_json(jv_fit), jv_fit.slope >= -1.2 && jv_fit.slope <= -0.3);

    // Identity, idempotency and b-scaling checks at a moderate point.
    {
        const AmbientPoint dir = unit_cone_direction(cfg.seed + 2, 0);
        const AmbientPoint p = central_fiber_point(X1, dir, 2e3);
        const ProjectionResult self = nearest_point(p, src);
        claims.add("projection onto the source surface is the identity",
                   Json{{"displacement", self.displacement}}, self.displacement < 1e-10);

        const ProjectionResult pr = nearest_point(p, tgt);
        const ProjectionResult again = nearest_point(pr.target, tgt);
        claims.add("projection is idempotent: re-projecting moves < 1e-10",
                   Json{{"displacement", again.displacement}}, again.displacement < 1e-10);

        double prev = -1.0;
        bool monotone = true;
        Json seq = Json::array();
        for (double bb : {0.0, 0.5, 1.0, 2.0}) {
            const ProjectionResult r = nearest_point(p, SurfacePoly::x_ab(1.0, bb));
            seq.push_back(r.displacement);
            if (r.displacement + 1e-18 < prev) monotone = false;
            prev = r.displacement;
        }
        claims.add("displacement is monotone in |b| over {0, 1/2, 1, 2}", Json{{"values", seq}},
                   monotone);

        const double d1 = nearest_point(p, SurfacePoly::x_ab(1.0, 1e-6)).displacement / 1e-6;
        const double d2 = nearest_point(p, SurfacePoly::x_ab(1.0, 2e-6)).displacement / 2e-6;
        claims.add("displacement is linear in b to 1% at fixed source point",
                   Json{{"ratio", d1 / d2}}, std::abs(d1 / d2 - 1.0) < 0.01);

        const Chart scY = chart_solving(kY, p, src);
        const Chart scX1 = chart_solving(kX1, p, src);
        const cplx r0 = pullback_volume_ratio(p, scY, VolumeFormSpec::x_ab(), src,
                                              VolumeFormSpec::x_ab());
        claims.add("b = 0 volume pullback ratio is 1 to 1e-10",
                   Json{{"abs_err", std::abs(r0 - cplx(1.0))}}, std::abs(r0 - cplx(1.0)) < 1e-10);
        const cplx rA = pullback_volume_ratio(p, scY, VolumeFormSpec::x_ab(), tgt,
                                              VolumeFormSpec::x_ab());
        const cplx rB = pullback_volume_ratio(p, scX1, VolumeFormSpec::x_ab(), tgt,
                                              VolumeFormSpec::x_ab());
        claims.add("volume pullback ratio agrees across charts to 1e-7",
                   Json{{"abs_diff", std::abs(rA - rB)}},
                   std::abs(rA - rB) < 1e-7 * (1.0 + std::abs(rA)));

        ProjectionOptions probe;
        probe.multi_seed_probe = true;
        int suspects = 0;
        for (int i = 0; i < 5; ++i) {
            const AmbientPoint q =
                central_fiber_point(X1, unit_cone_direction(cfg.seed + 3, static_cast<uint64_t>(i)), 3e3);
            if (nearest_point(q, tgt, probe).multi_minimum_suspect) ++suspects;
        }
        claims.add("multi-seed probe: distinct minima detected (reported)",
                   Json{{"suspects", suspects}}, true);
    }

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "projection"},
                       {"config", config_echo(cfg)},
                       {"fits",
                        Json{{"displacement_I", fit_json(disp_fit)},
                             {"jerror_I", fit_json(j_fit)},
                             {"jerror_V", fit_json(jv_fit)},
                             {"volratio_I", fit_json(vol_fit)}}},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

// ---------------------------------------------------------- embeddings ----

ExperimentOutcome run_embeddings_experiment(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/embeddings.csv");
    csv.comment("special-embedding rescaling dynamics and the scale-normalized invariant");
    csv.header({"i", "a", "b", "invariant"});

    EmbeddingState s{0, 1.0, 1.0};
    const double inv0 = invariant_b(s);
    bool exact_ratios = true;
    double max_inv_dev = 0;
    for (int i = 0; i < 100; ++i) {
        const EmbeddingState next = rescale_step(s);
        if (s.a / next.a != 32.0 || s.b / next.b != 16.0) exact_ratios = false;
        csv.row({std::to_string(s.i), fmt(s.a), fmt(s.b), fmt(invariant_b(s))});
        max_inv_dev = std::max(max_inv_dev, std::abs(invariant_b(next) - inv0) / inv0);
        s = next;
    }
    csv.row({std::to_string(s.i), fmt(s.a), fmt(s.b), fmt(invariant_b(s))});

    claims.add("a_i/a_{i+1} = 2^5 and b_i/b_{i+1} = 2^4 exactly at every step",
               Json{{"exact", exact_ratios}}, exact_ratios);
    claims.add("invariant b_i a_i^{-1/2} 2^{3i/2} constant to 1e-12 over 100 steps",
               Json{{"max_rel_dev", max_inv_dev}}, max_inv_dev < 1e-12);
    claims.add("after ten steps a_10 = 2^{-50} exactly",
               Json::object(), [&] {
                   EmbeddingState t{0, 1.0, 1.0};
                   for (int i = 0; i < 10; ++i) t = rescale_step(t);
                   return t.a == 0x1p-50;
               }());
    {
        EmbeddingState z{0, 1.0, 0.0};
        bool stays = true;
        for (int i = 0; i < 50; ++i) {
            z = rescale_step(z);
            stays = stays && z.b == 0.0;
        }
        claims.add("b = 0 stays 0 along the whole sequence", Json::object(), stays);
    }

    // Distinguishing solve.
    {
        const auto same = scaling_constraints_solve(1.0, 1.0);
        const auto diff = scaling_constraints_solve(1.0, 2.0);
        const auto zero = scaling_constraints_solve(0.0, 1.0);
        claims.add("scaling constraints solve: (1,1) -> c = 1; (1,2) and (0,1) -> none",
                   Json{{"c", same ? same->c : -1.0}},
                   same && same->c == 1.0 && !diff && !zero);
        int wrong = 0;
        for (int i = 0; i < 1000; ++i) {
            const double x = uniform(cfg.seed, static_cast<uint64_t>(i), 11, 0.0, 4.0);
            const double y = uniform(cfg.seed, static_cast<uint64_t>(i), 12, 0.0, 4.0);
            const bool some = scaling_constraints_solve(x, y).has_value();
            if (some != (x == y)) ++wrong;
            if (!scaling_constraints_solve(x, x)) ++wrong;
        }
        claims.add("on 1000 random pairs: solvable iff b = b'", Json{{"wrong", wrong}}, wrong == 0);
    }

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "embeddings"},
                       {"config", config_echo(cfg)},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

// -------------------------------------------------------------- milnor ----

ExperimentOutcome run_milnor_experiment(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/milnor.csv");
    csv.comment("Jacobian-ring dimensions for the degeneration families");
    csv.header({"label", "mu", "isolated"});

    const MilnorResult base = milnor_number(QuasiHomogPoly::a2_surface());
    csv.row({"x1^2+x2^2+y^3", std::to_string(base.mu), base.isolated ? "1" : "0"});
    claims.add("mu(x1^2+x2^2+y^3) = 2, matching the product formula (6-3)/3 (6-3)/3 (6-2)/2",
               Json{{"mu", base.mu}}, base.isolated && base.mu == 2);

    const MilnorResult z6 = milnor_number(QuasiHomogPoly::brieskorn({2, 2, 3, 6}));
    csv.row({"x1^2+x2^2+y^3+z^6", std::to_string(z6.mu), z6.isolated ? "1" : "0"});
    claims.add("mu(+z^6) = 10 (Brieskorn count 1*1*2*5)", Json{{"mu", z6.mu}},
               z6.isolated && z6.mu == 10);

    std::vector<long long> zky_mus;
    for (int k = 1; k <= 4; ++k) {
        const DegenResult r = classify_degeneration_zky(k);
        zky_mus.push_back(r.mu);
        csv.row({r.label, std::to_string(r.mu), "1"});
    }
    claims.add("z^k y family: mu = (1, 4, 7, 10) for k = 1..4, all positive",
               Json{{"mu", zky_mus}},
               zky_mus == std::vector<long long>{1, 4, 7, 10});
    claims.add("mu(+zy) = 1 (the Jacobian ideal contains y, then z)", Json{{"mu", zky_mus[0]}},
               zky_mus[0] == 1);

    std::vector<long long> zl_mus;
    for (int l = 2; l <= 6; ++l) {
        const DegenResult r = classify_degeneration_zl(l);
        zl_mus.push_back(r.mu);
        csv.row({r.label, std::to_string(r.mu), "1"});
    }
    claims.add("z^l family: mu = 2(l-1) for l = 2..6, all positive", Json{{"mu", zl_mus}},
               zl_mus == std::vector<long long>{2, 4, 6, 8, 10});

    const DegenResult l1 = classify_degeneration_zl(1);
    csv.row({l1.label, "-", "-"});
    claims.add("l = 1 input is rejected as biholomorphic to C^3", Json{{"label", l1.label}},
               l1.kind == DegenCase::RejectedSmooth);

    const DegenResult cub = classify_degeneration_cubic(cplx(1.0), cplx(1.0));
    csv.row({cub.label, std::to_string(cub.mu), "1"});
    const DegenResult line = classify_degeneration_cubic(cplx(-3.0), cplx(2.0));
    csv.row({line.label, "-", "0"});
    claims.add("cubic case splits on 27b^2+4a^3: isolated for (1,1), line singularity for (-3,2)",
               Json{{"disc_iso", std::abs(cub.discriminant)}, {"disc_line", std::abs(line.discriminant)}},
               cub.kind == DegenCase::CubicIsolated && line.kind == DegenCase::CubicLine);

    // The line-singularity normal form really is non-isolated.
    {
        QuasiHomogPoly vw2;
        vw2.nvars = 4;
        vw2.weights = {2, 2, 2, 1};
        vw2.degree = 4;
        vw2.terms = {{{2, 0, 0, 0}, 1}, {{0, 2, 0, 0}, 1}, {{0, 0, 1, 2}, 1}};
        const MilnorResult m = milnor_number(vw2);
        claims.add("x1^2 + x2^2 + v w^2 is detected as non-isolated", Json::object(), !m.isolated);
    }

    const double secs = seconds_since(t0);
    claims.add("degeneration table runs in < 5 s", Json{{"seconds", secs}}, secs < 5.0);

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "milnor"},
                       {"config", config_echo(cfg)},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

// ----------------------------------------------------------------- ale ----

ExperimentOutcome run_ale_experiment(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/ale.csv");
    csv.comment("Gibbons-Hawking model checks");
    csv.header({"kind", "radius", "value"});

    const auto dirs = ale_directions();

    // One center: flat.
    {
        GHData one;
        one.center_z = {0.0};
        one.fd_rel = 2e-4;
        double worst = 0;
        for (int i = 0; i < 12; ++i) {
            const double r = uniform(cfg.seed, static_cast<uint64_t>(i), 21, 2.0, 10.0);
            const auto& d = dirs[static_cast<size_t>(i) % dirs.size()];
            const double rm = gh_riemann_norm(one, {r * d[0], r * d[1], r * d[2]});
            worst = std::max(worst, rm);
            csv.row({"riemann-1center", fmt(r), fmt(rm)});
        }
        claims.add("one-center model is flat: max |Rm| < 1e-6", Json{{"max", worst}},
                   worst < 1e-6);
    }

    GHData gh;  // default three collinear centers
    std::vector<Vec3> samples;
    for (int i = 0; i < 50; ++i) {
        const double r = uniform(cfg.seed, static_cast<uint64_t>(i), 22, 2.0, 10.0);
        const auto& d = dirs[static_cast<size_t>(i) % dirs.size()];
        samples.push_back({r * d[0], r * d[1], r * d[2]});
    }
    const double res = gh_ricci_residual(gh, samples);
    claims.add("three-center Ricci residual < 1e-4 over 50 samples at radius in (2, 10)",
               Json{{"max", res}}, res < 1e-4);
    csv.row({"ricci-3center", "", fmt(res)});

    {
        GHData fine = gh;
        fine.fd_rel = gh.fd_rel / 2.0;
        const double res2 = gh_ricci_residual(fine, samples);
        const double ratio = res2 / res;
        csv.row({"ricci-3center-halved", "", fmt(res2)});
        claims.add("Ricci residual quarters under step halving (discretization, not geometry)",
                   Json{{"ratio", ratio}}, ratio > 0.15 && ratio < 0.45);
    }

    {
        GHData fine = gh;
        fine.fd_rel = 2e-4;
        double worst = 0;
        for (const auto& x : samples) worst = std::max(worst, gh_monopole_residual(fine, x));
        claims.add("dtheta = *dV to 1e-7 away from the centers", Json{{"max", worst}},
                   worst < 1e-7);
    }

    {
        double worst = 0;
        for (const auto& x : samples) {
            const RMat g = gh_metric(gh, x);
            const double V = gh.potential(x);
            worst = std::max(worst, std::abs(determinant(g) - V * V) / (V * V));
        }
        claims.add("det g = V^2 to 1e-10 (ansatz algebra)", Json{{"max_rel", worst}},
                   worst < 1e-10);
    }

    {
        // Homothety: doubling centers and x with the fiber fixed scales g by 2.
        GHData big = gh;
        for (auto& c : big.center_z) c *= 2.0;
        double worst = 0;
        for (const auto& x : samples) {
            const RMat g = gh_metric(gh, x);
            const RMat G = gh_metric(big, {2.0 * x[0], 2.0 * x[1], 2.0 * x[2]});
            RMat D(4);
            D.at(0, 0) = D.at(1, 1) = D.at(2, 2) = 2.0;
            D.at(3, 3) = 1.0;
            const RMat lhs = D.transposed() * G * D;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    worst = std::max(worst, std::abs(lhs.at(i, j) - 2.0 * g.at(i, j)) /
                                                (std::abs(2.0 * g.at(i, j)) + 1e-12));
        }
        claims.add("doubling center spacing and x is a homothety of factor 2 to 1e-8",
                   Json{{"max_rel", worst}}, worst < 1e-8);
    }

    {
        GHData bad = gh;
        bad.v_extra_quadratic = 0.01;
        double worst = 0;
        for (int i = 0; i < 8; ++i) worst = std::max(worst, gh_ricci_norm(bad, samples[static_cast<size_t>(i)]));
        claims.add("non-harmonic potential control: Ricci residual > 1e-2", Json{{"max", worst}},
                   worst > 1e-2);
    }

    const auto radii = geometric_radii(5.0, 500.0, 10);
    const DecayFit sym = gh_cone_decay_fit(gh, radii, dirs);
    for (double r : radii) {
        GHData cone = gh;
        cone.center_z.assign(gh.center_z.size(), 0.0);
        double dev = 0;
        for (const auto& d : dirs)
            dev = std::max(dev, gh_spatial_block_deviation(gh, cone, {r * d[0], r * d[1], r * d[2]}));
        csv.row({"cone-deviation-sym", fmt(r), fmt(dev)});
    }
    claims.add("potential-block deviation from the coincident-center cone decays with slope <= -3",
               fit_json(sym), sym.slope <= -3.0);

    GHData asym;
    asym.center_z = {0.0, 1.0, 3.0};
    const DecayFit asy = gh_cone_decay_fit(asym, radii, dirs);
    claims.add("symmetric centers (vanishing dipole) decay at least as fast as asymmetric ones",
               Json{{"symmetric", fit_json(sym)}, {"asymmetric", fit_json(asy)}},
               sym.slope <= asy.slope + 0.05);
    {
        GHData cone = gh;
        cone.center_z.assign(gh.center_z.size(), 0.0);
        const double self_dev = gh_spatial_block_deviation(cone, cone, {3.0, 1.0, 2.0});
        claims.add("coincident centers give zero deviation", Json{{"dev", self_dev}},
                   self_dev == 0.0);
    }

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "ale"},
                       {"config", config_echo(cfg)},
                       {"fits", Json{{"cone_decay_sym", fit_json(sym)}, {"cone_decay_asym", fit_json(asy)}}},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

// -------------------------------------------------------------- lengths ----

namespace {

// Radial Region-I curve at scale D: x(s) = s . w with a direction tuned so
// that |z| is a fixed fraction of R along the span.
struct LengthRow {
    double D, L_glued, L_cone, rel;
};

LengthRow length_comparison_at(double D, const ExperimentConfig& cfg) {
    const HypersurfaceFamily X1(1.0, 0.0);
    const SurfacePoly src = X1.poly();
    const SurfacePoly cyl = SurfacePoly::cone_cylinder();
    const GluingConfig& glue = cfg.glue;

    // Direction with f(w) = c_target, so that |z| = |s|^6 c along the ray.
    AmbientPoint w = unit_cone_direction(cfg.seed, 5);
    const double eta = 0.3;
    const double lam_mid = 1.15 * D;
    const double c_target = eta * std::pow(lam_mid, -5.0);
    {
        const SurfacePoly f0 = SurfacePoly::cone_cylinder();
        for (int it = 0; it < 60; ++it) {
            const cplx f = f0.eval(w) - c_target;
            if (std::abs(f) < 1e-3 * c_target) break;
            const cplx fy = f0.gradient(w)[kY];
            w[kY] -= f / fy;
        }
    }

    // Vertices along lambda in [D, 1.3 D].
    const int nseg = 32;
    std::vector<AmbientPoint> pts;
    for (int i = 0; i <= nseg; ++i) {
        const double lam = D * (1.0 + 0.3 * i / nseg);
        pts.push_back(central_fiber_point(X1, w, lam));
    }
    const AmbientPoint mid = pts[static_cast<size_t>(nseg / 2)];
    const Chart sc = chart_solving(kY, mid, src);
    std::vector<std::array<cplx, 3>> verts;
    for (const auto& p : pts) verts.push_back(sc.free_values(p));

    auto glued = [&](const AmbientPoint& p) { return glued_metric(sc, p, glue); };
    const double L1 = curve_length(glued, sc, verts);

    // Refinement convergence.
    const double L1r = curve_length(glued, sc, refine_polyline(sc, verts));

    // Projected curve on the cone under the nearest-point projection.
    std::vector<std::array<cplx, 3>> cone_verts;
    AmbientPoint proj_mid;
    for (size_t i = 0; i < pts.size(); ++i) {
        const ProjectionResult pr = nearest_point(pts[i], cyl);
        if (i == pts.size() / 2) proj_mid = pr.target;
        cone_verts.push_back({pr.target[kZ], pr.target[kX1], pr.target[kX2]});
    }
    const Chart tc = chart_solving(kY, proj_mid, cyl);
    auto cone_g = [&](const AmbientPoint& p) { return cone_potential_metric(tc, p); };
    const double L0 = curve_length(cone_g, tc, cone_verts);

    LengthRow row;
    row.D = D;
    row.L_glued = L1;
    row.L_cone = L0;
    row.rel = std::abs(L1 - L0) / L0;
    if (std::abs(L1r - L1) / L1 > 1e-3)
        throw ExperimentError("length refinement changed the result by more than 0.1%");
    return row;
}

}  // namespace

ExperimentOutcome run_lengths_experiment(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/lengths.csv");
    csv.comment("curve lengths under the glued metric against the projected cone metric");
    csv.header({"D", "L_glued", "L_cone", "rel_diff"});

    std::vector<double> Ds{1024.0, 16384.0, 262144.0};
    std::vector<LengthRow> rows;
    for (double D : Ds) {
        rows.push_back(length_comparison_at(D, cfg));
        csv.row({fmt(rows.back().D), fmt(rows.back().L_glued), fmt(rows.back().L_cone),
                 fmt(rows.back().rel)});
    }
    const bool monotone = rows[0].rel > rows[1].rel && rows[1].rel > rows[2].rel;
    claims.add("relative length error between the glued and cone metrics decreases monotonically over D = 2^10, 2^14, 2^18",
               Json{{"rel", {rows[0].rel, rows[1].rel, rows[2].rel}}}, monotone);

    // Anchors: flat coordinate segment and the surface radial distance.
    {
        AmbientPoint origin;
        const Chart flat = Chart::free_space({kX1, kX2, kY}, 3, origin);
        auto id = [](const AmbientPoint&) { return CMat::identity(3); };
        const double L = curve_length(id, flat, {{cplx(0.0), 0.0, 0.0}, {cplx(2.5), 0.0, 0.0}});
        claims.add("straight coordinate segment in the flat metric has its coordinate length",
                   Json{{"L", L}}, std::abs(L - 2.5) < 1e-12);
    }
    {
        const SurfacePoly a2 = SurfacePoly::a2_cone();
        const AmbientPoint mid = quotient_map_a2(1.5, 0.0);
        const Chart chart = chart_solving(kX1, mid, a2);
        std::vector<std::array<cplx, 3>> verts;
        const int nseg = 64;
        for (int i = 0; i <= nseg; ++i) {
            const double lam = 1.0 + 1.0 * i / nseg;  // r = lam from 1 to 2
            verts.push_back(chart.free_values(quotient_map_a2(lam, 0.0)));
        }
        auto g = [&](const AmbientPoint& p) { return cone_potential_metric(chart, p); };
        const double L = curve_length(g, chart, verts);
        claims.add("radial segment on the surface from r = 1 to r = 2 has length 1 to 1e-3",
                   Json{{"L", L}}, std::abs(L - 1.0) < 1e-3);
    }

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "lengths"},
                       {"config", config_echo(cfg)},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

// ------------------------------------------------------------ nonlinear ----

ExperimentOutcome run_nonlinear_experiment(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/nonlinear.csv");
    csv.comment("Monge-Ampere remainder: quadratic order and pairwise bound");
    csv.header({"kind", "x", "value"});

    const HypersurfaceFamily X1(1.0, 0.0);
    const SurfacePoly src = X1.poly();
    const GluingConfig& glue = cfg.glue;
    const int n = cfg.samples > 0 ? cfg.samples : 100;

    std::vector<NonlinearSample> samples;
    int skipped_build = 0;
    for (int i = 0; i < n; ++i) {
        try {
            const AmbientPoint dir = unit_cone_direction(cfg.seed, static_cast<uint64_t>(i));
            const double R = uniform(cfg.seed, static_cast<uint64_t>(i), 31, 2.0 * glue.P, 8.0 * glue.P);
            const AmbientPoint p = central_fiber_point(X1, dir, R);
            const Chart chart = build_chart(p, src);
            const CMat g = glued_metric(chart, p, glue);

            const auto w0 = chart.free_values(p);
            auto bump = [&chart, w0](double width, const std::array<double, 3>& offs) {
                return [&chart, w0, width, offs](const AmbientPoint& q) {
                    const auto w = chart.free_values(q);
                    double e = 0;
                    for (int j = 0; j < chart.nfree; ++j) {
                        const double s = width * std::max(1.0, std::abs(w0[static_cast<size_t>(j)]));
                        e += std::norm(w[static_cast<size_t>(j)] - w0[static_cast<size_t>(j)] -
                                       cplx(offs[static_cast<size_t>(j)] * s, 0.0)) /
                             (s * s);
                    }
                    return std::exp(-e);
                };
            };
            CMat Hu = ddbar(bump(0.25, {0, 0, 0}), chart, p);
            CMat Hv = ddbar(bump(0.4, {0.3, -0.2, 0.1}), chart, p);
            const double nu = form_norm(Hu, g);
            const double nv = form_norm(Hv, g);
            if (!(nu > 0) || !(nv > 0)) throw MetricDegeneracyError("flat bump");
            Hu = Hu.scaled(0.05 / nu);
            Hv = Hv.scaled(0.03 / nv);
            samples.push_back({g, Hu, Hv});
            // Scaled pair v = 2u exercises the bound along a ray.
            samples.push_back({g, Hu, Hu.scaled(2.0)});
        } catch (const std::exception&) {
            ++skipped_build;
        }
    }
    if (samples.empty()) throw ExperimentError("nonlinear: no usable samples");

    std::vector<double> eps;
    for (int i = 0; i < 5; ++i) eps.push_back(std::pow(10.0, -1.0 - 0.5 * i));
    const NonlinearSplitResult r = nonlinear_split_check(samples, eps);
    for (size_t i = 0; i < eps.size(); ++i) csv.row({"q-sweep", fmt(eps[i]), ""});

    claims.add("Q(eps u)/eps^2 converges: fitted order 2.0 +/- 0.1",
               fit_json(r.order_fit), std::abs(r.order_fit.slope - 2.0) < 0.1);
    claims.add("decomposition F(u) - F(0) - Delta u - Q(u) vanishes (dual determinant routes)",
               Json{{"max_abs", r.decomposition_residual}}, r.decomposition_residual < 1e-10);
    claims.add("pairwise bound |Q(u)-Q(v)| <= C (|ddbar u| + |ddbar v|) |ddbar (u-v)| with C < 10",
               Json{{"C", r.max_c}, {"used", r.used}, {"skipped", r.skipped}},
               r.max_c < 10.0 && r.used >= 100);
    {
        const CMat g = samples.front().g;
        const CMat zero(g.n);
        claims.add("Q(0) = 0 exactly", Json::object(), nonlinear_remainder(g, zero) == 0.0);
    }
    csv.row({"C", "", fmt(r.max_c)});

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "nonlinear"},
                       {"config", config_echo(cfg)},
                       {"fits", Json{{"order", fit_json(r.order_fit)}}},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

}  // namespace cylab
