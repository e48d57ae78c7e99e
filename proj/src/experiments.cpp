#include "cylab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cylab/ale.hpp"
#include "cylab/embeddings.hpp"
#include "cylab/harmonic.hpp"
#include "cylab/parallel.hpp"
#include "cylab/sampling.hpp"
#include "experiments_impl.hpp"

namespace cylab {

Json config_echo(const ExperimentConfig& cfg) {
    Json j;
    j["experiment"] = cfg.experiment;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["b"] = cfg.b;
    j["alpha"] = cfg.glue.alpha_glue;
    j["kappa"] = cfg.glue.kappa;
    j["P"] = cfg.glue.P;
    j["delta"] = cfg.glue.delta;
    j["tau"] = cfg.glue.tau;
    j["psi_c"] = cfg.glue.psi_c;
    j["radii_min"] = cfg.radii_min;
    j["radii_max"] = cfg.radii_max;
    j["radii_count"] = cfg.radii_count;
    j["samples"] = cfg.samples;
    return j;
}

Json fit_json(const DecayFit& f) {
    Json j;
    j["slope"] = f.slope;
    j["stderr"] = f.stderr_;
    j["n"] = f.n;
    j["decades"] = f.decades();
    return j;
}

namespace {




// Finite-difference Jacobian of the quotient parametrization; the
// independent route for the volume-form pullback constant.
double cover_pullback_const(uint64_t seed) {
    double value = 0;
    bool first = true;
    for (int i = 0; i < 5; ++i) {
        const CoverPoint c = random_cover_pair(seed, 1000 + static_cast<uint64_t>(i), 0.5, 2.0);
        const double h = 1e-5;
        auto map = [](cplx z1, cplx z2) { return quotient_map_a2(z1, z2); };
        cplx J[2][2];
        for (int with = 0; with < 2; ++with) {
            // Holomorphic map: complex-step along the real axis suffices.
            AmbientPoint pp = with == 0 ? map(c.z1 + h, c.z2) : map(c.z1, c.z2 + h);
            AmbientPoint pm = with == 0 ? map(c.z1 - h, c.z2) : map(c.z1, c.z2 - h);
            J[0][with] = (pp[kX1] - pm[kX1]) / (2.0 * h);
            J[1][with] = (pp[kX2] - pm[kX2]) / (2.0 * h);
        }
        const AmbientPoint p = map(c.z1, c.z2);
        const cplx det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        const double coeff = std::abs(det / (3.0 * p.y() * p.y()));
        if (first) {
            value = coeff;
            first = false;
        } else if (std::abs(coeff - value) > 1e-6 * value) {
            throw ExperimentError("cover_pullback_const: inconsistent across points");
        }
    }
    return value;
}

// ---------------------------------------------------------------- cone ----

ExperimentOutcome exp_cone_identities(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/cone-identities.csv");
    csv.comment("quotient-parametrization radial identity samples");
    csv.header({"i", "re_z1", "im_z1", "re_z2", "im_z2", "r2", "cover_r2", "rel_err"});

    const int n = cfg.samples > 0 ? cfg.samples : 10000;
    std::vector<double> rels(static_cast<size_t>(n));
    std::vector<AmbientPoint> pts(static_cast<size_t>(n));
    std::vector<CoverPoint> cps(static_cast<size_t>(n));
    par::for_each(n, [&](std::int64_t i) {
        const CoverPoint c = random_cover_pair(cfg.seed, static_cast<uint64_t>(i), 0.0, 10.0);
        const AmbientPoint p = quotient_map_a2(c.z1, c.z2);
        const double cover = std::norm(c.z1) + std::norm(c.z2);
        const double r2 = r2_a2(p);
        cps[static_cast<size_t>(i)] = c;
        pts[static_cast<size_t>(i)] = p;
        rels[static_cast<size_t>(i)] = std::abs(r2 - cover) / (cover + 1e-30);
    }, cfg.workers);

    double max_rel = 0, ratio_min = 1e300, ratio_max = 0, max_homog = 0, max_closed = 0;
    double min_disc = 1e300;
    for (int i = 0; i < n; ++i) {
        const auto& c = cps[static_cast<size_t>(i)];
        const auto& p = pts[static_cast<size_t>(i)];
        const double cover = std::norm(c.z1) + std::norm(c.z2);
        const double r2 = r2_a2(p);
        max_rel = std::max(max_rel, rels[static_cast<size_t>(i)]);
        csv.row({std::to_string(i), fmt(c.z1.real()), fmt(c.z1.imag()), fmt(c.z2.real()),
                 fmt(c.z2.imag()), fmt(r2), fmt(cover), fmt(rels[static_cast<size_t>(i)])});
        if (r2 > 1e-12) {
            const double ratio = ambient_R2(p) / r2;
            ratio_min = std::min(ratio_min, ratio);
            ratio_max = std::max(ratio_max, ratio);
        }
        // Discriminant sign and closed-form agreement on the surface.
        const double s = std::norm(p.x1()) + std::norm(p.x2());
        const double sg = std::norm(p.y());
        const double disc = s * s - sg * sg * sg;
        min_disc = std::min(min_disc, disc / (s * s + sg * sg * sg + 1e-30));
        const double root = std::sqrt(std::max(0.0, disc));
        const double closed = std::cbrt(s + root) + std::cbrt(s - root);
        if (r2 > 1e-12) max_closed = std::max(max_closed, std::abs(closed - r2) / r2);

        if (i % 10 == 0) {
            for (const cplx t : {cplx(2.0), cplx(0.5), std::polar(1.0, 0.7)}) {
                const AmbientPoint q = weighted_scale(t, p);
                const double t2 = std::norm(t);
                max_homog = std::max(max_homog,
                                     std::abs(r2_a2(q) - t2 * r2) / (t2 * r2 + 1e-30));
                max_homog = std::max(max_homog, std::abs(ambient_R2(q) - t2 * ambient_R2(p)) /
                                                    (t2 * ambient_R2(p) + 1e-30));
            }
        }
    }
    const double t_identity = seconds_since(t0);

    claims.add("r2(quotient(z1,z2)) = |z1|^2+|z2|^2 over >= 1e4 samples, rel err < 1e-9",
               Json{{"max_rel_err", max_rel}, {"n", n}}, max_rel < 1e-9);
    claims.add("identity sweep runs in < 1 s", Json{{"seconds", t_identity}}, t_identity < 1.0);
    claims.add("r2 and R2 are degree-2 homogeneous to 1e-12 for t in {2, 1/2, e^{i theta}}",
               Json{{"max_rel_err", max_homog}}, max_homog < 1e-12);
    claims.add("on the surface (|x|^2)^2 >= |y|^6 and the closed form matches the cubic root to 1e-10",
               Json{{"min_normalized_discriminant", min_disc}, {"max_rel_err", max_closed}},
               min_disc > -1e-12 && max_closed < 1e-10);
    claims.add("R^2/r^2 ratio range on the surface (reported; constants are choice-dependent)",
               Json{{"min", ratio_min}, {"max", ratio_max}}, true);

    // Exact weighted-scaling vectors.
    {
        const AmbientPoint ones(1.0, 1.0, 1.0, 1.0);
        const AmbientPoint s4 = weighted_scale(4.0, ones);
        const bool ok = s4.z() == cplx(4.0) && s4.x1() == cplx(64.0) && s4.x2() == cplx(64.0) &&
                        s4.y() == cplx(16.0);
        claims.add("t=4 scaling of (1,1,1,1) gives (4,64,64,16) exactly", Json{{"ok", ok}}, ok);
        const SurfacePoly f0 = SurfacePoly::cone_cylinder();
        const AmbientPoint s2 = weighted_scale(2.0, ones);
        const double frat = std::abs(f0.eval(s2)) / std::abs(f0.eval(ones));
        claims.add("f(t.x)/f(x) = t^6 = 64 at t=2, x=(1,1,1)", Json{{"ratio", frat}},
                   std::abs(frat - 64.0) < 1e-12);
        const AmbientPoint s1 = weighted_scale(1.0, ones);
        claims.add("t=1 scaling is the identity", Json::object(),
                   s1.z() == ones.z() && s1.y() == ones.y());
    }

    // Ricci potential of the cone metric is constant and matches the
    // pullback constant of the volume form (independent finite-difference
    // Jacobian route).
    const auto t1 = ExpClock::now();
    {
        const double pull = cover_pullback_const(cfg.seed);
        const double expect = -2.0 * std::log(pull);

        const SurfacePoly a2 = SurfacePoly::a2_cone();
        const VolumeFormSpec form_a2 = VolumeFormSpec::a2();
        std::vector<double> hs;
        for (int i = 0; i < 20; ++i) {
            const CoverPoint c = random_cover_pair(cfg.seed, 2000 + static_cast<uint64_t>(i), 0.5, 2.0);
            const AmbientPoint p = quotient_map_a2(c.z1, c.z2);
            const Chart chart = build_chart(p, a2);
            hs.push_back(ricci_potential([](const AmbientPoint& q) { return r2_a2(q); }, chart, p,
                                         form_a2));
        }
        double mean = 0;
        for (double h : hs) mean += h;
        mean /= static_cast<double>(hs.size());
        double sd = 0;
        for (double h : hs) sd += (h - mean) * (h - mean);
        sd = std::sqrt(sd / static_cast<double>(hs.size()));
        claims.add("Ricci potential of r^2 on the A2 surface is constant (std < 1e-6)",
                   Json{{"mean", mean}, {"std", sd}}, sd < 1e-6);
        claims.add("A2 constant matches the volume pullback constant to 1e-6",
                   Json{{"mean", mean}, {"expected", expect}}, std::abs(mean - expect) < 1e-6);

        const SurfacePoly cyl = SurfacePoly::cone_cylinder();
        const VolumeFormSpec form_cxa2 = VolumeFormSpec::cxa2();
        std::vector<double> h3;
        for (const auto& cv : cxa2_cover_samples(cfg.seed + 1, 20, 0.6, 1.8)) {
            const AmbientPoint p = cxa2_cover(cv[0], cv[1], cv[2]);
            const Chart chart = build_chart(p, cyl);
            h3.push_back(ricci_potential(
                [](const AmbientPoint& q) { return std::norm(q.z()) + r2_a2(q); }, chart, p,
                form_cxa2));
        }
        double mean3 = 0;
        for (double h : h3) mean3 += h;
        mean3 /= static_cast<double>(h3.size());
        double sd3 = 0;
        for (double h : h3) sd3 += (h - mean3) * (h - mean3);
        sd3 = std::sqrt(sd3 / static_cast<double>(h3.size()));
        claims.add("Ricci potential of |z|^2+r^2 on the product is the same constant (std < 1e-6)",
                   Json{{"mean", mean3}, {"std", sd3}, {"expected", expect}},
                   sd3 < 1e-6 && std::abs(mean3 - expect) < 1e-6);
    }
    const double t_ricci = seconds_since(t1);
    claims.add("cone Ricci-potential check runs in < 10 s", Json{{"seconds", t_ricci}},
               t_ricci < 10.0);

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "cone-identities"},
                       {"config", config_echo(cfg)},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

// ------------------------------------------------------------ harmonic ----

ExperimentOutcome exp_harmonic(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/harmonic.csv");
    csv.comment("catalog values and flat-cover Laplacians at C x A2 samples");
    csv.header({"i", "re_z", "im_z", "re_z1", "im_z1", "re_z2", "im_z2", "u1", "u2", "lap_u1",
                "lap_u2"});

    const int n = cfg.samples > 0 ? cfg.samples : 100;
    const auto covers = cxa2_cover_samples(cfg.seed, n);

    struct Row {
        double u1, u2, l1, l2;
    };
    std::vector<Row> rows(covers.size());
    par::for_each(static_cast<std::int64_t>(covers.size()), [&](std::int64_t i) {
        const auto& c = covers[static_cast<size_t>(i)];
        const std::vector<std::array<cplx, 3>> one{c};
        const AmbientPoint p = cxa2_cover(c[0], c[1], c[2]);
        Row r;
        r.u1 = eval_u1(p, 1.0);
        r.u2 = eval_u2(p);
        r.l1 = check_harmonic([](const AmbientPoint& q) { return eval_u1(q, 1.0); }, one);
        r.l2 = check_harmonic([](const AmbientPoint& q) { return eval_u2(q); }, one);
        rows[static_cast<size_t>(i)] = r;
    }, cfg.workers);

    double max_l1 = 0, max_l2 = 0, max_cover_dev = 0;
    for (size_t i = 0; i < covers.size(); ++i) {
        const auto& c = covers[i];
        const auto& r = rows[i];
        max_l1 = std::max(max_l1, r.l1);
        max_l2 = std::max(max_l2, r.l2);
        // Cover oracle: u1 pulls back to -(1/3)(|z1|^2 - |z2|^2).
        const double cover_u1 = -(std::norm(c[1]) - std::norm(c[2])) / 3.0;
        max_cover_dev = std::max(max_cover_dev, std::abs(r.u1 - cover_u1) /
                                                    (std::abs(cover_u1) + 1.0));
        csv.row({std::to_string(i), fmt(c[0].real()), fmt(c[0].imag()), fmt(c[1].real()),
                 fmt(c[1].imag()), fmt(c[2].real()), fmt(c[2].imag()), fmt(r.u1), fmt(r.u2),
                 fmt(r.l1), fmt(r.l2)});
    }

    claims.add("max |Laplacian u1| < 1e-6 over the samples", Json{{"max", max_l1}}, max_l1 < 1e-6);
    claims.add("max |Laplacian u2| < 1e-6 over the samples", Json{{"max", max_l2}}, max_l2 < 1e-6);
    claims.add("u1 agrees with its quadratic pullback to the cover to 1e-9",
               Json{{"max_dev", max_cover_dev}}, max_cover_dev < 1e-9);

    const double lap_re_zy = check_harmonic(
        [](const AmbientPoint& q) { return (q.z() * q.y()).real(); }, covers);
    claims.add("Re(z y) is harmonic (real part of a holomorphic function), max < 1e-8",
               Json{{"max", lap_re_zy}}, lap_re_zy < 1e-8);

    // u2 anchor values.
    {
        const AmbientPoint p1 = cxa2_cover(1.0, 1.0, 1.0);
        const AmbientPoint p0 = cxa2_cover(0.0, 1.0, 1.0);
        claims.add("u2 = 0 at (z=1, image(1,1)) and -2 at (z=0, image(1,1))",
                   Json{{"at_z1", eval_u2(p1)}, {"at_z0", eval_u2(p0)}},
                   std::abs(eval_u2(p1)) < 1e-12 && std::abs(eval_u2(p0) + 2.0) < 1e-12);
    }

    // Tangency and symbolic Lie derivatives.
    std::vector<AmbientPoint> cone_pts;
    for (int i = 0; i < 25; ++i) {
        const CoverPoint c = random_cover_pair(cfg.seed + 2, static_cast<uint64_t>(i), 0.4, 2.0);
        cone_pts.push_back(quotient_map_a2(c.z1, c.z2));
    }
    const SurfacePoly cyl = SurfacePoly::cone_cylinder();
    const double tan_w1 = tangency_residual(LinearField::w1(1.0), cyl, cone_pts);
    const double tan_w2 = tangency_residual(LinearField::w2(), cyl, cone_pts);
    const double tan_v = tangency_residual(LinearField::v_generator(), cyl, cone_pts);
    claims.add("W1, W2 and the V-generator are tangent to the cone to 1e-11",
               Json{{"w1", tan_w1}, {"w2", tan_w2}, {"v", tan_v}},
               tan_w1 < 1e-11 && tan_w2 < 1e-11 && tan_v < 1e-11);

    const cplx lamV = lie_derivative_volume(LinearField::v_generator(), FormAlgebra::cxa2(), &cyl,
                                            &cone_pts);
    const cplx lamW1 = lie_derivative_volume(LinearField::w1(1.0), FormAlgebra::cxa2(), &cyl,
                                             &cone_pts);
    const cplx lamE = lie_derivative_volume(LinearField::euler3(), FormAlgebra::flat3());
    claims.add("L_V Omega = (4/3) Omega to 1e-12 (= 3 beta with beta = 4/9)",
               Json{{"re", lamV.real()}, {"im", lamV.imag()}},
               std::abs(lamV - cplx(4.0 / 3.0)) < 1e-12);
    claims.add("skew rotation field has vanishing volume derivative",
               Json{{"abs", std::abs(lamW1)}}, std::abs(lamW1) < 1e-15);
    claims.add("Euler field on flat C^3 gives 3", Json{{"re", lamE.real()}},
               std::abs(lamE - cplx(3.0)) < 1e-15);

    // Radial identity V(|z|^2+r^2) - (4/9)(|z|^2+r^2) = (5/18) u2.
    const auto id_pts = cxa2_points(cfg.seed + 3, 60);
    const double id_res = radial_identity_residual(id_pts);
    claims.add("V(|z|^2+r^2) - (4/9)(|z|^2+r^2) - (5/18) u2 residual < 1e-7",
               Json{{"max", id_res}}, id_res < 1e-7);
    {
        // Singular-ray reduction: x = 0 leaves |z|^2 only.
        const AmbientPoint ray(2.0, 0.0, 0.0, 0.0);
        const double res = radial_identity_residual({ray});
        claims.add("identity on the singular ray reduces to the |z|^2 terms (< 1e-12)",
                   Json{{"residual", res}}, res < 1e-12);
    }

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "harmonic"},
                       {"config", config_echo(cfg)},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

// -------------------------------------------------------------- taylor ----

ExperimentOutcome exp_taylor(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/taylor.csv");
    csv.comment("automorphism expansion E(t) and the first-order control");
    csv.header({"t", "E", "E_without_first_order"});

    const auto pts = cxa2_points(cfg.seed, cfg.samples > 0 ? cfg.samples : 40);
    std::vector<double> ts;
    for (int i = 0; i < 8; ++i) ts.push_back(1e-4 * std::pow(10.0, 3.0 * i / 7.0));

    const TaylorFit fit = taylor_expansion_check(pts, ts);
    const TaylorFit control = taylor_expansion_check(pts, ts, 0.0);
    for (size_t i = 0; i < ts.size(); ++i)
        csv.row({fmt(fit.samples[i].first), fmt(fit.samples[i].second),
                 fmt(control.samples[i].second)});

    claims.add("remainder of e^{-4t/9} Phi_t^*(|z|^2+r^2) after the (5/18) u2 t term is O(t^2): slope in [1.9, 2.1]",
               fit_json({fit.slope, fit.stderr_, 0, static_cast<int>(ts.size()), ts.front(), ts.back()}),
               fit.slope > 1.9 && fit.slope < 2.1);
    claims.add("dropping the first-order coefficient gives slope ~ 1",
               Json{{"slope", control.slope}}, control.slope > 0.8 && control.slope < 1.2);
    {
        const AutomorphismPhi id{0.0};
        double e0 = 0;
        for (const auto& p : pts)
            e0 = std::max(e0, std::abs(std::exp(0.0) * (std::norm(id.apply(p).z()) + r2_a2(id.apply(p))) -
                                       (std::norm(p.z()) + r2_a2(p))));
        claims.add("t = 0 gives E = 0 exactly", Json{{"E0", e0}}, e0 == 0.0);
    }

    // Group law and coordinate action.
    double max_group = 0;
    for (int i = 0; i < 20; ++i) {
        const cplx s(uniform(cfg.seed, 400 + static_cast<uint64_t>(i), 0, -0.5, 0.5),
                     uniform(cfg.seed, 400 + static_cast<uint64_t>(i), 1, -0.5, 0.5));
        const cplx t(uniform(cfg.seed, 400 + static_cast<uint64_t>(i), 2, -0.5, 0.5),
                     uniform(cfg.seed, 400 + static_cast<uint64_t>(i), 3, -0.5, 0.5));
        const AmbientPoint p = pts[static_cast<size_t>(i) % pts.size()];
        const AmbientPoint lhs = AutomorphismPhi{s}.apply(AutomorphismPhi{t}.apply(p));
        const AmbientPoint rhs = AutomorphismPhi{s + t}.apply(p);
        for (int k = 0; k < 4; ++k)
            max_group = std::max(max_group, std::abs(lhs[k] - rhs[k]) / (std::abs(rhs[k]) + 1e-30));
    }
    claims.add("group law Phi_s Phi_t = Phi_{s+t} to machine precision",
               Json{{"max_rel", max_group}}, max_group < 1e-13);

    {
        const cplx t = 3.0 * std::log(2.0);
        const HypersurfaceFamily moved = phi_action_on_family(t, HypersurfaceFamily(1.0, 1.0));
        claims.add("Phi_{3 log 2} sends b = 1 to b = 2", Json{{"b", std::abs(moved.b)}},
                   std::abs(moved.b - cplx(2.0)) < 1e-12);
        const HypersurfaceFamily fixed = phi_action_on_family(t, HypersurfaceFamily(1.0, 0.0));
        claims.add("b = 0 is fixed for every t", Json::object(), fixed.b == cplx(0.0));
        claims.add("t = 0 acts as the identity on the family", Json::object(),
                   phi_action_on_family(0.0, HypersurfaceFamily(1.0, 0.7)).b == cplx(0.7));

        // Pointwise: Phi_t maps X_{1,b} into X_{1, e^{t/3} b}.
        const HypersurfaceFamily Xb(1.0, 1.0);
        double worst = 0;
        for (int i = 0; i < 10; ++i) {
            const AmbientPoint xh = v_fiber_point(unit_cone_direction(cfg.seed + 7, static_cast<uint64_t>(i)), 1.0);
            const AmbientPoint q = family_fiber_point(Xb, std::polar(20.0, 0.3 * i), xh);
            const AmbientPoint moved_q = AutomorphismPhi{t}.apply(q);
            const SurfacePoly tgt = moved.poly();
            worst = std::max(worst, std::abs(tgt.eval(moved_q)) / tgt.magnitude_scale(moved_q));
        }
        claims.add("transformed family points satisfy the moved defining equation to 1e-10",
                   Json{{"max_rel_residual", worst}}, worst < 1e-10);
    }

    // Scaling of the defining polynomial, volume form and potential split.
    {
        const SurfacePoly f0 = SurfacePoly::cone_cylinder();
        double worst = 0, worst_vol = 0, worst_split = 0;
        for (int i = 0; i < 10; ++i) {
            const cplx t(uniform(cfg.seed, 500 + static_cast<uint64_t>(i), 0, -0.4, 0.4),
                         uniform(cfg.seed, 500 + static_cast<uint64_t>(i), 1, -0.4, 0.4));
            const AmbientPoint p(0.3 * i - 1.0, 1.1, -0.4 + 0.1 * i, 0.8);  // generic, off the cone
            const AutomorphismPhi phi{t};
            const double lhs = std::abs(f0.eval(phi.apply(p)));
            const double rhs = std::exp(0.5 * t.real()) * std::abs(f0.eval(p));
            worst = std::max(worst, std::abs(lhs - rhs) / rhs);

            const cplx jac = std::exp(t / 4.0) * std::exp(t / 4.0) * std::exp(t / 6.0);
            worst_vol = std::max(worst_vol, std::abs(jac - std::exp(2.0 * t / 3.0)));

            const double tr = t.real();
            const AutomorphismPhi phir{cplx(tr, 0.0)};
            const AmbientPoint pc = cxa2_cover(0.7, 1.3, 0.5);
            const double pulled = std::norm(phir.apply(pc).z()) + r2_a2(phir.apply(pc));
            const double split = std::exp(tr) * std::norm(pc.z()) + std::exp(tr / 6.0) * r2_a2(pc);
            worst_split = std::max(worst_split, std::abs(pulled - split) / split);
        }
        claims.add("|F0(Phi_t p)| = e^{Re t/2} |F0(p)| to 1e-12", Json{{"max_rel", worst}},
                   worst < 1e-12);
        claims.add("Phi_t^*(dx1^dx2^dy) = e^{2t/3} dx1^dx2^dy to 1e-12",
                   Json{{"max_abs", worst_vol}}, worst_vol < 1e-12);
        claims.add("Phi_t^*(|z|^2+r^2) = e^t |z|^2 + e^{t/6} r^2 for real t to 1e-10",
                   Json{{"max_rel", worst_split}}, worst_split < 1e-10);
    }

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "taylor"},
                       {"config", config_echo(cfg)},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

}  // namespace

// Remaining experiments are defined in this translation unit below.
namespace {

// --------------------------------------------------------------- decay ----

ExperimentOutcome exp_decay(const ExperimentConfig& cfg) {
    const auto t0 = ExpClock::now();
    Claims claims;
    CsvWriter csv(cfg.out_dir + "/decay.csv");
    csv.comment("closed-form equation perturbations and sampled Ricci potentials");
    csv.header({"kind", "region", "rho", "R", "K", "value"});

    const double b = cfg.b;
    const GluingConfig& glue = cfg.glue;

    // Closed-form magnitude sweeps.
    auto sweep = [&](RegionLabel reg, const std::vector<double>& Ds,
                     const std::function<double(double)>& K_of_D, bool fit_against_K) {
        std::vector<std::pair<double, double>> pts;
        for (double D : Ds) {
            const double K = K_of_D ? K_of_D(D) : 0.0;
            const double v = equation_perturbation_magnitude(reg, D, K, b, glue);
            pts.emplace_back(fit_against_K ? K : D, v);
            csv.row({"eq-perturbation", region_name(reg), fmt(D), "", fmt(K), fmt(v)});
        }
        return fit_loglog(pts);
    };

    const auto Ds = geometric_radii(cfg.radii_min > 0 ? cfg.radii_min : 1024.0,
                                    cfg.radii_max > 0 ? cfg.radii_max : 1048576.0,
                                    cfg.radii_count > 0 ? cfg.radii_count : 11);
    const DecayFit fitI = sweep(RegionLabel::AwaySingular, Ds, nullptr, false);
    claims.add("region I equation perturbation is b D^{2-d} (d=6): slope -4 +/- 0.3 over >= 3 decades",
               fit_json(fitI), std::abs(fitI.slope + 4.0) < 0.3 && fitI.decades() >= 3.0);

    const DecayFit fitV = sweep(RegionLabel::NearSingular, Ds, nullptr, false);
    claims.add("region V equation perturbation is b D^{(2-d)/d}: slope -2/3 +/- 0.1 over >= 3 decades",
               fit_json(fitV), std::abs(fitV.slope + 2.0 / 3.0) < 0.1 && fitV.decades() >= 3.0);

    const std::vector<double> DsII = geometric_radii(std::pow(2.0, 31), std::pow(2.0, 41), 11);
    const DecayFit fitII = sweep(RegionLabel::Intermediate, DsII,
                                 [&](double D) {
                                     return std::sqrt(4.0 * std::pow(D, glue.alpha_glue) * glue.kappa * D);
                                 },
                                 true);
    const DecayFit fitIII = sweep(RegionLabel::GluingBand, Ds,
                                  [&](double D) { return 1.4 * std::pow(D, glue.alpha_glue); }, true);
    const DecayFit fitIV = sweep(RegionLabel::InnerCone, Ds,
                                 [&](double D) {
                                     return std::sqrt(glue.kappa * std::pow(D, 1.0 / glue.d) *
                                                      std::pow(D, glue.alpha_glue) / 2.0);
                                 },
                                 true);
    claims.add("regions II-IV equation perturbations are b K^{2-d}: slope -4 against K",
               Json{{"II", fit_json(fitII)}, {"III", fit_json(fitIII)}, {"IV", fit_json(fitIV)}},
               std::abs(fitII.slope + 4.0) < 0.05 && std::abs(fitIII.slope + 4.0) < 0.05 &&
                   std::abs(fitIV.slope + 4.0) < 0.05);

    // Sampled Ricci potential of the glued potential. Intended radii are
    // carried separately: the Ricci potential is independent of z, and the
    // stored z of near-central samples is representation noise.
    const HypersurfaceFamily X(1.0, b);
    std::vector<AmbientPoint> samples;
    std::vector<double> design_rho;
    const auto radii = geometric_radii(2048.0, 2097152.0, 11);
    for (int d = 0; d < 3; ++d) {
        const AmbientPoint dir = unit_cone_direction(cfg.seed, static_cast<uint64_t>(d));
        for (double R : radii) {
            samples.push_back(central_fiber_point(X, dir, R));
            design_rho.push_back(R);
        }
    }
    for (int d = 0; d < 2; ++d) {
        const AmbientPoint xh =
            v_fiber_point(unit_cone_direction(cfg.seed + 1, static_cast<uint64_t>(d)), 1.0);
        for (double R : radii) {
            samples.push_back(family_fiber_point(X, std::polar(R, 0.4 + 0.3 * d), xh));
            design_rho.push_back(R);
        }
    }
    const auto rows = ricci_residual_map(X, glue, samples, {}, cfg.workers, &design_rho);

    std::vector<std::pair<double, double>> ptsI;
    std::vector<std::pair<double, double>> ptsV;
    for (const auto& r : rows) {
        csv.row({"ricci", r.failed ? "failed" : region_name(r.region), fmt(r.rho), fmt(r.R), "",
                 fmt(r.failed ? 0.0 : r.h_minus_gauge)});
        if (r.failed) continue;
        if (r.region == RegionLabel::AwaySingular) ptsI.emplace_back(r.rho, std::abs(r.h_minus_gauge));
        if (r.region == RegionLabel::NearSingular) ptsV.emplace_back(r.rho, std::abs(r.h_minus_gauge));
    }
    double maxI = 0;
    for (auto& [x, y] : ptsI) maxI = std::max(maxI, y);
    if (maxI > 1e-11) {
        const DecayFit fith = fit_loglog(ptsI);
        claims.add("region I Ricci potential decays to the cone gauge: fitted slope <= -5/3 (delta < 2/d)",
                   fit_json(fith), fith.slope <= -5.0 / 3.0 + 0.2);
    } else {
        claims.add("region I Ricci potential agrees with the cone gauge below 1e-11 at all sampled radii",
                   Json{{"max_abs", maxI}}, true);
    }
    {
        double plateau = 0;
        for (auto& [x, y] : ptsV) plateau = std::max(plateau, y);
        claims.add("region V Ricci potential plateau reported (model fiber stand-in differs from the true fiber metric)",
                   Json{{"max_abs", plateau}, {"n", ptsV.size()}}, true);
    }

    // Exact-cone control: the cone metric itself sits at the gauge constant.
    {
        const SurfacePoly cyl = SurfacePoly::cone_cylinder();
        const VolumeFormSpec form = VolumeFormSpec::cxa2();
        double worst = 0;
        for (const auto& p : cxa2_points(cfg.seed + 5, 20, 0.8, 2.5)) {
            const Chart chart = build_chart(p, cyl);
            const CMat g = cone_potential_metric(chart, p);
            const double h = ricci_potential_from(g, volume_form_coeff(p, chart, form));
            worst = std::max(worst, std::abs(h - cone_gauge_constant()));
        }
        claims.add("exact cone metric has constant Ricci potential: |h - gauge| < 1e-7",
                   Json{{"max_abs", worst}}, worst < 1e-7);
    }

    csv.close();
    ExperimentOutcome out;
    out.pass = claims.all_pass;
    out.summary = Json{{"experiment", "decay"},
                       {"config", config_echo(cfg)},
                       {"fits",
                        Json{{"regionI", fit_json(fitI)},
                             {"regionV", fit_json(fitV)},
                             {"regionII", fit_json(fitII)},
                             {"regionIII", fit_json(fitIII)},
                             {"regionIV", fit_json(fitIV)}}},
                       {"claims", claims.list},
                       {"pass", claims.all_pass},
                       {"runtime_seconds", seconds_since(t0)}};
    return out;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{
        "cone-identities", "harmonic", "taylor", "decay", "projection",
        "embeddings",      "milnor",   "ale",    "lengths", "nonlinear"};
    return names;
}

std::vector<double> geometric_radii(double lo, double hi, int n) {
    if (!(lo > 0 && hi > lo && n >= 2)) throw DomainError("geometric_radii: need 0 < lo < hi, n >= 2");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("config: expected key=value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "b") cfg.b = std::stod(val);
        else if (key == "alpha") cfg.glue.alpha_glue = std::stod(val);
        else if (key == "kappa") cfg.glue.kappa = std::stod(val);
        else if (key == "P") cfg.glue.P = std::stod(val);
        else if (key == "delta") cfg.glue.delta = std::stod(val);
        else if (key == "tau") cfg.glue.tau = std::stod(val);
        else if (key == "psi_c") cfg.glue.psi_c = std::stod(val);
        else if (key == "radii_min") cfg.radii_min = std::stod(val);
        else if (key == "radii_max") cfg.radii_max = std::stod(val);
        else if (key == "radii_count") cfg.radii_count = std::stoi(val);
        else if (key == "samples") cfg.samples = std::stoi(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "workers") cfg.workers = std::stoi(val);
        else if (key == "out") cfg.out_dir = val;
        else throw DomainError("config: unknown key '" + key + "'");
    }
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    if (cfg.experiment == "cone-identities") out = exp_cone_identities(cfg);
    else if (cfg.experiment == "harmonic") out = exp_harmonic(cfg);
    else if (cfg.experiment == "taylor") out = exp_taylor(cfg);
    else if (cfg.experiment == "decay") out = exp_decay(cfg);
    else if (cfg.experiment == "projection") out = run_projection_experiment(cfg);
    else if (cfg.experiment == "embeddings") out = run_embeddings_experiment(cfg);
    else if (cfg.experiment == "milnor") out = run_milnor_experiment(cfg);
    else if (cfg.experiment == "ale") out = run_ale_experiment(cfg);
    else if (cfg.experiment == "lengths") out = run_lengths_experiment(cfg);
    else if (cfg.experiment == "nonlinear") out = run_nonlinear_experiment(cfg);
    else throw DomainError("unknown experiment '" + cfg.experiment + "'");

    out.csv_path = cfg.out_dir + "/" + cfg.experiment + ".csv";
    out.json_path = cfg.out_dir + "/" + cfg.experiment + ".json";
    write_json(out.json_path, out.summary);
    out.message = out.pass ? "pass" : "numerical criteria failed";
    return out;
}

}  // namespace cylab
