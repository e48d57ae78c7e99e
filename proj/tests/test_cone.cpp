#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylab/cone.hpp"
#include "cylab/sampling.hpp"
#include "cylab/surface.hpp"

using namespace cylab;

TEST_CASE("weighted scaling powers") {
    const AmbientPoint ones(1.0, 1.0, 1.0, 1.0);
    const AmbientPoint p = weighted_scale(4.0, ones);
    CHECK(p.z() == cplx(4.0));
    CHECK(p.x1() == cplx(64.0));
    CHECK(p.x2() == cplx(64.0));
    CHECK(p.y() == cplx(16.0));

    const AmbientPoint q = weighted_scale(1.0, ones);
    for (int i = 0; i < 4; ++i) CHECK(q[i] == ones[i]);

    CHECK_THROWS_AS(weighted_scale(0.0, ones), DomainError);

    // Defining polynomial scales by t^6.
    const SurfacePoly f0 = SurfacePoly::cone_cylinder();
    const AmbientPoint s2 = weighted_scale(2.0, ones);
    CHECK(std::abs(f0.eval(s2) / f0.eval(ones) - cplx(64.0)) < 1e-13);
}

TEST_CASE("quotient parametrization hits the surface") {
    const AmbientPoint a = quotient_map_a2(1.0, 0.0);
    CHECK(std::abs(a.x1() - cplx(0.5)) < 1e-15);
    CHECK(std::abs(a.x2() - cplx(0.0, -0.5)) < 1e-15);
    CHECK(std::abs(a.y()) == 0.0);

    const AmbientPoint b = quotient_map_a2(1.0, 1.0);
    CHECK(std::abs(b.x1() - cplx(1.0)) < 1e-15);
    CHECK(std::abs(b.x2()) < 1e-15);
    CHECK(std::abs(b.y() - kZeta) < 1e-15);
    const SurfacePoly f0 = SurfacePoly::a2_cone();
    CHECK(std::abs(f0.eval(b)) < 1e-14);

    const AmbientPoint o = quotient_map_a2(0.0, 0.0);
    CHECK(o.x1() == cplx(0.0));
    CHECK(o.y() == cplx(0.0));

    for (int i = 0; i < 200; ++i) {
        const CoverPoint c = random_cover_pair(42, static_cast<uint64_t>(i), 0.0, 5.0);
        const AmbientPoint p = quotient_map_a2(c.z1, c.z2);
        CHECK(std::abs(f0.eval(p)) <= 1e-12 * f0.magnitude_scale(p));
    }
}

TEST_CASE("radial cubic root") {
    // T^3 - 3T - 2 = (T-2)(T+1)^2.
    CHECK(radial_cubic_largest_root(1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    // y = 0, s = 1/2: T^3 = 1.
    CHECK(radial_cubic_largest_root(0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(radial_cubic_largest_root(0.0, 0.0) == 0.0);

    // Against the cover: r^2(quotient(z1,z2)) = |z1|^2 + |z2|^2.
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const CoverPoint c = random_cover_pair(7, static_cast<uint64_t>(i), 0.0, 10.0);
        const double expect = std::norm(c.z1) + std::norm(c.z2);
        const double got = r2_a2(quotient_map_a2(c.z1, c.z2));
        worst = std::max(worst, std::abs(got - expect) / (expect + 1e-30));
    }
    CHECK(worst < 1e-9);

    // Residual of the defining cubic below 1e-13 in scaled variables.
    for (int i = 0; i < 300; ++i) {
        const double s = uniform(9, static_cast<uint64_t>(i), 0, 0.0, 50.0);
        const double g = uniform(9, static_cast<uint64_t>(i), 1, 0.0, 10.0);
        const double T = radial_cubic_largest_root(s, g);
        const double m = std::max(std::cbrt(s), std::sqrt(g));
        if (m == 0.0) continue;
        const double res = std::abs(ipow(T / m, 3) - 3.0 * (g / (m * m)) * (T / m) - 2.0 * s / (m * m * m));
        CHECK(res < 1e-12);
    }
}

TEST_CASE("homogeneity of the radial functions") {
    for (int i = 0; i < 200; ++i) {
        const CoverPoint c = random_cover_pair(11, static_cast<uint64_t>(i), 0.1, 4.0);
        AmbientPoint p = quotient_map_a2(c.z1, c.z2);
        p[kZ] = cplx(0.3, -1.1);
        const double r2 = r2_a2(p);
        const double R2 = ambient_R2(p);
        for (const cplx t : {cplx(2.0), cplx(0.5), std::polar(1.0, 1.234)}) {
            const AmbientPoint q = weighted_scale(t, p);
            const double t2 = std::norm(t);
            CHECK(std::abs(r2_a2(q) - t2 * r2) <= 1e-12 * t2 * r2);
            CHECK(std::abs(ambient_R2(q) - t2 * R2) <= 1e-12 * t2 * R2);
            CHECK(std::abs(ambient_rho2(q) - t2 * ambient_rho2(p)) <= 1e-12 * t2 * ambient_rho2(p));
        }
    }
    CHECK(ambient_R2(cplx(1.0), 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("surface discriminant sign and closed form") {
    // On the surface (|x1|^2+|x2|^2)^2 >= |y|^6, so the two-cube-root form is
    // real and matches the general largest-root extension.
    double worst = 0;
    for (int i = 0; i < 2000; ++i) {
        const CoverPoint c = random_cover_pair(13, static_cast<uint64_t>(i), 0.05, 6.0);
        const AmbientPoint p = quotient_map_a2(c.z1, c.z2);
        const double s = std::norm(p.x1()) + std::norm(p.x2());
        const double sg = std::norm(p.y());
        const double disc = s * s - sg * sg * sg;
        CHECK(disc >= -1e-12 * (s * s + sg * sg * sg));
        const double root = std::sqrt(std::max(0.0, disc));
        const double closed = std::cbrt(s + root) + std::cbrt(s - root);
        const double ext = r2_a2(p);
        worst = std::max(worst, std::abs(closed - ext) / (ext + 1e-30));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("surface ratio of the ambient radial substitute") {
    // R^2/r^2 on the surface: extremes at the y = 0 locus (2^{-1/3}) and the
    // |z1| = |z2| locus (2^{-5/6}), from the cover formulas
    // s = (u^3+v^3)/2, |y|^2 = uv, r^2 = u+v.
    double lo = 1e300, hi = 0;
    for (int i = 0; i < 10000; ++i) {
        const CoverPoint c = random_cover_pair(17, static_cast<uint64_t>(i), 0.02, 8.0);
        const AmbientPoint p = quotient_map_a2(c.z1, c.z2);
        const double r2 = r2_a2(p);
        if (r2 < 1e-10) continue;
        const double ratio = ambient_R2(p) / r2;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    const double lo_expect = std::pow(2.0, -5.0 / 6.0);
    const double hi_expect = std::pow(2.0, -1.0 / 3.0);
    CHECK(lo >= lo_expect - 1e-9);
    CHECK(hi <= hi_expect + 1e-9);
    // The extremes are attained (sampled within 2%).
    CHECK(lo <= lo_expect * 1.02);
    CHECK(hi >= hi_expect * 0.98);
}

TEST_CASE("analytic jets match finite differences") {
    for (int i = 0; i < 20; ++i) {
        const CoverPoint c = random_cover_pair(19, static_cast<uint64_t>(i), 0.4, 2.0);
        AmbientPoint p = quotient_map_a2(c.z1, c.z2);
        p[kZ] = cplx(0.7, 0.2);
        p[kX1] += cplx(0.05, -0.02);  // generic off-surface point

        for (int which = 0; which < 2; ++which) {
            const ScalarJet jet = which == 0 ? r2_a2_jet(p) : ambient_rho2_jet(p);
            auto f = [&](const AmbientPoint& q) {
                return which == 0 ? r2_a2(q) : ambient_rho2(q);
            };
            CHECK(jet.value == doctest::Approx(f(p)).epsilon(1e-14));
            const double h = 1e-5;
            for (int j = 0; j < 4; ++j) {
                AmbientPoint qp = p, qm = p;
                qp[j] += h;
                qm[j] -= h;
                const double da = (f(qp) - f(qm)) / (2.0 * h);
                qp = p;
                qm = p;
                qp[j] += cplx(0.0, h);
                qm[j] -= cplx(0.0, h);
                const double db = (f(qp) - f(qm)) / (2.0 * h);
                const cplx grad = 0.5 * cplx(da, -db);
                CHECK(std::abs(grad - jet.grad[static_cast<size_t>(j)]) < 2e-7);
            }
            // A couple of mixed Hessian entries by 4-point stencils.
            for (const auto [a, b] : {std::pair{1, 1}, std::pair{1, 3}, std::pair{3, 3}}) {
                auto mixed = [&](cplx ea, cplx eb) {
                    AmbientPoint q1 = p, q2 = p, q3 = p, q4 = p;
                    q1[a] += ea; q1[b] += eb;
                    q2[a] += ea; q2[b] -= eb;
                    q3[a] -= ea; q3[b] += eb;
                    q4[a] -= ea; q4[b] -= eb;
                    return (f(q1) - f(q2) - f(q3) + f(q4)) / (4.0 * h * h);
                };
                const double paa = mixed(h, h);
                const double pbb = mixed(cplx(0, h), cplx(0, h));
                const double pab = mixed(h, cplx(0, h));
                const double pba = mixed(cplx(0, h), h);
                const cplx hab = 0.25 * cplx(paa + pbb, pab - pba);
                CHECK(std::abs(hab - jet.hess.at(a, b)) < 2e-5);
            }
        }
    }
}

TEST_CASE("family degeneration coefficients") {
    const HypersurfaceFamily X(1.0, cplx(0.3, 0.4));
    const HypersurfaceFamily d2 = X.degenerated(2.0);
    CHECK(std::abs(d2.a - cplx(1.0 / 32.0)) < 1e-15);
    CHECK(std::abs(d2.b - cplx(0.3, 0.4) / 16.0) < 1e-15);
    // Rescaled points satisfy the rescaled equation.
    const AmbientPoint xh = v_fiber_point(unit_cone_direction(3, 1), 1.0);
    const AmbientPoint p = family_fiber_point(X, cplx(40.0, 9.0), xh);
    const cplx t = 3.7;
    const AmbientPoint q = weighted_scale(1.0 / t, p);
    const SurfacePoly resc = X.degenerated(t).poly();
    CHECK(std::abs(resc.eval(q)) <= 1e-11 * resc.magnitude_scale(q));
    CHECK_THROWS_AS(HypersurfaceFamily(0.0, 1.0), DomainError);
}
