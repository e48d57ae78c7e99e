#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylab/fd.hpp"
#include "cylab/cone.hpp"
#include "cylab/sampling.hpp"

using namespace cylab;

TEST_CASE("chart selection by gradient magnitude") {
    const SurfacePoly X1 = SurfacePoly::x_ab(1.0, 0.0);

    // Origin of X_1: only the z-gradient survives.
    const Chart c0 = build_chart(AmbientPoint(0.0, 0.0, 0.0, 0.0), X1);
    CHECK(c0.solved == kZ);
    CHECK(c0.nfree == 3);
    CHECK(c0.free_idx[0] == kX1);

    // |dF/dx1| = 2 beats |dF/dz| = 1.
    const Chart c1 = build_chart(AmbientPoint(-1.0, 1.0, 0.0, 0.0), X1);
    CHECK(c1.solved == kX1);

    // Cylinder vertex: every partial vanishes.
    CHECK_THROWS_AS(build_chart(AmbientPoint(0.0, 0.0, 0.0, 0.0), SurfacePoly::cone_cylinder()),
                    SingularChartError);

    // Off-surface points are rejected.
    CHECK_THROWS_AS(build_chart(AmbientPoint(5.0, 1.0, 0.0, 0.0), X1), ChartError);
}

TEST_CASE("chart Newton reproduces surface points") {
    const SurfacePoly X1 = SurfacePoly::x_ab(1.0, cplx(0.2, -0.1));
    const AmbientPoint xh = v_fiber_point(unit_cone_direction(5, 2), 1.3);
    const HypersurfaceFamily fam(1.0, cplx(0.2, -0.1));
    const AmbientPoint p = family_fiber_point(fam, cplx(25.0, -3.0), xh);
    const Chart c = build_chart(p, X1);

    auto w = c.free_values(p);
    for (int trial = 0; trial < 10; ++trial) {
        auto wp = w;
        for (int j = 0; j < c.nfree; ++j)
            wp[static_cast<size_t>(j)] *=
                1.0 + 0.02 * uniform(23, static_cast<uint64_t>(trial), static_cast<uint64_t>(j), -1.0, 1.0);
        const AmbientPoint q = c.at(std::span<const cplx>(wp.data(), static_cast<size_t>(c.nfree)), &p);
        CHECK(std::abs(X1.eval(q)) <= 1e-11 * (1.0 + ipow(q.norm(), 6)));
    }
}

TEST_CASE("ddbar anchors on flat space") {
    AmbientPoint base(0.0, cplx(0.3, 0.1), cplx(-0.2, 0.4), cplx(0.05, -0.6));
    const Chart flat = Chart::free_space({kX1, kX2, kY}, 3, base);

    auto norm2 = [](const AmbientPoint& q) {
        return std::norm(q.x1()) + std::norm(q.x2()) + std::norm(q.y());
    };
    const CMat id = ddbar(norm2, flat, base);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(id.at(i, j) - (i == j ? cplx(1.0) : cplx(0.0))) < 1e-10);

    auto pluri = [](const AmbientPoint& q) { return (q.x1() * q.x1()).real(); };
    const CMat zero = ddbar(pluri, flat, base);
    CHECK(zero.max_abs() < 1e-9);
}

TEST_CASE("ddbar of the cone potential pulled to the cover is flat") {
    for (int i = 0; i < 5; ++i) {
        const CoverPoint cv = random_cover_pair(31, static_cast<uint64_t>(i), 0.5, 1.8);
        AmbientPoint base;
        base[kX1] = cv.z1;
        base[kX2] = cv.z2;
        const Chart cover = Chart::free_space({kX1, kX2, kY}, 2, base);
        auto pulled = [](const AmbientPoint& q) { return r2_a2(quotient_map_a2(q[kX1], q[kX2])); };
        const CMat g = ddbar(pulled, cover, base);
        const auto ev = hermitian_eigenvalues(g);
        CHECK(ev[0] == doctest::Approx(1.0).epsilon(2e-6));
        CHECK(ev[1] == doctest::Approx(1.0).epsilon(2e-6));
    }
}

TEST_CASE("ddbar is equivariant under unitary chart rotation") {
    AmbientPoint base(0.0, cplx(0.4, 0.2), cplx(-0.1, 0.3), cplx(0.2, 0.1));
    const Chart flat = Chart::free_space({kX1, kX2, kY}, 3, base);
    auto phi = [](const AmbientPoint& q) {
        return std::norm(q.x1()) + 0.5 * std::norm(q.x2() * q.x2()) + (q.x1() * std::conj(q.y())).real();
    };
    const CMat H = ddbar(phi, flat, base);

    // Rotate the first two coordinates by a unitary.
    const double th = 0.6;
    auto rot = [&](const AmbientPoint& q) {
        AmbientPoint r = q;
        r[kX1] = std::cos(th) * q.x1() - std::sin(th) * q.x2();
        r[kX2] = std::sin(th) * q.x1() + std::cos(th) * q.x2();
        return r;
    };
    AmbientPoint rbase;
    // Base point in rotated coordinates: apply the inverse rotation.
    rbase[kX1] = std::cos(th) * base.x1() + std::sin(th) * base.x2();
    rbase[kX2] = -std::sin(th) * base.x1() + std::cos(th) * base.x2();
    rbase[kY] = base.y();
    const Chart flat2 = Chart::free_space({kX1, kX2, kY}, 3, rbase);
    auto phi2 = [&](const AmbientPoint& q) { return phi(rot(q)); };
    const CMat H2 = ddbar(phi2, flat2, rbase);

    // H2 = U^H H U with U the rotation Jacobian.
    CMat U(3);
    U.at(0, 0) = std::cos(th);
    U.at(0, 1) = -std::sin(th);
    U.at(1, 0) = std::sin(th);
    U.at(1, 1) = std::cos(th);
    U.at(2, 2) = 1.0;
    CMat Uh(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) Uh.at(i, j) = std::conj(U.at(j, i));
    const CMat expect = Uh * H * U;
    CHECK((H2 - expect).max_abs() < 1e-8);
}

TEST_CASE("richardson consistency") {
    AmbientPoint base(0.0, cplx(0.8, -0.3), cplx(0.4, 0.6), cplx(-0.2, 0.5));
    const Chart flat = Chart::free_space({kX1, kX2, kY}, 3, base);
    auto phi = [](const AmbientPoint& q) {
        return std::exp(-std::norm(q.x1())) + std::cos(q.x2().real()) * std::norm(q.y());
    };
    FDConfig coarse;
    const DdbarResult a = ddbar_with_error(phi, flat, base, coarse);
    FDConfig fine = coarse;
    fine.rel_step = coarse.rel_step / 2.0;
    const DdbarResult b = ddbar_with_error(phi, flat, base, fine);
    // Halving the step changes entries by less than 10x the estimated error.
    CHECK((a.h - b.h).max_abs() <= 10.0 * (a.trunc_estimate + 1e-12));
}

TEST_CASE("fd config bounds") {
    FDConfig bad;
    bad.rel_step = 0.5;
    AmbientPoint base;
    const Chart flat = Chart::free_space({kX1, kX2, kY}, 3, base);
    CHECK_THROWS_AS(ddbar([](const AmbientPoint&) { return 0.0; }, flat, base, bad), DomainError);
}

TEST_CASE("non-finite fields are reported") {
    AmbientPoint base(0.0, 1.0, 1.0, 1.0);
    const Chart flat = Chart::free_space({kX1, kX2, kY}, 3, base);
    auto nan_field = [](const AmbientPoint&) { return std::numeric_limits<double>::quiet_NaN(); };
    CHECK_THROWS_AS(ddbar(nan_field, flat, base), EvaluationError);
}

TEST_CASE("directional derivative against exact radial scaling") {
    // d/dt (|z|^2 + r^2)(p + t xi) with xi the Euler displacement of the
    // weighted action: the degree-2 homogeneity gives exactly 2(|z|^2+r^2)
    // for the weighted Euler field with unit parameter.
    const AmbientPoint p = cxa2_cover(cplx(0.5, 0.2), 1.1, cplx(0.3, 0.7));
    const Chart amb = Chart::free_space({kZ, kX1, kX2}, 3, p);
    (void)amb;
    // Weighted Euler field: xi_j = w_j v_j; phi(t.p) = |t|^2 phi for the
    // radial scaling direction t = 1 + s.
    std::array<cplx, 4> xi{};
    const WeightSystem ws;
    for (int j = 0; j < 4; ++j) xi[static_cast<size_t>(j)] = static_cast<double>(ws.weight(j)) * p[j];
    auto phi = [](const AmbientPoint& q) { return std::norm(q.z()) + r2_a2(q); };
    // Straight-line directional derivative of the full ambient function.
    const double h = 1e-4;
    AmbientPoint qp = p, qm = p;
    for (int j = 0; j < 4; ++j) {
        qp[j] += h * xi[static_cast<size_t>(j)];
        qm[j] -= h * xi[static_cast<size_t>(j)];
    }
    const double fd = (phi(qp) - phi(qm)) / (2.0 * h);
    CHECK(fd == doctest::Approx(2.0 * phi(p)).epsilon(1e-6));
}
