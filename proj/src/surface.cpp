#include "cylab/surface.hpp"

#include <cmath>

namespace cylab {

namespace {

// Double-double scalars, enough to evaluate the defining polynomial without
// losing the small b y term against monomials that are many orders larger
// (the large-radius samples put x_i^2 near rho^6 while b y is rho^2).
struct DD {
    double hi = 0, lo = 0;
};

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    const DD t = two_sum(s.hi, s.lo);
    return t;
}

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return two_sum(p.hi, p.lo);
}

struct CDD {
    DD re, im;
};

inline CDD cdd(cplx v) { return {{v.real(), 0.0}, {v.imag(), 0.0}}; }

inline CDD cdd_add(CDD a, CDD b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }

inline CDD cdd_mul(CDD a, CDD b) {
    const DD rr = dd_mul(a.re, b.re);
    const DD ii = dd_mul(a.im, b.im);
    const DD ri = dd_mul(a.re, b.im);
    const DD ir = dd_mul(a.im, b.re);
    return {dd_add(rr, DD{-ii.hi, -ii.lo}), dd_add(ri, ir)};
}

inline cplx cdd_round(CDD a) { return {a.re.hi + a.re.lo, a.im.hi + a.im.lo}; }

inline CDD cdd2(cplx a, cplx b) { return cdd_mul(cdd(a), cdd(b)); }

}  // namespace

namespace {

CDD eval_cdd(const SurfacePoly& s, const AmbientPoint& p) {
    const CDD x1 = cdd(p.x1()), x2 = cdd(p.x2()), y = cdd(p.y());
    CDD f = cdd(s.c);
    f = cdd_add(f, cdd_mul(x1, x1));
    f = cdd_add(f, cdd_mul(x2, x2));
    f = cdd_add(f, cdd_mul(cdd_mul(y, y), y));
    f = cdd_add(f, cdd_mul(cdd(s.b), y));
    if (s.nvars == 4) f = cdd_add(f, cdd_mul(cdd(s.a), cdd(p.z())));
    for (const auto& [e, coeff] : s.extra) {
        CDD m = cdd(coeff);
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < e[static_cast<size_t>(i)]; ++k) m = cdd_mul(m, cdd(p[i]));
        f = cdd_add(f, m);
    }
    return f;
}

}  // namespace

cplx SurfacePoly::eval(const AmbientPoint& p) const { return cdd_round(eval_cdd(*this, p)); }

cplx SurfacePoly::eval_shifted(const AmbientPoint& p, const std::array<cplx, 4>& delta) const {
    if (!extra.empty())
        throw DomainError("eval_shifted: extra terms are not supported in the shift expansion");
    const cplx d1 = delta[kX1], d2 = delta[kX2], dy = delta[kY];
    CDD f = eval_cdd(*this, p);
    CDD corr = cdd2(b, dy);
    if (nvars == 4) corr = cdd_add(corr, cdd2(a, delta[kZ]));
    corr = cdd_add(corr, cdd2(2.0 * p.x1(), d1));
    corr = cdd_add(corr, cdd2(2.0 * p.x2(), d2));
    corr = cdd_add(corr, cdd(d1 * d1 + d2 * d2));
    corr = cdd_add(corr, cdd2(3.0 * p.y() * p.y(), dy));
    corr = cdd_add(corr, cdd(3.0 * p.y() * dy * dy + dy * dy * dy));
    return cdd_round(cdd_add(f, corr));
}

std::array<cplx, 4> SurfacePoly::gradient(const AmbientPoint& p) const {
    std::array<cplx, 4> g{};
    if (nvars == 4) g[kZ] = a;
    g[kX1] = 2.0 * p.x1();
    g[kX2] = 2.0 * p.x2();
    g[kY] = b + 3.0 * p.y() * p.y();
    for (const auto& [e, coeff] : extra) {
        for (int i = 0; i < 4; ++i) {
            const int ei = e[static_cast<size_t>(i)];
            if (ei == 0) continue;
            cplx m = coeff * static_cast<double>(ei) * ipow(p[i], ei - 1);
            for (int j = 0; j < 4; ++j)
                if (j != i && e[static_cast<size_t>(j)] != 0) m *= ipow(p[j], e[static_cast<size_t>(j)]);
            g[static_cast<size_t>(i)] += m;
        }
    }
    return g;
}

cplx SurfacePoly::second_diag(const AmbientPoint& p, int coord) const {
    cplx h = 0.0;
    if (coord == kX1 || coord == kX2) h = 2.0;
    if (coord == kY) h = 6.0 * p.y();
    for (const auto& [e, coeff] : extra) {
        const int ei = e[static_cast<size_t>(coord)];
        if (ei < 2) continue;
        cplx m = coeff * static_cast<double>(ei) * static_cast<double>(ei - 1) * ipow(p[coord], ei - 2);
        for (int j = 0; j < 4; ++j)
            if (j != coord && e[static_cast<size_t>(j)] != 0) m *= ipow(p[j], e[static_cast<size_t>(j)]);
        h += m;
    }
    return h;
}

double SurfacePoly::gradient_scale(const AmbientPoint& p) const {
    double s = std::abs(b) + 2.0 * std::abs(p.x1()) + 2.0 * std::abs(p.x2()) +
               3.0 * std::norm(p.y());
    if (nvars == 4) s += std::abs(a);
    for (const auto& [e, coeff] : extra) {
        for (int i = 0; i < 4; ++i) {
            const int ei = e[static_cast<size_t>(i)];
            if (ei == 0) continue;
            double m = std::abs(coeff) * ei * std::abs(ipow(p[i], ei - 1));
            for (int j = 0; j < 4; ++j)
                if (j != i && e[static_cast<size_t>(j)] != 0) m *= std::abs(ipow(p[j], e[static_cast<size_t>(j)]));
            s += m;
        }
    }
    return s;
}

double SurfacePoly::magnitude_scale(const AmbientPoint& p) const {
    double s = std::abs(c) + std::norm(p.x1()) + std::norm(p.x2()) + std::abs(ipow(p.y(), 3)) +
               std::abs(b) * std::abs(p.y());
    if (nvars == 4) s += std::abs(a) * std::abs(p.z());
    for (const auto& [e, coeff] : extra) {
        double m = std::abs(coeff);
        for (int i = 0; i < 4; ++i)
            if (e[static_cast<size_t>(i)] != 0) m *= std::abs(ipow(p[i], e[static_cast<size_t>(i)]));
        s += m;
    }
    return s + 1.0;
}

SurfacePoly SurfacePoly::x_ab(cplx a, cplx b) {
    SurfacePoly s;
    s.a = a;
    s.b = b;
    s.nvars = 4;
    return s;
}

SurfacePoly SurfacePoly::cone_cylinder() {
    SurfacePoly s;
    s.nvars = 4;
    return s;
}

SurfacePoly SurfacePoly::a2_cone() {
    SurfacePoly s;
    s.nvars = 3;
    return s;
}

SurfacePoly SurfacePoly::v_fiber(cplx kappa) {
    SurfacePoly s;
    s.nvars = 3;
    s.c = kappa;
    return s;
}

}  // namespace cylab
