#pragma once

#include <vector>

#include "cylab/geometry.hpp"
#include "cylab/surface.hpp"

namespace cylab {

// Quadratic J(r d_r)-invariant harmonic functions on C x A2.
//   u2 = 2|z|^2 - r^2
//   u1 = (2/3) i b_{ij} x_i xbar_j / (r^4 - |y|^2),  b_{12} = beta skew.
// u1 is fixed by its pullback to the C^2 cover, where it equals
// -(beta/3)(|z1|^2 - |z2|^2); the (r^4 - |y|^2) radial factor is the closed
// form matching that pullback (see the cover-agreement tests).
double eval_u2(const AmbientPoint& p);
double eval_u1(const AmbientPoint& p, double beta);

// Holomorphic linear vector field W(v_j) = sum_i A(i,j) v_i.
struct LinearField {
    CMat A{4};

    std::array<cplx, 4> displacement(const AmbientPoint& p) const {
        std::array<cplx, 4> xi{};
        for (int j = 0; j < 4; ++j) {
            cplx s = 0;
            for (int i = 0; i < 4; ++i) s += A.at(i, j) * p[i];
            xi[static_cast<size_t>(j)] = s;
        }
        return xi;
    }

    // W applied to the defining polynomial (chain rule).
    cplx apply_to(const SurfacePoly& s, const AmbientPoint& p) const {
        const auto g = s.gradient(p);
        const auto xi = displacement(p);
        cplx v = 0;
        for (int j = 0; j < 4; ++j)
            if (s.is_var(j)) v += g[static_cast<size_t>(j)] * xi[static_cast<size_t>(j)];
        return v;
    }

    static LinearField diagonal(cplx cz, cplx cx1, cplx cx2, cplx cy);
    static LinearField w1(double beta);  // i beta (x1 d_{x2} - x2 d_{x1})
    static LinearField w2();             // z d_z - (1/2)(2 y d_y + 3 x_i d_{x_i})
    static LinearField v_generator();    // z d_z + (1/3) y d_y + (1/2) x_i d_{x_i}
    static LinearField euler3();         // x1 d_{x1} + x2 d_{x2} + y d_y (unit weights)
};

// Action of the real field Re W on a scalar, Re(W phi) = (1/2) d/dt phi(p + t xi).
double real_field_action(const LinearField& W, const ScalarField& phi, const AmbientPoint& p,
                         const FDConfig& cfg = {});

// Max |W(F)| over the samples, normalized by the polynomial magnitude.
double tangency_residual(const LinearField& W, const SurfacePoly& s,
                         const std::vector<AmbientPoint>& samples);

// Wedge/denominator shape of a holomorphic volume form for symbolic Lie
// derivatives of linear fields.
struct FormAlgebra {
    std::array<int, 3> wedge{kX1, kX2, kY};
    int nwedge = 3;
    int denom_var = -1;
    int denom_exp = 0;

    static FormAlgebra cxa2() { return {{kZ, kX1, kX2}, 3, kY, 2}; }
    static FormAlgebra a2() { return {{kX1, kX2, kY}, 2, kY, 2}; }
    static FormAlgebra flat3() { return {{kX1, kX2, kY}, 3, -1, 0}; }
};

// lambda with L_W Omega = lambda Omega, from the linear coefficients.
// Throws TangencyError if the field mixes coordinates in a way that does not
// preserve the form's shape, or (when a surface is given) is not tangent.
cplx lie_derivative_volume(const LinearField& W, const FormAlgebra& form,
                           const SurfacePoly* tangent_to = nullptr,
                           const std::vector<AmbientPoint>* samples = nullptr);

// One-parameter automorphism group generated by Re(V):
// Phi_t(z, x1, x2, y) = (e^{t/2} z, e^{t/4} x1, e^{t/4} x2, e^{t/6} y).
struct AutomorphismPhi {
    cplx t{0.0};
    AmbientPoint apply(const AmbientPoint& p) const {
        return AmbientPoint(std::exp(t / 2.0) * p.z(), std::exp(t / 4.0) * p.x1(),
                            std::exp(t / 4.0) * p.x2(), std::exp(t / 6.0) * p.y());
    }
    AutomorphismPhi after(const AutomorphismPhi& other) const { return {t + other.t}; }
};

// Phi_t(X_{1,b}) = X_{1, e^{t/3} b}.
HypersurfaceFamily phi_action_on_family(cplx t, const HypersurfaceFamily& X);

// max |V(|z|^2+r^2) - (4/9)(|z|^2+r^2) - (5/18) u2| over the samples,
// V acting by finite-difference directional derivative.
double radial_identity_residual(const std::vector<AmbientPoint>& samples, const FDConfig& cfg = {});

struct TaylorFit {
    double slope = 0;
    double stderr_ = 0;
    std::vector<std::pair<double, double>> samples;  // (t, E(t))
};

// E(t) = sup_p |e^{-4t/9} (|z|^2+r^2)(Phi_t p) - (|z|^2+r^2)(p) - (5/18) u2(p) t|
// fitted on log-log; first_order_coeff = 5/18 by default, 0 for the
// negative control.
TaylorFit taylor_expansion_check(const std::vector<AmbientPoint>& samples,
                                 const std::vector<double>& ts, double first_order_coeff = 5.0 / 18.0);

// max |Laplacian u| over C x A2 cover samples (z, z1, z2), flat product
// metric on the cover chart.
double check_harmonic(const std::function<double(const AmbientPoint&)>& u,
                      const std::vector<std::array<cplx, 3>>& cover_samples, const FDConfig& cfg = {});

}  // namespace cylab
