#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "cylab/types.hpp"

namespace cylab {

// Dense complex matrix with a small fixed capacity; n is the runtime size.
// Covers metric forms (2x2, 3x3), ambient Hessians (4x4) and bordered KKT
// systems (5x5).
struct CMat {
    static constexpr int kCap = 5;
    int n = 0;
    std::array<cplx, kCap * kCap> a{};

    CMat() = default;
    explicit CMat(int size) : n(size) {}

    cplx& at(int i, int j) { return a[static_cast<size_t>(i * kCap + j)]; }
    cplx at(int i, int j) const { return a[static_cast<size_t>(i * kCap + j)]; }

    static CMat identity(int size) {
        CMat m(size);
        for (int i = 0; i < size; ++i) m.at(i, i) = 1.0;
        return m;
    }

    CMat operator+(const CMat& o) const {
        CMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = at(i, j) + o.at(i, j);
        return r;
    }
    CMat operator-(const CMat& o) const {
        CMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = at(i, j) - o.at(i, j);
        return r;
    }
    CMat operator*(const CMat& o) const {
        CMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx s = 0;
                for (int k = 0; k < n; ++k) s += at(i, k) * o.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }
    CMat scaled(cplx s) const {
        CMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = s * at(i, j);
        return r;
    }

    void hermitize() {
        for (int i = 0; i < n; ++i) {
            at(i, i) = cplx(at(i, i).real(), 0.0);
            for (int j = i + 1; j < n; ++j) {
                cplx m = 0.5 * (at(i, j) + std::conj(at(j, i)));
                at(i, j) = m;
                at(j, i) = std::conj(m);
            }
        }
    }

    double frobenius() const {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += std::norm(at(i, j));
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s = std::max(s, std::abs(at(i, j)));
        return s;
    }
};

// Solves A x = b in place by partial-pivoted Gaussian elimination.
// Returns false when the pivot collapses (singular to working precision).
bool solve_inplace(CMat A, std::array<cplx, CMat::kCap>& b);

// LU determinant with partial pivoting.
cplx determinant(const CMat& A);

// Inverse; throws MetricDegeneracyError when singular.
CMat inverse(const CMat& A);

// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi sweeps,
// ascending order.
std::array<double, CMat::kCap> hermitian_eigenvalues(CMat A);

// Largest |eigenvalue| ratio diagnostic for conditioning of Hermitian A.
double hermitian_condition(const CMat& A);

inline cplx trace(const CMat& A) {
    cplx t = 0;
    for (int i = 0; i < A.n; ++i) t += A.at(i, i);
    return t;
}

// Real matrix with small capacity; used for real-linear tangent maps
// (6x6 on three complex chart coordinates) and the Gibbons-Hawking 4-metric.
struct RMat {
    static constexpr int kCap = 8;
    int n = 0;
    std::array<double, kCap * kCap> a{};

    RMat() = default;
    explicit RMat(int size) : n(size) {}

    double& at(int i, int j) { return a[static_cast<size_t>(i * kCap + j)]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i * kCap + j)]; }

    static RMat identity(int size) {
        RMat m(size);
        for (int i = 0; i < size; ++i) m.at(i, i) = 1.0;
        return m;
    }

    RMat operator*(const RMat& o) const {
        RMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += at(i, k) * o.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }
    RMat operator+(const RMat& o) const {
        RMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = at(i, j) + o.at(i, j);
        return r;
    }
    RMat operator-(const RMat& o) const {
        RMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = at(i, j) - o.at(i, j);
        return r;
    }
    RMat transposed() const {
        RMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = at(j, i);
        return r;
    }
    double frobenius() const {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += at(i, j) * at(i, j);
        return std::sqrt(s);
    }
};

bool solve_inplace(RMat A, std::array<double, RMat::kCap>& b);
RMat inverse(const RMat& A);
double determinant(const RMat& A);

// Eigenvalues of a symmetric real matrix (Jacobi), ascending.
std::array<double, RMat::kCap> symmetric_eigenvalues(RMat A);

// Operator norm of A with respect to the inner product defined by the
// symmetric positive definite G: sup |Ax|_G / |x|_G.
double operator_norm(const RMat& A, const RMat& G);

// Lower Cholesky factor of a symmetric/Hermitian positive definite matrix.
RMat cholesky_lower(const RMat& G);
CMat cholesky_lower(const CMat& G);

// Norm of the quadratic form D measured against the positive form G:
// max |eigenvalue| of G^{-1} D, via the Cholesky-congruent symmetric matrix.
double form_norm(const RMat& D, const RMat& G);
double form_norm(const CMat& D, const CMat& G);

// Real 2n x 2n Gram matrix of the Hermitian form H in [Re; Im] coordinates.
RMat hermitian_to_real_form(const CMat& H);

}  // namespace cylab
