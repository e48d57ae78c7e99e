#include "cylab/smallmat.hpp"

#include <cmath>

namespace cylab {

bool solve_inplace(CMat A, std::array<cplx, CMat::kCap>& b) {
    const int n = A.n;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(A.at(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return false;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col, j));
            std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
        }
        const cplx inv = 1.0 / A.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            cplx f = A.at(r, col) * inv;
            if (f == cplx(0.0)) continue;
            for (int j = col; j < n; ++j) A.at(r, j) -= f * A.at(col, j);
            b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        cplx s = b[static_cast<size_t>(row)];
        for (int j = row + 1; j < n; ++j) s -= A.at(row, j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(row)] = s / A.at(row, row);
    }
    return true;
}

cplx determinant(const CMat& M) {
    CMat A = M;
    const int n = A.n;
    cplx det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(A.at(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col, j));
            det = -det;
        }
        det *= A.at(col, col);
        const cplx inv = 1.0 / A.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            cplx f = A.at(r, col) * inv;
            if (f == cplx(0.0)) continue;
            for (int j = col; j < n; ++j) A.at(r, j) -= f * A.at(col, j);
        }
    }
    return det;
}

CMat inverse(const CMat& A) {
    const int n = A.n;
    CMat inv(n);
    for (int col = 0; col < n; ++col) {
        std::array<cplx, CMat::kCap> e{};
        e[static_cast<size_t>(col)] = 1.0;
        if (!solve_inplace(A, e)) throw MetricDegeneracyError("singular matrix in inverse()");
        for (int r = 0; r < n; ++r) inv.at(r, col) = e[static_cast<size_t>(r)];
    }
    return inv;
}

std::array<double, CMat::kCap> hermitian_eigenvalues(CMat A) {
    const int n = A.n;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(A.at(p, q));
        if (off < 1e-30 * (1.0 + A.frobenius())) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                cplx apq = A.at(p, q);
                double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                double app = A.at(p, p).real();
                double aqq = A.at(q, q).real();
                double tau = (aqq - app) / (2.0 * mag);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                cplx phase = apq / mag;
                // Column rotation: v_p' = c v_p - s conj(phase) v_q, v_q' = s phase v_p + c v_q.
                for (int k = 0; k < n; ++k) {
                    cplx akp = A.at(k, p), akq = A.at(k, q);
                    A.at(k, p) = c * akp - s * std::conj(phase) * akq;
                    A.at(k, q) = s * phase * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    cplx apk = A.at(p, k), aqk = A.at(q, k);
                    A.at(p, k) = c * apk - s * phase * aqk;
                    A.at(q, k) = s * std::conj(phase) * apk + c * aqk;
                }
            }
    }
    std::array<double, CMat::kCap> ev{};
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = A.at(i, i).real();
    std::sort(ev.begin(), ev.begin() + n);
    return ev;
}

double hermitian_condition(const CMat& A) {
    auto ev = hermitian_eigenvalues(A);
    double lo = std::abs(ev[0]);
    double hi = std::abs(ev[0]);
    for (int i = 1; i < A.n; ++i) {
        lo = std::min(lo, std::abs(ev[static_cast<size_t>(i)]));
        hi = std::max(hi, std::abs(ev[static_cast<size_t>(i)]));
    }
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

bool solve_inplace(RMat A, std::array<double, RMat::kCap>& b) {
    const int n = A.n;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(A.at(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return false;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col, j));
            std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
        }
        const double inv = 1.0 / A.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            double f = A.at(r, col) * inv;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) A.at(r, j) -= f * A.at(col, j);
            b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        double s = b[static_cast<size_t>(row)];
        for (int j = row + 1; j < n; ++j) s -= A.at(row, j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(row)] = s / A.at(row, row);
    }
    return true;
}

RMat inverse(const RMat& A) {
    const int n = A.n;
    RMat inv(n);
    for (int col = 0; col < n; ++col) {
        std::array<double, RMat::kCap> e{};
        e[static_cast<size_t>(col)] = 1.0;
        if (!solve_inplace(A, e)) throw MetricDegeneracyError("singular matrix in inverse()");
        for (int r = 0; r < n; ++r) inv.at(r, col) = e[static_cast<size_t>(r)];
    }
    return inv;
}

double determinant(const RMat& M) {
    RMat A = M;
    const int n = A.n;
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(A.at(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col, j));
            det = -det;
        }
        det *= A.at(col, col);
        const double inv = 1.0 / A.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            double f = A.at(r, col) * inv;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) A.at(r, j) -= f * A.at(col, j);
        }
    }
    return det;
}

std::array<double, RMat::kCap> symmetric_eigenvalues(RMat A) {
    const int n = A.n;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += A.at(p, q) * A.at(p, q);
        if (off < 1e-30 * (1.0 + A.frobenius())) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = A.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double tau = (A.at(q, q) - A.at(p, p)) / (2.0 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = A.at(k, p), akq = A.at(k, q);
                    A.at(k, p) = c * akp - s * akq;
                    A.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = A.at(p, k), aqk = A.at(q, k);
                    A.at(p, k) = c * apk - s * aqk;
                    A.at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::array<double, RMat::kCap> ev{};
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = A.at(i, i);
    std::sort(ev.begin(), ev.begin() + n);
    return ev;
}

RMat cholesky_lower(const RMat& G) {
    const int n = G.n;
    RMat L(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = G.at(i, j);
            for (int k = 0; k < j; ++k) s -= L.at(i, k) * L.at(j, k);
            if (i == j) {
                if (!(s > 0)) throw MetricDegeneracyError("cholesky: matrix not positive definite");
                L.at(i, i) = std::sqrt(s);
            } else {
                L.at(i, j) = s / L.at(j, j);
            }
        }
    }
    return L;
}

CMat cholesky_lower(const CMat& G) {
    const int n = G.n;
    CMat L(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            cplx s = G.at(i, j);
            for (int k = 0; k < j; ++k) s -= L.at(i, k) * std::conj(L.at(j, k));
            if (i == j) {
                if (!(s.real() > 0) || std::abs(s.imag()) > 1e-10 * s.real())
                    throw MetricDegeneracyError("cholesky: matrix not positive definite");
                L.at(i, i) = std::sqrt(s.real());
            } else {
                L.at(i, j) = s / L.at(j, j).real();
            }
        }
    }
    return L;
}

namespace {

RMat lower_solve_right(const RMat& L, const RMat& B) {
    // X with L X = B.
    const int n = L.n;
    RMat X(n);
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row) {
            double s = B.at(row, col);
            for (int k = 0; k < row; ++k) s -= L.at(row, k) * X.at(k, col);
            X.at(row, col) = s / L.at(row, row);
        }
    return X;
}

CMat lower_solve_right(const CMat& L, const CMat& B) {
    const int n = L.n;
    CMat X(n);
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row) {
            cplx s = B.at(row, col);
            for (int k = 0; k < row; ++k) s -= L.at(row, k) * X.at(k, col);
            X.at(row, col) = s / L.at(row, row);
        }
    return X;
}

}  // namespace

double form_norm(const RMat& D, const RMat& G) {
    const RMat L = cholesky_lower(G);
    // B = L^{-1} D L^{-T}: solve L Y = D, then L B^T = Y^T.
    const RMat Y = lower_solve_right(L, D);
    const RMat B = lower_solve_right(L, Y.transposed());
    const auto ev = symmetric_eigenvalues(B);
    double m = 0;
    for (int i = 0; i < B.n; ++i) m = std::max(m, std::abs(ev[static_cast<size_t>(i)]));
    return m;
}

double form_norm(const CMat& D, const CMat& G) {
    const CMat L = cholesky_lower(G);
    CMat Y = lower_solve_right(L, D);
    // Adjoint of Y, then solve again.
    CMat Yh(Y.n);
    for (int i = 0; i < Y.n; ++i)
        for (int j = 0; j < Y.n; ++j) Yh.at(i, j) = std::conj(Y.at(j, i));
    CMat B = lower_solve_right(L, Yh);
    B.hermitize();
    const auto ev = hermitian_eigenvalues(B);
    double m = 0;
    for (int i = 0; i < B.n; ++i) m = std::max(m, std::abs(ev[static_cast<size_t>(i)]));
    return m;
}

RMat hermitian_to_real_form(const CMat& H) {
    const int n = H.n;
    RMat M(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double A = H.at(i, j).real();
            const double B = H.at(i, j).imag();
            M.at(i, j) = A;
            M.at(n + i, n + j) = A;
            M.at(i, n + j) = -B;
            M.at(n + i, j) = B;
        }
    return M;
}

double operator_norm(const RMat& A, const RMat& G) {
    // |A|_G^2 is the largest eigenvalue of G^{-1} A^T G A, computed by power
    // iteration with a fixed iteration budget.
    const int n = A.n;
    RMat M = inverse(G) * A.transposed() * G * A;
    std::array<double, RMat::kCap> v{};
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = 1.0 / std::sqrt(static_cast<double>(n));
    double lambda = 0;
    for (int it = 0; it < 200; ++it) {
        std::array<double, RMat::kCap> w{};
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += M.at(i, j) * v[static_cast<size_t>(j)];
            w[static_cast<size_t>(i)] = s;
        }
        double nrm = 0;
        for (int i = 0; i < n; ++i) nrm += w[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        double prev = lambda;
        lambda = nrm;
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] / nrm;
        if (it > 4 && std::abs(lambda - prev) < 1e-14 * lambda) break;
    }
    return std::sqrt(std::max(0.0, lambda));
}

}  // namespace cylab
