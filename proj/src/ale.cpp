#include "cylab/ale.hpp"

#include <cmath>

namespace cylab {

namespace {

double dist(const Vec3& x, double cz) {
    const double dx = x[0], dy = x[1], dz = x[2] - cz;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

double GHData::potential(const Vec3& x) const {
    double v = 0;
    for (double c : center_z) v += 0.5 / dist(x, c);
    if (v_extra_quadratic != 0.0)
        v += v_extra_quadratic * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    return v;
}

Vec3 GHData::grad_potential(const Vec3& x) const {
    Vec3 g{};
    for (double c : center_z) {
        const double r = dist(x, c);
        const double f = -0.5 / (r * r * r);
        g[0] += f * x[0];
        g[1] += f * x[1];
        g[2] += f * (x[2] - c);
    }
    if (v_extra_quadratic != 0.0)
        for (int i = 0; i < 3; ++i) g[static_cast<size_t>(i)] += 2.0 * v_extra_quadratic * x[static_cast<size_t>(i)];
    return g;
}

Vec3 GHData::theta(const Vec3& x) const {
    const double rho2 = x[0] * x[0] + x[1] * x[1];
    if (rho2 < 1e-280) throw DomainError("GHData::theta: on the axis (gauge string)");
    double a = 0;
    for (double c : center_z) a += 0.5 * (x[2] - c) / dist(x, c);
    // a dphi with dphi = (-x2 dx1 + x1 dx2)/rho^2.
    return {-a * x[1] / rho2, a * x[0] / rho2, 0.0};
}

double GHData::min_center_distance(const Vec3& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (double c : center_z) m = std::min(m, dist(x, c));
    return m;
}

RMat gh_metric(const GHData& gh, const Vec3& x) {
    const double V = gh.potential(x);
    if (!(V > 0)) throw MetricDegeneracyError("gh_metric: potential not positive");
    const Vec3 th = gh.theta(x);
    RMat g(4);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j)
            g.at(i, j) = (i == j ? V : 0.0) + th[static_cast<size_t>(i)] * th[static_cast<size_t>(j)] / V;
        g.at(i, 3) = th[static_cast<size_t>(i)] / V;
        g.at(3, i) = th[static_cast<size_t>(i)] / V;
    }
    g.at(3, 3) = 1.0 / V;
    return g;
}

double gh_monopole_residual(const GHData& gh, const Vec3& x) {
    const double h = gh.fd_rel * std::max(0.5, gh.min_center_distance(x));
    auto theta_at = [&](int dir, double step) {
        Vec3 q = x;
        q[static_cast<size_t>(dir)] += step;
        return gh.theta(q);
    };
    double dtheta[3][3];
    for (int j = 0; j < 3; ++j) {
        const Vec3 tp = theta_at(j, h), tm = theta_at(j, -h);
        for (int k = 0; k < 3; ++k)
            dtheta[j][k] = (tp[static_cast<size_t>(k)] - tm[static_cast<size_t>(k)]) / (2.0 * h);
    }
    const Vec3 gv = gh.grad_potential(x);
    // (*dV)_{jk} = eps_{jkl} d_l V.
    double worst = 0;
    const int eps[3][3] = {{0, 3, -2}, {-3, 0, 1}, {2, -1, 0}};  // sign * (index+1)
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            if (j == k) continue;
            const int code = eps[j][k];
            const double star = (code > 0 ? 1.0 : -1.0) * gv[static_cast<size_t>(std::abs(code) - 1)];
            worst = std::max(worst, std::abs((dtheta[j][k] - dtheta[k][j]) - star));
        }
    return worst;
}

namespace {

struct CurvatureWork {
    double g[4][4];
    double gi[4][4];
    double dg[3][4][4];      // spatial derivative slots only
    double ddg[3][3][4][4];
    double Gamma[4][4][4];
    double dGamma[3][4][4][4];
    double Riem[4][4][4][4];  // R^a_{b c d}
};

void curvature_tensors(const GHData& gh, const Vec3& x, CurvatureWork& w) {
    const double h = gh.fd_rel * std::max(0.5, gh.min_center_distance(x));
    auto metric_at = [&](int d1, double s1, int d2, double s2) {
        Vec3 q = x;
        if (d1 >= 0) q[static_cast<size_t>(d1)] += s1;
        if (d2 >= 0) q[static_cast<size_t>(d2)] += s2;
        return gh_metric(gh, q);
    };
    const RMat g0 = metric_at(-1, 0, -1, 0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) w.g[i][j] = g0.at(i, j);
    const RMat gi = inverse(g0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) w.gi[i][j] = gi.at(i, j);

    for (int a = 0; a < 3; ++a) {
        const RMat gp = metric_at(a, h, -1, 0), gm = metric_at(a, -h, -1, 0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) w.dg[a][i][j] = (gp.at(i, j) - gm.at(i, j)) / (2.0 * h);
    }
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            if (a == b) {
                const RMat gp = metric_at(a, h, -1, 0), gm = metric_at(a, -h, -1, 0);
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        w.ddg[a][a][i][j] = (gp.at(i, j) - 2.0 * w.g[i][j] + gm.at(i, j)) / (h * h);
            } else {
                const RMat gpp = metric_at(a, h, b, h), gpm = metric_at(a, h, b, -h);
                const RMat gmp = metric_at(a, -h, b, h), gmm = metric_at(a, -h, b, -h);
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) {
                        const double v = (gpp.at(i, j) - gpm.at(i, j) - gmp.at(i, j) + gmm.at(i, j)) /
                                         (4.0 * h * h);
                        w.ddg[a][b][i][j] = v;
                        w.ddg[b][a][i][j] = v;
                    }
            }
        }

    auto dg_of = [&](int a, int i, int j) { return a < 3 ? w.dg[a][i][j] : 0.0; };

    for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0;
                for (int m = 0; m < 4; ++m)
                    s += w.gi[l][m] * (dg_of(i, j, m) + dg_of(j, i, m) - dg_of(m, i, j));
                w.Gamma[l][i][j] = 0.5 * s;
            }

    // dGamma only along spatial directions (the fiber is Killing).
    for (int a = 0; a < 3; ++a) {
        double dgi[4][4];
        for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 4; ++m) {
                double s = 0;
                for (int p = 0; p < 4; ++p)
                    for (int q = 0; q < 4; ++q) s += w.gi[l][p] * w.dg[a][p][q] * w.gi[q][m];
                dgi[l][m] = -s;
            }
        auto ddg_of = [&](int c, int i, int j) { return c < 3 ? w.ddg[a][c][i][j] : 0.0; };
        for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    double s = 0;
                    for (int m = 0; m < 4; ++m) {
                        s += dgi[l][m] * (dg_of(i, j, m) + dg_of(j, i, m) - dg_of(m, i, j));
                        s += w.gi[l][m] * (ddg_of(i, j, m) + ddg_of(j, i, m) - ddg_of(m, i, j));
                    }
                    w.dGamma[a][l][i][j] = 0.5 * s;
                }
    }

    auto dGamma_of = [&](int mu, int l, int i, int j) { return mu < 3 ? w.dGamma[mu][l][i][j] : 0.0; };
    for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = 0; nu < 4; ++nu) {
                    double v = dGamma_of(mu, r, nu, s) - dGamma_of(nu, r, mu, s);
                    for (int l = 0; l < 4; ++l)
                        v += w.Gamma[r][mu][l] * w.Gamma[l][nu][s] - w.Gamma[r][nu][l] * w.Gamma[l][mu][s];
                    w.Riem[r][s][mu][nu] = v;
                }
}

}  // namespace

double gh_ricci_norm(const GHData& gh, const Vec3& x) {
    CurvatureWork w;
    curvature_tensors(gh, x, w);
    double ric[4][4];
    for (int s = 0; s < 4; ++s)
        for (int nu = 0; nu < 4; ++nu) {
            double v = 0;
            for (int mu = 0; mu < 4; ++mu) v += w.Riem[mu][s][mu][nu];
            ric[s][nu] = v;
        }
    double n2 = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) n2 += w.gi[a][c] * w.gi[b][d] * ric[a][b] * ric[c][d];
    return std::sqrt(std::max(0.0, n2));
}

double gh_riemann_norm(const GHData& gh, const Vec3& x) {
    CurvatureWork w;
    curvature_tensors(gh, x, w);
    // Lower the first index, then contract with four inverses.
    double rl[4][4][4][4];
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double v = 0;
                    for (int l = 0; l < 4; ++l) v += w.g[a][l] * w.Riem[l][b][c][d];
                    rl[a][b][c][d] = v;
                }
    double n2 = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double up = 0;
                    for (int p = 0; p < 4; ++p)
                        for (int q = 0; q < 4; ++q)
                            for (int r = 0; r < 4; ++r)
                                for (int s = 0; s < 4; ++s)
                                    up += w.gi[a][p] * w.gi[b][q] * w.gi[c][r] * w.gi[d][s] * rl[p][q][r][s];
                    n2 += up * rl[a][b][c][d];
                }
    return std::sqrt(std::max(0.0, n2));
}

double gh_ricci_residual(const GHData& gh, const std::vector<Vec3>& samples) {
    double worst = 0;
    for (const auto& x : samples) {
        if (gh.min_center_distance(x) < 1e-3)
            throw DomainError("gh_ricci_residual: sample too close to a center");
        worst = std::max(worst, gh_ricci_norm(gh, x));
    }
    return worst;
}

double gh_spatial_block_deviation(const GHData& gh, const GHData& cone, const Vec3& x) {
    const RMat g = gh_metric(gh, x);
    const RMat gc = gh_metric(cone, x);
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double d = g.at(i, j) - gc.at(i, j);
            s += d * d;
        }
    return std::sqrt(s);
}

DecayFit gh_cone_decay_fit(const GHData& gh, const std::vector<double>& radii,
                           const std::vector<Vec3>& directions) {
    GHData cone = gh;
    cone.center_z.assign(gh.center_z.size(), 0.0);
    // Abscissa: the cone-metric radial distance 2 sqrt(m r) for total charge
    // m (the rate convention of asymptotically conical geometry). In the
    // coordinate radius the same data sits at half the slope and approaches
    // it from above, never reaching -3 at finite radius.
    const double mass = 0.5 * static_cast<double>(gh.center_z.size());
    std::vector<std::pair<double, double>> pts;
    for (double r : radii) {
        double dev = 0;
        for (const auto& dir : directions) {
            const Vec3 x{r * dir[0], r * dir[1], r * dir[2]};
            dev = std::max(dev, gh_spatial_block_deviation(gh, cone, x));
        }
        pts.emplace_back(2.0 * std::sqrt(mass * r), dev);
    }
    return fit_loglog(pts);
}

}  // namespace cylab
