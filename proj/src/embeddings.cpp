#include "cylab/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace cylab {

EmbeddingState rescale_step(const EmbeddingState& s) {
    s.validate();
    return {s.i + 1, s.a * 0x1p-5, s.b * 0x1p-4};
}

double invariant_b(const EmbeddingState& s) {
    s.validate();
    return s.b / std::sqrt(s.a) * std::pow(2.0, 1.5 * static_cast<double>(s.i));
}

void QuasiHomogPoly::validate() const {
    if (nvars < 1 || nvars > 4) throw DomainError("QuasiHomogPoly: nvars must be 1..4");
    for (int v = 0; v < nvars; ++v)
        if (weights[static_cast<size_t>(v)] <= 0) throw DomainError("QuasiHomogPoly: weights must be positive");
    for (const auto& [e, c] : terms) {
        if (c == 0) continue;
        long long deg = 0;
        for (int v = 0; v < nvars; ++v) deg += weights[static_cast<size_t>(v)] * e[static_cast<size_t>(v)];
        if (deg != degree) throw DomainError("QuasiHomogPoly: monomial off the declared degree");
    }
}

QuasiHomogPoly QuasiHomogPoly::brieskorn(const std::vector<int>& exponents) {
    if (exponents.empty() || exponents.size() > 4)
        throw DomainError("brieskorn: 1..4 exponents");
    long long lcm = 1;
    for (int a : exponents) {
        if (a < 2) throw DomainError("brieskorn: exponents must be >= 2");
        lcm = std::lcm(lcm, static_cast<long long>(a));
    }
    QuasiHomogPoly f;
    f.nvars = static_cast<int>(exponents.size());
    f.degree = lcm;
    for (int v = 0; v < f.nvars; ++v) {
        f.weights[static_cast<size_t>(v)] = lcm / exponents[static_cast<size_t>(v)];
        std::array<int, 4> e{};
        e[static_cast<size_t>(v)] = exponents[static_cast<size_t>(v)];
        f.terms.push_back({e, 1});
    }
    f.validate();
    return f;
}

QuasiHomogPoly QuasiHomogPoly::a2_surface() {
    QuasiHomogPoly f;
    f.nvars = 3;
    f.weights = {3, 3, 2, 0};
    f.degree = 6;
    f.terms = {{{2, 0, 0, 0}, 1}, {{0, 2, 0, 0}, 1}, {{0, 0, 3, 0}, 1}};
    f.validate();
    return f;
}

namespace {

using Expo = std::array<int, 4>;

struct ModRank {
    unsigned long long p;

    unsigned long long mulmod(unsigned long long a, unsigned long long b) const {
        return static_cast<unsigned long long>(
            static_cast<unsigned __int128>(a) * b % p);
    }
    unsigned long long powmod(unsigned long long a, unsigned long long e) const {
        unsigned long long r = 1;
        while (e) {
            if (e & 1) r = mulmod(r, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    }
    int rank(std::vector<std::vector<unsigned long long>> rows, int ncols) const {
        int r = 0;
        for (int col = 0; col < ncols && r < static_cast<int>(rows.size()); ++col) {
            int piv = -1;
            for (int i = r; i < static_cast<int>(rows.size()); ++i)
                if (rows[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            std::swap(rows[static_cast<size_t>(piv)], rows[static_cast<size_t>(r)]);
            const unsigned long long inv = powmod(rows[static_cast<size_t>(r)][static_cast<size_t>(col)], p - 2);
            for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
                const unsigned long long f = rows[static_cast<size_t>(i)][static_cast<size_t>(col)];
                if (f == 0) continue;
                const unsigned long long fi = mulmod(f, inv);
                for (int j = col; j < ncols; ++j) {
                    auto& x = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    x = (x + p - mulmod(fi, rows[static_cast<size_t>(r)][static_cast<size_t>(j)])) % p;
                }
            }
            ++r;
        }
        return r;
    }
};

void enumerate_monomials(const QuasiHomogPoly& f, long long cap,
                         std::map<long long, std::vector<Expo>>& buckets) {
    Expo e{};
    std::function<void(int, long long)> rec = [&](int var, long long deg) {
        if (var == f.nvars) {
            buckets[deg].push_back(e);
            return;
        }
        const long long w = f.weights[static_cast<size_t>(var)];
        for (int k = 0;; ++k) {
            const long long nd = deg + w * k;
            if (nd > cap) break;
            e[static_cast<size_t>(var)] = k;
            rec(var + 1, nd);
        }
        e[static_cast<size_t>(var)] = 0;
    };
    rec(0, 0);
}

struct GradedDims {
    std::vector<std::pair<long long, long long>> dims;  // (degree, dim)
};

GradedDims jacobian_ring_dims(const QuasiHomogPoly& f, long long cap) {
    // Gradient polynomials; partial wrt var v is homogeneous of degree d - w_v.
    std::array<std::vector<std::pair<Expo, long long>>, 4> grads;
    for (const auto& [e, c] : f.terms)
        for (int v = 0; v < f.nvars; ++v) {
            const int ev = e[static_cast<size_t>(v)];
            if (ev == 0) continue;
            Expo ge = e;
            ge[static_cast<size_t>(v)] = ev - 1;
            grads[static_cast<size_t>(v)].push_back({ge, c * ev});
        }

    std::map<long long, std::vector<Expo>> buckets;
    enumerate_monomials(f, cap, buckets);
    std::map<Expo, int> colof_scratch;

    const ModRank m1{2147483647ull};
    const ModRank m2{2305843009213693951ull};  // 2^61 - 1
    const ModRank m3{1000000007ull};

    GradedDims out;
    for (const auto& [deg, monos] : buckets) {
        colof_scratch.clear();
        for (int i = 0; i < static_cast<int>(monos.size()); ++i) colof_scratch[monos[static_cast<size_t>(i)]] = i;
        const int ncols = static_cast<int>(monos.size());

        // Rows: multiplier * d_v f for every multiplier of matching degree.
        std::vector<std::vector<long long>> rows;
        for (int v = 0; v < f.nvars; ++v) {
            const long long gdeg = f.degree - f.weights[static_cast<size_t>(v)];
            const long long mdeg = deg - gdeg;
            if (mdeg < 0) continue;
            auto it = buckets.find(mdeg);
            if (it == buckets.end()) continue;
            for (const auto& mult : it->second) {
                std::vector<long long> row(static_cast<size_t>(ncols), 0);
                bool any = false;
                for (const auto& [ge, gc] : grads[static_cast<size_t>(v)]) {
                    Expo prod{};
                    for (int t = 0; t < 4; ++t)
                        prod[static_cast<size_t>(t)] = ge[static_cast<size_t>(t)] + mult[static_cast<size_t>(t)];
                    auto cit = colof_scratch.find(prod);
                    if (cit == colof_scratch.end())
                        throw DomainError("jacobian_ring_dims: product left the degree bucket");
                    row[static_cast<size_t>(cit->second)] += gc;
                    any = true;
                }
                if (any) rows.push_back(std::move(row));
            }
        }

        auto reduce = [&](const ModRank& m) {
            std::vector<std::vector<unsigned long long>> mr(rows.size());
            for (size_t i = 0; i < rows.size(); ++i) {
                mr[i].resize(static_cast<size_t>(ncols));
                for (int j = 0; j < ncols; ++j) {
                    long long v = rows[i][static_cast<size_t>(j)] % static_cast<long long>(m.p);
                    if (v < 0) v += static_cast<long long>(m.p);
                    mr[i][static_cast<size_t>(j)] = static_cast<unsigned long long>(v);
                }
            }
            return m.rank(std::move(mr), ncols);
        };

        int rank = 0;
        if (!rows.empty()) {
            const int r1 = reduce(m1);
            const int r2 = reduce(m2);
            rank = std::max(r1, r2);
            if (r1 != r2) rank = std::max(rank, reduce(m3));
        }
        out.dims.emplace_back(deg, static_cast<long long>(ncols - rank));
    }
    return out;
}

}  // namespace

MilnorResult milnor_number(const QuasiHomogPoly& f) {
    f.validate();
    // A gradient with a constant term means the origin is a smooth point.
    for (const auto& [e, c] : f.terms) {
        int total = 0;
        for (int v = 0; v < f.nvars; ++v) total += e[static_cast<size_t>(v)];
        if (total == 1 && c != 0) return {true, 0};
    }

    long long socle = 0;
    long long wmax = 0;
    for (int v = 0; v < f.nvars; ++v) {
        socle += f.degree - 2 * f.weights[static_cast<size_t>(v)];
        wmax = std::max(wmax, f.weights[static_cast<size_t>(v)]);
    }
    socle = std::max<long long>(socle, 0);

    // Escalating window check: once a whole window of width >= max weight has
    // vanishing graded pieces, every higher monomial factors through it, so
    // the ring is finite-dimensional and mu is the sum of the graded
    // dimensions below the window.
    for (int attempt = 1; attempt <= 3; ++attempt) {
        const long long cap = socle + attempt * wmax;
        const GradedDims dims = jacobian_ring_dims(f, cap);
        long long mu = 0;
        long long highest_nonzero = -1;
        for (const auto& [deg, dim] : dims.dims) {
            if (dim > 0) highest_nonzero = std::max(highest_nonzero, deg);
            mu += dim;
        }
        if (highest_nonzero + wmax <= cap) return {true, mu};
    }
    return {false, 0};
}

DegenResult classify_degeneration_zky(int k) {
    if (k < 1 || k > 4) throw DomainError("classify_degeneration_zky: k in 1..4");
    QuasiHomogPoly f;
    f.nvars = 4;
    f.weights = {3LL * k, 3LL * k, 2LL * k, 4};
    f.degree = 6LL * k;
    f.terms = {{{2, 0, 0, 0}, 1}, {{0, 2, 0, 0}, 1}, {{0, 0, 3, 0}, 1}, {{0, 0, 1, k}, 1}};
    const MilnorResult m = milnor_number(f);
    if (!m.isolated) throw DomainError("classify_degeneration_zky: unexpected non-isolated input");
    return {DegenCase::ZkY, m.mu, 0.0, "x1^2+x2^2+y^3+z^" + std::to_string(k) + "y"};
}

DegenResult classify_degeneration_zl(int l) {
    if (l < 1 || l > 6) throw DomainError("classify_degeneration_zl: l in 1..6");
    if (l == 1)
        return {DegenCase::RejectedSmooth, -1, 0.0, "z + x1^2+x2^2+y^3 = 0 is biholomorphic to C^3"};
    QuasiHomogPoly f;
    f.nvars = 4;
    f.weights = {3LL * l, 3LL * l, 2LL * l, 6};
    f.degree = 6LL * l;
    f.terms = {{{2, 0, 0, 0}, 1}, {{0, 2, 0, 0}, 1}, {{0, 0, 3, 0}, 1}, {{0, 0, 0, l}, 1}};
    const MilnorResult m = milnor_number(f);
    if (!m.isolated) throw DomainError("classify_degeneration_zl: unexpected non-isolated input");
    return {DegenCase::Zl, m.mu, 0.0, "x1^2+x2^2+y^3+z^" + std::to_string(l)};
}

DegenResult classify_degeneration_cubic(cplx a, cplx b) {
    if (a == cplx(0.0) || b == cplx(0.0))
        throw DomainError("classify_degeneration_cubic: requires a, b != 0");
    const cplx disc = 27.0 * b * b + 4.0 * a * a * a;
    const double scale = 27.0 * std::norm(b) + 4.0 * std::pow(std::abs(a), 3.0) + 1e-300;
    if (std::abs(disc) <= 1e-12 * std::sqrt(scale))
        return {DegenCase::CubicLine, -1, disc,
                "27b^2+4a^3 = 0: isolated line singularity x1^2+x2^2+v w^2"};
    // Isolated stratum: the Milnor number is coefficient-independent there;
    // computed on the integer representative a = b = 1.
    QuasiHomogPoly rep;
    rep.nvars = 4;
    rep.weights = {3, 3, 2, 2};
    rep.degree = 6;
    rep.terms = {{{2, 0, 0, 0}, 1}, {{0, 2, 0, 0}, 1}, {{0, 0, 3, 0}, 1},
                 {{0, 0, 1, 2}, 1}, {{0, 0, 0, 3}, 1}};
    const MilnorResult m = milnor_number(rep);
    return {DegenCase::CubicIsolated, m.mu, disc, "27b^2+4a^3 != 0: isolated cubic-cone case"};
}

std::optional<ScalingSolution> scaling_constraints_solve(double b, double bprime) {
    if (b < 0 || bprime < 0)
        throw DomainError("scaling_constraints_solve: parameters are nonnegative moduli");
    // 1/a1 = b/(b' a2) = 1/a2^3 = 1/a3^2 and |a3|^4 |a2|^2 = c^6 with c = |a1|
    // force |a2| = 1, c = 1 and b/b' = a2^{-2}; on moduli this means b = b'.
    if ((b == 0) != (bprime == 0)) return std::nullopt;
    if (b != bprime) return std::nullopt;
    return ScalingSolution{1, 1, 1, 1};
}

}  // namespace cylab
