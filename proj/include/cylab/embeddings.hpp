#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cylab/types.hpp"

namespace cylab {

// Normalized special-embedding coefficients a_i z + b_i y + x1^2 + x2^2 + y^3
// under the limit rescaling laws k1 = 2^{-1}, k2 = 2^{-2}, k3 = 2^{-3}.
struct EmbeddingState {
    long long i = 0;
    double a = 1.0;
    double b = 0.0;

    void validate() const {
        if (!(a > 0)) throw DomainError("EmbeddingState: a must be positive");
        if (b < 0) throw DomainError("EmbeddingState: b must be nonnegative");
    }
};

// a_{i+1} = 2^{-5} a_i, b_{i+1} = 2^{-4} b_i.
EmbeddingState rescale_step(const EmbeddingState& s);

// b_i a_i^{-1/2} 2^{3i/2}, constant along the sequence.
double invariant_b(const EmbeddingState& s);

// Quasi-homogeneous polynomial with integer coefficients over <= 4 variables.
struct QuasiHomogPoly {
    int nvars = 4;
    std::array<long long, 4> weights{};
    long long degree = 0;
    std::vector<std::pair<std::array<int, 4>, long long>> terms;

    void validate() const;

    static QuasiHomogPoly brieskorn(const std::vector<int>& exponents);
    static QuasiHomogPoly a2_surface();                  // x1^2 + x2^2 + y^3
};

struct MilnorResult {
    bool isolated = false;
    long long mu = 0;
};

// Milnor number as the dimension of the graded Jacobian ring, by modular
// Gaussian elimination degree by degree. A window of vanishing graded pieces
// above the socle degree certifies finite dimension; surviving classes there
// mean the singularity is not isolated.
MilnorResult milnor_number(const QuasiHomogPoly& f);

enum class DegenCase {
    ZkY,            // x1^2 + x2^2 + y^3 + z^k y
    Zl,             // x1^2 + x2^2 + y^3 + z^l
    CubicIsolated,  // + a z^2 y + b z^3, 27 b^2 + 4 a^3 != 0
    CubicLine,      // discriminant zero: line singularity x1^2 + x2^2 + v w^2
    RejectedSmooth  // z^1 case, graph of a polynomial
};

struct DegenResult {
    DegenCase kind;
    long long mu = -1;   // cases 1-2 (and the isolated cubic representative)
    cplx discriminant{0.0};
    std::string label;
};

DegenResult classify_degeneration_zky(int k);        // k in 1..4
DegenResult classify_degeneration_zl(int l);         // l in 1..6
DegenResult classify_degeneration_cubic(cplx a, cplx b);

struct ScalingSolution {
    double a1 = 1, a2 = 1, a3 = 1, c = 1;  // moduli; phases remain free
};

// Closed-form elimination of the coefficient-matching system: a solution
// exists iff b = b' (including b = b' = 0), and then c = 1.
std::optional<ScalingSolution> scaling_constraints_solve(double b, double bprime);

}  // namespace cylab
