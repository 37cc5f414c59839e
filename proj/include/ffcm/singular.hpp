#pragma once

#include "ffcm/circle.hpp"

namespace ffcm {

// Point counts of Sing_alpha = {a in S : alpha(a^{d-1} b) = 0 for all b in S}
// over extensions, with the slope-estimated dimension.
struct SingProfile {
    Functional alpha;
    std::vector<BigInt> counts; // over F_{q^k}, k = 1..K
    int dim_estimate = 0;
    bool flagged = false; // consecutive k-pairs bracketed different dimensions
};

// Exact count of a in S (x) F_{q^k} annihilated by the extended functional:
// b -> alpha_k(a^{d-1} b) is the zero functional on S (x) F_{q^k}.
BigInt sing_count(const CircleContext& ctx, const Functional& alpha, std::uint32_t ext_degree,
                  const RunCtx& run);

SingProfile sing_dim(const CircleContext& ctx, const Functional& alpha, std::uint32_t K,
                     const RunCtx& run);

// d = 2 oracle: Sing_alpha is the radical of the Gram form
// (a, b) -> alpha(a b); returns dim S - rank(Gram) exactly.
int quadratic_radical_dim(const CircleContext& ctx, const Functional& alpha);

struct KatzCheck {
    bool holds = false;
    double slack = 0.0; // max over variables of |S_1(alpha)_i| / bound
    double bound = 0.0; // 3 (d+1)^{e-b-g+1} q^{(e-b+g-1+dim Sing)/2}
};

// The only floating-point comparison in the library; relative tolerance
// 1e-9 on complex magnitudes.
KatzCheck katz_bound_check(const CircleContext& ctx, const Functional& alpha, int dim_sing);

// Exact bounding interval for the external exponent gamma_{d,p}:
// (d-2)/(2d-2) <= gamma <= min((d-2)/(2d-2) (1 + d/p), (d-2)/(d-1)).
struct GammaInterval {
    BigRat lower{0}, upper{0};
};
GammaInterval gamma_interval(int d, const BigInt& p);

// ((2d-1-gamma)(e-b) - 2g - 2 gamma max(2g-1,0)/(d-2)) /
// ((1-gamma)(e-b) - 2g - 2 gamma max(2g-1,0)/(d-2)); the minor-arc power
// saving decays exactly when n exceeds this.  Errors: BadDegree for d < 3,
// NonpositiveDenominator when the inequality is inapplicable.
BigRat nbound_rhs(int d, const BigRat& gamma, int e, int b, int g);

// Exponent of the explicit minor-arc envelope relative to the main term:
// (d+1)(e-b) + 2 - 2g + (n-1)(e-b+2 + (e-b + 2 max(2g-1,0)/(d-2)) gamma)/2
//   - (e-b-g+1)(n+1).
BigRat minor_envelope_exponent(int d, int n, int e, int b, int g, const BigRat& gamma);

} // namespace ffcm
