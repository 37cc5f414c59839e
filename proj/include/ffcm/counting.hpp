#pragma once

#include "ffcm/bigint.hpp"
#include "ffcm/curve.hpp"
#include "ffcm/equation.hpp"
#include "ffcm/parallel.hpp"

#include <optional>
#include <vector>

namespace ffcm {

struct CountParams {
    std::uint32_t q = 2;   // base field size
    std::uint32_t ext = 1; // extension degree k: solutions live over F_{q^k}
    int d = 1;
    int n = 1; // n+1 variables
    int e = 0; // total bundle degree
    int b = 0; // constraint degree
    int g = 0; // arithmetic genus
};

struct CountResult {
    BigInt count;
    CountParams params;
    long long main_exponent = 0; // k*(e(n+1-d) + n(1-g) - b*n)
    BigRat main_term{0};         // q^main_exponent (exact, possibly fractional)
    BigRat ratio{0};             // count / main_term
};

CountResult make_count_result(BigInt count, const CountParams& params);

// Ambient coefficient vector of s^d in the d-th power bundle (component
// degrees d*deg_i).  `section` is ambient for the untwisted bundle; both
// live over F.
std::vector<Fe> twisted_power(const CurveModel& curve, const LineBundleSpec& bundle, int d,
                              const FieldSpec* F, const std::vector<Fe>& section);

// Ambient coefficient vector of a^{d-1} * b in the d-th power bundle.
std::vector<Fe> twisted_power_mul(const CurveModel& curve, const LineBundleSpec& bundle, int d,
                                  const FieldSpec* F, const std::vector<Fe>& a,
                                  const std::vector<Fe>& b);

// Exact count over F_{q^ext} of (n+1)-tuples of sections of L with the
// prescribed jets on the constraint divisor and F(x0..xn) = 0 as a section
// of L^d.  Jets (when a constraint is present) are base-field digit
// vectors, one JetVector per variable; unreachable jets give an honest 0.
CountResult brute_force_count(const CurveModel& curve, const LineBundleSpec& bundle,
                              const DivisorSpec* constraint,
                              const std::vector<JetVector>* target_jets, const EquationSpec& eq,
                              std::uint32_t ext_degree, const RunCtx& ctx);

// Same enumeration with jets already over the enumeration field F_{q^k}
// (used by the fiber-product decomposition, which sweeps extension-field
// jet values at the cut points).
BigInt count_solutions(const CurveModel& curve, const LineBundleSpec& bundle,
                       const DivisorSpec& constraint, const std::vector<JetVector>& jets,
                       const EquationSpec& eq, std::uint32_t ext_degree, const RunCtx& ctx);

struct SlopeResult {
    int dim_estimate = 0;
    BigRat leading_coeff{0};
    bool irreducible_hint = false;
    double hint_constant = 3.0; // the C of |coeff - 1| <= C * q^{-K/2}; reported, not asserted
    bool consistent = true;     // false = InconsistentSlope across k-pairs
    std::vector<int> pair_dims; // dimension bracket per consecutive pair
};

// Dimension and leading coefficient from counts over F_{q^k}, k = 1..K.
// The per-pair dimension is the exact integer D with
// q^{2D-1} <= (count_k / count_{k-1})^2 < q^{2D+1}.
SlopeResult count_slope(const std::vector<CountResult>& counts);

// Fiber-product reconstruction: cut the listed nodes, count solutions on
// the cut curve (per piece if the cut disconnects it) with every possible
// tuple of values at the cut points, and resum.  The result is verified
// against the direct count on the glued curve; any mismatch is fatal
// (FiberProductMismatch).
CountResult nodal_fiber_product_count(const CurveModel& curve, const LineBundleSpec& bundle,
                                      const std::vector<int>& cut_nodes,
                                      const DivisorSpec* constraint,
                                      const std::vector<JetVector>* target_jets,
                                      const EquationSpec& eq, std::uint32_t ext_degree,
                                      const RunCtx& ctx);

} // namespace ffcm
