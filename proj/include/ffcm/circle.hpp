#pragma once

#include "ffcm/counting.hpp"
#include "ffcm/cyclotomic.hpp"
#include "ffcm/curve.hpp"

#include <map>
#include <optional>
#include <vector>

namespace ffcm {

// Element of the dual "circle" H^0(C, L^d(-B))^v: coordinates in the dual
// of the echelon basis of W = H^0(C, L^d(-B)).
struct Functional {
    std::vector<Fe> coords;
    std::optional<int> cached_degree;

    bool is_zero() const {
        for (Fe c : coords)
            if (c != 0) return false;
        return true;
    }
};

enum class ArcClass { Major, Minor };

// Precomputed state for a full dual sweep: the section space S = H^0(L(-B)),
// the twisted space W = H^0(L^d(-B)), one lift per variable, and per
// variable the W-coordinates of (a + P_i)^d for every a in S (compressed by
// multiplicity).  The optional character twist c replaces psi by psi(c -).
struct CircleContext {
    const CurveModel* curve = nullptr;
    const FieldSpec* F = nullptr;
    LineBundleSpec bundle;
    DivisorSpec constraint;
    EquationSpec eq;
    SectionSpace space;
    SectionSpace wspace;
    std::vector<std::vector<Fe>> lifts;
    // per variable: (W-coordinate vector, multiplicity over the S-stream)
    std::vector<std::vector<std::pair<std::vector<Fe>, std::uint32_t>>> tables;
    Fe twist = 1;
    int e = 0, b = 0, g = 0, d = 1, n = 1;

    int dim_w() const { return wspace.dim(); }
    std::uint64_t dual_size() const;
    Functional functional_at(std::uint64_t rank) const;
    std::uint64_t rank_of(const Functional& alpha) const;
};

// Builds the sweep state.  `lift_shift`, when present, replaces each lift
// P_i by P_i + s_{r_i} where r_i is a rank into S (the count must be
// invariant under this).  Errors: UnsupportedEquation for non-diagonal
// forms, BadTwist for twist 0, IncompatibleJets when the prescribed jets
// cannot satisfy F = 0 on the constraint divisor.
CircleContext make_circle_context(const CurveModel& curve, const LineBundleSpec& bundle,
                                  const DivisorSpec* constraint,
                                  const std::vector<JetVector>* target_jets,
                                  const EquationSpec& eq, Fe twist = 1,
                                  const std::vector<std::uint64_t>* lift_shift = nullptr);

// S_1(alpha)_i = sum over a in S of psi(alpha((a + P_i)^d)), exact.
CycInt exp_sum(const CircleContext& ctx, const Functional& alpha, int var);

// The full reconstruction: (1/q^{dim W}) * sum over alpha of
// S_1(alpha)_0 ... S_1(alpha)_n.  The division must be exact; any
// non-integer or non-divisible total is a fatal internal identity error.
BigInt fourier_count(const CircleContext& ctx, const RunCtx& run);

// Least degree of an effective divisor with smooth support that alpha
// factors through (0 for the zero functional), by subspace vanishing.
int deg_alpha(const CircleContext& ctx, const Functional& alpha);

// Degrees of all q^{dim W} functionals at once (indexed by dual rank).
std::vector<int> deg_table(const CircleContext& ctx);

// Residue-kernel representation of alpha on the divisor Z: one parameter
// vector per point of Z (coefficients of the kernel u for finite points,
// top-coefficient weights at infinity).  Errors: NotFactoring.
struct ResidueRep {
    DivisorSpec Z;
    std::vector<std::vector<Fe>> params;
};
ResidueRep residue_rep(const CircleContext& ctx, const Functional& alpha, const DivisorSpec& Z);

// Independent degree computation through residue kernels, trying all
// effective divisors of degree <= cap (cap <= 2); nullopt when alpha does
// not factor through any of them.
std::optional<int> deg_alpha_via_residues(const CircleContext& ctx, const Functional& alpha,
                                          int cap);

inline int major_threshold(int e, int b, int g) { return e - b - 2 * g + 1; }

inline ArcClass classify_arc(int degree, int e, int b, int g) {
    return degree <= major_threshold(e, b, g) ? ArcClass::Major : ArcClass::Minor;
}

struct ArcSums {
    BigInt major_int{0}, minor_int{0}, total_int{0};
    BigRat major_normalized{0};
    double minor_normalized_abs = 0.0;
    std::map<int, std::uint64_t> degree_histogram;
    int threshold = 0;
    long long norm_exponent = 0; // (e-g+1-b)(n+1)
};

// Full dual sweep split along the major/minor partition.  Both sums are
// Galois-stable and therefore exact integers; major + minor = total is
// checked exactly.
ArcSums arc_sums(const CircleContext& ctx, const RunCtx& run);

} // namespace ffcm
