#pragma once

#include "ffcm/bigint.hpp"
#include "ffcm/errors.hpp"

#include <string>
#include <vector>

namespace ffcm {

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct HypothesisVerdict {
    std::vector<HypothesisCheck> checks;
    bool overall = false;
};

// d >= 5, n >= 4d-6, e >= b + 27(4d-7) g, p (d-1) > 36 (4d-7) d (d-2).
HypothesisVerdict gate_thm31(const BigInt& d, const BigInt& n, const BigInt& e, const BigInt& b,
                             const BigInt& g, const BigInt& p);

// e(n+1-d) + n(1-g) - b n
BigInt expected_affine_exponent(const BigInt& n, const BigInt& d, const BigInt& e, const BigInt& g,
                                const BigInt& b);

// (n+1)(e-g+1) - (de-g+1) - 1 + g
BigInt expected_moduli_dim(const BigInt& n, const BigInt& d, const BigInt& e, const BigInt& g);

// -K_Y . C + (1 - g_C) dim Y
BigInt mor_lower_bound(const BigInt& minus_ky_dot_c, const BigInt& g_c, const BigInt& dim_y);

// p g_C + (p-1)(m_x - 1)/2 for an odd prime p with p not dividing m_x.
// Errors: EvenCharacteristic, DivisibleRamification.
BigInt as_genus(const BigInt& p, const BigInt& g_c, const BigInt& m_x);

struct WitnessChain {
    BigInt d, e, g_c, p; // inputs
    BigInt A;            // 27(4d-7)
    BigInt m;            // smallest m > A compatible with p
    BigInt b;            // smallest b >= 1 with e p^{b+1} large enough
    BigInt c, E;         // e p^{b+1} = A(p g_C + (p-1)(c-1)/2) + E, E in [s, 2s-1]
    BigInt m_x;          // c or c+1, whichever p does not divide
    BigInt g_prime;      // genus of the ramified cover
    BigInt margin;       // m(g'-1) - e p^{b+1}
};

// Deterministic construction: smallest m, then smallest b, then the unique
// c/E window and m_x in {c, c+1}.  Errors: NoWitness naming the first
// constraint that cannot be met.
WitnessChain find_witness(const BigInt& d, const BigInt& e, const BigInt& g_c, const BigInt& p);

// m(g'-1) - e p^{b+1}; positive for every chain find_witness returns.
BigInt contradiction_margin(const BigInt& e, const BigInt& p, const BigInt& b, const BigInt& m,
                            const BigInt& g_prime);

// Re-derives every chain inequality from the stored fields alone and
// returns the names of the failing ones (empty = chain verifies).
std::vector<std::string> verify_witness_chain(const WitnessChain& w);

bool is_prime(const BigInt& p);

// Smallest prime satisfying both chain preconditions on p for this d.
BigInt minimal_admissible_p(const BigInt& d);

} // namespace ffcm
