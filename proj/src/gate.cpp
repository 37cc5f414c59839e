#include "ffcm/gate.hpp"

namespace ffcm {

namespace {

BigInt pow_int(const BigInt& base, const BigInt& exp) {
    BigInt r = 1, b = base, e = exp;
    while (e > 0) {
        if ((e & 1) != 0) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// 2 * e p^{b+1} vs the doubled right side of the b-threshold (halves cleared)
bool bchoice_holds(const BigInt& e, const BigInt& p, const BigInt& b, const BigInt& A,
                   const BigInt& g_c) {
    const BigInt lhs = 2 * e * pow_int(p, b + 1);
    const BigInt rhs = 2 * A * p * g_c + A * (p - 1) * (2 * g_c - 1) + A * (p - 1);
    return lhs >= rhs;
}

// (1/A - 1/m) p^2 > p + (p-1)/2, cleared to 2 p^2 (m - A) > A m (3p - 1)
bool pchoice_part1(const BigInt& p, const BigInt& m, const BigInt& A) {
    return 2 * p * p * (m - A) > A * m * (3 * p - 1);
}

bool pchoice_part2(const BigInt& p, const BigInt& d) {
    return p * (d - 1) > 36 * (4 * d - 7) * d * (d - 2);
}

} // namespace

HypothesisVerdict gate_thm31(const BigInt& d, const BigInt& n, const BigInt& e, const BigInt& b,
                             const BigInt& g, const BigInt& p) {
    HypothesisVerdict v;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        v.checks.push_back({name, pass, detail});
    };
    add("degree", d >= 5, "d = " + d.str() + ", need d >= 5");
    add("variables", n >= 4 * d - 6, "n = " + n.str() + ", need n >= " + BigInt(4 * d - 6).str());
    add("bundle_degree", e >= b + 27 * (4 * d - 7) * g,
        "e = " + e.str() + ", need e >= " + BigInt(b + 27 * (4 * d - 7) * g).str());
    add("characteristic", pchoice_part2(p, d),
        "p = " + p.str() + ", need p > 36(4d-7)d(d-2)/(d-1) = " +
            to_string(BigRat(BigInt(36 * (4 * d - 7) * d * (d - 2)), BigInt(d - 1))));
    v.overall = true;
    for (const auto& c : v.checks) v.overall = v.overall && c.pass;
    return v;
}

BigInt expected_affine_exponent(const BigInt& n, const BigInt& d, const BigInt& e, const BigInt& g,
                                const BigInt& b) {
    return e * (n + 1 - d) + n * (1 - g) - b * n;
}

BigInt expected_moduli_dim(const BigInt& n, const BigInt& d, const BigInt& e, const BigInt& g) {
    return (n + 1) * (e - g + 1) - (d * e - g + 1) - 1 + g;
}

BigInt mor_lower_bound(const BigInt& minus_ky_dot_c, const BigInt& g_c, const BigInt& dim_y) {
    return minus_ky_dot_c + (1 - g_c) * dim_y;
}

BigInt as_genus(const BigInt& p, const BigInt& g_c, const BigInt& m_x) {
    if (p == 2) fail_validation("EvenCharacteristic", "the cover genus formula needs p odd");
    if (!is_prime(p)) fail_validation("BadPrime", p.str() + " is not prime");
    if (m_x < 1 || g_c < 0) fail_validation("BadRamification", "need m_x >= 1 and g_C >= 0");
    if (m_x % p == 0)
        fail_validation("DivisibleRamification", "p = " + p.str() + " divides m_x = " + m_x.str());
    return p * g_c + (p - 1) * (m_x - 1) / 2;
}

BigInt contradiction_margin(const BigInt& e, const BigInt& p, const BigInt& b, const BigInt& m,
                            const BigInt& g_prime) {
    return m * (g_prime - 1) - e * pow_int(p, b + 1);
}

bool is_prime(const BigInt& p) {
    if (p < 2) return false;
    for (BigInt f = 2; f * f <= p; ++f)
        if (p % f == 0) return false;
    return true;
}

WitnessChain find_witness(const BigInt& d, const BigInt& e, const BigInt& g_c, const BigInt& p) {
    if (d < 2) fail_validation("BadDegree", "the cover construction needs d >= 2");
    if (e < 1 || g_c < 0) fail_validation("BadWitnessInput", "need e >= 1 and g_C >= 0");
    if (!is_prime(p)) fail_validation("BadPrime", p.str() + " is not prime");
    if (p == 2) fail_validation("EvenCharacteristic", "the cover construction needs p odd");

    WitnessChain w;
    w.d = d;
    w.e = e;
    w.g_c = g_c;
    w.p = p;
    w.A = 27 * (4 * d - 7);

    if (!pchoice_part2(p, d))
        fail_validation("NoWitness", "pchoice: p below the degree threshold 36(4d-7)d(d-2)/(d-1)");
    // part 1 is monotone in m with limit (2p^2 > A(3p-1)); find the smallest m > A
    if (!(2 * p * p > w.A * (3 * p - 1)))
        fail_validation("NoWitness", "pchoice: p too small for every m > A");
    w.m = w.A + 1;
    while (!pchoice_part1(p, w.m, w.A)) ++w.m;

    w.b = 1;
    while (!bchoice_holds(e, p, w.b, w.A, g_c)) {
        ++w.b;
        if (w.b > 4096) fail_validation("NoWitness", "bchoice: no b <= 4096 works");
    }

    // e p^{b+1} = A p g_C + s(c-1) + E with s = A(p-1)/2 and E in [s, 2s-1]:
    // exactly one c, since the window width equals the step
    const BigInt s = w.A * (p - 1) / 2;
    const BigInt K0 = e * pow_int(p, w.b + 1) - w.A * p * g_c;
    w.c = (K0 - s) / s; // floor; then E(c) = K0 - s(c-1)
    w.E = K0 - s * (w.c - 1);
    while (w.E < s) {
        --w.c;
        w.E += s;
    }
    while (w.E > 2 * s - 1) {
        ++w.c;
        w.E -= s;
    }
    if (w.c < 1) fail_validation("NoWitness", "mxchoice: the ramification window is empty");

    w.m_x = (w.c % p == 0) ? w.c + 1 : w.c;
    w.g_prime = as_genus(p, g_c, w.m_x);
    w.margin = contradiction_margin(e, p, w.b, w.m, w.g_prime);

    const auto failures = verify_witness_chain(w);
    if (!failures.empty()) fail_validation("NoWitness", "re-verification failed: " + failures.front());
    return w;
}

std::vector<std::string> verify_witness_chain(const WitnessChain& w) {
    std::vector<std::string> bad;
    const BigInt ep = w.e * pow_int(w.p, w.b + 1);
    const BigInt s = w.A * (w.p - 1) / 2;

    if (w.A != 27 * (4 * w.d - 7) || w.m <= w.A || !is_prime(w.p)) bad.push_back("mchoice");
    if (!pchoice_part1(w.p, w.m, w.A) || !pchoice_part2(w.p, w.d)) bad.push_back("pchoice");
    if (w.b < 1 || !bchoice_holds(w.e, w.p, w.b, w.A, w.g_c)) bad.push_back("bchoice");
    if (w.E != ep - w.A * w.p * w.g_c - s * (w.c - 1) || w.E < s || w.E > 2 * s - 1)
        bad.push_back("cwindow");
    // A(p g + (p-1)(m_x - 1)/2) <= e p^{b+1} < m(p g + (p-1)(m_x - 1)/2 - 1)
    const BigInt lhs2 = 2 * w.A * w.p * w.g_c + w.A * (w.p - 1) * (w.m_x - 1);
    const BigInt rhs2 = 2 * w.m * w.p * w.g_c + w.m * (w.p - 1) * (w.m_x - 1) - 2 * w.m;
    if (!(lhs2 <= 2 * ep && 2 * ep < rhs2)) bad.push_back("mxchoice");
    if (w.m_x < 2 * w.g_c) bad.push_back("mxgenuscheck");
    if (w.m_x % w.p == 0) bad.push_back("mxdivisiblechoice");
    if (w.g_prime != w.p * w.g_c + (w.p - 1) * (w.m_x - 1) / 2) bad.push_back("covergenus");
    if (w.margin != w.m * (w.g_prime - 1) - ep || w.margin <= 0) bad.push_back("margin");
    return bad;
}

BigInt minimal_admissible_p(const BigInt& d) {
    if (d < 2) fail_validation("BadDegree", "the cover construction needs d >= 2");
    const BigInt A = 27 * (4 * d - 7);
    for (BigInt p = 3;; ++p) {
        if (!is_prime(p)) continue;
        if (!pchoice_part2(p, d)) continue;
        if (!(2 * p * p > A * (3 * p - 1))) continue; // no m > A can work
        return p;
    }
}

} // namespace ffcm
