#include "common.hpp"

#include "ffcm/cyclotomic.hpp"
#include "ffcm/field.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

using namespace ffcm;
using ffcm::test::error_name;

TEST_SUITE_BEGIN("field");

TEST_CASE("interning returns one instance per (p, k)") {
    CHECK(make_field(3, 2) == make_field(3, 2));
    CHECK(make_field(2, 1) != make_field(2, 2));
}

TEST_CASE("deterministic moduli: least monic irreducible, low-degree-first") {
    // F_4: x^2 + x + 1 is the only irreducible quadratic over F_2.
    CHECK(make_field(2, 2)->modulus() == std::vector<Fe>{1, 1, 1});
    // F_9: candidates in order are x^2 (reducible), then x^2 + 1, which is
    // irreducible since -1 is not a square mod 3.
    CHECK(make_field(3, 2)->modulus() == std::vector<Fe>{1, 0, 1});
    // F_8: comparing (c0, c1, c2) tuples, (1,0,1) = x^3 + x^2 + 1 precedes
    // (1,1,0) = x^3 + x + 1, and everything earlier factors.
    CHECK(make_field(2, 3)->modulus() == std::vector<Fe>{1, 0, 1, 1});
}

TEST_CASE("field axioms hold exhaustively for q <= 9") {
    for (auto [p, k] : {std::pair<uint32_t, uint32_t>{2, 1}, {3, 1}, {2, 2}, {5, 1},
                        {7, 1}, {2, 3}, {3, 2}}) {
        const FieldSpec* F = make_field(p, k);
        const uint32_t q = F->q();
        for (Fe a = 0; a < q; ++a) {
            CHECK(F->add(a, 0) == a);
            CHECK(F->mul(a, 1) == a);
            CHECK(F->add(a, F->neg(a)) == 0);
            if (a != 0) CHECK(F->mul(a, F->inv(a)) == 1);
            for (Fe b = 0; b < q; ++b) {
                CHECK(F->add(a, b) == F->add(b, a));
                CHECK(F->mul(a, b) == F->mul(b, a));
                for (Fe c = 0; c < q; ++c)
                    CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
            }
        }
    }
}

TEST_CASE("power-basis coordinates round-trip the index encoding") {
    const FieldSpec* F9 = make_field(3, 2);
    for (Fe a = 0; a < 9; ++a) {
        auto co = F9->coords(a);
        REQUIRE(co.size() == 2);
        CHECK(co[0] + 3 * co[1] == a);
    }
    CHECK(make_field(5, 1)->from_int(-3) == 2);
    CHECK(make_field(5, 1)->from_int(12) == 2);
}

TEST_CASE("trace is F_p-linear, surjective, and fixes the prime field") {
    for (auto [p, k] : {std::pair<uint32_t, uint32_t>{2, 2}, {2, 3}, {3, 2}}) {
        const FieldSpec* F = make_field(p, k);
        bool hit_nonzero = false;
        for (Fe a = 0; a < F->q(); ++a) {
            if (F->trace_int(a) != 0) hit_nonzero = true;
            for (Fe b = 0; b < F->q(); ++b) {
                uint32_t lhs = F->trace_int(F->add(a, b));
                uint32_t rhs = (F->trace_int(a) + F->trace_int(b)) % p;
                CHECK(lhs == rhs);
            }
            // Tr(x) = x + x^p + ... + x^{p^{k-1}} directly.
            Fe s = 0, t = a;
            for (uint32_t j = 0; j < k; ++j) {
                s = F->add(s, t);
                t = F->pow(t, p);
            }
            CHECK(s == F->from_int(static_cast<int64_t>(F->trace_int(a))));
        }
        CHECK(hit_nonzero);
    }
    // Degree-1 fields: trace is the identity on indices.
    const FieldSpec* F7 = make_field(7, 1);
    for (Fe a = 0; a < 7; ++a) CHECK(F7->trace_int(a) == a);
    // The generator x of F_4 has trace x + x^2 = 1.
    CHECK(make_field(2, 2)->trace_int(2) == 1);
}

TEST_CASE("embeddings are field homomorphisms and respect the moduli") {
    struct Tower {
        uint32_t p, k1, k2;
    };
    for (auto tw : {Tower{2, 1, 2}, Tower{3, 1, 2}, Tower{2, 2, 4}}) {
        const FieldSpec* src = make_field(tw.p, tw.k1);
        const FieldSpec* tgt = make_field(tw.p, tw.k2);
        const auto& tab = embed_table(src, tgt);
        REQUIRE(tab.size() == src->q());
        CHECK(tab[0] == 0);
        CHECK(tab[1] == 1);
        for (Fe a = 0; a < src->q(); ++a)
            for (Fe b = 0; b < src->q(); ++b) {
                CHECK(tab[src->add(a, b)] == tgt->add(tab[a], tab[b]));
                CHECK(tab[src->mul(a, b)] == tgt->mul(tab[a], tab[b]));
            }
        // The image of the source generator is a root of the source modulus.
        if (tw.k1 >= 2) {
            Fe r = tab[src->p()]; // index p encodes the generator x
            Fe acc = 0, pw = 1;
            for (Fe coeff : src->modulus()) {
                acc = tgt->add(acc, tgt->mul(tgt->from_int(coeff), pw));
                pw = tgt->mul(pw, r);
            }
            CHECK(acc == 0);
        }
    }
    CHECK(error_name([] { embed_table(make_field(2, 2), make_field(2, 3)); }) ==
          "IncompatibleTower");
    CHECK(error_name([] { (void)make_field(4, 1); }) == "NonPrime");
    CHECK(error_name([] { (void)make_field(2, 0); }) == "BadExtensionDegree");
}

TEST_CASE("trace commutes with subfield embedding up to extension degree") {
    // For x in F_q inside F_{q^m}: Tr_{F_{q^m}/F_p}(x) = m * Tr_{F_q/F_p}(x).
    const FieldSpec* F2 = make_field(2, 1);
    const FieldSpec* F4 = make_field(2, 2);
    const auto& tab = embed_table(F2, F4);
    for (Fe a = 0; a < 2; ++a)
        CHECK(F4->trace_int(tab[a]) == (2u * F2->trace_int(a)) % 2u);
}

TEST_SUITE_END();

TEST_SUITE_BEGIN("cyclotomic");

TEST_CASE("canonical basis arithmetic in Z[zeta_p]") {
    // 7 * zeta^0 is the rational integer 7.
    CHECK(cyc_as_integer(CycInt::integer(5, 7)) == BigInt(7));
    CHECK(cyc_as_integer(CycInt::zero(3)) == BigInt(0));
    // zeta itself (p = 3) is not rational.
    CHECK(error_name([] { cyc_as_integer(CycInt::zeta_pow(3, 1)); }) == "NonRationalValue");
    // zeta^p folds to 1; zeta^{p-1} expands to -(1 + zeta + ... + zeta^{p-2}).
    for (uint32_t p : {2u, 3u, 5u, 7u}) {
        CHECK(CycInt::zeta_pow(p, p) == CycInt::integer(p, 1));
        CycInt top = CycInt::zeta_pow(p, p - 1);
        std::vector<BigInt> want(p - 1, BigInt(-1));
        CHECK(top.coeffs() == want);
        // 1 + zeta + ... + zeta^{p-1} = 0.
        CycInt s = CycInt::zero(p);
        for (uint32_t j = 0; j < p; ++j) s += CycInt::zeta_pow(p, j);
        CHECK(s.is_zero());
    }
}

TEST_CASE("multiplication matches exponent arithmetic, including p = 2") {
    for (uint32_t p : {2u, 3u, 5u}) {
        for (uint32_t i = 0; i < p; ++i)
            for (uint32_t j = 0; j < p; ++j)
                CHECK(CycInt::zeta_pow(p, i) * CycInt::zeta_pow(p, j) ==
                      CycInt::zeta_pow(p, i + j));
    }
    // p = 2: zeta = -1, so (a + b zeta) behaves as a - b.
    CycInt m1 = CycInt::zeta_pow(2, 1);
    CHECK(m1 * m1 == CycInt::integer(2, 1));
    CHECK(cyc_as_integer(m1) == BigInt(-1));
    // Distributivity spot check with mixed scalars.
    CycInt x = CycInt::zeta_pow(5, 1) + CycInt::integer(5, 2);
    CycInt y = CycInt::zeta_pow(5, 3) - CycInt::integer(5, 1);
    CHECK(x * y == y * x);
    CHECK(x * (y + y) == x * y + x * y);
    CHECK((x * BigInt(3)) == x + x + x);
    CHECK(x.pow(3) == x * x * x);
}

TEST_CASE("from_histogram folds exponents mod p") {
    std::vector<int64_t> hist(5, 0);
    hist[0] = 1;
    hist[1] = 2;
    hist[4] = 2; // 1 + 2 zeta + 2 zeta^4 over p = 5
    CycInt v = CycInt::from_histogram(5, hist);
    CycInt direct = CycInt::integer(5, 1) + CycInt::zeta_pow(5, 1) * BigInt(2) +
                    CycInt::zeta_pow(5, 4) * BigInt(2);
    CHECK(v == direct);
}

TEST_CASE("character values: psi(0) = 1, p = 2 sign character, p = 3 coordinates") {
    const FieldSpec* F2 = make_field(2, 1);
    const FieldSpec* F3 = make_field(3, 1);
    CHECK(psi(FieldElem{F2, 0}) == CycInt::integer(2, 1));
    CHECK(psi(FieldElem{F2, 1}) == CycInt::zeta_pow(2, 1));
    CHECK(cyc_as_integer(psi(FieldElem{F2, 1})) == BigInt(-1));
    CHECK(psi(FieldElem{F3, 0}) == CycInt::integer(3, 1));
    CHECK(psi(FieldElem{F3, 1}).coeffs() == std::vector<BigInt>{BigInt(0), BigInt(1)});
    // psi(2) = zeta^2 = -1 - zeta in the canonical basis.
    CHECK(psi(FieldElem{F3, 2}).coeffs() == std::vector<BigInt>{BigInt(-1), BigInt(-1)});
}

TEST_CASE("psi is additive-to-multiplicative and unimodular for q <= 9") {
    for (auto [p, k] : {std::pair<uint32_t, uint32_t>{2, 1}, {3, 1}, {2, 2}, {5, 1},
                        {7, 1}, {2, 3}, {3, 2}}) {
        const FieldSpec* F = make_field(p, k);
        for (Fe a = 0; a < F->q(); ++a) {
            CHECK(cyc_eval_abs(psi(FieldElem{F, a})) == doctest::Approx(1.0).epsilon(1e-12));
            for (Fe b = 0; b < F->q(); ++b)
                CHECK(psi(FieldElem{F, F->add(a, b)}) ==
                      psi(FieldElem{F, a}) * psi(FieldElem{F, b}));
        }
        // Orthogonality: sum over the field vanishes exactly.
        CycInt s = CycInt::zero(p);
        for (Fe a = 0; a < F->q(); ++a) s += psi(FieldElem{F, a});
        CHECK(s.is_zero());
        // Twisting by any nonzero c preserves orthogonality.
        for (Fe c = 1; c < F->q(); ++c) {
            CycInt t = CycInt::zero(p);
            for (Fe a = 0; a < F->q(); ++a) t += psi_twisted(F, a, c);
            CHECK(t.is_zero());
        }
    }
}

TEST_CASE("quadratic Gauss sum over F_5 has magnitude sqrt(5)") {
    const FieldSpec* F5 = make_field(5, 1);
    CycInt g = CycInt::zero(5);
    for (Fe x = 0; x < 5; ++x) g += psi(FieldElem{F5, F5->mul(x, x)});
    CHECK(cyc_eval_abs(g) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    // |zeta + zeta^2| = 1 for p = 3 (it equals -1).
    CycInt w = CycInt::zeta_pow(3, 1) + CycInt::zeta_pow(3, 2);
    CHECK(cyc_as_integer(w) == BigInt(-1));
    CHECK(cyc_eval_abs(w) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE_END();
