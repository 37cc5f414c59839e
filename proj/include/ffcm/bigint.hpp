#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <string>

namespace ffcm {

// All counting, dimension, and hypothesis arithmetic is exact.  Floating
// point appears in exactly two places in the whole library: complex
// magnitudes of cyclotomic integers (cyc_eval_abs) and the Katz-type bound
// comparison that consumes them.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::rational<BigInt>;

inline BigInt big_pow(const BigInt& base, unsigned long long exp) {
    BigInt r = 1, b = base;
    while (exp) {
        if (exp & 1ULL) r *= b;
        b *= b;
        exp >>= 1ULL;
    }
    return r;
}

// q^e for a possibly negative exponent, as an exact rational.
inline BigRat big_pow_rat(const BigInt& base, long long exp) {
    if (exp >= 0) return BigRat(big_pow(base, static_cast<unsigned long long>(exp)), 1);
    return BigRat(1, big_pow(base, static_cast<unsigned long long>(-exp)));
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const BigRat& v) {
    if (v.denominator() == 1) return v.numerator().str();
    return v.numerator().str() + "/" + v.denominator().str();
}

inline BigRat rat_abs(const BigRat& v) { return v < BigRat(0) ? -v : v; }

} // namespace ffcm
