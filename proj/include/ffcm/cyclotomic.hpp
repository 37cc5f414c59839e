#pragma once

#include "ffcm/bigint.hpp"
#include "ffcm/errors.hpp"
#include "ffcm/field.hpp"

#include <cstdint>
#include <vector>

namespace ffcm {

// Exact element of Z[zeta_p], zeta_p a primitive p-th root of unity, in the
// integral basis {zeta^0, ..., zeta^{p-2}}.  The representation is canonical
// (zeta^{p-1} is always rewritten as -(zeta^0 + ... + zeta^{p-2})), so
// equality is coefficientwise.  All ring operations are exact.
class CycInt {
  public:
    CycInt() = default;
    explicit CycInt(std::uint32_t p) : p_(p), c_(p - 1) {}

    static CycInt zero(std::uint32_t p) { return CycInt(p); }

    static CycInt integer(std::uint32_t p, const BigInt& n) {
        CycInt r(p);
        r.c_[0] = n;
        return r;
    }

    // zeta^j for any integer exponent j.
    static CycInt zeta_pow(std::uint32_t p, std::uint64_t j) {
        CycInt r(p);
        j %= p;
        if (j < p - 1) {
            r.c_[j] = 1;
        } else {
            for (auto& x : r.c_) x = -1;
        }
        return r;
    }

    // sum_t hist[t] * zeta^t for a length-p histogram of exponents; reduces
    // the zeta^{p-1} column into the canonical basis.
    static CycInt from_histogram(std::uint32_t p, const std::vector<std::int64_t>& hist) {
        CycInt r(p);
        for (std::uint32_t j = 0; j + 1 < p; ++j) r.c_[j] = BigInt(hist[j]) - BigInt(hist[p - 1]);
        return r;
    }

    std::uint32_t order() const { return p_; }
    const std::vector<BigInt>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    bool operator==(const CycInt& o) const { return p_ == o.p_ && c_ == o.c_; }

    CycInt& operator+=(const CycInt& o) {
        for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
        return *this;
    }
    CycInt& operator-=(const CycInt& o) {
        for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
        return *this;
    }
    friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
    friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }

    CycInt operator-() const {
        CycInt r(p_);
        for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = -c_[j];
        return r;
    }

    friend CycInt operator*(const CycInt& a, const CycInt& b) {
        // Convolve in exponents 0..2p-4, then fold with zeta^p = 1 and
        // expand the zeta^{p-1} column.  The buffer is padded through
        // exponent p-1 so the expansion index exists even at p = 2.
        const std::uint32_t p = a.p_;
        std::vector<BigInt> full(2 * p - 2);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) full[i + j] += a.c_[i] * b.c_[j];
        }
        for (std::size_t t = full.size(); t-- > p;) full[t - p] += full[t];
        CycInt r(p);
        for (std::uint32_t j = 0; j + 1 < p; ++j) r.c_[j] = full[j] - full[p - 1];
        return r;
    }

    CycInt& operator*=(const CycInt& o) { return *this = *this * o; }

    friend CycInt operator*(const CycInt& a, const BigInt& s) {
        CycInt r(a.p_);
        for (std::size_t j = 0; j < a.c_.size(); ++j) r.c_[j] = a.c_[j] * s;
        return r;
    }

    CycInt pow(std::uint64_t e) const {
        CycInt r = integer(p_, 1), b = *this;
        while (e) {
            if (e & 1ULL) r = r * b;
            b = b * b;
            e >>= 1ULL;
        }
        return r;
    }

  private:
    std::uint32_t p_ = 2;
    std::vector<BigInt> c_;
};

// Canonical additive character psi(x) = zeta^{Tr(x)}.  Nontrivial because
// the trace is surjective onto F_p.  The optional twist c replaces psi by
// x -> psi(c * x); final counts must be invariant under every such twist.
inline CycInt psi(const FieldElem& x) {
    return CycInt::zeta_pow(x.field->p(), x.field->trace_int(x.v));
}

inline CycInt psi_twisted(const FieldSpec* F, Fe x, Fe twist) {
    return CycInt::zeta_pow(F->p(), F->trace_int(F->mul(twist, x)));
}

// |v| under zeta -> exp(2*pi*i/p); the only floating-point evaluation in the
// library (relative error well under 1e-9 for desk-scale magnitudes).
double cyc_eval_abs(const CycInt& v);

// The zeta^0 coordinate, provided every other coordinate vanishes; a nonzero
// companion coordinate means an exact identity broke (NonRationalValue).
BigInt cyc_as_integer(const CycInt& v);

} // namespace ffcm
