#pragma once

#include "ffcm/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ffcm {

// Element of F_{p^k}, encoded as an index in [0, p^k): the element with
// power-basis coordinates (c_0, ..., c_{k-1}) over F_p has index
// sum c_j * p^j.  In particular prime-subfield elements are 0..p-1.
using Fe = std::uint16_t;

// Immutable description of F_{p^k} with full arithmetic tables.
//
// For fixed (p, k) the defining modulus is deterministic: the
// lexicographically least monic irreducible of degree k over F_p, with
// coefficient tuples compared low-degree-first.  Instances are interned, so
// two calls to make_field(p, k) return the same pointer; all methods are
// const and safe for unsynchronized concurrent use.
class FieldSpec {
  public:
    std::uint32_t p() const { return p_; }
    std::uint32_t k() const { return k_; }
    std::uint32_t q() const { return q_; }
    // Monic modulus, k+1 coefficients low-degree-first (trivially x for k=1).
    const std::vector<Fe>& modulus() const { return modulus_; }

    Fe add(Fe a, Fe b) const { return add_[a * q_ + b]; }
    Fe sub(Fe a, Fe b) const { return add_[a * q_ + neg_[b]]; }
    Fe mul(Fe a, Fe b) const { return mul_[a * q_ + b]; }
    Fe neg(Fe a) const { return neg_[a]; }
    Fe inv(Fe a) const;
    Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }

    Fe pow(Fe a, std::uint64_t e) const;

    // Absolute trace to F_p, as an integer in [0, p).
    std::uint32_t trace_int(Fe a) const { return trace_[a]; }

    // Image of the integer n (mod p) in the prime subfield.
    Fe from_int(std::int64_t n) const {
        std::int64_t r = n % static_cast<std::int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<Fe>(r);
    }

    // Power-basis coordinates of an element (length k, values in [0, p)).
    std::vector<std::uint32_t> coords(Fe a) const;

    std::string elem_str(Fe a) const;

    // Interned construction; errors: NonPrime, BadExtensionDegree, FieldTooLarge.
    static const FieldSpec* make(std::uint32_t p, std::uint32_t k);

  private:
    FieldSpec() = default;
    void build(std::uint32_t p, std::uint32_t k);

    std::uint32_t p_ = 0, k_ = 0, q_ = 0;
    std::vector<Fe> modulus_;
    std::vector<Fe> add_, mul_, neg_, inv_;
    std::vector<std::uint16_t> trace_;
};

// make_field / trace / embed with the value-level element type used by the
// public API.  Internally everything operates on raw Fe indices.
struct FieldElem {
    const FieldSpec* field = nullptr;
    Fe v = 0;

    bool operator==(const FieldElem&) const = default;
};

inline const FieldSpec* make_field(std::uint32_t p, std::uint32_t k) { return FieldSpec::make(p, k); }

// Tr(x) = x + x^p + ... + x^{p^{k-1}}, landing in the prime field.
inline FieldElem trace(const FieldElem& x) {
    return FieldElem{make_field(x.field->p(), 1), static_cast<Fe>(x.field->trace_int(x.v))};
}

// Fixed embedding table F_{p^k} -> F_{p^{k*m}}: the source generator maps to
// the lexicographically least root (coefficient tuples compared
// low-degree-first) of the source modulus in the target.  Cached per tower;
// the returned reference stays valid for the process lifetime.
// Errors: IncompatibleTower if target degree is not a multiple of source
// degree over the same prime.
const std::vector<Fe>& embed_table(const FieldSpec* src, const FieldSpec* tgt);

inline Fe embed(Fe a, const FieldSpec* src, const FieldSpec* tgt) {
    return src == tgt ? a : embed_table(src, tgt)[a];
}

inline FieldElem embed(const FieldElem& x, const FieldSpec* tgt) {
    return FieldElem{tgt, embed(x.v, x.field, tgt)};
}

} // namespace ffcm
