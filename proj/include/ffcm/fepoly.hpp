#pragma once

#include "ffcm/field.hpp"

#include <vector>

namespace ffcm {

// Dense univariate polynomials over a finite field, coefficients
// low-degree-first.  Helpers keep explicit lengths; trailing zeros are
// allowed and stripped only where noted.
using FPoly = std::vector<Fe>;

inline void fp_trim(FPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FPoly fp_add(const FieldSpec* F, const FPoly& a, const FPoly& b) {
    FPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        Fe x = i < a.size() ? a[i] : Fe(0);
        Fe y = i < b.size() ? b[i] : Fe(0);
        r[i] = F->add(x, y);
    }
    return r;
}

inline FPoly fp_mul(const FieldSpec* F, const FPoly& a, const FPoly& b) {
    if (a.empty() || b.empty()) return {};
    FPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = F->add(r[i + j], F->mul(a[i], b[j]));
    }
    return r;
}

// Remainder of a modulo the monic divisor m (m.back() == 1).
inline FPoly fp_mod(const FieldSpec* F, FPoly a, const FPoly& m) {
    while (a.size() >= m.size()) {
        const Fe lead = a.back();
        if (lead != 0) {
            const std::size_t shift = a.size() - m.size();
            for (std::size_t j = 0; j < m.size(); ++j)
                a[shift + j] = F->sub(a[shift + j], F->mul(lead, m[j]));
        }
        a.pop_back();
    }
    return a;
}

// Quotient of a by the monic divisor m.
inline FPoly fp_div(const FieldSpec* F, FPoly a, const FPoly& m) {
    if (a.size() < m.size()) return {};
    FPoly quot(a.size() - m.size() + 1, 0);
    while (a.size() >= m.size()) {
        const Fe lead = a.back();
        const std::size_t shift = a.size() - m.size();
        if (lead != 0) {
            quot[shift] = lead;
            for (std::size_t j = 0; j < m.size(); ++j)
                a[shift + j] = F->sub(a[shift + j], F->mul(lead, m[j]));
        }
        a.pop_back();
    }
    return quot;
}

inline Fe fp_eval(const FieldSpec* F, const FPoly& a, Fe x) {
    Fe acc = 0;
    for (std::size_t i = a.size(); i-- > 0;) acc = F->add(F->mul(acc, x), a[i]);
    return acc;
}

inline FPoly fp_pow(const FieldSpec* F, const FPoly& a, unsigned e) {
    FPoly r{1};
    for (unsigned i = 0; i < e; ++i) r = fp_mul(F, r, a);
    return r;
}

inline FPoly fp_embed(const FPoly& a, const FieldSpec* src, const FieldSpec* tgt) {
    if (src == tgt) return a;
    FPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = embed(a[i], src, tgt);
    return r;
}

} // namespace ffcm
