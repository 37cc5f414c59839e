#pragma once

#include "ffcm/errors.hpp"
#include "ffcm/field.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace ffcm {

// One term c * x_0^{e_0} ... x_n^{e_n} of a homogeneous form.  The
// coefficient lives in the curve's base field.
struct Monomial {
    Fe coeff = 1;
    std::vector<int> exps;
};

// Homogeneous degree-d form in n+1 variables.  The diagonal form
// x_0^d + ... + x_n^d gets a dedicated kind: the counting and Fourier
// kernels have a fast path for it.
struct EquationSpec {
    enum class Kind { Fermat, Explicit };

    Kind kind = Kind::Fermat;
    int d = 1;
    int n_plus_1 = 2;
    std::vector<Monomial> monomials; // Explicit only

    static EquationSpec fermat(int d, int n_plus_1) {
        EquationSpec e;
        e.kind = Kind::Fermat;
        e.d = d;
        e.n_plus_1 = n_plus_1;
        return e;
    }

    static EquationSpec make_explicit(int d, int n_plus_1, std::vector<Monomial> ms) {
        EquationSpec e;
        e.kind = Kind::Explicit;
        e.d = d;
        e.n_plus_1 = n_plus_1;
        e.monomials = std::move(ms);
        return e;
    }

    void validate(const FieldSpec* F) const {
        if (d < 1) fail_validation("BadEquation", "degree must be >= 1");
        if (n_plus_1 < 1) fail_validation("BadEquation", "need at least one variable");
        if (kind == Kind::Fermat) return;
        if (monomials.empty()) fail_validation("BadEquation", "explicit form has no monomials");
        for (const auto& m : monomials) {
            if (static_cast<int>(m.exps.size()) != n_plus_1)
                fail_validation("BadEquation", "monomial exponent list has wrong length");
            int total = 0;
            for (int e : m.exps) {
                if (e < 0) fail_validation("BadEquation", "negative exponent");
                total += e;
            }
            if (total != d)
                fail_validation("NotHomogeneous", "monomial of degree " + std::to_string(total) +
                                                      " in a degree-" + std::to_string(d) +
                                                      " form");
            if (m.coeff >= F->q()) fail_validation("BadEquation", "coefficient outside the field");
        }
    }
};

} // namespace ffcm
