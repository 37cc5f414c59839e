#include "ffcm/cyclotomic.hpp"

#include <cmath>

namespace ffcm {

double cyc_eval_abs(const CycInt& v) {
    const std::uint32_t p = v.order();
    long double re = 0.0L, im = 0.0L;
    for (std::size_t j = 0; j < v.coeffs().size(); ++j) {
        const auto& c = v.coeffs()[j];
        if (c == 0) continue;
        const long double x = c.convert_to<long double>();
        const long double ang = 2.0L * 3.14159265358979323846264338327950288L *
                                static_cast<long double>(j) / static_cast<long double>(p);
        re += x * std::cos(ang);
        im += x * std::sin(ang);
    }
    return static_cast<double>(std::sqrt(re * re + im * im));
}

BigInt cyc_as_integer(const CycInt& v) {
    const auto& c = v.coeffs();
    for (std::size_t j = 1; j < c.size(); ++j)
        if (c[j] != 0)
            fail_identity("NonRationalValue", "cyclotomic value has nonzero zeta^" +
                                                  std::to_string(j) + " coordinate: " + c[j].str());
    return c[0];
}

} // namespace ffcm
