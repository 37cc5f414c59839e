#include "ffcm/field.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace ffcm {

namespace {

// Largest supported field: the q x q arithmetic tables must stay small.
constexpr std::uint32_t kMaxQ = 4096;

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// --- polynomial helpers over F_p (coefficient vectors, low-degree-first) ---

using Poly = std::vector<std::uint32_t>;

Poly poly_mod(Poly a, const Poly& m, std::uint32_t p) {
    // m monic of degree k; reduce a in place.
    const std::size_t k = m.size() - 1;
    while (a.size() > k) {
        const std::uint32_t lead = a.back();
        const std::size_t shift = a.size() - 1 - k;
        if (lead) {
            for (std::size_t j = 0; j <= k; ++j) {
                std::uint32_t& c = a[shift + j];
                c = (c + p - (lead * m[j]) % p) % p;
            }
        }
        a.pop_back();
    }
    return a;
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    return poly_mod(std::move(r), m, p);
}

// Plain polynomial division check: does d divide a (both over F_p, d monic)?
bool poly_divides(const Poly& d, Poly a, std::uint32_t p) {
    if (a.size() < d.size()) return false;
    while (a.size() >= d.size()) {
        const std::uint32_t lead = a.back();
        const std::size_t shift = a.size() - d.size();
        if (lead) {
            for (std::size_t j = 0; j < d.size(); ++j) {
                std::uint32_t& c = a[shift + j];
                c = (c + p - (lead * d[j]) % p) % p;
            }
        }
        a.pop_back();
    }
    return std::all_of(a.begin(), a.end(), [](std::uint32_t c) { return c == 0; });
}

// Irreducibility by trial division: no monic divisor of degree in [1, k/2].
bool poly_irreducible(const Poly& f, std::uint32_t p) {
    const std::size_t k = f.size() - 1;
    for (std::size_t dd = 1; dd <= k / 2; ++dd) {
        // All monic polynomials of degree dd.
        std::vector<std::uint32_t> digits(dd, 0);
        for (;;) {
            Poly div(digits.begin(), digits.end());
            div.push_back(1);
            if (poly_divides(div, f, p)) return false;
            std::size_t pos = 0;
            while (pos < dd && ++digits[pos] == p) digits[pos++] = 0;
            if (pos == dd) break;
        }
    }
    return true;
}

std::uint32_t poly_to_index(const Poly& c, std::uint32_t p, std::uint32_t k) {
    std::uint32_t idx = 0, w = 1;
    for (std::uint32_t j = 0; j < k; ++j) {
        if (j < c.size()) idx += c[j] * w;
        w *= p;
    }
    return idx;
}

Poly index_to_poly(std::uint32_t idx, std::uint32_t p, std::uint32_t k) {
    Poly c(k, 0);
    for (std::uint32_t j = 0; j < k; ++j) {
        c[j] = idx % p;
        idx /= p;
    }
    return c;
}

std::mutex g_registry_mutex;

} // namespace

void FieldSpec::build(std::uint32_t p, std::uint32_t k) {
    p_ = p;
    k_ = k;
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < k; ++i) q *= p;
    q_ = static_cast<std::uint32_t>(q);

    // Deterministic modulus: least monic irreducible of degree k, coefficient
    // tuples (c_0, ..., c_{k-1}) compared low-degree-first.
    if (k == 1) {
        modulus_ = {0, 1}; // x
    } else {
        std::vector<std::uint32_t> digits(k, 0);
        bool found = false;
        // Odometer with c_0 as the most significant comparison key.
        std::vector<std::uint32_t> rank(k, 0);
        const std::uint64_t total = q;
        for (std::uint64_t r = 0; r < total && !found; ++r) {
            std::uint64_t t = r;
            for (std::uint32_t j = k; j-- > 0;) { // c_{k-1} varies fastest
                digits[j] = static_cast<std::uint32_t>(t % p);
                t /= p;
            }
            Poly f(digits.begin(), digits.end());
            f.push_back(1);
            if (poly_irreducible(f, p)) {
                modulus_.assign(f.begin(), f.end());
                found = true;
            }
        }
        (void)rank;
        if (!found) fail_validation("NoIrreducible", "no irreducible modulus found (internal)");
    }

    // Tables.
    add_.resize(static_cast<std::size_t>(q_) * q_);
    mul_.resize(static_cast<std::size_t>(q_) * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    trace_.resize(q_);

    Poly mod(modulus_.begin(), modulus_.end());
    for (std::uint32_t a = 0; a < q_; ++a) {
        const Poly pa = index_to_poly(a, p, k);
        Poly na(k);
        for (std::uint32_t j = 0; j < k; ++j) na[j] = (p - pa[j]) % p;
        neg_[a] = static_cast<Fe>(poly_to_index(na, p, k));
        for (std::uint32_t b = 0; b <= a; ++b) {
            const Poly pb = index_to_poly(b, p, k);
            Poly s(k);
            for (std::uint32_t j = 0; j < k; ++j) s[j] = (pa[j] + pb[j]) % p;
            const Fe sv = static_cast<Fe>(poly_to_index(s, p, k));
            add_[static_cast<std::size_t>(a) * q_ + b] = sv;
            add_[static_cast<std::size_t>(b) * q_ + a] = sv;
            const Poly m = poly_mul_mod(pa, pb, mod, p);
            const Fe mv = static_cast<Fe>(poly_to_index(m, p, k));
            mul_[static_cast<std::size_t>(a) * q_ + b] = mv;
            mul_[static_cast<std::size_t>(b) * q_ + a] = mv;
        }
    }
    for (std::uint32_t a = 1; a < q_; ++a) {
        if (inv_[a]) continue;
        for (std::uint32_t b = 1; b < q_; ++b) {
            if (mul_[static_cast<std::size_t>(a) * q_ + b] == 1) {
                inv_[a] = static_cast<Fe>(b);
                inv_[b] = static_cast<Fe>(a);
                break;
            }
        }
    }
    for (std::uint32_t a = 0; a < q_; ++a) {
        // Tr(x) = sum x^{p^i}; the result lies in the prime subfield, whose
        // elements are exactly the indices 0..p-1.
        Fe acc = 0, t = static_cast<Fe>(a);
        for (std::uint32_t i = 0; i < k; ++i) {
            acc = add(acc, t);
            t = pow(t, p);
        }
        if (acc >= p) fail_identity("TraceOutsidePrimeField", "trace landed outside F_p (internal)");
        trace_[a] = acc;
    }
}

Fe FieldSpec::inv(Fe a) const {
    if (a == 0) fail_validation("DivisionByZero", "inverse of zero in F_" + std::to_string(q_));
    return inv_[a];
}

Fe FieldSpec::pow(Fe a, std::uint64_t e) const {
    Fe r = 1, b = a;
    while (e) {
        if (e & 1ULL) r = mul(r, b);
        b = mul(b, b);
        e >>= 1ULL;
    }
    return r;
}

std::vector<std::uint32_t> FieldSpec::coords(Fe a) const { return index_to_poly(a, p_, k_); }

std::string FieldSpec::elem_str(Fe a) const { return std::to_string(a); }

const FieldSpec* FieldSpec::make(std::uint32_t p, std::uint32_t k) {
    if (!is_prime_u32(p)) fail_validation("NonPrime", "p = " + std::to_string(p) + " is not prime");
    if (k < 1) fail_validation("BadExtensionDegree", "k must be >= 1, got " + std::to_string(k));
    long double qq = 1;
    for (std::uint32_t i = 0; i < k; ++i) qq *= p;
    if (qq > kMaxQ)
        fail_validation("FieldTooLarge", "p^k = " + std::to_string((double)qq) +
                                             " exceeds the table cap " + std::to_string(kMaxQ));

    static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<FieldSpec>> registry;
    std::lock_guard<std::mutex> lock(g_registry_mutex);
    auto& slot = registry[{p, k}];
    if (!slot) {
        auto f = std::unique_ptr<FieldSpec>(new FieldSpec());
        f->build(p, k);
        slot = std::move(f);
    }
    return slot.get();
}

const std::vector<Fe>& embed_table(const FieldSpec* src, const FieldSpec* tgt) {
    if (src->p() != tgt->p() || tgt->k() % src->k() != 0)
        fail_validation("IncompatibleTower", "no embedding F_" + std::to_string(src->q()) +
                                                 " -> F_" + std::to_string(tgt->q()));

    static std::map<std::pair<const FieldSpec*, const FieldSpec*>, std::vector<Fe>> cache;
    std::lock_guard<std::mutex> lock(g_registry_mutex);
    auto it = cache.find({src, tgt});
    if (it != cache.end()) return it->second;

    const std::uint32_t p = src->p();
    // Least root of the source modulus in the target, with element
    // coefficient tuples compared low-degree-first (c_0 most significant).
    Fe theta = 0;
    bool found = false;
    const std::uint32_t kT = tgt->k();
    for (std::uint64_t r = 0; r < tgt->q() && !found; ++r) {
        std::uint64_t t = r;
        std::uint32_t idx = 0;
        std::uint32_t w = 1;
        std::vector<std::uint32_t> digits(kT, 0);
        for (std::uint32_t j = kT; j-- > 0;) { // c_{kT-1} varies fastest
            digits[j] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        for (std::uint32_t j = 0; j < kT; ++j) {
            idx += digits[j] * w;
            w *= p;
        }
        const Fe cand = static_cast<Fe>(idx);
        // Evaluate the source modulus at cand inside the target field.
        Fe acc = 0, x = 1;
        for (Fe c : src->modulus()) {
            acc = tgt->add(acc, tgt->mul(tgt->from_int(c), x));
            x = tgt->mul(x, cand);
        }
        if (acc == 0) {
            theta = cand;
            found = true;
        }
    }
    if (!found) fail_identity("NoEmbeddingRoot", "source modulus has no root in target (internal)");

    std::vector<Fe> table(src->q());
    for (std::uint32_t a = 0; a < src->q(); ++a) {
        const auto c = src->coords(static_cast<Fe>(a));
        Fe acc = 0, x = 1;
        for (std::uint32_t j = 0; j < src->k(); ++j) {
            acc = tgt->add(acc, tgt->mul(tgt->from_int(c[j]), x));
            x = tgt->mul(x, theta);
        }
        table[a] = acc;
    }
    auto [pos, ok] = cache.emplace(std::make_pair(src, tgt), std::move(table));
    (void)ok;
    return pos->second;
}

} // namespace ffcm
