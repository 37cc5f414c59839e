#include "ffcm/singular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ffcm {

namespace {

// exact integer D with q^{2D-1} <= (num/den)^2 < q^{2D+1}
int dim_bracket(const BigInt& num, const BigInt& den, const BigInt& q) {
    const BigRat r2 = BigRat(num, den) * BigRat(num, den);
    long long D = 0;
    while (r2 >= big_pow_rat(q, 2 * D + 1)) ++D;
    while (r2 < big_pow_rat(q, 2 * D - 1)) --D;
    return static_cast<int>(D);
}

} // namespace

BigInt sing_count(const CircleContext& ctx, const Functional& alpha, std::uint32_t ext_degree,
                  const RunCtx& run) {
    if (ext_degree < 1) fail_validation("BadExtensionDegree", "extension degree must be >= 1");
    const SectionSpace S = extend_space(ctx.space, ext_degree);
    const SectionSpace W = extend_space(ctx.wspace, ext_degree);
    const FieldSpec* Fx = S.F;
    const auto& table = embed_table(ctx.F, Fx);
    std::vector<Fe> a_coords(alpha.coords.size());
    for (std::size_t i = 0; i < alpha.coords.size(); ++i) a_coords[i] = table[alpha.coords[i]];

    const std::uint64_t ranks = S.point_count();
    if (BigInt(ranks) * S.dim() > BigInt(run.budget))
        fail_budget("singular-locus sweep exceeds the evaluation budget");

    auto chunk_fn = [&](std::uint64_t lo, std::uint64_t hi) -> BigInt {
        std::uint64_t acc = 0;
        for (std::uint64_t r = lo; r < hi; ++r) {
            const std::vector<Fe> a = S.section_at(r);
            bool annihilates = true;
            for (int j = 0; j < S.dim() && annihilates; ++j) {
                const auto prod = twisted_power_mul(*ctx.curve, ctx.bundle, ctx.d, Fx, a,
                                                    S.basis[static_cast<std::size_t>(j)]);
                Fe t = 0;
                for (std::size_t k = 0; k < a_coords.size(); ++k)
                    t = Fx->add(t, Fx->mul(a_coords[k], prod[W.coord_cols[k]]));
                if (t != 0) annihilates = false;
            }
            if (annihilates) ++acc;
        }
        return BigInt(acc);
    };
    return parallel_reduce(
        0, ranks, BigInt(0), chunk_fn, [](BigInt a, BigInt b) { return a + b; }, run.workers, 64);
}

SingProfile sing_dim(const CircleContext& ctx, const Functional& alpha, std::uint32_t K,
                     const RunCtx& run) {
    if (K < 2) fail_validation("BadExtensionDegree", "sing_dim needs K >= 2");
    SingProfile prof;
    prof.alpha = alpha;
    for (std::uint32_t k = 1; k <= K; ++k) prof.counts.push_back(sing_count(ctx, alpha, k, run));

    // the zero section is singular whenever d >= 2, and scalars embed
    for (std::size_t i = 0; i < prof.counts.size(); ++i) {
        if (prof.counts[i] < 1 && ctx.d >= 2)
            fail_identity("SingCountMonotonicity", "singular locus lost the zero section");
        if (i > 0 && prof.counts[i] < prof.counts[i - 1])
            fail_identity("SingCountMonotonicity", "count dropped under field extension");
    }

    // d = 1: the annihilation condition does not involve a, so a nonzero
    // functional has an empty locus.  No slope data; report dimension 0.
    if (prof.counts.back() == 0) {
        prof.dim_estimate = 0;
        prof.flagged = false;
        return prof;
    }

    const BigInt q(ctx.F->q());
    std::vector<int> dims;
    for (std::size_t i = 1; i < prof.counts.size(); ++i)
        dims.push_back(dim_bracket(prof.counts[i], prof.counts[i - 1], q));
    prof.dim_estimate = dims.back();
    prof.flagged = !std::all_of(dims.begin(), dims.end(),
                                [&](int d) { return d == prof.dim_estimate; });
    return prof;
}

int quadratic_radical_dim(const CircleContext& ctx, const Functional& alpha) {
    if (ctx.d != 2) fail_validation("BadDegree", "the Gram oracle applies to d = 2 only");
    const int dim = ctx.space.dim();
    Mat G(ctx.F, 0, static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        std::vector<Fe> row(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            const auto prod =
                twisted_power_mul(*ctx.curve, ctx.bundle, 2, ctx.F,
                                  ctx.space.basis[static_cast<std::size_t>(i)],
                                  ctx.space.basis[static_cast<std::size_t>(j)]);
            Fe t = 0;
            for (std::size_t k = 0; k < alpha.coords.size(); ++k)
                t = ctx.F->add(t, ctx.F->mul(alpha.coords[k], prod[ctx.wspace.coord_cols[k]]));
            row[static_cast<std::size_t>(j)] = t;
        }
        G.add_row(row);
    }
    return dim - static_cast<int>(rank(G));
}

KatzCheck katz_bound_check(const CircleContext& ctx, const Functional& alpha, int dim_sing) {
    const int eb = ctx.e - ctx.b;
    const long double bound =
        3.0L * std::pow(static_cast<long double>(ctx.d + 1),
                        static_cast<long double>(eb - ctx.g + 1)) *
        std::pow(static_cast<long double>(ctx.F->q()),
                 0.5L * static_cast<long double>(eb + ctx.g - 1 + dim_sing));
    KatzCheck out;
    out.bound = static_cast<double>(bound);
    long double worst = 0.0L;
    for (int i = 0; i <= ctx.n; ++i) {
        const long double mag = cyc_eval_abs(exp_sum(ctx, alpha, i));
        worst = std::max(worst, mag / bound);
    }
    out.slack = static_cast<double>(worst);
    out.holds = worst <= 1.0L + 1e-9L;
    return out;
}

GammaInterval gamma_interval(int d, const BigInt& p) {
    if (d < 3) fail_validation("BadDegree", "gamma bounds need d >= 3");
    if (p < 2) fail_validation("BadPrime", "characteristic must be >= 2");
    GammaInterval gi;
    gi.lower = BigRat(d - 2, 2 * d - 2);
    const BigRat with_p = gi.lower * (BigRat(1) + BigRat(BigInt(d), p));
    const BigRat hard(BigInt(d - 2), BigInt(d - 1));
    gi.upper = std::min(with_p, hard);
    return gi;
}

namespace {

BigRat genus_excess(int d, int g) {
    const int m = std::max(2 * g - 1, 0);
    return BigRat(BigInt(2 * m), BigInt(d - 2));
}

} // namespace

BigRat nbound_rhs(int d, const BigRat& gamma, int e, int b, int g) {
    if (d < 3) fail_validation("BadDegree", "the minor-arc inequality needs d >= 3");
    const BigRat eb(e - b);
    const BigRat t = gamma * genus_excess(d, g);
    const BigRat denom = (BigRat(1) - gamma) * eb - BigRat(2 * g) - t;
    if (denom <= BigRat(0))
        fail_validation("NonpositiveDenominator", "minor-arc inequality inapplicable");
    const BigRat num = (BigRat(2 * d - 1) - gamma) * eb - BigRat(2 * g) - t;
    return num / denom;
}

BigRat minor_envelope_exponent(int d, int n, int e, int b, int g, const BigRat& gamma) {
    if (d < 3) fail_validation("BadDegree", "the minor-arc envelope needs d >= 3");
    const BigRat eb(e - b);
    const BigRat per_sum = (eb + BigRat(2) + (eb + genus_excess(d, g)) * gamma) / BigRat(2);
    return BigRat(d + 1) * eb + BigRat(2) - BigRat(2 * g) + BigRat(n - 1) * per_sum -
           (eb - BigRat(g) + BigRat(1)) * BigRat(n + 1);
}

} // namespace ffcm
