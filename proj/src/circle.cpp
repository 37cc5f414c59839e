#include "ffcm/circle.hpp"

#include "ffcm/fepoly.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace ffcm {

namespace {

using Key = std::basic_string<char16_t>;

Key pack_key(const std::vector<Fe>& v) {
    Key k(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) k[i] = static_cast<char16_t>(v[i]);
    return k;
}

// Coordinates of a twisted ambient vector in the W basis: the echelon basis
// acts as the identity on its coordinate columns, so reading those columns
// extends every functional on W to all of H^0(L^d).
std::vector<Fe> w_coords(const SectionSpace& wspace, const std::vector<Fe>& v) {
    std::vector<Fe> c(wspace.coord_cols.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = v[wspace.coord_cols[j]];
    return c;
}

Fe dot(const FieldSpec* F, const std::vector<Fe>& a, const std::vector<Fe>& b) {
    Fe t = 0;
    for (std::size_t i = 0; i < a.size(); ++i) t = F->add(t, F->mul(a[i], b[i]));
    return t;
}

// An effective divisor with smooth support, not necessarily reduced or
// irreducible: per component a monic polynomial (its finite part) and a
// multiplicity at infinity.
struct SmoothDivisor {
    std::vector<FPoly> finite;
    std::vector<int> at_inf;
};

template <class Fn>
void for_each_smooth_divisor(const CurveModel& curve, int m, Fn&& fn) {
    const FieldSpec* F = curve.F;
    const int nc = curve.ncomp;
    std::vector<std::vector<Fe>> node_vals(static_cast<std::size_t>(nc));
    std::vector<bool> inf_is_node(static_cast<std::size_t>(nc), false);
    for (int c = 0; c < nc; ++c) {
        for (const auto& nd : curve.nodes)
            for (const auto& [comp, pt] : {std::pair{nd.comp_a, nd.pa}, std::pair{nd.comp_b, nd.pb}})
                if (comp == c) {
                    if (pt.inf)
                        inf_is_node[static_cast<std::size_t>(c)] = true;
                    else
                        node_vals[static_cast<std::size_t>(c)].push_back(pt.c);
                }
    }

    SmoothDivisor sd;
    sd.finite.resize(static_cast<std::size_t>(nc));
    sd.at_inf.assign(static_cast<std::size_t>(nc), 0);

    auto polys = [&](auto&& self, int comp, int rem) -> void {
        if (comp == nc) {
            if (rem == 0) fn(sd);
            return;
        }
        const int inf_max = inf_is_node[static_cast<std::size_t>(comp)] ? 0 : rem;
        for (int mi = 0; mi <= inf_max; ++mi) {
            sd.at_inf[static_cast<std::size_t>(comp)] = mi;
            for (int j = 0; j + mi <= rem; ++j) {
                if (comp == nc - 1 && j + mi != rem) continue;
                // monic polynomials of degree j with no root at a node
                std::vector<Fe> digits(static_cast<std::size_t>(j), 0);
                for (;;) {
                    FPoly fc(digits.begin(), digits.end());
                    fc.push_back(1);
                    bool ok = true;
                    for (Fe nv : node_vals[static_cast<std::size_t>(comp)])
                        if (fp_eval(F, fc, nv) == 0) ok = false;
                    if (ok) {
                        sd.finite[static_cast<std::size_t>(comp)] = fc;
                        self(self, comp + 1, rem - j - mi);
                    }
                    std::size_t pos = 0;
                    while (pos < digits.size() && ++digits[pos] == F->q()) digits[pos++] = 0;
                    if (pos == digits.size()) break;
                }
            }
        }
        sd.at_inf[static_cast<std::size_t>(comp)] = 0;
        sd.finite[static_cast<std::size_t>(comp)] = FPoly{1};
    };
    polys(polys, 0, m);
}

// Rows (as functionals on W coordinates) whose joint kernel is the kernel of
// the sheaf restriction W = H^0(L^d(-B)) -> H^0(Z, L^d(-B)), namely
// H^0(L^d(-B-Z)).  Where Z meets the constraint divisor the multiplicities
// add, so the modulus picks up the local constraint factor and the rows at
// infinity skip past the coefficients that vanish on all of W.
Mat w_vanishing_rows(const CircleContext& ctx, const SmoothDivisor& sd) {
    const SectionSpace& W = ctx.wspace;
    const FieldSpec* F = ctx.F;
    Mat R(F, 0, static_cast<std::size_t>(W.dim()));
    for (int c = 0; c < ctx.curve->ncomp; ++c) {
        const int off = W.offs[static_cast<std::size_t>(c)];
        const int deg = W.cdeg[static_cast<std::size_t>(c)];
        const FPoly& fc = sd.finite[static_cast<std::size_t>(c)];
        FPoly f_use = fc;
        int binf = 0;
        for (const auto& dp : ctx.constraint.points) {
            if (dp.pt.comp != c) continue;
            if (dp.pt.inf) {
                binf = dp.mult;
                continue;
            }
            FPoly rem = fp_mod(F, fc, dp.pt.poly);
            fp_trim(rem);
            if (rem.empty())
                f_use = fp_mul(F, f_use, fp_pow(F, dp.pt.poly, static_cast<unsigned>(dp.mult)));
        }
        const int j = static_cast<int>(f_use.size()) - 1;
        if (j > 0) {
            for (int i = 0; i < j; ++i) {
                std::vector<Fe> row(static_cast<std::size_t>(W.dim()), 0);
                for (int k = 0; k < W.dim(); ++k) {
                    const auto& bas = W.basis[static_cast<std::size_t>(k)];
                    FPoly s(bas.begin() + off, bas.begin() + off + deg + 1);
                    FPoly r = fp_mod(F, s, f_use);
                    row[static_cast<std::size_t>(k)] =
                        i < static_cast<int>(r.size()) ? r[static_cast<std::size_t>(i)] : Fe(0);
                }
                R.add_row(row);
            }
        }
        for (int l = 0; l < sd.at_inf[static_cast<std::size_t>(c)]; ++l) {
            std::vector<Fe> row(static_cast<std::size_t>(W.dim()), 0);
            if (deg - binf - l >= 0)
                for (int k = 0; k < W.dim(); ++k)
                    row[static_cast<std::size_t>(k)] = W.basis[static_cast<std::size_t>(k)]
                                                              [static_cast<std::size_t>(off + deg - binf - l)];
            R.add_row(row);
        }
    }
    return R;
}

} // namespace

std::uint64_t CircleContext::dual_size() const {
    std::uint64_t n = 1;
    for (int i = 0; i < dim_w(); ++i) {
        if (n > (1ULL << 62) / F->q()) fail_budget("dual space has more than 2^62 elements");
        n *= F->q();
    }
    return n;
}

Functional CircleContext::functional_at(std::uint64_t rank) const {
    Functional a;
    a.coords.resize(static_cast<std::size_t>(dim_w()));
    for (int j = dim_w(); j-- > 0;) {
        a.coords[static_cast<std::size_t>(j)] = static_cast<Fe>(rank % F->q());
        rank /= F->q();
    }
    return a;
}

std::uint64_t CircleContext::rank_of(const Functional& alpha) const {
    std::uint64_t r = 0;
    for (Fe c : alpha.coords) r = r * F->q() + c;
    return r;
}

CircleContext make_circle_context(const CurveModel& curve, const LineBundleSpec& bundle,
                                  const DivisorSpec* constraint,
                                  const std::vector<JetVector>* target_jets,
                                  const EquationSpec& eq, Fe twist,
                                  const std::vector<std::uint64_t>* lift_shift) {
    eq.validate(curve.F);
    if (eq.kind != EquationSpec::Kind::Fermat)
        fail_validation("UnsupportedEquation", "the Fourier sweep handles diagonal forms only");
    if (twist == 0) fail_validation("BadTwist", "character twist must be nonzero");
    const bool constrained = constraint != nullptr && !constraint->empty();
    if (constrained != (target_jets != nullptr))
        fail_validation("JetCountMismatch", "target jets present iff a constraint is present");
    if (constrained && static_cast<int>(target_jets->size()) != eq.n_plus_1)
        fail_validation("JetCountMismatch", "need one jet vector per variable");

    CircleContext ctx;
    ctx.curve = &curve;
    ctx.F = curve.F;
    ctx.bundle = bundle;
    if (constrained) ctx.constraint = *constraint;
    ctx.eq = eq;
    ctx.d = eq.d;
    ctx.n = eq.n_plus_1 - 1;
    ctx.e = bundle.total();
    ctx.b = ctx.constraint.degree();
    ctx.g = curve.arithmetic_genus();
    ctx.twist = twist;
    ctx.space = section_space(curve, bundle, constrained ? &ctx.constraint : nullptr);
    ctx.wspace = twisted_section_space(curve, bundle, eq.d, constrained ? &ctx.constraint : nullptr);

    if (lift_shift && (lift_shift->size() != static_cast<std::size_t>(eq.n_plus_1) ||
                       *std::max_element(lift_shift->begin(), lift_shift->end()) >=
                           ctx.space.point_count()))
        fail_validation("BadLiftShift", "need one in-range section rank per variable");

    int ambient_L = 0;
    for (int dg : bundle.deg) ambient_L += dg + 1;
    for (int i = 0; i <= ctx.n; ++i) {
        std::vector<Fe> lift(static_cast<std::size_t>(ambient_L), 0);
        if (constrained)
            lift = lift_with_jets(curve, bundle, curve.F, ctx.constraint,
                                  (*target_jets)[static_cast<std::size_t>(i)]);
        if (lift_shift) {
            const auto s = ctx.space.section_at((*lift_shift)[static_cast<std::size_t>(i)]);
            for (std::size_t c = 0; c < lift.size(); ++c) lift[c] = ctx.F->add(lift[c], s[c]);
        }
        ctx.lifts.push_back(std::move(lift));
    }

    if (constrained) {
        // F(P) must vanish on B, or no x with these jets can solve F(x) = 0
        // and the dual-sum indicator no longer detects F(x) = 0.
        std::vector<Fe> sum(static_cast<std::size_t>(ctx.wspace.ambient), 0);
        for (const auto& lift : ctx.lifts) {
            const auto pw = twisted_power(curve, bundle, eq.d, ctx.F, lift);
            for (std::size_t c = 0; c < sum.size(); ++c) sum[c] = ctx.F->add(sum[c], pw[c]);
        }
        const auto digits =
            restrict_digits(curve, ctx.wspace.cdeg, ctx.wspace.offs, ctx.F, sum, ctx.constraint);
        for (const auto& dv : digits)
            for (Fe dg : dv)
                if (dg != 0)
                    fail_validation("IncompatibleJets",
                                    "prescribed jets violate F = 0 on the constraint divisor");
    }

    const std::uint64_t ranks = ctx.space.point_count();
    for (int i = 0; i <= ctx.n; ++i) {
        std::map<Key, std::uint32_t> collapse;
        for (std::uint64_t r = 0; r < ranks; ++r) {
            std::vector<Fe> x = ctx.space.section_at(r);
            for (std::size_t c = 0; c < x.size(); ++c)
                x[c] = ctx.F->add(x[c], ctx.lifts[static_cast<std::size_t>(i)][c]);
            const auto pw = twisted_power(curve, bundle, eq.d, ctx.F, x);
            ++collapse[pack_key(w_coords(ctx.wspace, pw))];
        }
        std::vector<std::pair<std::vector<Fe>, std::uint32_t>> tab;
        tab.reserve(collapse.size());
        for (const auto& [key, mult] : collapse)
            tab.emplace_back(std::vector<Fe>(key.begin(), key.end()), mult);
        ctx.tables.push_back(std::move(tab));
    }
    return ctx;
}

CycInt exp_sum(const CircleContext& ctx, const Functional& alpha, int var) {
    const std::uint32_t p = ctx.F->p();
    std::vector<std::int64_t> hist(p, 0);
    for (const auto& [coords, mult] : ctx.tables[static_cast<std::size_t>(var)]) {
        const Fe t = ctx.F->mul(ctx.twist, dot(ctx.F, alpha.coords, coords));
        hist[ctx.F->trace_int(t)] += mult;
    }
    return CycInt::from_histogram(p, hist);
}

namespace {

void check_sweep_budget(const CircleContext& ctx, const RunCtx& run) {
    BigInt work = BigInt(ctx.dual_size()) * (ctx.n + 1) * BigInt(ctx.space.point_count());
    if (work > BigInt(run.budget))
        fail_budget("dual sweep needs " + work.str() + " evaluations, budget " +
                    std::to_string(run.budget));
}

} // namespace

BigInt fourier_count(const CircleContext& ctx, const RunCtx& run) {
    check_sweep_budget(ctx, run);
    const std::uint32_t p = ctx.F->p();
    auto chunk_fn = [&](std::uint64_t lo, std::uint64_t hi) -> CycInt {
        CycInt acc = CycInt::zero(p);
        for (std::uint64_t r = lo; r < hi; ++r) {
            const Functional alpha = ctx.functional_at(r);
            CycInt prod = exp_sum(ctx, alpha, 0);
            for (int i = 1; i <= ctx.n && !prod.is_zero(); ++i) prod *= exp_sum(ctx, alpha, i);
            acc += prod;
        }
        return acc;
    };
    const CycInt total = parallel_reduce(
        0, ctx.dual_size(), CycInt::zero(p), chunk_fn,
        [](CycInt a, const CycInt& b) { return a += b; }, run.workers, 64);

    const BigInt t = cyc_as_integer(total); // non-rational totals are fatal here
    const BigInt denom = big_pow(BigInt(ctx.F->q()), static_cast<unsigned long long>(ctx.dim_w()));
    if (t % denom != 0)
        fail_identity("NonDivisibleSum",
                      "Fourier total " + t.str() + " not divisible by " + denom.str());
    return t / denom;
}

int deg_alpha(const CircleContext& ctx, const Functional& alpha) {
    if (alpha.is_zero()) return 0;
    const int hard_cap = ctx.d * ctx.e - ctx.b + 2 * ctx.g + 2;
    for (int m = 1; m <= hard_cap; ++m) {
        bool found = false;
        for_each_smooth_divisor(*ctx.curve, m, [&](const SmoothDivisor& sd) {
            if (found) return;
            Mat R = w_vanishing_rows(ctx, sd);
            if (in_rowspace(R, alpha.coords)) found = true;
        });
        if (found) return m;
    }
    fail_identity("DegAlphaOverflow", "functional factors through no divisor of degree <= " +
                                          std::to_string(hard_cap));
}

std::vector<int> deg_table(const CircleContext& ctx) {
    const std::uint64_t total = ctx.dual_size();
    const std::uint32_t q = ctx.F->q();
    std::vector<int> deg(static_cast<std::size_t>(total), -1);
    deg[0] = 0;
    std::uint64_t remaining = total - 1;
    const int hard_cap = ctx.d * ctx.e - ctx.b + 2 * ctx.g + 2;

    for (int m = 1; m <= hard_cap && remaining > 0; ++m) {
        for_each_smooth_divisor(*ctx.curve, m, [&](const SmoothDivisor& sd) {
            if (remaining == 0) return;
            Mat R = w_vanishing_rows(ctx, sd);
            const auto pivots = rref(R);
            const std::size_t rank = pivots.size();
            if (rank == 0) return;
            std::uint64_t combos = 1;
            for (std::size_t i = 0; i < rank; ++i) combos *= q;
            std::vector<Fe> coords(static_cast<std::size_t>(ctx.dim_w()));
            for (std::uint64_t t = 0; t < combos; ++t) {
                std::fill(coords.begin(), coords.end(), 0);
                std::uint64_t tt = t;
                for (std::size_t i = rank; i-- > 0;) {
                    const Fe c = static_cast<Fe>(tt % q);
                    tt /= q;
                    if (c == 0) continue;
                    for (std::size_t j = 0; j < coords.size(); ++j)
                        coords[j] = ctx.F->add(coords[j], ctx.F->mul(c, R.at(i, j)));
                }
                std::uint64_t idx = 0;
                for (Fe c : coords) idx = idx * q + c;
                if (deg[static_cast<std::size_t>(idx)] == -1) {
                    deg[static_cast<std::size_t>(idx)] = m;
                    --remaining;
                }
            }
        });
    }
    if (remaining > 0)
        fail_identity("DegAlphaOverflow", std::to_string(remaining) +
                                              " functionals factor through no divisor of degree <= " +
                                              std::to_string(hard_cap));
    return deg;
}

// ---------------------------------------------------------------------------
// Residue kernels
// ---------------------------------------------------------------------------

namespace {

// Constraint multiplicity at a closed point (0 when the point is off the
// constraint divisor).
int constraint_mult_at(const CircleContext& ctx, const ClosedPoint& pt) {
    for (const auto& dp : ctx.constraint.points) {
        if (dp.pt.comp != pt.comp || dp.pt.inf != pt.inf) continue;
        if (pt.inf || dp.pt.poly == pt.poly) return dp.mult;
    }
    return 0;
}

// phi_l applied to one section of W, for every parameter slot l of one
// divisor point.  The pairing lives on the twisted bundle L^d(-B): at a
// constraint point the section is first divided by the local constraint
// factor (exact on W), so the slots see the jets of the twisted
// trivialization.  Finite (pi, mult): l-th kernel u = t^l, value = top
// coefficient of (s * t^l mod pi^mult); infinity: the l-th top coefficient
// below the constraint-forced zeros.
std::vector<Fe> residue_values(const CircleContext& ctx, const DivisorPoint& dp,
                               const std::vector<Fe>& section) {
    const FieldSpec* F = ctx.F;
    const int comp = dp.pt.comp;
    const int off = ctx.wspace.offs[static_cast<std::size_t>(comp)];
    const int deg = ctx.wspace.cdeg[static_cast<std::size_t>(comp)];
    const int bm = constraint_mult_at(ctx, dp.pt);
    std::vector<Fe> out;
    if (dp.pt.inf) {
        for (int l = 0; l < dp.mult; ++l)
            out.push_back(deg - bm - l >= 0
                              ? section[static_cast<std::size_t>(off + deg - bm - l)]
                              : Fe(0));
        return out;
    }
    const int fm = dp.pt.degree() * dp.mult;
    const FPoly z = fp_pow(F, dp.pt.poly, static_cast<unsigned>(dp.mult));
    FPoly s(section.begin() + off, section.begin() + off + deg + 1);
    if (bm > 0) s = fp_div(F, s, fp_pow(F, dp.pt.poly, static_cast<unsigned>(bm)));
    FPoly cur = fp_mod(F, s, z); // s * t^0 mod z, then shift by t each step
    for (int l = 0; l < fm; ++l) {
        out.push_back(static_cast<int>(cur.size()) == fm ? cur[static_cast<std::size_t>(fm - 1)]
                                                         : Fe(0));
        cur.insert(cur.begin(), 0);
        cur = fp_mod(F, cur, z);
    }
    return out;
}

} // namespace

ResidueRep residue_rep(const CircleContext& ctx, const Functional& alpha, const DivisorSpec& Z) {
    Z.validate(*ctx.curve);
    const int dimw = ctx.dim_w();

    std::vector<std::size_t> widths;
    std::size_t cols = 0;
    for (const auto& dp : Z.points) {
        widths.push_back(static_cast<std::size_t>(dp.pt.degree()) * dp.mult);
        cols += widths.back();
    }

    Mat M(ctx.F, 0, cols);
    for (int r = 0; r < dimw; ++r) {
        std::vector<Fe> row;
        row.reserve(cols);
        for (const auto& dp : Z.points) {
            const auto vals = residue_values(ctx, dp, ctx.wspace.basis[static_cast<std::size_t>(r)]);
            row.insert(row.end(), vals.begin(), vals.end());
        }
        M.add_row(row);
    }

    const auto sol = solve_particular(M, alpha.coords);
    if (!sol) fail_validation("NotFactoring", "functional does not factor through the divisor");

    // re-apply the kernel to the whole basis and compare with alpha
    for (int r = 0; r < dimw; ++r) {
        Fe acc = 0;
        std::size_t at = 0;
        for (const auto& dp : Z.points) {
            const auto vals = residue_values(ctx, dp, ctx.wspace.basis[static_cast<std::size_t>(r)]);
            for (Fe v : vals) acc = ctx.F->add(acc, ctx.F->mul(v, (*sol)[at++]));
        }
        if (acc != alpha.coords[static_cast<std::size_t>(r)])
            fail_identity("ResidueIdentity", "residue kernel does not reproduce the functional");
    }

    ResidueRep rep;
    rep.Z = Z;
    std::size_t at = 0;
    for (std::size_t i = 0; i < Z.points.size(); ++i) {
        rep.params.emplace_back(sol->begin() + static_cast<std::ptrdiff_t>(at),
                                sol->begin() + static_cast<std::ptrdiff_t>(at + widths[i]));
        at += widths[i];
    }
    return rep;
}

std::optional<int> deg_alpha_via_residues(const CircleContext& ctx, const Functional& alpha,
                                          int cap) {
    if (alpha.is_zero()) return 0;

    std::vector<ClosedPoint> deg1;
    for (int c = 0; c < ctx.curve->ncomp; ++c)
        for (const auto& pt : closed_points(*ctx.curve, c, 1)) {
            const RatPoint rp{pt.inf, pt.inf ? Fe(0) : ctx.F->neg(pt.poly[0])};
            if (!ctx.curve->is_node_point(c, rp)) deg1.push_back(pt);
        }

    auto factors = [&](const DivisorSpec& Z) -> bool {
        try {
            residue_rep(ctx, alpha, Z);
            return true;
        } catch (const Error& e) {
            if (std::string(e.name()) == "NotFactoring") return false;
            throw;
        }
    };

    for (const auto& pt : deg1)
        if (factors(DivisorSpec{{{pt, 1}}})) return 1;
    if (cap < 2) return std::nullopt;

    for (const auto& pt : deg1)
        if (factors(DivisorSpec{{{pt, 2}}})) return 2;
    for (int c = 0; c < ctx.curve->ncomp; ++c)
        for (const auto& pt : closed_points(*ctx.curve, c, 2))
            if (factors(DivisorSpec{{{pt, 1}}})) return 2;
    for (std::size_t i = 0; i < deg1.size(); ++i)
        for (std::size_t j = i + 1; j < deg1.size(); ++j)
            if (factors(DivisorSpec{{{deg1[i], 1}, {deg1[j], 1}}})) return 2;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Arc decomposition
// ---------------------------------------------------------------------------

ArcSums arc_sums(const CircleContext& ctx, const RunCtx& run) {
    check_sweep_budget(ctx, run);
    const std::uint32_t p = ctx.F->p();
    const std::vector<int> degs = deg_table(ctx);
    const int threshold = major_threshold(ctx.e, ctx.b, ctx.g);

    struct Acc {
        CycInt maj, min;
        std::map<int, std::uint64_t> hist;
    };
    Acc init{CycInt::zero(p), CycInt::zero(p), {}};

    auto chunk_fn = [&](std::uint64_t lo, std::uint64_t hi) -> Acc {
        Acc a{CycInt::zero(p), CycInt::zero(p), {}};
        for (std::uint64_t r = lo; r < hi; ++r) {
            const Functional alpha = ctx.functional_at(r);
            CycInt prod = exp_sum(ctx, alpha, 0);
            for (int i = 1; i <= ctx.n && !prod.is_zero(); ++i) prod *= exp_sum(ctx, alpha, i);
            const int dg = degs[static_cast<std::size_t>(r)];
            ++a.hist[dg];
            if (dg <= threshold)
                a.maj += prod;
            else
                a.min += prod;
        }
        return a;
    };
    auto merge_fn = [](Acc a, const Acc& b) {
        a.maj += b.maj;
        a.min += b.min;
        for (const auto& [k, v] : b.hist) a.hist[k] += v;
        return a;
    };
    const Acc total = parallel_reduce(0, ctx.dual_size(), init, chunk_fn, merge_fn, run.workers, 64);

    ArcSums out;
    out.threshold = threshold;
    out.major_int = cyc_as_integer(total.maj); // Galois-stable sums: exact integers
    out.minor_int = cyc_as_integer(total.min);
    out.total_int = out.major_int + out.minor_int;
    out.degree_histogram = total.hist;
    out.norm_exponent = static_cast<long long>(ctx.e - ctx.g + 1 - ctx.b) * (ctx.n + 1);
    const BigRat norm = big_pow_rat(BigInt(ctx.F->q()), out.norm_exponent);
    out.major_normalized = BigRat(out.major_int, 1) / norm;
    const BigRat mn = rat_abs(BigRat(out.minor_int, 1) / norm);
    out.minor_normalized_abs = mn.numerator().convert_to<double>() /
                               mn.denominator().convert_to<double>();
    return out;
}

} // namespace ffcm
