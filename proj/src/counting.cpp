#include "ffcm/counting.hpp"

#include "ffcm/fepoly.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

namespace ffcm {

namespace {

std::vector<int> offsets_of(const std::vector<int>& cdeg, int* ambient) {
    std::vector<int> offs(cdeg.size());
    int at = 0;
    for (std::size_t i = 0; i < cdeg.size(); ++i) {
        offs[i] = at;
        at += cdeg[i] + 1;
    }
    *ambient = at;
    return offs;
}

using Key = std::basic_string<char16_t>;

Key pack_key(const std::vector<Fe>& v) {
    Key k(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) k[i] = static_cast<char16_t>(v[i]);
    return k;
}

// Everything the enumeration kernel needs for one (curve, bundle,
// constraint, jets, field) instance.
struct EnumSetup {
    const FieldSpec* Fx = nullptr;
    SectionSpace space; // H^0(L(-B)) over Fx
    std::vector<std::vector<Fe>> lifts;
    std::vector<int> tw_cdeg, tw_offs;
    int tw_ambient = 0;
    std::uint64_t ranks = 0;
    bool reachable = true; // false: some prescribed jet is attained by no section
};

EnumSetup
build_setup(const CurveModel& curve, const LineBundleSpec& bundle, const DivisorSpec& constraint,
            const std::vector<JetVector>& jets, int d, int n_plus_1, std::uint32_t ext_degree) {
    if (ext_degree < 1) fail_validation("BadExtensionDegree", "extension degree must be >= 1");
    const bool constrained = !constraint.empty();
    if (constrained && static_cast<int>(jets.size()) != n_plus_1)
        fail_validation("JetCountMismatch", "need one jet vector per variable");
    if (!constrained && !jets.empty())
        fail_validation("JetCountMismatch", "jets prescribed without a constraint divisor");

    EnumSetup s;
    s.Fx = make_field(curve.F->p(), curve.F->k() * ext_degree);
    s.space = extend_space(section_space(curve, bundle, constrained ? &constraint : nullptr),
                           ext_degree);
    s.tw_cdeg.resize(bundle.deg.size());
    for (std::size_t i = 0; i < bundle.deg.size(); ++i) s.tw_cdeg[i] = d * bundle.deg[i];
    s.tw_offs = offsets_of(s.tw_cdeg, &s.tw_ambient);
    s.ranks = s.space.point_count();

    int ambient_L = 0;
    offsets_of(std::vector<int>(bundle.deg.begin(), bundle.deg.end()), &ambient_L);
    for (int i = 0; i < n_plus_1; ++i) {
        if (!constrained) {
            s.lifts.emplace_back(static_cast<std::size_t>(ambient_L), 0);
            continue;
        }
        if (jets[static_cast<std::size_t>(i)].size() != constraint.points.size())
            fail_validation("JetShapeMismatch", "need one digit vector per divisor point");
        for (std::size_t pi = 0; pi < constraint.points.size(); ++pi) {
            const std::size_t want = static_cast<std::size_t>(constraint.points[pi].pt.degree()) *
                                     constraint.points[pi].mult;
            if (jets[static_cast<std::size_t>(i)][pi].size() != want)
                fail_validation("JetShapeMismatch", "jet digit count does not match the divisor");
        }
        try {
            s.lifts.push_back(
                lift_with_jets(curve, bundle, s.Fx, constraint, jets[static_cast<std::size_t>(i)]));
        } catch (const Error& err) {
            if (std::string(err.name()) == "UnreachableJets") {
                s.reachable = false;
                s.lifts.emplace_back(static_cast<std::size_t>(ambient_L), 0);
            } else {
                throw;
            }
        }
    }
    return s;
}

void check_budget(const EnumSetup& s, int n_plus_1, std::uint64_t mult, const RunCtx& ctx) {
    BigInt total = mult;
    for (int i = 0; i < n_plus_1; ++i) total *= s.ranks;
    if (total > BigInt(ctx.budget))
        fail_budget("enumeration needs " + total.str() + " evaluations, budget " +
                    std::to_string(ctx.budget));
}

// Twisted ambient vectors of (a_r + lift)^d for every rank r.
std::vector<std::vector<Fe>> power_table(const CurveModel& curve, const LineBundleSpec& bundle,
                                         int d, const EnumSetup& s, const std::vector<Fe>& lift) {
    std::vector<std::vector<Fe>> table(static_cast<std::size_t>(s.ranks));
    for (std::uint64_t r = 0; r < s.ranks; ++r) {
        std::vector<Fe> x = s.space.section_at(r);
        for (std::size_t c = 0; c < x.size(); ++c) x[c] = s.Fx->add(x[c], lift[c]);
        table[static_cast<std::size_t>(r)] = twisted_power(curve, bundle, d, s.Fx, x);
    }
    return table;
}

BigInt fermat_count(const CurveModel& curve, const LineBundleSpec& bundle, const EquationSpec& eq,
                    const EnumSetup& s, const RunCtx& ctx) {
    const int n = eq.n_plus_1 - 1;
    // d-th power tables, shared between variables with identical lifts
    std::vector<const std::vector<std::vector<Fe>>*> tab(static_cast<std::size_t>(eq.n_plus_1));
    std::vector<std::vector<std::vector<Fe>>> store;
    store.reserve(static_cast<std::size_t>(eq.n_plus_1));
    for (int i = 0; i <= n; ++i) {
        int same = -1;
        for (int j = 0; j < i; ++j)
            if (s.lifts[static_cast<std::size_t>(j)] == s.lifts[static_cast<std::size_t>(i)]) {
                same = j;
                break;
            }
        if (same >= 0) {
            tab[static_cast<std::size_t>(i)] = tab[static_cast<std::size_t>(same)];
        } else {
            store.push_back(power_table(curve, bundle, eq.d, s, s.lifts[static_cast<std::size_t>(i)]));
            tab[static_cast<std::size_t>(i)] = &store.back();
        }
    }

    // Hash the last variable by the negated value: a full tuple solves
    // F = 0 exactly when the prefix sum equals one of these keys.
    std::unordered_map<Key, std::uint64_t> final_count;
    final_count.reserve(static_cast<std::size_t>(s.ranks));
    for (const auto& v : *tab[static_cast<std::size_t>(n)]) {
        std::vector<Fe> neg(v.size());
        for (std::size_t c = 0; c < v.size(); ++c) neg[c] = s.Fx->neg(v[c]);
        ++final_count[pack_key(neg)];
    }

    if (n == 0) {
        const auto it = final_count.find(pack_key(std::vector<Fe>(s.tw_ambient, 0)));
        return it == final_count.end() ? BigInt(0) : BigInt(it->second);
    }

    auto chunk_fn = [&](std::uint64_t lo, std::uint64_t hi) -> BigInt {
        std::uint64_t acc = 0;
        std::vector<std::vector<Fe>> sum(static_cast<std::size_t>(n),
                                         std::vector<Fe>(static_cast<std::size_t>(s.tw_ambient)));
        // depth = number of prefix variables already fixed; sum[depth-1]
        // holds their accumulated contribution
        auto rec = [&](auto&& self, int depth) -> void {
            if (depth == n) {
                const auto it = final_count.find(pack_key(sum[static_cast<std::size_t>(depth - 1)]));
                if (it != final_count.end()) acc += it->second;
                return;
            }
            const auto& t = *tab[static_cast<std::size_t>(depth)];
            for (std::uint64_t r = 0; r < s.ranks; ++r) {
                const auto& v = t[static_cast<std::size_t>(r)];
                auto& dst = sum[static_cast<std::size_t>(depth)];
                const auto& src = sum[static_cast<std::size_t>(depth - 1)];
                for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = s.Fx->add(src[c], v[c]);
                self(self, depth + 1);
            }
        };
        const auto& t0 = *tab[0];
        for (std::uint64_t r0 = lo; r0 < hi; ++r0) {
            sum[0] = t0[static_cast<std::size_t>(r0)];
            if (n == 1) {
                const auto it = final_count.find(pack_key(sum[0]));
                if (it != final_count.end()) acc += it->second;
            } else {
                rec(rec, 1);
            }
        }
        return BigInt(acc);
    };
    return parallel_reduce(
        0, s.ranks, BigInt(0), chunk_fn, [](BigInt a, BigInt b) { return a + b; }, ctx.workers, 1);
}

BigInt explicit_count(const CurveModel& curve, const LineBundleSpec& bundle,
                      const EquationSpec& eq, const EnumSetup& s, const RunCtx& ctx) {
    const int n = eq.n_plus_1 - 1;
    const int ncomp = curve.ncomp;
    const auto& F = s.Fx;

    std::vector<int> cdeg_L(bundle.deg.begin(), bundle.deg.end());
    int ambient_L = 0;
    const auto offs_L = offsets_of(cdeg_L, &ambient_L);

    // per variable, per rank, per component: the affine polynomial of x_i
    std::vector<std::vector<std::vector<FPoly>>> polys(static_cast<std::size_t>(eq.n_plus_1));
    for (int i = 0; i <= n; ++i) {
        auto& per_var = polys[static_cast<std::size_t>(i)];
        per_var.resize(static_cast<std::size_t>(s.ranks));
        for (std::uint64_t r = 0; r < s.ranks; ++r) {
            std::vector<Fe> x = s.space.section_at(r);
            const auto& lift = s.lifts[static_cast<std::size_t>(i)];
            for (std::size_t c = 0; c < x.size(); ++c) x[c] = F->add(x[c], lift[c]);
            auto& per_comp = per_var[static_cast<std::size_t>(r)];
            per_comp.resize(static_cast<std::size_t>(ncomp));
            for (int c = 0; c < ncomp; ++c)
                per_comp[static_cast<std::size_t>(c)] =
                    FPoly(x.begin() + offs_L[c], x.begin() + offs_L[c] + cdeg_L[c] + 1);
        }
    }

    std::vector<Fe> coeffs;
    for (const auto& m : eq.monomials) coeffs.push_back(embed(m.coeff, curve.F, F));

    auto chunk_fn = [&](std::uint64_t lo, std::uint64_t hi) -> BigInt {
        std::uint64_t acc = 0;
        std::vector<std::uint64_t> rk(static_cast<std::size_t>(eq.n_plus_1), 0);
        auto eval_zero = [&]() -> bool {
            for (int c = 0; c < ncomp; ++c) {
                FPoly total;
                for (std::size_t mi = 0; mi < eq.monomials.size(); ++mi) {
                    FPoly prod{coeffs[mi]};
                    for (int i = 0; i <= n; ++i) {
                        const int ex = eq.monomials[mi].exps[static_cast<std::size_t>(i)];
                        for (int rep = 0; rep < ex; ++rep)
                            prod = fp_mul(F, prod,
                                          polys[static_cast<std::size_t>(i)]
                                               [static_cast<std::size_t>(rk[static_cast<std::size_t>(i)])]
                                               [static_cast<std::size_t>(c)]);
                    }
                    total = fp_add(F, total, prod);
                }
                fp_trim(total);
                if (!total.empty()) return false;
            }
            return true;
        };
        auto rec = [&](auto&& self, int depth) -> void {
            if (depth == eq.n_plus_1) {
                if (eval_zero()) ++acc;
                return;
            }
            for (std::uint64_t r = 0; r < s.ranks; ++r) {
                rk[static_cast<std::size_t>(depth)] = r;
                self(self, depth + 1);
            }
        };
        for (std::uint64_t r0 = lo; r0 < hi; ++r0) {
            rk[0] = r0;
            rec(rec, 1);
        }
        return BigInt(acc);
    };
    return parallel_reduce(
        0, s.ranks, BigInt(0), chunk_fn, [](BigInt a, BigInt b) { return a + b; }, ctx.workers, 1);
}

} // namespace

CountResult make_count_result(BigInt count, const CountParams& p) {
    CountResult r;
    r.count = std::move(count);
    r.params = p;
    r.main_exponent = static_cast<long long>(p.ext) *
                      (static_cast<long long>(p.e) * (p.n + 1 - p.d) +
                       static_cast<long long>(p.n) * (1 - p.g) -
                       static_cast<long long>(p.b) * p.n);
    r.main_term = big_pow_rat(BigInt(p.q), r.main_exponent);
    r.ratio = BigRat(r.count, 1) / r.main_term;
    return r;
}

std::vector<Fe> twisted_power(const CurveModel& curve, const LineBundleSpec& bundle, int d,
                              const FieldSpec* F, const std::vector<Fe>& section) {
    std::vector<int> cdeg_L(bundle.deg.begin(), bundle.deg.end());
    int ambient_L = 0, ambient_T = 0;
    const auto offs_L = offsets_of(cdeg_L, &ambient_L);
    std::vector<int> cdeg_T(cdeg_L.size());
    for (std::size_t i = 0; i < cdeg_L.size(); ++i) cdeg_T[i] = d * cdeg_L[i];
    const auto offs_T = offsets_of(cdeg_T, &ambient_T);

    std::vector<Fe> out(static_cast<std::size_t>(ambient_T), 0);
    for (int c = 0; c < curve.ncomp; ++c) {
        FPoly s(section.begin() + offs_L[c], section.begin() + offs_L[c] + cdeg_L[c] + 1);
        FPoly pw = fp_pow(F, s, static_cast<unsigned>(d));
        for (std::size_t j = 0; j < pw.size(); ++j) out[static_cast<std::size_t>(offs_T[c]) + j] = pw[j];
    }
    return out;
}

std::vector<Fe> twisted_power_mul(const CurveModel& curve, const LineBundleSpec& bundle, int d,
                                  const FieldSpec* F, const std::vector<Fe>& a,
                                  const std::vector<Fe>& b) {
    std::vector<int> cdeg_L(bundle.deg.begin(), bundle.deg.end());
    int ambient_L = 0, ambient_T = 0;
    const auto offs_L = offsets_of(cdeg_L, &ambient_L);
    std::vector<int> cdeg_T(cdeg_L.size());
    for (std::size_t i = 0; i < cdeg_L.size(); ++i) cdeg_T[i] = d * cdeg_L[i];
    const auto offs_T = offsets_of(cdeg_T, &ambient_T);

    std::vector<Fe> out(static_cast<std::size_t>(ambient_T), 0);
    for (int c = 0; c < curve.ncomp; ++c) {
        FPoly pa(a.begin() + offs_L[c], a.begin() + offs_L[c] + cdeg_L[c] + 1);
        FPoly pb(b.begin() + offs_L[c], b.begin() + offs_L[c] + cdeg_L[c] + 1);
        FPoly prod = fp_mul(F, fp_pow(F, pa, static_cast<unsigned>(d - 1)), pb);
        for (std::size_t j = 0; j < prod.size(); ++j)
            out[static_cast<std::size_t>(offs_T[c]) + j] = prod[j];
    }
    return out;
}

BigInt count_solutions(const CurveModel& curve, const LineBundleSpec& bundle,
                       const DivisorSpec& constraint, const std::vector<JetVector>& jets,
                       const EquationSpec& eq, std::uint32_t ext_degree, const RunCtx& ctx) {
    eq.validate(curve.F);
    EnumSetup s = build_setup(curve, bundle, constraint, jets, eq.d, eq.n_plus_1, ext_degree);
    if (!s.reachable) return 0;
    check_budget(s, eq.n_plus_1, 1, ctx);
    if (eq.kind == EquationSpec::Kind::Fermat) return fermat_count(curve, bundle, eq, s, ctx);
    return explicit_count(curve, bundle, eq, s, ctx);
}

CountResult brute_force_count(const CurveModel& curve, const LineBundleSpec& bundle,
                              const DivisorSpec* constraint,
                              const std::vector<JetVector>* target_jets, const EquationSpec& eq,
                              std::uint32_t ext_degree, const RunCtx& ctx) {
    if ((constraint != nullptr && !constraint->empty()) != (target_jets != nullptr))
        fail_validation("JetCountMismatch", "target jets present iff a constraint is present");
    DivisorSpec B;
    std::vector<JetVector> jets;
    if (constraint) B = *constraint;
    if (target_jets) {
        // base-field digits -> enumeration field
        const FieldSpec* Fx = make_field(curve.F->p(), curve.F->k() * ext_degree);
        const auto& table = embed_table(curve.F, Fx);
        for (const auto& jv : *target_jets) {
            JetVector e;
            for (const auto& digits : jv) {
                std::vector<Fe> d2(digits.size());
                for (std::size_t i = 0; i < digits.size(); ++i) d2[i] = table[digits[i]];
                e.push_back(std::move(d2));
            }
            jets.push_back(std::move(e));
        }
    }
    BigInt count = count_solutions(curve, bundle, B, jets, eq, ext_degree, ctx);
    CountParams p;
    p.q = curve.F->q();
    p.ext = ext_degree;
    p.d = eq.d;
    p.n = eq.n_plus_1 - 1;
    p.e = bundle.total();
    p.b = B.degree();
    p.g = curve.arithmetic_genus();
    return make_count_result(std::move(count), p);
}

SlopeResult count_slope(const std::vector<CountResult>& counts) {
    if (counts.size() < 2) fail_validation("NeedTwoCounts", "count_slope needs K >= 2 counts");
    for (const auto& c : counts)
        if (c.count <= 0) fail_validation("NonpositiveCount", "count_slope needs positive counts");
    const BigInt q(counts.front().params.q);

    SlopeResult out;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        const BigRat r(counts[i].count, counts[i - 1].count);
        const BigRat r2 = r * r;
        // exact integer bracket: q^{2D-1} <= r^2 < q^{2D+1}
        long long D = 0;
        while (r2 >= big_pow_rat(q, 2 * D + 1)) ++D;
        while (r2 < big_pow_rat(q, 2 * D - 1)) --D;
        out.pair_dims.push_back(static_cast<int>(D));
    }
    out.dim_estimate = out.pair_dims.back();
    out.consistent = std::all_of(out.pair_dims.begin(), out.pair_dims.end(),
                                 [&](int d) { return d == out.dim_estimate; });

    const long long K = counts.back().params.ext;
    out.leading_coeff = BigRat(counts.back().count, 1) *
                        big_pow_rat(q, -K * static_cast<long long>(out.dim_estimate));
    // |coeff - 1| <= C q^{-K/2}, squared to stay exact
    const BigRat diff = out.leading_coeff - BigRat(1);
    out.irreducible_hint = diff * diff * big_pow_rat(q, K) <= BigRat(9);
    out.hint_constant = 3.0;
    return out;
}

// ---------------------------------------------------------------------------
// Fiber product over cut nodes
// ---------------------------------------------------------------------------

namespace {

struct Piece {
    CurveModel curve;
    LineBundleSpec bundle;
    std::vector<int> comp_of; // original comp -> piece comp (or -1)
    DivisorSpec constraint;   // original constraint points + marked cut points
    std::size_t base_points = 0;
    // marked points in cut order: (cut index, digit slot within this piece's constraint)
    std::vector<std::pair<int, std::size_t>> marks;
};

} // namespace

CountResult nodal_fiber_product_count(const CurveModel& curve, const LineBundleSpec& bundle,
                                      const std::vector<int>& cut_nodes,
                                      const DivisorSpec* constraint,
                                      const std::vector<JetVector>* target_jets,
                                      const EquationSpec& eq, std::uint32_t ext_degree,
                                      const RunCtx& ctx) {
    curve.validate();
    bundle.validate(curve);
    eq.validate(curve.F);
    if (cut_nodes.empty()) fail_validation("EmptyCut", "fiber product needs at least one cut node");
    std::vector<bool> is_cut(curve.nodes.size(), false);
    for (int idx : cut_nodes) {
        if (idx < 0 || idx >= static_cast<int>(curve.nodes.size()))
            fail_validation("NodeOutOfRange", "cut node index out of range");
        if (is_cut[static_cast<std::size_t>(idx)])
            fail_validation("EmptyCut", "cut node listed twice");
        is_cut[static_cast<std::size_t>(idx)] = true;
    }

    const FieldSpec* Fx = make_field(curve.F->p(), curve.F->k() * ext_degree);
    const int n_plus_1 = eq.n_plus_1;

    // connected pieces of the cut curve
    std::vector<int> parent(static_cast<std::size_t>(curve.ncomp));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    for (std::size_t i = 0; i < curve.nodes.size(); ++i)
        if (!is_cut[i])
            parent[static_cast<std::size_t>(find(curve.nodes[i].comp_a))] =
                find(curve.nodes[i].comp_b);

    std::vector<int> roots;
    std::vector<int> piece_of(static_cast<std::size_t>(curve.ncomp));
    for (int c = 0; c < curve.ncomp; ++c) {
        const int r = find(c);
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
            roots.push_back(r);
            it = roots.end() - 1;
        }
        piece_of[static_cast<std::size_t>(c)] = static_cast<int>(it - roots.begin());
    }

    std::vector<Piece> pieces(roots.size());
    for (auto& p : pieces) {
        p.curve.F = curve.F;
        p.curve.ncomp = 0;
        p.comp_of.assign(static_cast<std::size_t>(curve.ncomp), -1);
    }
    for (int c = 0; c < curve.ncomp; ++c) {
        auto& p = pieces[static_cast<std::size_t>(piece_of[static_cast<std::size_t>(c)])];
        p.comp_of[static_cast<std::size_t>(c)] = p.curve.ncomp++;
        p.bundle.deg.push_back(bundle.deg[static_cast<std::size_t>(c)]);
    }
    for (std::size_t i = 0; i < curve.nodes.size(); ++i) {
        if (is_cut[i]) continue;
        const auto& nd = curve.nodes[i];
        auto& p = pieces[static_cast<std::size_t>(piece_of[static_cast<std::size_t>(nd.comp_a)])];
        p.curve.nodes.push_back({p.comp_of[static_cast<std::size_t>(nd.comp_a)], nd.pa,
                                 p.comp_of[static_cast<std::size_t>(nd.comp_b)], nd.pb});
    }

    // original constraint points stay with their piece
    std::vector<JetVector> glue_jets;
    if (constraint && !constraint->empty()) {
        if (!target_jets) fail_validation("JetCountMismatch", "constraint requires target jets");
        constraint->validate(curve);
        const auto& table = embed_table(curve.F, Fx);
        for (const auto& jv : *target_jets) {
            JetVector e;
            for (const auto& digits : jv) {
                std::vector<Fe> d2(digits.size());
                for (std::size_t k2 = 0; k2 < digits.size(); ++k2) d2[k2] = table[digits[k2]];
                e.push_back(std::move(d2));
            }
            glue_jets.push_back(std::move(e));
        }
    }
    std::vector<std::vector<std::size_t>> base_slot(pieces.size()); // piece -> original pt index
    if (constraint) {
        for (std::size_t pi = 0; pi < constraint->points.size(); ++pi) {
            const auto& dp = constraint->points[pi];
            auto& p = pieces[static_cast<std::size_t>(piece_of[static_cast<std::size_t>(dp.pt.comp)])];
            ClosedPoint cp = dp.pt;
            cp.comp = p.comp_of[static_cast<std::size_t>(dp.pt.comp)];
            p.constraint.points.push_back({cp, dp.mult});
            base_slot[static_cast<std::size_t>(
                          piece_of[static_cast<std::size_t>(dp.pt.comp)])]
                .push_back(pi);
        }
    }
    for (auto& p : pieces) p.base_points = p.constraint.points.size();

    // cut endpoints become rational marked points with a prescribed value
    for (std::size_t ci = 0; ci < cut_nodes.size(); ++ci) {
        const auto& nd = curve.nodes[static_cast<std::size_t>(cut_nodes[ci])];
        for (const auto& [comp, pt] : {std::pair{nd.comp_a, nd.pa}, std::pair{nd.comp_b, nd.pb}}) {
            auto& p = pieces[static_cast<std::size_t>(piece_of[static_cast<std::size_t>(comp)])];
            ClosedPoint cp;
            cp.comp = p.comp_of[static_cast<std::size_t>(comp)];
            cp.inf = pt.inf;
            if (!pt.inf) cp.poly = {curve.F->neg(pt.c), 1};
            p.marks.emplace_back(static_cast<int>(ci), p.constraint.points.size());
            p.constraint.points.push_back({cp, 1});
        }
    }
    for (const auto& p : pieces) p.constraint.validate(p.curve);

    // budget: value assignments x per-piece enumerations
    const std::uint64_t qx = Fx->q();
    BigInt assignments = 1;
    for (std::size_t i = 0; i < cut_nodes.size() * static_cast<std::size_t>(n_plus_1); ++i)
        assignments *= qx;
    if (assignments > BigInt(ctx.budget)) fail_budget("too many cut-value assignments");

    const std::uint64_t n_assign = static_cast<std::uint64_t>(assignments);
    BigInt total = 0;
    std::vector<Fe> w(cut_nodes.size() * static_cast<std::size_t>(n_plus_1));
    for (std::uint64_t a = 0; a < n_assign; ++a) {
        std::uint64_t t = a;
        for (std::size_t i = w.size(); i-- > 0;) {
            w[i] = static_cast<Fe>(t % qx);
            t /= qx;
        }
        BigInt prod = 1;
        for (std::size_t pc = 0; pc < pieces.size() && prod != 0; ++pc) {
            const auto& p = pieces[pc];
            std::vector<JetVector> jets(static_cast<std::size_t>(n_plus_1));
            for (int v = 0; v < n_plus_1; ++v) {
                auto& jv = jets[static_cast<std::size_t>(v)];
                jv.resize(p.constraint.points.size());
                for (std::size_t bi = 0; bi < p.base_points; ++bi)
                    jv[bi] = glue_jets[static_cast<std::size_t>(v)][base_slot[pc][bi]];
                for (const auto& [ci, slot] : p.marks)
                    jv[slot] = {w[static_cast<std::size_t>(ci) * n_plus_1 +
                                  static_cast<std::size_t>(v)]};
            }
            prod *= count_solutions(p.curve, p.bundle, p.constraint, jets, eq, ext_degree, ctx);
        }
        total += prod;
    }

    // cross-check against the direct count on the glued curve
    DivisorSpec B;
    if (constraint) B = *constraint;
    const BigInt direct = count_solutions(curve, bundle, B, glue_jets, eq, ext_degree, ctx);
    if (total != direct)
        fail_identity("FiberProductMismatch", "fiber product " + total.str() +
                                                  " != direct count " + direct.str());

    CountParams p;
    p.q = curve.F->q();
    p.ext = ext_degree;
    p.d = eq.d;
    p.n = n_plus_1 - 1;
    p.e = bundle.total();
    p.b = B.degree();
    p.g = curve.arithmetic_genus();
    return make_count_result(std::move(total), p);
}

} // namespace ffcm
