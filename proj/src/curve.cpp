#include "ffcm/curve.hpp"

#include "ffcm/fepoly.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ffcm {

namespace {

std::string pt_str(const RatPoint& p) { return p.inf ? "inf" : std::to_string(p.c); }

// Union-find over components.
struct DSU {
    std::vector<int> parent;
    explicit DSU(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Monic polynomial over F, coefficients low-degree-first including the
// leading 1: irreducible iff no monic divisor of degree in [1, deg/2].
bool monic_irreducible(const FieldSpec* F, const FPoly& f) {
    const std::size_t deg = f.size() - 1;
    for (std::size_t dd = 1; dd <= deg / 2; ++dd) {
        std::vector<Fe> digits(dd, 0);
        for (;;) {
            FPoly div(digits.begin(), digits.end());
            div.push_back(1);
            FPoly rem = fp_mod(F, f, div);
            fp_trim(rem);
            if (rem.empty()) return false;
            std::size_t pos = 0;
            while (pos < dd && ++digits[pos] == F->q()) digits[pos++] = 0;
            if (pos == dd) break;
        }
    }
    return true;
}

// Least root of a polynomial in F, elements ordered by coefficient tuples
// compared low-degree-first (the same order used to pick field moduli and
// tower embeddings).
Fe least_root(const FieldSpec* F, const FPoly& poly, bool* found) {
    const std::uint32_t p = F->p(), k = F->k();
    for (std::uint64_t r = 0; r < F->q(); ++r) {
        std::uint64_t t = r;
        std::uint32_t idx = 0, w = 1;
        std::vector<std::uint32_t> digits(k, 0);
        for (std::uint32_t j = k; j-- > 0;) {
            digits[j] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        for (std::uint32_t j = 0; j < k; ++j) {
            idx += digits[j] * w;
            w *= p;
        }
        const Fe cand = static_cast<Fe>(idx);
        if (fp_eval(F, poly, cand) == 0) {
            *found = true;
            return cand;
        }
    }
    *found = false;
    return 0;
}

std::vector<int> component_offsets(const std::vector<int>& cdeg, int* ambient) {
    std::vector<int> offs(cdeg.size());
    int at = 0;
    for (std::size_t i = 0; i < cdeg.size(); ++i) {
        offs[i] = at;
        at += cdeg[i] + 1;
    }
    *ambient = at;
    return offs;
}

// Functional "value of the section at a rational point" as an ambient row:
// evaluation at finite points, the top coefficient at infinity.
void add_value_row(std::vector<Fe>& row, const FieldSpec* F, const FieldSpec* base, int off,
                   int deg, const RatPoint& pt, bool negate) {
    if (pt.inf) {
        const Fe one = negate ? F->neg(1) : Fe(1);
        row[off + deg] = F->add(row[off + deg], one);
        return;
    }
    const Fe c = embed(pt.c, base, F);
    Fe x = 1;
    for (int j = 0; j <= deg; ++j) {
        const Fe v = negate ? F->neg(x) : x;
        row[off + j] = F->add(row[off + j], v);
        x = F->mul(x, c);
    }
}

} // namespace

// ---------------------------------------------------------------------------
// CurveModel
// ---------------------------------------------------------------------------

void CurveModel::validate() const {
    if (ncomp < 1) fail_validation("BadCurve", "curve needs at least one component");
    std::vector<std::pair<int, RatPoint>> used;
    for (const auto& n : nodes) {
        if (n.comp_a < 0 || n.comp_a >= ncomp || n.comp_b < 0 || n.comp_b >= ncomp)
            fail_validation("NodeOutOfRange", "node references a missing component");
        if (n.comp_a == n.comp_b && n.pa == n.pb)
            fail_validation("NodeReuse", "self-node glues a point to itself on component " +
                                             std::to_string(n.comp_a));
        for (const auto& [comp, pt] : {std::pair{n.comp_a, n.pa}, std::pair{n.comp_b, n.pb}}) {
            for (const auto& [uc, up] : used)
                if (uc == comp && up == pt)
                    fail_validation("NodeReuse", "point " + pt_str(pt) + " on component " +
                                                     std::to_string(comp) +
                                                     " appears in two gluing pairs");
            used.emplace_back(comp, pt);
        }
    }
    DSU dsu(ncomp);
    for (const auto& n : nodes) dsu.unite(n.comp_a, n.comp_b);
    const int root = dsu.find(0);
    for (int i = 1; i < ncomp; ++i)
        if (dsu.find(i) != root) fail_validation("DisconnectedGraph", "dual graph is disconnected");
}

int CurveModel::arithmetic_genus() const {
    validate();
    return static_cast<int>(nodes.size()) - ncomp + 1;
}

bool CurveModel::is_node_point(int comp, const RatPoint& pt) const {
    for (const auto& n : nodes) {
        if (n.comp_a == comp && n.pa == pt) return true;
        if (n.comp_b == comp && n.pb == pt) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Divisors and closed points
// ---------------------------------------------------------------------------

void DivisorSpec::validate(const CurveModel& curve) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& dp = points[i];
        if (dp.mult < 1) fail_validation("BadMultiplicity", "divisor multiplicity must be >= 1");
        if (dp.pt.comp < 0 || dp.pt.comp >= curve.ncomp)
            fail_validation("NodeOutOfRange", "divisor point references a missing component");
        if (dp.pt.inf) {
            if (curve.is_node_point(dp.pt.comp, RatPoint{true, 0}))
                fail_validation("NodeOnDivisor", "divisor support meets a node at infinity");
        } else {
            if (dp.pt.poly.size() < 2 || dp.pt.poly.back() != 1)
                fail_validation("ReduciblePoint", "closed point must be a monic polynomial");
            if (!monic_irreducible(curve.F, dp.pt.poly))
                fail_validation("ReduciblePoint", "closed-point polynomial is reducible");
            if (dp.pt.degree() == 1) {
                const Fe root = curve.F->neg(dp.pt.poly[0]);
                if (curve.is_node_point(dp.pt.comp, RatPoint{false, root}))
                    fail_validation("NodeOnDivisor", "divisor support meets a node at t = " +
                                                         std::to_string(root));
            }
        }
        for (std::size_t j = 0; j < i; ++j) {
            const auto& other = points[j].pt;
            if (other.comp == dp.pt.comp && other.inf == dp.pt.inf && other.poly == dp.pt.poly)
                fail_validation("DuplicateDivisorPoint", "divisor lists a point twice");
        }
    }
}

std::vector<ClosedPoint> closed_points(const CurveModel& curve, int comp, int f) {
    if (f < 1) fail_validation("BadDegree", "closed-point degree must be >= 1");
    const FieldSpec* F = curve.F;
    std::vector<ClosedPoint> out;
    if (f == 1) {
        for (std::uint32_t c = 0; c < F->q(); ++c)
            out.push_back({comp, false, {F->neg(static_cast<Fe>(c)), 1}});
        out.push_back({comp, true, {}});
        return out;
    }
    // Monic irreducibles of degree f, low-degree-first lexicographic order.
    std::uint64_t total = 1;
    for (int i = 0; i < f; ++i) total *= F->q();
    for (std::uint64_t r = 0; r < total; ++r) {
        std::uint64_t t = r;
        std::vector<Fe> c(f);
        for (int j = f; j-- > 0;) {
            c[j] = static_cast<Fe>(t % F->q());
            t /= F->q();
        }
        FPoly poly(c.begin(), c.end());
        poly.push_back(1);
        if (monic_irreducible(F, poly)) out.push_back({comp, false, poly});
    }
    return out;
}

void LineBundleSpec::validate(const CurveModel& curve) const {
    if (static_cast<int>(deg.size()) != curve.ncomp)
        fail_validation("BadBundle", "bundle must list one degree per component");
    for (int d : deg)
        if (d < 0) fail_validation("NegativeDegree", "component degrees must be >= 0");
}

// ---------------------------------------------------------------------------
// Jet rows and digits
// ---------------------------------------------------------------------------

Mat node_rows(const CurveModel& curve, const std::vector<int>& cdeg, const std::vector<int>& offs,
              const FieldSpec* F) {
    int ambient = 0;
    for (int d : cdeg) ambient += d + 1;
    Mat M(F, 0, ambient);
    for (const auto& n : curve.nodes) {
        std::vector<Fe> row(ambient, 0);
        add_value_row(row, F, curve.F, offs[n.comp_a], cdeg[n.comp_a], n.pa, false);
        add_value_row(row, F, curve.F, offs[n.comp_b], cdeg[n.comp_b], n.pb, true);
        M.add_row(row);
    }
    return M;
}

Mat divisor_rows(const CurveModel& curve, const std::vector<int>& cdeg,
                 const std::vector<int>& offs, const FieldSpec* F, const DivisorSpec& divisor) {
    int ambient = 0;
    for (int d : cdeg) ambient += d + 1;
    Mat M(F, 0, ambient);
    for (const auto& dp : divisor.points) {
        const int comp = dp.pt.comp, deg = cdeg[comp], off = offs[comp];
        if (dp.pt.inf) {
            // Digit l is the coefficient of degree cdeg - l (zero past the
            // bottom; such rows are identically satisfiable only by digit 0).
            for (int l = 0; l < dp.mult; ++l) {
                std::vector<Fe> row(ambient, 0);
                if (deg - l >= 0) row[off + deg - l] = 1;
                M.add_row(row);
            }
            continue;
        }
        const FPoly pi = fp_embed(dp.pt.poly, curve.F, F);
        const int f = dp.pt.degree();
        FPoly pim = fp_pow(F, pi, static_cast<unsigned>(dp.mult));
        // Reductions t^j mod pi^mult, then pi-adic digits of each.
        FPoly red{1};
        std::vector<std::vector<Fe>> rows(static_cast<std::size_t>(f) * dp.mult,
                                          std::vector<Fe>(ambient, 0));
        for (int j = 0; j <= deg; ++j) {
            FPoly cur = red;
            for (int dig = 0; dig < dp.mult; ++dig) {
                FPoly r = fp_mod(F, cur, pi);
                for (int i = 0; i < f; ++i) {
                    const Fe v = i < static_cast<int>(r.size()) ? r[i] : Fe(0);
                    rows[static_cast<std::size_t>(dig) * f + i][off + j] = v;
                }
                cur = fp_div(F, cur, pi);
            }
            // next monomial
            red.insert(red.begin(), 0);
            red = fp_mod(F, red, pim);
        }
        for (auto& row : rows) M.add_row(row);
    }
    return M;
}

JetVector restrict_digits(const CurveModel& curve, const std::vector<int>& cdeg,
                          const std::vector<int>& offs, const FieldSpec* F,
                          const std::vector<Fe>& section, const DivisorSpec& divisor) {
    JetVector out;
    for (const auto& dp : divisor.points) {
        const int comp = dp.pt.comp, deg = cdeg[comp], off = offs[comp];
        std::vector<Fe> digits;
        if (dp.pt.inf) {
            for (int l = 0; l < dp.mult; ++l)
                digits.push_back(deg - l >= 0 ? section[off + deg - l] : Fe(0));
        } else {
            const FPoly pi = fp_embed(dp.pt.poly, curve.F, F);
            const int f = dp.pt.degree();
            FPoly s(section.begin() + off, section.begin() + off + deg + 1);
            FPoly cur = fp_mod(F, s, fp_pow(F, pi, static_cast<unsigned>(dp.mult)));
            for (int dig = 0; dig < dp.mult; ++dig) {
                FPoly r = fp_mod(F, cur, pi);
                for (int i = 0; i < f; ++i)
                    digits.push_back(i < static_cast<int>(r.size()) ? r[i] : Fe(0));
                cur = fp_div(F, cur, pi);
            }
        }
        out.push_back(std::move(digits));
    }
    return out;
}

std::vector<std::vector<FieldElem>> restrict_section(const CurveModel& curve,
                                                     const std::vector<int>& cdeg,
                                                     const std::vector<Fe>& section,
                                                     const DivisorSpec& divisor) {
    int ambient = 0;
    const auto offs = component_offsets(cdeg, &ambient);
    const auto digits = restrict_digits(curve, cdeg, offs, curve.F, section, divisor);

    std::vector<std::vector<FieldElem>> out;
    for (std::size_t pi = 0; pi < divisor.points.size(); ++pi) {
        const auto& dp = divisor.points[pi];
        const int f = dp.pt.degree();
        const FieldSpec* R = make_field(curve.F->p(), curve.F->k() * static_cast<std::uint32_t>(f));
        std::vector<FieldElem> vals;
        if (f == 1) {
            for (int dig = 0; dig < dp.mult; ++dig)
                vals.push_back({R, embed(digits[pi][dig], curve.F, R)});
        } else {
            // Digit polynomials evaluated at the least root of the point's
            // polynomial inside the residue field.
            FPoly pembed = fp_embed(dp.pt.poly, curve.F, R);
            bool found = false;
            const Fe theta = least_root(R, pembed, &found);
            if (!found) fail_identity("NoResidueRoot", "closed point has no root in F_{q^f}");
            for (int dig = 0; dig < dp.mult; ++dig) {
                Fe acc = 0, x = 1;
                for (int i = 0; i < f; ++i) {
                    acc = R->add(acc, R->mul(embed(digits[pi][dig * f + i], curve.F, R), x));
                    x = R->mul(x, theta);
                }
                vals.push_back({R, acc});
            }
        }
        out.push_back(std::move(vals));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Section spaces
// ---------------------------------------------------------------------------

SectionSpace section_space(const CurveModel& curve, const LineBundleSpec& bundle,
                           const DivisorSpec* constraint) {
    return twisted_section_space(curve, bundle, 1, constraint);
}

SectionSpace twisted_section_space(const CurveModel& curve, const LineBundleSpec& bundle, int d,
                                   const DivisorSpec* constraint) {
    curve.validate();
    bundle.validate(curve);
    if (constraint) constraint->validate(curve);

    SectionSpace S;
    S.curve = &curve;
    S.F = curve.F;
    S.cdeg.resize(bundle.deg.size());
    for (std::size_t i = 0; i < bundle.deg.size(); ++i) S.cdeg[i] = d * bundle.deg[i];
    if (constraint) S.constraint = *constraint;
    S.offs = component_offsets(S.cdeg, &S.ambient);

    const int g = curve.arithmetic_genus();
    const int e = d * bundle.total();
    const int b = constraint ? constraint->degree() : 0;
    if (e - b < 2 * g - 1)
        fail_validation("SpecialRange", "deg L(-B) = " + std::to_string(e - b) +
                                            " < 2g-1 = " + std::to_string(2 * g - 1));

    Mat M = node_rows(curve, S.cdeg, S.offs, curve.F);
    if (constraint) {
        Mat D = divisor_rows(curve, S.cdeg, S.offs, curve.F, *constraint);
        for (std::size_t r = 0; r < D.rows; ++r)
            M.add_row(std::vector<Fe>(D.a.begin() + r * D.cols, D.a.begin() + (r + 1) * D.cols));
    }
    S.basis = kernel_basis(M);
    for (const auto& v : S.basis) {
        // coordinate column: the free column this vector owns (entry 1,
        // zero in every other basis vector by the echelon construction)
        for (std::size_t c = 0; c < v.size(); ++c) {
            if (v[c] != 0) {
                bool unique = true;
                for (const auto& w : S.basis)
                    if (&w != &v && w[c] != 0) unique = false;
                if (unique && v[c] == 1) {
                    S.coord_cols.push_back(c);
                    break;
                }
            }
        }
    }
    if (S.coord_cols.size() != S.basis.size())
        fail_identity("DimensionMismatch", "echelon basis lost its coordinate columns");

    const int expect = e - b + 1 - g;
    if (S.dim() != expect)
        fail_identity("DimensionMismatch", "dim H^0 = " + std::to_string(S.dim()) +
                                               ", Riemann-Roch expects " + std::to_string(expect));
    return S;
}

SectionSpace extend_space(const SectionSpace& space, std::uint32_t k) {
    if (k == 1) return space;
    const FieldSpec* base = space.F;
    const FieldSpec* ext = make_field(base->p(), base->k() * k);
    const auto& table = embed_table(base, ext);
    SectionSpace S = space;
    S.F = ext;
    for (auto& v : S.basis)
        for (auto& x : v) x = table[x];
    return S;
}

std::uint64_t SectionSpace::point_count() const {
    std::uint64_t n = 1;
    for (int i = 0; i < dim(); ++i) {
        if (n > (1ULL << 62) / F->q())
            fail_budget("section space has more than 2^62 points");
        n *= F->q();
    }
    return n;
}

std::vector<Fe> SectionSpace::coords_of_rank(std::uint64_t r) const {
    std::vector<Fe> c(static_cast<std::size_t>(dim()));
    for (int j = dim(); j-- > 0;) {
        c[static_cast<std::size_t>(j)] = static_cast<Fe>(r % F->q());
        r /= F->q();
    }
    return c;
}

std::vector<Fe> SectionSpace::section_from_coords(const std::vector<Fe>& coords) const {
    std::vector<Fe> v(static_cast<std::size_t>(ambient), 0);
    for (std::size_t j = 0; j < coords.size(); ++j) {
        if (coords[j] == 0) continue;
        for (int c = 0; c < ambient; ++c)
            v[c] = F->add(v[c], F->mul(coords[j], basis[j][static_cast<std::size_t>(c)]));
    }
    return v;
}

std::vector<Fe> SectionSpace::section_at(std::uint64_t r) const {
    return section_from_coords(coords_of_rank(r));
}

std::vector<Fe> lift_with_jets(const CurveModel& curve, const LineBundleSpec& bundle,
                               const FieldSpec* F, const DivisorSpec& divisor,
                               const JetVector& jets) {
    std::vector<int> cdeg(bundle.deg.begin(), bundle.deg.end());
    int ambient = 0;
    const auto offs = component_offsets(cdeg, &ambient);

    Mat M = node_rows(curve, cdeg, offs, F);
    std::vector<Fe> rhs(M.rows, 0);
    Mat D = divisor_rows(curve, cdeg, offs, F, divisor);
    std::size_t at = 0;
    for (std::size_t pi = 0; pi < divisor.points.size(); ++pi) {
        const auto& dp = divisor.points[pi];
        const std::size_t n = static_cast<std::size_t>(dp.pt.degree()) * dp.mult;
        for (std::size_t l = 0; l < n; ++l) {
            M.add_row(std::vector<Fe>(D.a.begin() + (at + l) * D.cols,
                                      D.a.begin() + (at + l + 1) * D.cols));
            rhs.push_back(jets[pi][l]);
        }
        at += n;
    }
    auto sol = solve_particular(M, rhs);
    if (!sol) fail_validation("UnreachableJets", "no section attains the prescribed jets");
    return *sol;
}

} // namespace ffcm
