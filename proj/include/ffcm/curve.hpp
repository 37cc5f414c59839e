#pragma once

#include "ffcm/field.hpp"
#include "ffcm/linalg.hpp"

#include <cstdint>
#include <vector>

namespace ffcm {

// ---------------------------------------------------------------------------
// Curves: P^1 or a connected nodal union of P^1's over a fixed finite field.
// Components carry an affine coordinate t; the point at infinity is tracked
// separately.  Nodes identify rational smooth points pairwise (gluing scalars
// are fixed to 1 at every node).
// ---------------------------------------------------------------------------

struct RatPoint {
    bool inf = false;
    Fe c = 0;
    bool operator==(const RatPoint&) const = default;
};

struct Node {
    int comp_a = 0;
    RatPoint pa;
    int comp_b = 0;
    RatPoint pb;
};

struct CurveModel {
    const FieldSpec* F = nullptr;
    int ncomp = 1;
    std::vector<Node> nodes;

    // Errors: NodeReuse (a point in two gluing pairs / degenerate self-node),
    // NodeOutOfRange, DisconnectedGraph.
    void validate() const;

    // g = #nodes - #components + 1 (rational components); requires a
    // connected dual graph.
    int arithmetic_genus() const;

    bool is_node_point(int comp, const RatPoint& pt) const;
};

// A closed point on a component: either the point at infinity (degree 1) or
// a monic irreducible polynomial in the affine coordinate (degree = deg poly,
// coefficients low-degree-first including the leading 1).
struct ClosedPoint {
    int comp = 0;
    bool inf = false;
    std::vector<Fe> poly;

    int degree() const { return inf ? 1 : static_cast<int>(poly.size()) - 1; }
};

struct DivisorPoint {
    ClosedPoint pt;
    int mult = 1;
};

// Effective divisor with support in the smooth locus.
struct DivisorSpec {
    std::vector<DivisorPoint> points;

    int degree() const {
        int d = 0;
        for (const auto& p : points) d += p.pt.degree() * p.mult;
        return d;
    }
    bool empty() const { return points.empty(); }

    // Errors: NodeOnDivisor, ReduciblePoint, DuplicateDivisorPoint,
    // BadMultiplicity.
    void validate(const CurveModel& curve) const;
};

// Degree-f closed points of a component: for f = 1 the rational values in
// index order followed by infinity; for f >= 2 the monic irreducibles of
// degree f in low-degree-first lexicographic order.
std::vector<ClosedPoint> closed_points(const CurveModel& curve, int comp, int f);

struct LineBundleSpec {
    std::vector<int> deg; // one degree per component, each >= 0

    int total() const {
        int e = 0;
        for (int d : deg) e += d;
        return e;
    }
    void validate(const CurveModel& curve) const;
};

// ---------------------------------------------------------------------------
// Section spaces H^0(C, L(-B)): global coefficient vectors are the
// concatenated per-component polynomial coefficients (component i
// contributing cdeg[i]+1 coordinates at offset offs[i]); the basis is the
// echelon kernel of the node-compatibility and divisor-vanishing conditions.
// Basis vectors act as the identity on coord_cols, so the coordinates of a
// section in this basis can be read off those ambient positions.
// ---------------------------------------------------------------------------

struct SectionSpace {
    const CurveModel* curve = nullptr;
    const FieldSpec* F = nullptr; // enumeration field (base field or an extension)
    std::vector<int> cdeg;
    DivisorSpec constraint;
    std::vector<int> offs;
    int ambient = 0;
    std::vector<std::vector<Fe>> basis;
    std::vector<std::size_t> coord_cols;

    int dim() const { return static_cast<int>(basis.size()); }

    // q^dim as a checked 64-bit count (errors BudgetExceeded past 2^62).
    std::uint64_t point_count() const;

    // Rank r in [0, q^dim) -> basis coordinates, big-endian (first
    // coordinate most significant): the enumeration is the lexicographic
    // order on coordinate vectors.
    std::vector<Fe> coords_of_rank(std::uint64_t r) const;

    // Ambient coefficient vector of the section with the given coordinates.
    std::vector<Fe> section_from_coords(const std::vector<Fe>& coords) const;
    std::vector<Fe> section_at(std::uint64_t r) const;
};

// H^0 of the bundle with per-component degrees `deg`, minus the optional
// constraint divisor.  Errors: SpecialRange if e - b < 2g - 1; internal
// DimensionMismatch if the computed kernel misses e - b + 1 - g.
SectionSpace section_space(const CurveModel& curve, const LineBundleSpec& bundle,
                           const DivisorSpec* constraint);

// Same with all degrees multiplied by d (sections of the d-th tensor power).
SectionSpace twisted_section_space(const CurveModel& curve, const LineBundleSpec& bundle, int d,
                                   const DivisorSpec* constraint);

// Scalar extension to F_{q^k}: same coordinate columns, embedded basis.
SectionSpace extend_space(const SectionSpace& space, std::uint32_t k);

// ---------------------------------------------------------------------------
// Jets.  The jet of a section at a divisor point (pi, m) is the remainder
// mod pi^m, recorded as m digits of f coefficients each (digit j is the
// coefficient polynomial of pi^j, degree < f).  At infinity the digits are
// the top m coefficients, leading first.  All digit data lives in the
// space's field.
// ---------------------------------------------------------------------------

using JetVector = std::vector<std::vector<Fe>>; // per divisor point: f*mult digits

JetVector restrict_digits(const CurveModel& curve, const std::vector<int>& cdeg,
                          const std::vector<int>& offs, const FieldSpec* F,
                          const std::vector<Fe>& section, const DivisorSpec& divisor);

// Public restriction: per point, the mult truncated Taylor coefficients as
// elements of the residue field F_{q^f} (registry field F_{p^{k f}}).
// Base-field sections only.
std::vector<std::vector<FieldElem>> restrict_section(const CurveModel& curve,
                                                     const std::vector<int>& cdeg,
                                                     const std::vector<Fe>& section,
                                                     const DivisorSpec& divisor);

// Constraint rows (vanishing of all jet digits) for every point of the
// divisor, as functionals on ambient coefficient vectors over F.
Mat divisor_rows(const CurveModel& curve, const std::vector<int>& cdeg,
                 const std::vector<int>& offs, const FieldSpec* F, const DivisorSpec& divisor);

// Node-compatibility rows (value difference at each node).
Mat node_rows(const CurveModel& curve, const std::vector<int>& cdeg, const std::vector<int>& offs,
              const FieldSpec* F);

// A section of the full bundle with the prescribed jet digits on the
// divisor (free coordinates zeroed -- deterministic).  Errors:
// UnreachableJets if no section attains them.
std::vector<Fe> lift_with_jets(const CurveModel& curve, const LineBundleSpec& bundle,
                               const FieldSpec* F, const DivisorSpec& divisor,
                               const JetVector& jets);

inline int arithmetic_genus(const CurveModel& curve) { return curve.arithmetic_genus(); }

} // namespace ffcm
