#pragma once

// Shared fixtures for the test suite: standard curve models, divisor
// helpers, and an error-name probe used to pin the stable failure names.

#include "ffcm/counting.hpp"
#include "ffcm/curve.hpp"
#include "ffcm/errors.hpp"
#include "ffcm/field.hpp"
#include "ffcm/parallel.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ffcm::test {

inline RunCtx quiet_ctx(int workers = 2) {
    RunCtx ctx;
    ctx.workers = workers;
    ctx.budget = 1'000'000'000ULL;
    ctx.verbose = false;
    return ctx;
}

inline CurveModel p1(const FieldSpec* F) {
    CurveModel c;
    c.F = F;
    c.ncomp = 1;
    return c;
}

// Two rational components glued at one point (t = 1 on both): genus 0.
inline CurveModel nodal_one(const FieldSpec* F) {
    CurveModel c;
    c.F = F;
    c.ncomp = 2;
    c.nodes.push_back(Node{0, RatPoint{false, 1}, 1, RatPoint{false, 1}});
    return c;
}

// Two rational components glued at two points (t=0<->u=0, t=1<->u=1): genus 1.
inline CurveModel nodal_two(const FieldSpec* F) {
    CurveModel c;
    c.F = F;
    c.ncomp = 2;
    c.nodes.push_back(Node{0, RatPoint{false, 0}, 1, RatPoint{false, 0}});
    c.nodes.push_back(Node{0, RatPoint{false, 1}, 1, RatPoint{false, 1}});
    return c;
}

// One component glued to itself (t=0 <-> t=1): irreducible, genus 1.
inline CurveModel self_node(const FieldSpec* F) {
    CurveModel c;
    c.F = F;
    c.ncomp = 1;
    c.nodes.push_back(Node{0, RatPoint{false, 0}, 0, RatPoint{false, 1}});
    return c;
}

inline ClosedPoint finite_point(const FieldSpec* F, int comp, Fe value) {
    ClosedPoint pt;
    pt.comp = comp;
    pt.inf = false;
    pt.poly = {F->neg(value), 1}; // t - value, monic, low-degree-first
    return pt;
}

inline ClosedPoint infinity_point(int comp) {
    ClosedPoint pt;
    pt.comp = comp;
    pt.inf = true;
    return pt;
}

inline DivisorSpec single_point_divisor(const FieldSpec* F, int comp, Fe value, int mult = 1) {
    DivisorSpec d;
    d.points.push_back(DivisorPoint{finite_point(F, comp, value), mult});
    return d;
}

// Zero jets for every variable on the given divisor: mult * residue-degree
// zero digits per point.
inline std::vector<JetVector> zero_jets(int nvars, const DivisorSpec& divisor) {
    JetVector one;
    for (const auto& dp : divisor.points)
        one.push_back(std::vector<Fe>(static_cast<std::size_t>(dp.pt.degree()) * dp.mult, 0));
    return std::vector<JetVector>(static_cast<std::size_t>(nvars), one);
}

// Runs f, expecting an Error; returns its stable name ("" if nothing threw).
inline std::string error_name(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.name();
    }
    return "";
}

inline int error_exit_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.exit_code();
    }
    return 0;
}

} // namespace ffcm::test
