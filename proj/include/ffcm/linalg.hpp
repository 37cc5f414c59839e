#pragma once

#include "ffcm/field.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ffcm {

// Dense row-major matrix over a finite field, elements as Fe indices.
struct Mat {
    const FieldSpec* F = nullptr;
    std::size_t rows = 0, cols = 0;
    std::vector<Fe> a;

    Mat() = default;
    Mat(const FieldSpec* f, std::size_t r, std::size_t c) : F(f), rows(r), cols(c), a(r * c, 0) {}

    Fe& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    Fe at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    void add_row(const std::vector<Fe>& row) {
        a.insert(a.end(), row.begin(), row.end());
        ++rows;
    }
};

// In-place reduced row echelon form; returns the pivot column of each of the
// first `rank` rows, in increasing order.  Fully deterministic: pivots are
// chosen as the first nonzero entry scanning rows top-down.
inline std::vector<std::size_t> rref(Mat& M) {
    const FieldSpec* F = M.F;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < M.cols && r < M.rows; ++c) {
        std::size_t sel = r;
        while (sel < M.rows && M.at(sel, c) == 0) ++sel;
        if (sel == M.rows) continue;
        if (sel != r)
            for (std::size_t j = 0; j < M.cols; ++j) std::swap(M.at(sel, j), M.at(r, j));
        const Fe piv_inv = F->inv(M.at(r, c));
        for (std::size_t j = c; j < M.cols; ++j) M.at(r, j) = F->mul(M.at(r, j), piv_inv);
        for (std::size_t i = 0; i < M.rows; ++i) {
            if (i == r || M.at(i, c) == 0) continue;
            const Fe f = M.at(i, c);
            for (std::size_t j = c; j < M.cols; ++j)
                M.at(i, j) = F->sub(M.at(i, j), F->mul(f, M.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(Mat M) { return rref(M).size(); }

// Kernel of M as an echelon basis: one vector per free column f (ascending),
// with v[f] = 1 and pivot coordinates filled from the RREF.  This fixed
// shape is what makes downstream enumeration orders reproducible.
inline std::vector<std::vector<Fe>> kernel_basis(Mat M) {
    const FieldSpec* F = M.F;
    const auto pivots = rref(M);
    std::vector<bool> is_pivot(M.cols, false);
    for (auto c : pivots) is_pivot[c] = true;

    std::vector<std::vector<Fe>> basis;
    for (std::size_t f = 0; f < M.cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Fe> v(M.cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F->neg(M.at(i, f));
        basis.push_back(std::move(v));
    }
    return basis;
}

// One solution of M x = rhs with all free variables set to zero (nullopt if
// inconsistent).  Deterministic particular solution.
inline std::optional<std::vector<Fe>> solve_particular(Mat M, std::vector<Fe> rhs) {
    const FieldSpec* F = M.F;
    // Augment, eliminate, then read the solution off the pivot columns.
    Mat A(F, M.rows, M.cols + 1);
    for (std::size_t i = 0; i < M.rows; ++i) {
        for (std::size_t j = 0; j < M.cols; ++j) A.at(i, j) = M.at(i, j);
        A.at(i, M.cols) = rhs[i];
    }
    const auto pivots = rref(A);
    std::vector<Fe> x(M.cols, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == M.cols) return std::nullopt; // pivot in the rhs column
        x[pivots[i]] = A.at(i, M.cols);
    }
    return x;
}

// Is v in the row space of M?  (Rank comparison; exact.)
inline bool in_rowspace(const Mat& M, const std::vector<Fe>& v) {
    Mat A = M;
    A.add_row(v);
    return rank(A) == rank(M);
}

} // namespace ffcm
