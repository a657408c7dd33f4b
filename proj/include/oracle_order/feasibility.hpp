#pragma once

#include "oracle_order/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace oracle_order {

// Exact feasibility for A x = b, x >= 0 over rationals: phase-one simplex
// with artificial variables and Bland's rule, so it terminates without
// cycling and never leaves exact arithmetic. Row and column counts here stay
// small, so the tableau is recomputed plainly instead of being factored.
struct FeasibilityResult {
    std::optional<std::vector<Rat>> solution;
    std::uint64_t pivots = 0;
};

inline FeasibilityResult solve_equality_nonnegative(std::vector<std::vector<Rat>> a,
                                                    std::vector<Rat> b) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    for (std::size_t i = 0; i < rows; ++i)
        if (b[i] < 0) {
            for (Rat& x : a[i]) x = -x;
            b[i] = -b[i];
        }

    // tableau: structural columns, artificial identity, rhs
    const std::size_t total = cols + rows;
    std::vector<std::vector<Rat>> t(rows, std::vector<Rat>(total + 1));
    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) t[i][j] = a[i][j];
        t[i][cols + i] = 1;
        t[i][total] = b[i];
        basis[i] = cols + i;
    }

    FeasibilityResult result;
    auto cost = [&](std::size_t j) { return j >= cols ? Rat(1) : Rat(0); };
    while (true) {
        // reduced cost d_j = c_j - sum_i c_basis(i) * t[i][j]
        std::size_t entering = total;
        for (std::size_t j = 0; j < total && entering == total; ++j) {
            Rat d = cost(j);
            for (std::size_t i = 0; i < rows; ++i)
                if (basis[i] >= cols) d -= t[i][j];
            if (d < 0) entering = j;  // Bland: first improving column
        }
        if (entering == total) break;

        std::size_t leaving = rows;
        Rat best_ratio = 0;
        for (std::size_t i = 0; i < rows; ++i) {
            if (t[i][entering] <= 0) continue;
            Rat ratio = t[i][total] / t[i][entering];
            if (leaving == rows || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leaving])) {
                leaving = i;
                best_ratio = ratio;
            }
        }
        if (leaving == rows) break;  // unbounded cannot happen in phase one

        ++result.pivots;
        Rat pivot = t[leaving][entering];
        for (Rat& x : t[leaving]) x /= pivot;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == leaving || t[i][entering] == 0) continue;
            Rat factor = t[i][entering];
            for (std::size_t j = 0; j <= total; ++j) t[i][j] -= factor * t[leaving][j];
        }
        basis[leaving] = entering;
    }

    Rat objective = 0;
    for (std::size_t i = 0; i < rows; ++i)
        if (basis[i] >= cols) objective += t[i][total];
    if (objective != 0) return result;  // no nonnegative solution

    std::vector<Rat> x(cols, Rat(0));
    for (std::size_t i = 0; i < rows; ++i)
        if (basis[i] < cols) x[basis[i]] = t[i][total];
    result.solution = std::move(x);
    return result;
}

}  // namespace oracle_order
