#pragma once

#include "ergocap/rational.hpp"

#include <optional>
#include <vector>

namespace ergocap::linalg {

using Matrix = std::vector<std::vector<Rational>>;

/// Row-reduces in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(Matrix& a, std::size_t columns)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < columns && row < a.size(); ++col) {
        std::size_t pick = row;
        while (pick < a.size() && sgn(a[pick][col]) == 0) ++pick;
        if (pick == a.size()) continue;
        std::swap(a[row], a[pick]);
        const Rational inv = 1 / a[row][col];
        for (auto& x : a[row]) x *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == row || sgn(a[i][col]) == 0) continue;
            const Rational f = a[i][col];
            for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= f * a[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(Matrix a)
{
    const std::size_t cols = a.empty() ? 0 : a.front().size();
    return row_reduce(a, cols).size();
}

enum class SolutionKind { None, Unique, Many };

struct Solution {
    SolutionKind kind = SolutionKind::None;
    std::vector<Rational> x; ///< filled only when unique
};

/// Solves a x = b.
inline Solution solve(const Matrix& a, const std::vector<Rational>& b)
{
    const std::size_t n = a.empty() ? 0 : a.front().size();
    Matrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b.at(i));
    const auto pivots = row_reduce(aug, n + 1);
    if (!pivots.empty() && pivots.back() == n) return {};
    if (pivots.size() < n) return {SolutionKind::Many, {}};
    Solution s{SolutionKind::Unique, std::vector<Rational>(n)};
    for (std::size_t i = 0; i < n; ++i) s.x[pivots[i]] = aug[i][n];
    return s;
}

} // namespace ergocap::linalg
