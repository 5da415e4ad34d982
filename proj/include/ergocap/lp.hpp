#pragma once

/// Dense two-phase simplex over exact rationals with Bland's anti-cycling rule.
///
/// Sized for the tiny programs this library produces (tens of variables, at
/// most a few thousand rows). It serves as the cross-check for the vertex
/// enumeration in polytope.hpp, so the two must not share code.

#include "ergocap/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ergocap::lp {

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Constraint {
    std::vector<Rational> coeffs;
    Relation relation;
    Rational rhs;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    Rational value;
    std::vector<Rational> x;
};

namespace detail {

struct Tableau {
    std::vector<std::vector<Rational>> rows; // last column is the right-hand side
    std::vector<std::size_t> basis;
    std::size_t columns = 0;                 // excluding the rhs column

    void pivot(std::size_t r, std::size_t c)
    {
        const Rational inv = 1 / rows[r][c];
        for (auto& x : rows[r])
            if (sgn(x) != 0) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || sgn(rows[i][c]) == 0) continue;
            const Rational factor = rows[i][c];
            for (std::size_t j = 0; j <= columns; ++j)
                if (sgn(rows[r][j]) != 0) rows[i][j] -= factor * rows[r][j];
        }
        basis[r] = c;
    }

    /// Maximizes cost . x over the columns flagged in `allowed`.
    Status optimize(const std::vector<Rational>& cost, const std::vector<bool>& allowed)
    {
        // reduced[j] = cost[j] - sum_i cost[basis[i]] * rows[i][j]
        std::vector<Rational> reduced(columns + 1);
        for (std::size_t j = 0; j <= columns; ++j) {
            reduced[j] = j < columns ? cost[j] : Rational(0);
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (sgn(cost[basis[i]]) != 0 && sgn(rows[i][j]) != 0) reduced[j] -= cost[basis[i]] * rows[i][j];
        }
        for (;;) {
            std::size_t enter = columns;
            for (std::size_t j = 0; j < columns; ++j)
                if (allowed[j] && sgn(reduced[j]) > 0) {
                    enter = j;
                    break;
                }
            if (enter == columns) return Status::Optimal;

            std::size_t leave = rows.size();
            Rational best;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (sgn(rows[i][enter]) <= 0) continue;
                Rational ratio = rows[i][columns] / rows[i][enter];
                if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = std::move(ratio);
                }
            }
            if (leave == rows.size()) return Status::Unbounded;
            pivot(leave, enter);
            const Rational factor = reduced[enter];
            for (std::size_t j = 0; j <= columns; ++j)
                if (sgn(rows[leave][j]) != 0) reduced[j] -= factor * rows[leave][j];
        }
    }
};

} // namespace detail

/// max objective . x subject to the constraints and x >= 0.
inline Result maximize(const std::vector<Rational>& objective, const std::vector<Constraint>& constraints)
{
    const std::size_t n = objective.size();
    std::size_t slacks = 0, artificials = 0;
    for (const auto& c : constraints) {
        require(c.coeffs.size() == n, "lp: constraint width differs from objective");
        const bool flip = c.rhs < 0;
        const Relation rel = !flip ? c.relation
                             : c.relation == Relation::LessEqual ? Relation::GreaterEqual
                             : c.relation == Relation::GreaterEqual ? Relation::LessEqual
                                                                    : Relation::Equal;
        if (rel != Relation::Equal) ++slacks;
        if (rel != Relation::LessEqual) ++artificials;
    }

    detail::Tableau t;
    t.columns = n + slacks + artificials;
    const std::size_t first_artificial = n + slacks;
    std::size_t next_slack = n, next_artificial = first_artificial;
    for (const auto& c : constraints) {
        std::vector<Rational> row(t.columns + 1, Rational(0));
        const bool flip = c.rhs < 0;
        for (std::size_t j = 0; j < n; ++j) row[j] = flip ? Rational(-c.coeffs[j]) : c.coeffs[j];
        row[t.columns] = flip ? Rational(-c.rhs) : c.rhs;
        Relation rel = c.relation;
        if (flip && rel != Relation::Equal) rel = rel == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
        switch (rel) {
        case Relation::LessEqual:
            row[next_slack] = 1;
            t.basis.push_back(next_slack++);
            break;
        case Relation::GreaterEqual:
            row[next_slack++] = -1;
            row[next_artificial] = 1;
            t.basis.push_back(next_artificial++);
            break;
        case Relation::Equal:
            row[next_artificial] = 1;
            t.basis.push_back(next_artificial++);
            break;
        }
        t.rows.push_back(std::move(row));
    }

    std::vector<bool> allowed(t.columns, true);
    if (artificials > 0) {
        std::vector<Rational> phase1(t.columns, Rational(0));
        for (std::size_t j = first_artificial; j < t.columns; ++j) phase1[j] = -1;
        t.optimize(phase1, allowed);
        Rational infeasibility = 0;
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            if (t.basis[i] >= first_artificial) infeasibility += t.rows[i][t.columns];
        if (infeasibility != 0) return {};

        // Drive zero-level artificials out of the basis, dropping redundant rows.
        for (std::size_t i = 0; i < t.rows.size();) {
            if (t.basis[i] < first_artificial) {
                ++i;
                continue;
            }
            std::size_t col = first_artificial;
            for (std::size_t j = 0; j < first_artificial; ++j)
                if (sgn(t.rows[i][j]) != 0) {
                    col = j;
                    break;
                }
            if (col == first_artificial) {
                t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                t.pivot(i, col);
                ++i;
            }
        }
        for (std::size_t j = first_artificial; j < t.columns; ++j) allowed[j] = false;
    }

    std::vector<Rational> phase2(t.columns, Rational(0));
    for (std::size_t j = 0; j < n; ++j) phase2[j] = objective[j];
    if (t.optimize(phase2, allowed) == Status::Unbounded) return {Status::Unbounded, Rational(0), {}};

    Result out{Status::Optimal, Rational(0), std::vector<Rational>(n, Rational(0))};
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.basis[i] < n) out.x[t.basis[i]] = t.rows[i][t.columns];
    for (std::size_t j = 0; j < n; ++j) out.value += objective[j] * out.x[j];
    return out;
}

} // namespace ergocap::lp
