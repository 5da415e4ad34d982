#pragma once

/// Upper probabilities on a finite space, represented by their full value
/// table over all 2^m subsets together with the credal set that generated it.

#include "ergocap/measure.hpp"
#include "ergocap/polytope.hpp"
#include "ergocap/rational.hpp"
#include "ergocap/space.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace ergocap {

/// A bounded function on the points.
class FunctionOnSpace {
public:
    explicit FunctionOnSpace(std::vector<Rational> values) : values_(std::move(values))
    {
        FiniteSpace space(values_.size());
    }

    static FunctionOnSpace constant(const Rational& c, std::size_t width) { return FunctionOnSpace(std::vector<Rational>(width, c)); }
    static FunctionOnSpace indicator(const SubsetMask& set)
    {
        std::vector<Rational> v(set.width(), Rational(0));
        for (auto w : set.points()) v[w] = 1;
        return FunctionOnSpace(std::move(v));
    }

    std::size_t size() const noexcept { return values_.size(); }
    const Rational& operator[](std::size_t point) const { return values_.at(point); }
    const std::vector<Rational>& values() const noexcept { return values_; }

    /// {w : f(w) >= t}
    SubsetMask at_least(const Rational& t) const
    {
        std::uint32_t bits = 0;
        for (std::size_t w = 0; w < size(); ++w)
            if (values_[w] >= t) bits |= std::uint32_t{1} << w;
        return {bits, size()};
    }

    friend bool operator==(const FunctionOnSpace&, const FunctionOnSpace&) = default;

private:
    std::vector<Rational> values_;
};

inline Rational integrate(const FunctionOnSpace& f, const Prob& p)
{
    require(f.size() == p.size(), "integral: widths differ");
    Rational s = 0;
    for (std::size_t w = 0; w < f.size(); ++w) s += f[w] * p[w];
    return s;
}

/// An upper probability V = max over a finite credal set, stored as its value
/// table. The only way to build one is `envelope`, so the table always equals
/// the pointwise maximum of the generators.
class UpperProb {
public:
    std::size_t size() const noexcept { return width_; }
    const Rational& operator()(const SubsetMask& set) const
    {
        require(set.width() == width_, "capacity evaluated on a set of different width");
        return table_[set.bits()];
    }
    const std::vector<Rational>& table() const noexcept { return table_; }
    const std::vector<Prob>& generators() const noexcept { return generators_; }

    friend UpperProb envelope(std::vector<Prob> generators);

    /// Tables are canonical; generators are provenance only.
    friend bool operator==(const UpperProb& a, const UpperProb& b) { return a.table_ == b.table_; }

private:
    std::size_t width_ = 0;
    std::vector<Rational> table_;
    std::vector<Prob> generators_;
};

/// Upper envelope A -> max_i P_i(A). Continuity at the empty set is automatic
/// on a finite space, so nothing more is needed to get an upper probability.
inline UpperProb envelope(std::vector<Prob> generators)
{
    require(!generators.empty(), "envelope of an empty credal set");
    const std::size_t m = generators.front().size();
    for (const auto& g : generators) require(g.size() == m, "generators have different widths");
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());

    UpperProb v;
    v.width_ = m;
    v.table_ = generators.front().subset_values();
    for (std::size_t i = 1; i < generators.size(); ++i) {
        const auto values = generators[i].subset_values();
        for (std::size_t b = 0; b < values.size(); ++b)
            if (values[b] > v.table_[b]) v.table_[b] = values[b];
    }
    v.generators_ = std::move(generators);
    return v;
}

/// P(A) <= V(A) for every subset A.
inline bool core_contains(const UpperProb& v, const Prob& p)
{
    require(v.size() == p.size(), "core_contains: widths differ");
    const auto values = p.subset_values();
    for (std::size_t b = 0; b < values.size(); ++b)
        if (values[b] > v.table()[b]) return false;
    return true;
}

namespace detail {

/// V(A) * sum(x) - sum_{w in A} x_w >= 0 for each A with V(A) < 1; the others
/// are implied by x >= 0.
inline std::vector<std::vector<Rational>> core_inequalities(const UpperProb& v)
{
    const std::size_t m = v.size();
    std::vector<std::pair<std::size_t, std::uint32_t>> order;
    for (std::uint32_t b = 1; b < v.table().size(); ++b)
        if (v.table()[b] < 1) order.emplace_back(std::popcount(b), b);
    std::sort(order.begin(), order.end());
    std::vector<std::vector<Rational>> rows;
    rows.reserve(order.size());
    for (auto [_, b] : order) {
        std::vector<Rational> row(m, v.table()[b]);
        for (std::size_t w = 0; w < m; ++w)
            if ((b >> w) & 1u) row[w] -= 1;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::vector<Rational>> invariance_equalities(const Transformation& map)
{
    const std::size_t m = map.size();
    std::vector<std::vector<Rational>> rows;
    // (P o T^{-1})[w] - P[w] = 0; the last row is implied by the others.
    for (std::size_t target = 0; target + 1 < m; ++target) {
        std::vector<Rational> row(m, Rational(0));
        for (std::size_t w = 0; w < m; ++w)
            if (map(w) == target) row[w] += 1;
        row[target] -= 1;
        if (std::any_of(row.begin(), row.end(), [](const Rational& x) { return sgn(x) != 0; })) rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::vector<Rational>> vanish_outside(const SubsetMask& allowed)
{
    std::vector<std::vector<Rational>> rows;
    for (std::size_t w = 0; w < allowed.width(); ++w) {
        if (allowed.contains(w)) continue;
        std::vector<Rational> row(allowed.width(), Rational(0));
        row[w] = 1;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<Prob> to_probs(std::vector<polytope::Point> points)
{
    std::vector<Prob> out;
    out.reserve(points.size());
    for (auto& p : points) out.emplace_back(std::move(p));
    return out;
}

} // namespace detail

/// Extreme points of core(V), sorted lexicographically.
inline std::vector<Prob> core_vertices(const UpperProb& v)
{
    return detail::to_probs(polytope::simplex_section_vertices(v.size(), detail::core_inequalities(v), {}));
}

/// Extreme points of { P in core(V) : P(allowed) = 1 }.
inline std::vector<Prob> core_vertices_within(const UpperProb& v, const SubsetMask& allowed)
{
    require(allowed.width() == v.size(), "core_vertices_within: widths differ");
    return detail::to_probs(polytope::simplex_section_vertices(v.size(), detail::core_inequalities(v), detail::vanish_outside(allowed)));
}

/// Extreme points of core(V) intersected with the invariant probabilities.
inline std::vector<Prob> invariant_core_vertices(const UpperProb& v, const Transformation& map)
{
    require(v.size() == map.size(), "invariant_core_vertices: widths differ");
    return detail::to_probs(polytope::simplex_section_vertices(v.size(), detail::core_inequalities(v), detail::invariance_equalities(map)));
}

/// Choquet integral of f against V, via the sorted threshold sum
///   sum_j (v_j - v_{j+1}) V({f >= v_j}) + v_k
/// over the distinct values v_1 > ... > v_k of f.
inline Rational choquet_integral(const UpperProb& v, const FunctionOnSpace& f)
{
    require(v.size() == f.size(), "choquet_integral: widths differ");
    std::vector<Rational> levels = f.values();
    std::sort(levels.begin(), levels.end(), [](const Rational& a, const Rational& b) { return a > b; });
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    Rational total = levels.back();
    for (std::size_t j = 0; j + 1 < levels.size(); ++j) total += (levels[j] - levels[j + 1]) * v(f.at_least(levels[j]));
    return total;
}

inline bool is_invariant_capacity(const UpperProb& v, const Transformation& map)
{
    require(v.size() == map.size(), "is_invariant_capacity: widths differ");
    for (const auto& a : all_subsets(v.size()))
        if (v(preimage(map, a)) != v(a)) return false;
    return true;
}

/// S = {w : V({w}) > 0}. By subadditivity V(A) = 0 iff A misses S, so
/// "V-almost surely" means "at every point of S".
inline SubsetMask null_support(const UpperProb& v)
{
    std::uint32_t bits = 0;
    for (std::size_t w = 0; w < v.size(); ++w)
        if (v(SubsetMask::singleton(w, v.size())) > 0) bits |= std::uint32_t{1} << w;
    return {bits, v.size()};
}

/// Continuity along decreasing sequences to the empty set is vacuous on a
/// finite space: every such sequence is eventually empty. Kept so callers can
/// state the check explicitly.
inline constexpr bool is_continuous_at_empty(const UpperProb&) noexcept { return true; }

} // namespace ergocap
