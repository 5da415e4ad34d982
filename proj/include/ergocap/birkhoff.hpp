#pragma once

/// Time averages on finite systems. Every orbit is eventually periodic, so
/// each limit is an exact average over one period of the tail; iterated
/// partial averages only appear as evidence traces.

#include "ergocap/capacity.hpp"
#include "ergocap/fec.hpp"
#include "ergocap/measure.hpp"
#include "ergocap/space.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace ergocap {

/// g(w) = mean of f over the cycle that the forward orbit of w falls into.
inline FunctionOnSpace birkhoff_limit(const Transformation& map, const FunctionOnSpace& f)
{
    require(map.size() == f.size(), "birkhoff_limit: widths differ");
    const auto orbits = orbit_structure(map);
    std::vector<Rational> cycle_mean;
    for (const auto& c : orbits.cycles) {
        Rational s = 0;
        for (auto w : c.order) s += f[w];
        cycle_mean.push_back(s / static_cast<unsigned long>(c.length()));
    }
    std::vector<Rational> g(f.size());
    for (std::size_t w = 0; w < f.size(); ++w) g[w] = cycle_mean[orbits.cycle_of[w]];
    return FunctionOnSpace(std::move(g));
}

/// (1/N) sum_{i<N} f(T^i w), computed literally.
inline FunctionOnSpace birkhoff_average(const Transformation& map, const FunctionOnSpace& f, std::size_t n)
{
    require(n >= 1, "birkhoff_average: N must be positive");
    std::vector<Rational> g(f.size(), Rational(0));
    for (std::size_t w = 0; w < f.size(); ++w) {
        std::size_t x = w;
        for (std::size_t i = 0; i < n; ++i, x = map(x)) g[w] += f[x];
        g[w] /= static_cast<unsigned long>(n);
    }
    return FunctionOnSpace(std::move(g));
}

/// sum_j (integral of f dQ_j) 1_{A_j}
inline FunctionOnSpace multivalue_limit(const FECResult& fec, const FunctionOnSpace& f)
{
    std::vector<Rational> g(f.size(), Rational(0));
    for (std::size_t j = 0; j < fec.size(); ++j) {
        const Rational mean = integrate(f, fec.ergodic_measures[j]);
        for (auto w : fec.partition[j].points()) g[w] = mean;
    }
    return FunctionOnSpace(std::move(g));
}

/// The Birkhoff limit of f equals sum_j (int f dQ_j) 1_{A_j} at every point of
/// null_support(V).
inline bool verify_multivalue_lln(const UpperProb& v, const Transformation& map, const FECResult& fec, const FunctionOnSpace& f)
{
    const auto limit = birkhoff_limit(map, f);
    const auto predicted = multivalue_limit(fec, f);
    for (auto w : null_support(v).points())
        if (limit[w] != predicted[w]) return false;
    return true;
}

struct StepChoquet {
    Rational general;    ///< sorted-threshold Choquet integral
    Rational telescoped; ///< sum_j c_j (V(U_j cap B) - V(U_{j-1} cap B)), cells sorted by decreasing level
};

/// Choquet integral of g = sum_j levels_j 1_{A_j cap B}, once by the general
/// formula and once in telescoped form. The two agree for nonnegative levels.
inline StepChoquet comonotone_step_choquet(const UpperProb& v, const SubsetMask& b, const Partition& cells, const std::vector<Rational>& levels)
{
    require(levels.size() == cells.size(), "comonotone_step_choquet: one level per cell required");
    std::vector<Rational> g(v.size(), Rational(0));
    for (std::size_t j = 0; j < cells.size(); ++j)
        for (auto w : (cells[j] & b).points()) g[w] = levels[j];

    std::vector<std::size_t> order(cells.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return levels[x] > levels[y]; });
    Rational telescoped = 0;
    SubsetMask acc = SubsetMask::empty(v.size());
    for (auto j : order) {
        const Rational before = v(acc & b);
        acc = acc | cells[j];
        telescoped += levels[j] * (v(acc & b) - before);
    }
    return {choquet_integral(v, FunctionOnSpace(std::move(g))), telescoped};
}

struct ChoquetIndependence {
    Rational lhs;
    Rational rhs;
    bool equal = false;
    Rational rhs_index_order;         ///< telescoping sum with cells in partition order
    bool index_order_differs = false; ///< unsorted form disagrees with the Choquet integral
    std::vector<Rational> trace;      ///< Choquet integrals of the partial averages, N = 1..nmax
};

/// lim_N int (1/N) sum_{i<N} 1_B (1_C o T^i) dV against
/// sum_j Q_j(C) (V(cup_{k<=j} A_k cap B) - V(cup_{k<j} A_k cap B)).
inline ChoquetIndependence asymptotic_independence_choquet(const UpperProb& v, const Transformation& map, const FECResult& fec,
                                                           const SubsetMask& b, const SubsetMask& c, std::size_t nmax = 0)
{
    const auto indicator_b = FunctionOnSpace::indicator(b);
    auto product_with_b = [&](const FunctionOnSpace& h) {
        std::vector<Rational> out(h.size());
        for (std::size_t w = 0; w < h.size(); ++w) out[w] = indicator_b[w] * h[w];
        return FunctionOnSpace(std::move(out));
    };
    const auto indicator_c = FunctionOnSpace::indicator(c);

    ChoquetIndependence out;
    out.lhs = choquet_integral(v, product_with_b(birkhoff_limit(map, indicator_c)));

    std::vector<Rational> levels;
    for (const auto& q : fec.ergodic_measures) levels.push_back(q(c));
    out.rhs = comonotone_step_choquet(v, b, fec.partition, levels).telescoped;
    out.equal = out.lhs == out.rhs;

    Rational index_order = 0;
    SubsetMask acc = SubsetMask::empty(v.size());
    for (std::size_t j = 0; j < fec.size(); ++j) {
        const Rational before = v(acc & b);
        acc = acc | fec.partition[j];
        index_order += levels[j] * (v(acc & b) - before);
    }
    out.rhs_index_order = index_order;
    out.index_order_differs = index_order != out.lhs;

    for (std::size_t n = 1; n <= nmax; ++n) out.trace.push_back(choquet_integral(v, product_with_b(birkhoff_average(map, indicator_c, n))));
    return out;
}

/// Cesaro mean of i -> P(B cap T^{-i} C). The sequence is periodic once every
/// orbit has reached its cycle.
inline Rational cesaro_correlation(const Prob& p, const Transformation& map, const SubsetMask& b, const SubsetMask& c)
{
    const auto orbits = orbit_structure(map);
    Rational total = 0;
    for (auto w : b.points()) {
        if (sgn(p[w]) == 0) continue;
        std::size_t x = map.iterate(w, orbits.preperiod);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < orbits.period; ++i, x = map(x))
            if (c.contains(x)) ++hits;
        total += p[w] * Rational(static_cast<unsigned long>(hits), 1);
    }
    return total / static_cast<unsigned long>(orbits.period);
}

struct CoreIndependence {
    Rational lhs;
    Rational rhs;
    bool equal = false;
};

/// lim (1/N) sum_{i<N} P(B cap T^{-i} C) against sum_j Q_j(C) P(A_j cap B).
inline CoreIndependence asymptotic_independence_core(const UpperProb& v, const Transformation& map, const FECResult& fec, const Prob& p,
                                                     const SubsetMask& b, const SubsetMask& c)
{
    require(core_contains(v, p), "asymptotic_independence_core: probability is not in core(V)");
    CoreIndependence out;
    out.lhs = cesaro_correlation(p, map, b, c);
    for (std::size_t j = 0; j < fec.size(); ++j) out.rhs += fec.ergodic_measures[j](c) * p(fec.partition[j] & b);
    out.equal = out.lhs == out.rhs;
    return out;
}

} // namespace ergocap
