#pragma once

/// Ergodic theory for a probability P that is not invariant under an
/// invertible map T. The invariant sets split into a finite irreducible
/// partition; each cell A_j yields the conditional P_j, its Cesaro limit Q_j,
/// and the upper probability V_j = sup of the window averages of P_j o T^{-i}.
/// Their maximum V is an invariant upper probability with finite ergodic
/// components, which transfers the multi-valued ergodic theorem back to P.

#include "ergocap/birkhoff.hpp"
#include "ergocap/capacity.hpp"
#include "ergocap/fec.hpp"
#include "ergocap/measure.hpp"
#include "ergocap/space.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace ergocap {

class NoninvariantSystem {
public:
    NoninvariantSystem(Prob p, Transformation map) : p_(std::move(p)), map_(std::move(map))
    {
        require(p_.size() == map_.size(), "noninvariant system: widths differ");
        require(is_invertible(map_), "noninvariant system: map must be a permutation");
    }

    const Prob& probability() const noexcept { return p_; }
    const Transformation& map() const noexcept { return map_; }

private:
    Prob p_;
    Transformation map_;
};

struct IrreduciblePartition {
    Partition cells;
    std::vector<Prob> conditionals; ///< P_j = P( . | A_j)
    std::vector<Prob> limits;       ///< Q_j
    std::vector<UpperProb> capacities; ///< V_j, extended to all sets by V_j(A) = V_j(A cap A_j)
};

/// {P(A) : A invariant}, sorted.
inline std::vector<Rational> invariant_value_set(const Prob& p, const Transformation& map)
{
    std::set<Rational> values;
    for (const auto& a : invariant_sets(map)) values.insert(p(a));
    return {values.begin(), values.end()};
}

/// Q_j = (1/L) sum_{i<L} P_j o T^{-i}, L the common period of T.
inline Prob q_limit(const Prob& pj, const Transformation& map)
{
    require(is_invertible(map), "q_limit: map must be invertible");
    const std::size_t period = orbit_structure(map).period;
    std::vector<Rational> acc(pj.size(), Rational(0));
    Prob current = pj;
    for (std::size_t i = 0; i < period; ++i) {
        for (std::size_t w = 0; w < acc.size(); ++w) acc[w] += current[w];
        current = pushforward(current, map);
    }
    for (auto& x : acc) x /= static_cast<unsigned long>(period);
    Prob q(std::move(acc));
    if (!is_invariant(q, map)) throw InternalError("Cesaro limit of P_j is not invariant");
    for (const auto& a : invariant_sets(map))
        if (q(a) != pj(a)) throw InternalError("Q_j disagrees with P_j on invariant set " + a.to_string());
    return q;
}

/// The window averages whose envelope is V_j: the period mean Q_j plus every
/// window of length 1..L-1 at every phase. A window of length qL + r averages q
/// periods with a length-r window, so it never beats the better of the two.
inline std::vector<Prob> window_generators(const Prob& pj, const Transformation& map)
{
    require(is_invertible(map), "window_generators: map must be invertible");
    const std::size_t period = orbit_structure(map).period;
    std::vector<Prob> shifted{pj}; // shifted[i] = P_j o T^{-i}
    for (std::size_t i = 1; i < period; ++i) shifted.push_back(pushforward(shifted.back(), map));

    std::vector<Prob> gens{q_limit(pj, map)};
    for (std::size_t start = 0; start < period; ++start) {
        std::vector<Rational> acc(pj.size(), Rational(0));
        for (std::size_t len = 1; len < period; ++len) {
            const Prob& next = shifted[(start + len - 1) % period];
            for (std::size_t w = 0; w < acc.size(); ++w) acc[w] += next[w];
            std::vector<Rational> avg = acc;
            for (auto& x : avg) x /= static_cast<unsigned long>(len);
            gens.emplace_back(std::move(avg));
        }
    }
    return gens;
}

/// V_j(A) = sup over windows [a, b] of (1/(b-a+1)) sum_{i=a}^{b} P_j(T^{-i} A).
inline UpperProb v_component(const Prob& pj, const Transformation& map) { return envelope(window_generators(pj, map)); }

/// Pointwise maximum of capacities built by `envelope`.
inline UpperProb capacity_max(const std::vector<UpperProb>& parts)
{
    require(!parts.empty(), "capacity_max of nothing");
    std::vector<Prob> gens;
    for (const auto& v : parts) gens.insert(gens.end(), v.generators().begin(), v.generators().end());
    return envelope(std::move(gens));
}

/// Greedy extraction of minimal invariant sets of positive mass, in
/// least-element order; a P-null invariant remainder joins the last cell.
inline IrreduciblePartition irreducible_partition(const Prob& p, const Transformation& map)
{
    require(is_invertible(map), "irreducible_partition: map must be invertible");
    require(p.size() == map.size(), "irreducible_partition: widths differ");
    const auto invariant = invariant_sets(map);
    std::vector<SubsetMask> cells;
    SubsetMask remaining = SubsetMask::full(map.size());
    while (!remaining.is_empty()) {
        std::vector<SubsetMask> positive;
        for (const auto& a : invariant)
            if (!a.is_empty() && a.is_subset_of(remaining) && p(a) > 0) positive.push_back(a);
        std::vector<SubsetMask> minimal;
        for (const auto& a : positive)
            if (std::none_of(positive.begin(), positive.end(), [&](const SubsetMask& b) { return b != a && b.is_subset_of(a); }))
                minimal.push_back(a);
        if (minimal.empty()) throw InternalError("positive-mass remainder without a positive invariant subset");
        const auto chosen = *std::min_element(minimal.begin(), minimal.end(), [](const SubsetMask& a, const SubsetMask& b) {
            return a.least() != b.least() ? a.least() < b.least() : a.bits() < b.bits();
        });
        cells.push_back(chosen);
        remaining = remaining - chosen;
        if (!remaining.is_empty() && p(remaining) == 0) {
            cells.back() = cells.back() | remaining;
            break;
        }
    }

    for (const auto& cell : cells) {
        const Rational total = p(cell);
        if (total <= 0 || preimage(map, cell) != cell) throw InternalError("irreducible cell " + cell.to_string() + " is null or not invariant");
        for (const auto& b : invariant)
            if (b.is_subset_of(cell) && p(b) > 0 && p(b) < total)
                throw InternalError("irreducible cell " + cell.to_string() + " splits at " + b.to_string());
    }

    IrreduciblePartition out{Partition(cells), {}, {}, {}};
    for (const auto& cell : cells) {
        out.conditionals.push_back(conditional(p, cell));
        out.limits.push_back(q_limit(out.conditionals.back(), map));
        out.capacities.push_back(v_component(out.conditionals.back(), map));
    }
    return out;
}

inline IrreduciblePartition irreducible_partition(const NoninvariantSystem& sys) { return irreducible_partition(sys.probability(), sys.map()); }

/// V = max_j V_j
inline UpperProb combined_capacity(const IrreduciblePartition& part) { return capacity_max(part.capacities); }

struct ConstructionReport {
    bool limits_ergodic = false;       ///< each Q_j invariant, ergodic, carried by A_j
    bool components_fz_ergodic = false; ///< each V_j invariant and FZ-ergodic
    bool finite_components = false;    ///< the cells form an FEC partition of V = max V_j
    bool zero_one = false;             ///< V(A) in {0,1} on invariant sets
    std::vector<std::string> failures;

    bool all() const noexcept { return limits_ergodic && components_fz_ergodic && finite_components && zero_one; }
};

/// Checks the four properties of the construction, each on its own path.
inline ConstructionReport verify_construction(const IrreduciblePartition& part, const Transformation& map)
{
    ConstructionReport r;
    r.limits_ergodic = true;
    for (std::size_t j = 0; j < part.cells.size(); ++j) {
        const auto& q = part.limits[j];
        if (!is_invariant(q, map) || !is_ergodic(q, map) || q(part.cells[j]) != 1) {
            r.limits_ergodic = false;
            r.failures.push_back("Q_" + std::to_string(j + 1) + " is not an ergodic invariant probability on its cell");
        }
    }

    r.components_fz_ergodic = true;
    for (std::size_t j = 0; j < part.capacities.size(); ++j) {
        const auto& vj = part.capacities[j];
        if (!is_invariant_capacity(vj, map) || !is_fz_ergodic(vj, map)) {
            r.components_fz_ergodic = false;
            r.failures.push_back("V_" + std::to_string(j + 1) + " is not an invariant FZ-ergodic upper probability");
        }
    }

    const UpperProb v = combined_capacity(part);
    if (!is_invariant_capacity(v, map)) {
        r.failures.push_back("V = max V_j is not invariant");
        return r;
    }
    r.finite_components = true;
    for (const auto& cell : part.cells.cells()) {
        bool ok = false;
        try {
            const auto vi = component_capacity(v, cell);
            ok = is_invariant_capacity(vi, map) && is_fz_ergodic(vi, map);
        } catch (const EmptyRestrictedCore&) {
            ok = false;
        }
        if (!ok) {
            r.finite_components = false;
            r.failures.push_back("component capacity of V on " + cell.to_string() + " is not FZ-ergodic");
        }
    }

    r.zero_one = zero_one_condition(v, map);
    if (!r.zero_one) r.failures.push_back("V takes a value strictly between 0 and 1 on an invariant set");
    return r;
}

inline ConstructionReport verify_construction(const NoninvariantSystem& sys) { return verify_construction(irreducible_partition(sys), sys.map()); }

/// Birkhoff limit of f equals sum_j (int f dQ_j) 1_{A_j} wherever P({w}) > 0.
inline bool noninvariant_lln(const NoninvariantSystem& sys, const IrreduciblePartition& part, const FunctionOnSpace& f)
{
    const auto limit = birkhoff_limit(sys.map(), f);
    for (auto w : sys.probability().support().points()) {
        const std::size_t j = part.cells.cell_of(w);
        if (limit[w] != integrate(f, part.limits[j])) return false;
    }
    return true;
}

inline bool noninvariant_lln(const NoninvariantSystem& sys, const FunctionOnSpace& f) { return noninvariant_lln(sys, irreducible_partition(sys), f); }

/// lim (1/N) sum_{i<N} P(B cap T^{-i} C) against sum_j Q_j(C) P(A_j cap B).
inline CoreIndependence noninvariant_independence(const NoninvariantSystem& sys, const IrreduciblePartition& part, const SubsetMask& b, const SubsetMask& c)
{
    CoreIndependence out;
    out.lhs = cesaro_correlation(sys.probability(), sys.map(), b, c);
    for (std::size_t j = 0; j < part.cells.size(); ++j) out.rhs += part.limits[j](c) * sys.probability()(part.cells[j] & b);
    out.equal = out.lhs == out.rhs;
    return out;
}

inline CoreIndependence noninvariant_independence(const NoninvariantSystem& sys, const SubsetMask& b, const SubsetMask& c)
{
    return noninvariant_independence(sys, irreducible_partition(sys), b, c);
}

/// cup_{i in Z} T^{-i} A for a permutation T; always an invariant set.
inline SubsetMask orbit_saturation(const Transformation& map, const SubsetMask& a)
{
    require(is_invertible(map), "orbit_saturation: map must be invertible");
    SubsetMask u = a, pre = a;
    for (std::size_t i = 1; i < orbit_structure(map).period; ++i) {
        pre = preimage(map, pre);
        u = u | pre;
    }
    return u;
}

} // namespace ergocap
