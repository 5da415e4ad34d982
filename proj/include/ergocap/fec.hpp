#pragma once

/// Finite ergodic components of an invariant upper probability.
///
/// For an invariant V the following are decided here, each by its own route:
///  - the zero-one condition V(A) in {0,1} on invariant sets;
///  - extraction of an invariant partition whose component capacities
///      V_i(A) = max{ P(A) : P in core(V), P(A_i) = 1 }
///    are FZ-ergodic (V_i(A) = 0 or V_i(A^c) = 0 on invariant sets);
///  - unique decomposition of every invariant core vertex over the ergodic
///    probabilities in the core;
///  - ex(core(V) and invariant) == core(V) and ergodic, non-empty.

#include "ergocap/capacity.hpp"
#include "ergocap/linalg.hpp"
#include "ergocap/measure.hpp"
#include "ergocap/space.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ergocap {

struct FECResult {
    Partition partition;              ///< invariant cells A_1..A_n
    std::vector<UpperProb> components; ///< V_i, one per cell
    std::vector<Prob> ergodic_measures; ///< Q_i, the invariant element of core(V_i)

    std::size_t size() const noexcept { return partition.size(); }
};

/// Why a system has no finite ergodic components. `witness` is an invariant
/// set with 0 < V(A) < 1 when the zero-one condition is what failed.
struct NotFEC {
    std::optional<SubsetMask> witness;
    std::string reason;
};

using FECOutcome = std::variant<FECResult, NotFEC>;

struct DecompositionResult {
    std::vector<Rational> coefficients;
    std::optional<Prob> residual;
};

inline bool is_fz_ergodic(const UpperProb& v, const Transformation& map)
{
    require(is_invariant_capacity(v, map), "is_fz_ergodic: capacity is not invariant");
    for (const auto& a : invariant_sets(map))
        if (v(a) != 0 && v(a.complement()) != 0) return false;
    return true;
}

/// First invariant set with 0 < V(A) < 1, if any.
inline std::optional<SubsetMask> zero_one_witness(const UpperProb& v, const Transformation& map)
{
    require(is_invariant_capacity(v, map), "zero_one_condition: capacity is not invariant");
    for (const auto& a : invariant_sets(map))
        if (v(a) != 0 && v(a) != 1) return a;
    return std::nullopt;
}

inline bool zero_one_condition(const UpperProb& v, const Transformation& map) { return !zero_one_witness(v, map); }

/// A -> max{ P(A) : P in core(V), P(cell) = 1 }, i.e. the envelope of the
/// vertices of the restricted core. Generators are the vertices attaining at
/// least one maximum.
inline UpperProb component_capacity(const UpperProb& v, const SubsetMask& cell)
{
    auto vertices = core_vertices_within(v, cell);
    if (vertices.empty())
        throw EmptyRestrictedCore("no core element puts full mass on " + cell.to_string());
    const UpperProb full = envelope(vertices);
    std::vector<Prob> attaining;
    for (const auto& p : vertices) {
        const auto values = p.subset_values();
        for (std::size_t b = 1; b < values.size(); ++b)
            if (values[b] == full.table()[b]) {
                attaining.push_back(p);
                break;
            }
    }
    return envelope(std::move(attaining));
}

/// Ergodic probabilities dominated by V: the cycle-uniform measures in the core.
inline std::vector<Prob> ergodic_core_measures(const UpperProb& v, const Transformation& map)
{
    require(v.size() == map.size(), "ergodic_core_measures: widths differ");
    std::vector<Prob> out;
    for (auto& q : ergodic_probabilities(map))
        if (core_contains(v, q)) out.push_back(std::move(q));
    std::sort(out.begin(), out.end());
    return out;
}

/// Extracts minimal invariant cells of capacity one, in least-element order,
/// folding a V-null invariant remainder into the last cell. Each component
/// capacity is then checked to be invariant and FZ-ergodic, and its unique
/// invariant core element becomes Q_i.
inline FECOutcome fec_decompose(const UpperProb& v, const Transformation& map)
{
    if (auto w = zero_one_witness(v, map))
        return NotFEC{w, "invariant set " + w->to_string() + " has capacity " + to_string(v(*w)) + ", strictly between 0 and 1"};

    const std::size_t m = v.size();
    const auto invariant = invariant_sets(map);
    std::vector<SubsetMask> cells;
    SubsetMask remaining = SubsetMask::full(m);
    while (!remaining.is_empty()) {
        std::vector<SubsetMask> full_mass;
        for (const auto& a : invariant)
            if (!a.is_empty() && a.is_subset_of(remaining) && v(a) == 1) full_mass.push_back(a);
        std::vector<SubsetMask> minimal;
        for (const auto& a : full_mass) {
            const bool has_smaller = std::any_of(full_mass.begin(), full_mass.end(),
                                                 [&](const SubsetMask& b) { return b != a && b.is_subset_of(a); });
            if (!has_smaller) minimal.push_back(a);
        }
        if (minimal.empty()) throw InternalError("no capacity-one invariant set inside a capacity-one remainder");
        const auto chosen = *std::min_element(minimal.begin(), minimal.end(), [](const SubsetMask& a, const SubsetMask& b) {
            return a.least() != b.least() ? a.least() < b.least() : a.bits() < b.bits();
        });
        cells.push_back(chosen);
        remaining = remaining - chosen;
        if (!remaining.is_empty() && v(remaining) == 0) {
            cells.back() = cells.back() | remaining;
            break;
        }
    }

    FECResult result{Partition(cells), {}, {}};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        UpperProb vi = component_capacity(v, cells[i]);
        if (!is_invariant_capacity(vi, map))
            return NotFEC{cells[i], "component capacity on " + cells[i].to_string() + " is not invariant"};
        if (!is_fz_ergodic(vi, map))
            return NotFEC{cells[i], "component capacity on " + cells[i].to_string() + " is not FZ-ergodic"};
        auto inv = invariant_core_vertices(vi, map);
        if (inv.size() != 1 || !is_ergodic(inv.front(), map))
            return NotFEC{cells[i], "component capacity on " + cells[i].to_string() + " has no unique ergodic invariant core element"};
        result.components.push_back(std::move(vi));
        result.ergodic_measures.push_back(std::move(inv.front()));
    }
    return result;
}

/// P = sum_j P(A_j) Q_j for an invariant P in core(V), verified entrywise.
inline DecompositionResult decompose_invariant(const UpperProb& v, const Transformation& map, const FECResult& fec, const Prob& p)
{
    require(core_contains(v, p), "decompose_invariant: probability is not in core(V)");
    require(is_invariant(p, map), "decompose_invariant: probability is not invariant");
    DecompositionResult out;
    for (const auto& cell : fec.partition.cells()) out.coefficients.push_back(p(cell));
    if (mixture(out.coefficients, fec.ergodic_measures) != p)
        throw InternalError("decomposition over ergodic components does not reconstruct " + p.to_string());
    return out;
}

inline DecompositionResult decompose_invariant(const UpperProb& v, const Transformation& map, const Prob& p)
{
    const auto outcome = fec_decompose(v, map);
    if (const auto* failure = std::get_if<NotFEC>(&outcome)) throw PreconditionError("decompose_invariant: system is not FEC: " + failure->reason);
    return decompose_invariant(v, map, std::get<FECResult>(outcome), p);
}

/// Every vertex of core(V) and invariant is a unique convex combination of
/// the ergodic core measures, which must exist. Decided by exact linear solves.
inline bool unique_vertex_decomposition(const UpperProb& v, const Transformation& map)
{
    const auto ergodic = ergodic_core_measures(v, map);
    if (ergodic.empty()) return false;
    const std::size_t m = v.size();
    linalg::Matrix a(m, std::vector<Rational>(ergodic.size()));
    for (std::size_t w = 0; w < m; ++w)
        for (std::size_t j = 0; j < ergodic.size(); ++j) a[w][j] = ergodic[j][w];
    for (const auto& p : invariant_core_vertices(v, map)) {
        const auto s = linalg::solve(a, p.masses());
        if (s.kind != linalg::SolutionKind::Unique) return false;
        if (std::any_of(s.x.begin(), s.x.end(), [](const Rational& x) { return x < 0; })) return false;
    }
    return true;
}

/// Vertices of the invariant core coincide with the ergodic core measures,
/// and there is at least one.
inline bool extreme_points_check(const UpperProb& v, const Transformation& map)
{
    require(is_invariant_capacity(v, map), "extreme_points_check: capacity is not invariant");
    const auto vertices = invariant_core_vertices(v, map); // sorted
    const auto ergodic = ergodic_core_measures(v, map);    // sorted
    return !ergodic.empty() && vertices == ergodic;
}

/// A -> max{ P(A) : P in core(V), supp(P) within supp(R) }.
inline UpperProb restricted_envelope(const UpperProb& v, const Prob& r)
{
    auto vertices = core_vertices_within(v, r.support());
    if (vertices.empty())
        throw EmptyRestrictedCore("no core element is absolutely continuous w.r.t. " + r.to_string());
    return envelope(std::move(vertices));
}

/// Decomposition of an invariant core element that does not assume FEC.
struct FullDecomposition {
    std::vector<Prob> ergodic;      ///< Q_1..Q_n, the ergodic core measures
    DecompositionResult result;     ///< alpha_1..alpha_{n+1} and Q_{n+1}
    bool residual_invariant = true; ///< the remaining three are vacuous without a residual
    bool residual_in_core = true;
    bool residual_singular = true;

    bool valid() const noexcept { return residual_invariant && residual_in_core && residual_singular; }
};

/// P = sum_{i<=n} alpha_i Q_i + alpha_{n+1} Q_{n+1}: the Lebesgue split of P
/// against R = (1/n) sum Q_i, with the absolutely continuous part decomposed
/// over the FEC system formed by the core elements that are << R. The residual
/// checks are reported, not enforced.
inline FullDecomposition full_decomposition(const UpperProb& v, const Transformation& map, const Prob& p)
{
    require(is_invertible(map), "full_decomposition: map is not invertible");
    require(is_invariant_capacity(v, map), "full_decomposition: capacity is not invariant");
    require(core_contains(v, p) && is_invariant(p, map), "full_decomposition: probability is not an invariant core element");
    FullDecomposition out;
    out.ergodic = ergodic_core_measures(v, map);
    const std::size_t n = out.ergodic.size();
    require(n >= 1, "full_decomposition: no ergodic probability in the core");

    const Prob r = mixture(std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n))), out.ergodic);
    const auto split = lebesgue_decomposition_invariant(p, r, map);
    out.result.coefficients.assign(n + 1, Rational(0));

    if (split.absolutely_continuous) {
        const UpperProb restricted = restricted_envelope(v, r);
        const auto outcome = fec_decompose(restricted, map);
        if (const auto* failure = std::get_if<NotFEC>(&outcome))
            throw InternalError("restricted envelope is not FEC: " + failure->reason);
        const auto& fec = std::get<FECResult>(outcome);
        const auto part = decompose_invariant(restricted, map, fec, *split.absolutely_continuous);
        for (std::size_t i = 0; i < fec.size(); ++i) {
            const auto it = std::find(out.ergodic.begin(), out.ergodic.end(), fec.ergodic_measures[i]);
            if (it == out.ergodic.end()) throw InternalError("restricted component measure is not an ergodic core measure");
            out.result.coefficients[static_cast<std::size_t>(it - out.ergodic.begin())] += split.k * part.coefficients[i];
        }
    }
    out.result.coefficients[n] = split.l;
    out.result.residual = split.singular_part;

    std::vector<Prob> parts = out.ergodic;
    std::vector<Rational> weights(out.result.coefficients.begin(), out.result.coefficients.begin() + static_cast<std::ptrdiff_t>(n));
    if (out.result.residual) {
        parts.push_back(*out.result.residual);
        weights.push_back(split.l);
    }
    if (mixture(weights, parts) != p) throw InternalError("full decomposition does not reconstruct " + p.to_string());

    if (const auto& q = out.result.residual) {
        out.residual_invariant = is_invariant(*q, map);
        out.residual_in_core = core_contains(v, *q);
        out.residual_singular = std::all_of(out.ergodic.begin(), out.ergodic.end(), [&](const Prob& e) { return singular(*q, e); });
    }
    return out;
}

} // namespace ergocap
