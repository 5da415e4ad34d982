#pragma once

/// Brute-force counterparts of the main computations. Everything here works
/// from the definitions: subset scans, literal partial sums, one LP per value.
/// Nothing calls into the main-path modules except to read the inputs
/// (bitmasks, map tables, capacity tables) and to package results.

#include "ergocap/capacity.hpp"
#include "ergocap/fec.hpp"
#include "ergocap/lp.hpp"
#include "ergocap/measure.hpp"
#include "ergocap/space.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ergocap::oracle {

namespace detail {

inline SubsetMask pre(const Transformation& map, const SubsetMask& a)
{
    std::uint32_t bits = 0;
    for (std::size_t w = 0; w < map.size(); ++w)
        if ((a.bits() >> map(w)) & 1u) bits |= std::uint32_t{1} << w;
    return SubsetMask(bits, map.size());
}

inline Rational mass(const std::vector<Rational>& p, const SubsetMask& a)
{
    Rational s = 0;
    for (std::size_t w = 0; w < p.size(); ++w)
        if ((a.bits() >> w) & 1u) s += p[w];
    return s;
}

inline std::uint32_t full_bits(std::size_t m) { return m == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << m) - 1; }

/// Periodic orbits found by walking m steps from every point.
inline std::vector<std::vector<std::size_t>> cycle_list(const Transformation& map)
{
    const std::size_t m = map.size();
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t w = 0; w < m; ++w) {
        std::size_t x = w;
        for (std::size_t i = 0; i < m; ++i) x = map(x);
        std::vector<std::size_t> cyc{x};
        for (std::size_t y = map(x); y != x; y = map(y)) cyc.push_back(y);
        std::sort(cyc.begin(), cyc.end());
        seen.insert(cyc);
    }
    return {seen.begin(), seen.end()};
}

inline std::size_t common_period(const Transformation& map)
{
    std::size_t l = 1;
    for (const auto& c : cycle_list(map)) l = std::lcm(l, c.size());
    return l;
}

} // namespace detail

inline std::vector<SubsetMask> oracle_invariant_sets(const Transformation& map)
{
    std::vector<SubsetMask> out;
    const std::size_t m = map.size();
    for (std::uint32_t bits = 0; bits <= detail::full_bits(m); ++bits) {
        const SubsetMask a(bits, m);
        if (detail::pre(map, a) == a) out.push_back(a);
    }
    return out;
}

/// int f dV = int_0^inf V(f >= t) dt + int_{-inf}^0 (V(f >= t) - 1) dt, with
/// both integrands piecewise constant between consecutive breakpoints.
inline Rational oracle_choquet(const UpperProb& v, const std::vector<Rational>& f)
{
    std::set<Rational> points(f.begin(), f.end());
    points.insert(Rational(0));
    const std::vector<Rational> br(points.begin(), points.end());
    auto level_set = [&](const Rational& t) {
        std::uint32_t bits = 0;
        for (std::size_t w = 0; w < f.size(); ++w)
            if (f[w] >= t) bits |= std::uint32_t{1} << w;
        return v(SubsetMask(bits, f.size()));
    };
    Rational total = 0;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        const Rational width = br[k + 1] - br[k];
        // on (br[k], br[k+1]] the level set is {f >= br[k+1]}
        if (br[k] >= 0)
            total += width * level_set(br[k + 1]);
        else
            total += width * (level_set(br[k + 1]) - 1);
    }
    return total;
}

/// max P(A) over P in core(V) with P carried by `allowed`, by a single LP whose
/// variables are the points of `allowed`. Empty when no such P exists.
inline std::optional<lp::Result> restricted_lp(const UpperProb& v, const SubsetMask& allowed, const SubsetMask& a)
{
    const std::size_t m = v.size();
    std::vector<std::size_t> pts;
    for (std::size_t w = 0; w < m; ++w)
        if (allowed.contains(w)) pts.push_back(w);
    const std::size_t n = pts.size();
    if (n == 0 || v(allowed) < 1) return std::nullopt;

    std::vector<lp::Constraint> rows;
    for (std::uint32_t sub = 1; sub + 1 < (std::uint32_t{1} << n); ++sub) {
        std::uint32_t bits = 0;
        std::vector<Rational> coeffs(n, Rational(0));
        for (std::size_t k = 0; k < n; ++k)
            if ((sub >> k) & 1u) {
                bits |= std::uint32_t{1} << pts[k];
                coeffs[k] = 1;
            }
        const Rational& cap = v(SubsetMask(bits, m));
        if (cap < 1) rows.push_back({std::move(coeffs), lp::Relation::LessEqual, cap});
    }
    rows.push_back({std::vector<Rational>(n, Rational(1)), lp::Relation::Equal, Rational(1)});

    std::vector<Rational> objective(n, Rational(0));
    for (std::size_t k = 0; k < n; ++k)
        if (a.contains(pts[k])) objective[k] = 1;
    auto r = lp::maximize(objective, rows);
    if (r.status != lp::Status::Optimal) return std::nullopt;
    std::vector<Rational> x(m, Rational(0));
    for (std::size_t k = 0; k < n; ++k) x[pts[k]] = r.x[k];
    r.x = std::move(x);
    return r;
}

inline std::optional<Rational> oracle_restricted_value(const UpperProb& v, const SubsetMask& allowed, const SubsetMask& a)
{
    auto r = restricted_lp(v, allowed, a);
    if (!r) return std::nullopt;
    return r->value;
}

/// Full table of A -> max{P(A) : P in core(V), P(cell) = 1}, by one LP per set,
/// with the maximizers kept as generators.
inline std::optional<UpperProb> oracle_component_capacity(const UpperProb& v, const SubsetMask& cell)
{
    const std::size_t m = v.size();
    std::vector<Prob> maximizers;
    std::vector<Rational> table(std::size_t{1} << m);
    for (std::uint32_t bits = 0; bits <= detail::full_bits(m); ++bits) {
        auto r = restricted_lp(v, cell, SubsetMask(bits, m));
        if (!r) return std::nullopt;
        table[bits] = r->value;
        maximizers.emplace_back(r->x);
    }
    auto out = envelope(std::move(maximizers));
    if (out.table() != table) throw InternalError("LP maximizers do not reproduce the LP values");
    return out;
}

/// Cycle-uniform probabilities, from the oracle's own orbit walk.
inline std::vector<std::vector<Rational>> oracle_ergodic_probabilities(const Transformation& map)
{
    std::vector<std::vector<Rational>> out;
    for (const auto& c : detail::cycle_list(map)) {
        std::vector<Rational> p(map.size(), Rational(0));
        for (auto w : c) p[w] = Rational(1, static_cast<unsigned long>(c.size()));
        out.push_back(std::move(p));
    }
    return out;
}

inline bool oracle_in_core(const UpperProb& v, const std::vector<Rational>& p)
{
    const std::size_t m = v.size();
    for (std::uint32_t bits = 0; bits <= detail::full_bits(m); ++bits)
        if (detail::mass(p, SubsetMask(bits, m)) > v(SubsetMask(bits, m))) return false;
    return true;
}

/// Definition of finite ergodic components checked over every partition of
/// the atoms of the invariant algebra. Each cell is tested for FZ-ergodicity
/// of its component capacity, one LP per invariant set. The valid partition
/// with the most cells is returned (first in enumeration order on ties), with
/// full component tables and their ergodic core measures.
inline FECOutcome oracle_fec(const UpperProb& v, const Transformation& map)
{
    const std::size_t m = v.size();
    const auto inv = oracle_invariant_sets(map);
    for (std::uint32_t bits = 0; bits <= detail::full_bits(m); ++bits) {
        const SubsetMask a(bits, m);
        if (v(detail::pre(map, a)) != v(a)) return NotFEC{std::nullopt, "capacity is not invariant"};
    }

    std::vector<SubsetMask> atoms;
    for (const auto& a : inv) {
        if (a.is_empty()) continue;
        bool minimal = true;
        for (const auto& b : inv)
            if (!b.is_empty() && b != a && b.is_subset_of(a)) minimal = false;
        if (minimal) atoms.push_back(a);
    }
    std::sort(atoms.begin(), atoms.end(), [](const SubsetMask& x, const SubsetMask& y) { return x.least() < y.least(); });

    std::map<std::uint32_t, bool> valid;
    auto cell_valid = [&](const SubsetMask& cell) {
        auto it = valid.find(cell.bits());
        if (it != valid.end()) return it->second;
        bool ok = v(cell) == 1 && restricted_lp(v, cell, cell).has_value();
        for (const auto& a : inv) {
            if (!ok) break;
            const auto va = oracle_restricted_value(v, cell, a);
            const auto vc = oracle_restricted_value(v, cell, a.complement());
            ok = va && vc && (*va == 0 || *vc == 0);
        }
        valid.emplace(cell.bits(), ok);
        return ok;
    };

    // restricted growth strings enumerate set partitions of the atoms
    const std::size_t k = atoms.size();
    std::vector<std::size_t> label(k, 0);
    std::optional<std::vector<SubsetMask>> best;
    for (;;) {
        const std::size_t blocks = k == 0 ? 0 : *std::max_element(label.begin(), label.end()) + 1;
        std::vector<SubsetMask> cells(blocks, SubsetMask::empty(m));
        for (std::size_t i = 0; i < k; ++i) cells[label[i]] = cells[label[i]] | atoms[i];
        if ((!best || cells.size() > best->size()) && std::all_of(cells.begin(), cells.end(), cell_valid)) best = cells;

        std::size_t i = k;
        bool advanced = false;
        while (!advanced && i > 1) {
            --i;
            const std::size_t prefix_max = *std::max_element(label.begin(), label.begin() + static_cast<std::ptrdiff_t>(i));
            if (label[i] <= prefix_max) {
                ++label[i];
                std::fill(label.begin() + static_cast<std::ptrdiff_t>(i) + 1, label.end(), 0);
                advanced = true;
            }
        }
        if (!advanced) break;
    }
    if (!best) return NotFEC{std::nullopt, "no partition of the invariant atoms has FZ-ergodic component capacities"};

    FECResult out{Partition(*best), {}, {}};
    const auto ergodic = oracle_ergodic_probabilities(map);
    for (const auto& cell : *best) {
        auto vi = oracle_component_capacity(v, cell);
        if (!vi) throw InternalError("oracle: component capacity vanished on a valid cell");
        for (std::uint32_t bits = 0; bits <= detail::full_bits(m); ++bits) {
            const SubsetMask a(bits, m);
            if ((*vi)(detail::pre(map, a)) != (*vi)(a)) return NotFEC{cell, "component capacity on " + cell.to_string() + " is not invariant"};
        }
        std::vector<Prob> found;
        for (const auto& q : ergodic)
            if (oracle_in_core(*vi, q)) found.emplace_back(q);
        if (found.size() != 1)
            return NotFEC{cell, "component on " + cell.to_string() + " has " + std::to_string(found.size()) + " ergodic core measures"};
        out.components.push_back(std::move(*vi));
        out.ergodic_measures.push_back(found.front());
    }
    return out;
}

/// (1/N) sum_{i<N} P(T^{-i} A) for N = 1..nmax, summed literally.
inline std::vector<Rational> oracle_cesaro(const std::vector<Rational>& p, const Transformation& map, const SubsetMask& a, std::size_t nmax)
{
    std::vector<Rational> out;
    Rational running = 0;
    SubsetMask current = a;
    for (std::size_t n = 1; n <= nmax; ++n) {
        running += detail::mass(p, current);
        current = detail::pre(map, current);
        out.push_back(running / static_cast<unsigned long>(n));
    }
    return out;
}

/// (1/N) sum_{i<N} P(B cap T^{-i} C), summed literally.
inline Rational oracle_correlation(const std::vector<Rational>& p, const Transformation& map, const SubsetMask& b, const SubsetMask& c,
                                   std::size_t n)
{
    Rational running = 0;
    SubsetMask current = c;
    for (std::size_t i = 0; i < n; ++i) {
        running += detail::mass(p, b & current);
        current = detail::pre(map, current);
    }
    return running / static_cast<unsigned long>(n);
}

/// (1/N) sum_{i<N} f(T^i w) at every w.
inline std::vector<Rational> oracle_birkhoff(const Transformation& map, const std::vector<Rational>& f, std::size_t n)
{
    std::vector<Rational> out(f.size(), Rational(0));
    for (std::size_t w = 0; w < f.size(); ++w) {
        std::size_t x = w;
        for (std::size_t i = 0; i < n; ++i) {
            out[w] += f[x];
            x = map(x);
        }
        out[w] /= static_cast<unsigned long>(n);
    }
    return out;
}

inline std::size_t oracle_period(const Transformation& map) { return detail::common_period(map); }

/// max over windows -bound <= a <= b <= bound of (1/(b-a+1)) sum_{i=a}^{b} P(T^{-i} A),
/// with T^{-i} for negative i taken as the forward image under T^{|i|}.
inline Rational oracle_window_sup(const std::vector<Rational>& p, const Transformation& map, const SubsetMask& a, long bound)
{
    const std::size_t m = map.size();
    std::vector<std::size_t> inverse(m);
    for (std::size_t w = 0; w < m; ++w) inverse[map(w)] = w;
    const Transformation back(inverse);

    // seq[i + bound] = P(T^{-i} A) for i in [-bound, bound]
    std::vector<Rational> seq(static_cast<std::size_t>(2 * bound + 1));
    SubsetMask s = a;
    for (long i = 0; i <= bound; ++i) {
        seq[static_cast<std::size_t>(bound + i)] = detail::mass(p, s);
        s = detail::pre(map, s);
    }
    s = a;
    for (long i = 1; i <= bound; ++i) {
        s = detail::pre(back, s); // preimage under T^{-1} is the image under T
        seq[static_cast<std::size_t>(bound - i)] = detail::mass(p, s);
    }
    std::vector<Rational> prefix(seq.size() + 1, Rational(0));
    for (std::size_t i = 0; i < seq.size(); ++i) prefix[i + 1] = prefix[i] + seq[i];
    Rational best = 0;
    for (std::size_t lo = 0; lo < seq.size(); ++lo)
        for (std::size_t hi = lo; hi < seq.size(); ++hi) {
            const Rational avg = (prefix[hi + 1] - prefix[lo]) / static_cast<unsigned long>(hi - lo + 1);
            if (avg > best) best = avg;
        }
    return best;
}

/// Windows forced to contain index 0: sup over 0 <= M, N <= bound of
/// (1/(M+N+1)) sum_{i=-M}^{N} P(T^{-i} A).
inline Rational oracle_window_sup_through_zero(const std::vector<Rational>& p, const Transformation& map, const SubsetMask& a, long bound)
{
    const std::size_t m = map.size();
    std::vector<std::size_t> inverse(m);
    for (std::size_t w = 0; w < m; ++w) inverse[map(w)] = w;
    const Transformation back(inverse);
    std::vector<Rational> fwd, bwd; // fwd[i] = P(T^{-i}A), bwd[i] = P(T^{i}A)
    SubsetMask s = a, t = a;
    for (long i = 0; i <= bound; ++i) {
        fwd.push_back(detail::mass(p, s));
        bwd.push_back(detail::mass(p, t));
        s = detail::pre(map, s);
        t = detail::pre(back, t);
    }
    Rational best = 0;
    for (long mm = 0; mm <= bound; ++mm)
        for (long nn = 0; nn <= bound; ++nn) {
            Rational sum = 0;
            for (long i = 0; i <= nn; ++i) sum += fwd[static_cast<std::size_t>(i)];
            for (long i = 1; i <= mm; ++i) sum += bwd[static_cast<std::size_t>(i)];
            const Rational avg = sum / static_cast<unsigned long>(mm + nn + 1);
            if (avg > best) best = avg;
        }
    return best;
}

/// cup_{i in Z} T^{-i} A by iterating preimages and images until nothing new appears.
inline SubsetMask oracle_saturation(const Transformation& map, const SubsetMask& a)
{
    const std::size_t m = map.size();
    std::vector<std::size_t> inverse(m);
    for (std::size_t w = 0; w < m; ++w) inverse[map(w)] = w;
    const Transformation back(inverse);
    SubsetMask u = a;
    for (;;) {
        const SubsetMask next = u | detail::pre(map, u) | detail::pre(back, u);
        if (next == u) return u;
        u = next;
    }
}

/// Maximum of P(A) over the core, via LP; the coherence check for vertex lists.
inline Rational oracle_core_max(const UpperProb& v, const SubsetMask& a)
{
    auto r = oracle_restricted_value(v, SubsetMask::full(v.size()), a);
    if (!r) throw InternalError("oracle: core of an upper probability is empty");
    return *r;
}

/// Same verdict; for two FEC results, the same cells once V-null points are
/// dropped, carrying the same ergodic measures.
inline bool fec_outcomes_agree(const UpperProb& v, const FECOutcome& a, const FECOutcome& b)
{
    const auto* fa = std::get_if<FECResult>(&a);
    const auto* fb = std::get_if<FECResult>(&b);
    if (!fa || !fb) return !fa && !fb;
    std::uint32_t positive = 0;
    for (std::size_t w = 0; w < v.size(); ++w)
        if (v(SubsetMask::singleton(w, v.size())) > 0) positive |= std::uint32_t{1} << w;
    auto key = [&](const FECResult& r) {
        std::vector<std::pair<std::uint32_t, std::vector<Rational>>> out;
        for (std::size_t i = 0; i < r.size(); ++i) out.emplace_back(r.partition[i].bits() & positive, r.ergodic_measures[i].masses());
        std::sort(out.begin(), out.end());
        return out;
    };
    return key(*fa) == key(*fb);
}

} // namespace ergocap::oracle
