#pragma once

/// Exact probabilities on a finite space and the classical (additive) ergodic
/// theory of a finite map: invariance, ergodicity, Cesaro limits, invariant
/// skeletons and the Lebesgue split of one invariant measure against another.

#include "ergocap/rational.hpp"
#include "ergocap/space.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace ergocap {

/// A probability vector with exact rational entries summing to exactly 1.
class Prob {
public:
    explicit Prob(std::vector<Rational> mass) : mass_(std::move(mass))
    {
        FiniteSpace space(mass_.size());
        Rational total = 0;
        for (const auto& x : mass_) {
            require(x >= 0, "probability has a negative entry " + ergocap::to_string(x));
            total += x;
        }
        require(total == 1, "probability masses sum to " + ergocap::to_string(total) + ", not 1");
    }

    static Prob point_mass(std::size_t point, std::size_t width)
    {
        std::vector<Rational> m(width, Rational(0));
        m.at(point) = 1;
        return Prob(std::move(m));
    }

    static Prob uniform_on(const SubsetMask& set)
    {
        require(!set.is_empty(), "uniform distribution on the empty set");
        std::vector<Rational> m(set.width(), Rational(0));
        const Rational share(1, static_cast<unsigned long>(set.count()));
        for (auto w : set.points()) m[w] = share;
        return Prob(std::move(m));
    }

    std::size_t size() const noexcept { return mass_.size(); }
    const Rational& operator[](std::size_t point) const { return mass_.at(point); }
    const std::vector<Rational>& masses() const noexcept { return mass_; }

    Rational operator()(const SubsetMask& set) const
    {
        require(set.width() == size(), "measure of a set of different width");
        Rational total = 0;
        for (std::size_t w = 0; w < size(); ++w)
            if (set.contains(w)) total += mass_[w];
        return total;
    }

    SubsetMask support() const
    {
        std::uint32_t bits = 0;
        for (std::size_t w = 0; w < size(); ++w)
            if (mass_[w] > 0) bits |= std::uint32_t{1} << w;
        return {bits, size()};
    }

    /// Values on every subset, indexed by bitmask.
    std::vector<Rational> subset_values() const
    {
        std::vector<Rational> out(std::size_t{1} << size());
        out[0] = 0;
        for (std::uint32_t b = 1; b < out.size(); ++b) {
            const auto low = static_cast<std::size_t>(std::countr_zero(b));
            out[b] = out[b & (b - 1)] + mass_[low];
        }
        return out;
    }

    std::string to_string() const
    {
        std::string out = "(";
        for (std::size_t w = 0; w < size(); ++w) out += (w ? "," : "") + ergocap::to_string(mass_[w]);
        return out + ")";
    }

    friend bool operator==(const Prob&, const Prob&) = default;
    friend bool operator<(const Prob& a, const Prob& b) { return a.mass_ < b.mass_; }

private:
    std::vector<Rational> mass_;
};

/// P conditioned on a set of positive mass.
inline Prob conditional(const Prob& p, const SubsetMask& set)
{
    const Rational total = p(set);
    require(total > 0, "conditioning on a null set");
    std::vector<Rational> m(p.size(), Rational(0));
    for (auto w : set.points()) m[w] = p[w] / total;
    return Prob(std::move(m));
}

/// Sum_i weights[i] * parts[i]; weights must be a probability vector.
inline Prob mixture(const std::vector<Rational>& weights, const std::vector<Prob>& parts)
{
    require(!parts.empty() && weights.size() == parts.size(), "mixture: weights and parts differ in length");
    std::vector<Rational> m(parts.front().size(), Rational(0));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        require(parts[i].size() == m.size(), "mixture: widths differ");
        for (std::size_t w = 0; w < m.size(); ++w) m[w] += weights[i] * parts[i][w];
    }
    return Prob(std::move(m));
}

/// P o T^{-1}: mass of each point moved to its image.
inline Prob pushforward(const Prob& p, const Transformation& map)
{
    require(p.size() == map.size(), "pushforward: widths differ");
    std::vector<Rational> m(p.size(), Rational(0));
    for (std::size_t w = 0; w < p.size(); ++w) m[map(w)] += p[w];
    return Prob(std::move(m));
}

inline bool is_invariant(const Prob& p, const Transformation& map) { return pushforward(p, map) == p; }

inline bool is_ergodic(const Prob& p, const Transformation& map)
{
    require(is_invariant(p, map), "is_ergodic: probability is not invariant");
    for (const auto& a : invariant_sets(map)) {
        const Rational v = p(a);
        if (v != 0 && v != 1) return false;
    }
    return true;
}

/// The ergodic invariant probabilities of a finite map: uniform on each cycle.
inline std::vector<Prob> ergodic_probabilities(const Transformation& map)
{
    std::vector<Prob> out;
    for (const auto& c : cycles(map)) out.push_back(Prob::uniform_on(c.points));
    return out;
}

/// lim (1/N) sum_{i<N} P o T^{-i}. After the preperiod the pushforward sequence
/// repeats with the common period, so the limit is one period's average.
inline Prob cesaro_limit(const Prob& p, const Transformation& map)
{
    const auto orbits = orbit_structure(map);
    Prob current = p;
    for (std::size_t i = 0; i < orbits.preperiod; ++i) current = pushforward(current, map);
    std::vector<Rational> acc(p.size(), Rational(0));
    for (std::size_t i = 0; i < orbits.period; ++i) {
        for (std::size_t w = 0; w < p.size(); ++w) acc[w] += current[w];
        current = pushforward(current, map);
    }
    for (auto& x : acc) x /= static_cast<unsigned long>(orbits.period);
    Prob limit(std::move(acc));
    if (!is_invariant(limit, map)) throw InternalError("Cesaro limit is not invariant");
    return limit;
}

/// The unique invariant probability agreeing with P on every invariant set:
/// each component's mass is spread uniformly over the cycle inside it.
inline Prob invariant_skeleton(const Prob& p, const Transformation& map)
{
    require(p.size() == map.size(), "invariant_skeleton: widths differ");
    const auto comps = components(map);
    std::vector<Rational> m(p.size(), Rational(0));
    for (const auto& c : cycles(map)) {
        const SubsetMask comp = comps[comps.cell_of(c.order.front())];
        const Rational share = p(comp) / static_cast<unsigned long>(c.length());
        for (auto w : c.order) m[w] = share;
    }
    Prob skeleton(std::move(m));
    if (!is_invariant(skeleton, map)) throw InternalError("skeleton is not invariant");
    for (const auto& a : invariant_sets(map))
        if (skeleton(a) != p(a)) throw InternalError("skeleton disagrees with P on " + a.to_string());
    return skeleton;
}

inline bool abs_continuous(const Prob& p, const Prob& q) { return p.support().is_subset_of(q.support()); }
inline bool singular(const Prob& p, const Prob& q) { return (p.support() & q.support()).is_empty(); }

/// P = k Pa + l Ps with Pa << R and Ps singular to R, both invariant.
/// A part is absent exactly when its weight is 0.
struct LebesgueSplit {
    Rational k;
    std::optional<Prob> absolutely_continuous;
    Rational l;
    std::optional<Prob> singular_part;
};

/// Lebesgue split of an invariant P against an invariant R under an invertible
/// map. S is the union of components whose cycle meets supp(R); Pa and Ps are P
/// conditioned on S and on its complement. Either weight may be 0.
inline LebesgueSplit lebesgue_decomposition_invariant(const Prob& p, const Prob& r, const Transformation& map)
{
    require(is_invertible(map), "Lebesgue split needs an invertible map");
    require(is_invariant(p, map) && is_invariant(r, map), "Lebesgue split needs invariant probabilities");
    const auto comps = components(map);
    const SubsetMask rs = r.support();
    SubsetMask s = SubsetMask::empty(map.size());
    for (const auto& c : comps.cells())
        if (!(c & rs).is_empty()) s = s | c;

    LebesgueSplit out{p(s), std::nullopt, p(s.complement()), std::nullopt};
    if (out.k > 0) out.absolutely_continuous = conditional(p, s);
    if (out.l > 0) out.singular_part = conditional(p, s.complement());

    if (out.absolutely_continuous && !abs_continuous(*out.absolutely_continuous, r))
        throw InternalError("absolutely continuous part escapes supp(R)");
    if (out.singular_part && !singular(*out.singular_part, r))
        throw InternalError("singular part meets supp(R)");
    return out;
}

} // namespace ergocap
