#pragma once

/// Seeded random instances for sweeps. Draws go through `Rng::below`, a
/// rejection sampler on mt19937_64, so a seed gives the same instances on
/// every platform and standard library.

#include "ergocap/capacity.hpp"
#include "ergocap/measure.hpp"
#include "ergocap/space.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace ergocap::random {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, n).
    std::uint64_t below(std::uint64_t n)
    {
        require(n > 0, "Rng::below(0)");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        for (;;) {
            const std::uint64_t x = gen_();
            if (x < limit) return x % n;
        }
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }
    long between(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
    bool chance(unsigned num, unsigned den) { return below(den) < num; }

private:
    std::mt19937_64 gen_;
};

inline Transformation random_permutation(Rng& rng, std::size_t m)
{
    std::vector<std::size_t> t(m);
    for (std::size_t i = 0; i < m; ++i) t[i] = i;
    for (std::size_t i = m; i > 1; --i) std::swap(t[i - 1], t[rng.index(i)]);
    return Transformation(std::move(t));
}

inline Transformation random_function(Rng& rng, std::size_t m)
{
    std::vector<std::size_t> t(m);
    for (auto& x : t) x = rng.index(m);
    return Transformation(std::move(t));
}

/// Permutation or arbitrary self-map with equal odds.
inline Transformation random_map(Rng& rng, std::size_t m) { return rng.chance(1, 2) ? random_permutation(rng, m) : random_function(rng, m); }

/// Integer weights in [lo, hi] on `points`, normalized; at least one weight positive.
inline Prob random_prob_on(Rng& rng, const std::vector<std::size_t>& points, std::size_t width, long lo = 1, long hi = 5)
{
    std::vector<long> w(points.size());
    long total = 0;
    do {
        total = 0;
        for (auto& x : w) total += (x = rng.between(lo, hi));
    } while (total == 0);
    std::vector<Rational> mass(width, Rational(0));
    for (std::size_t i = 0; i < points.size(); ++i) mass[points[i]] = ratio(w[i], total);
    return Prob(std::move(mass));
}

inline Prob random_prob(Rng& rng, std::size_t m, long lo = 0, long hi = 5)
{
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;
    return random_prob_on(rng, all, m, lo, hi);
}

inline FunctionOnSpace random_function_values(Rng& rng, std::size_t m)
{
    std::vector<Rational> f(m);
    for (auto& x : f) x = ratio(rng.between(-6, 6), rng.between(1, 3));
    return FunctionOnSpace(std::move(f));
}

struct InvariantSystem {
    Transformation map;
    std::vector<Prob> generators;
    UpperProb capacity;
};

/// An invariant upper probability: each generator is invariant, or the
/// generators include the full pushforward orbit of a non-invariant one.
/// Generators mix one cycle (most of the time) or several, with weights 1..5.
inline InvariantSystem random_invariant_system(Rng& rng, std::size_t m_lo = 2, std::size_t m_hi = 6)
{
    const std::size_t m = m_lo + rng.index(m_hi - m_lo + 1);
    Transformation map = random_map(rng, m);
    const auto cyc = cycles(map);
    const std::size_t wanted = 1 + rng.index(4);
    std::vector<Prob> gens;
    while (gens.size() < wanted) {
        std::vector<std::size_t> chosen;
        if (cyc.size() == 1 || rng.chance(3, 5)) {
            chosen.push_back(rng.index(cyc.size()));
        } else {
            for (std::size_t c = 0; c < cyc.size(); ++c)
                if (rng.chance(1, 2)) chosen.push_back(c);
            if (chosen.empty()) chosen.push_back(rng.index(cyc.size()));
        }

        const std::size_t room = 4 - gens.size();
        if (chosen.size() == 1 && cyc[chosen[0]].length() > 1 && cyc[chosen[0]].length() <= room && rng.chance(1, 4)) {
            Prob p = random_prob_on(rng, cyc[chosen[0]].order, m, 0, 4);
            for (std::size_t i = 0; i < cyc[chosen[0]].length(); ++i) {
                gens.push_back(p);
                p = pushforward(p, map);
            }
            continue;
        }

        std::vector<Rational> mass(m, Rational(0));
        long total = 0;
        std::vector<long> weight(chosen.size());
        for (auto& w : weight) total += (w = rng.between(1, 5));
        for (std::size_t k = 0; k < chosen.size(); ++k) {
            const auto& c = cyc[chosen[k]];
            for (auto w : c.order) mass[w] = ratio(weight[k], total * static_cast<long>(c.length()));
        }
        gens.emplace_back(std::move(mass));
    }
    UpperProb v = envelope(gens);
    return {std::move(map), std::move(gens), std::move(v)};
}

/// Any upper envelope of 1..4 random probabilities (not tied to a map).
inline UpperProb random_capacity(Rng& rng, std::size_t m)
{
    std::vector<Prob> gens;
    const std::size_t k = 1 + rng.index(4);
    for (std::size_t i = 0; i < k; ++i) gens.push_back(random_prob(rng, m));
    return envelope(std::move(gens));
}

/// A probability (some points possibly null) with a random permutation.
struct PermutationSystem {
    Transformation map;
    Prob probability;
};

inline PermutationSystem random_permutation_system(Rng& rng, std::size_t m_lo = 2, std::size_t m_hi = 6)
{
    const std::size_t m = m_lo + rng.index(m_hi - m_lo + 1);
    Transformation map = random_permutation(rng, m);
    Prob p = random_prob(rng, m, 0, 4);
    return {std::move(map), std::move(p)};
}

} // namespace ergocap::random
