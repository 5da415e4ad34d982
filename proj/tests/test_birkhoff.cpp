#include "ergocap/birkhoff.hpp"
#include "ergocap/oracle.hpp"
#include "ergocap/random_systems.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace ergocap;
using namespace testing_support;

namespace {

FECResult two_cycle_fec() { return std::get<FECResult>(fec_decompose(two_cycle_capacity(), two_cycles())); }

} // namespace

TEST(BirkhoffLimit, Examples)
{
    EXPECT_EQ(birkhoff_limit(two_cycles(), fn({"1", "0", "0", "0"})), fn({"1/2", "1/2", "0", "0"}));
    EXPECT_EQ(birkhoff_limit(map({1, 1, 0}), FunctionOnSpace::constant(q("-2/3"), 3)), FunctionOnSpace::constant(q("-2/3"), 3));
    EXPECT_EQ(birkhoff_limit(map({1, 2, 3, 0}), fn({"4", "0", "0", "0"})), FunctionOnSpace::constant(1, 4));
}

TEST(BirkhoffLimit, TransientPoints)
{
    // 0 -> 1 -> 1: the limit at 0 ignores f(0)
    EXPECT_EQ(birkhoff_limit(map({1, 1}), fn({"5", "2"})), fn({"2", "2"}));
    EXPECT_EQ(birkhoff_average(map({1, 1}), fn({"5", "2"}), 2), fn({"7/2", "2"}));
}

TEST(MultivalueLln, Examples)
{
    const auto fec = two_cycle_fec();
    EXPECT_TRUE(verify_multivalue_lln(two_cycle_capacity(), two_cycles(), fec, fn({"1", "0", "0", "0"})));
    EXPECT_EQ(multivalue_limit(fec, fn({"1", "0", "0", "0"})), fn({"1/2", "1/2", "0", "0"}));
    EXPECT_TRUE(verify_multivalue_lln(two_cycle_capacity(), two_cycles(), fec, FunctionOnSpace::constant(3, 4)));

    auto corrupted = fec;
    corrupted.ergodic_measures[1] = prob({"0", "0", "1", "0"});
    EXPECT_FALSE(verify_multivalue_lln(two_cycle_capacity(), two_cycles(), corrupted, fn({"0", "0", "1", "0"})));
}

TEST(StepChoquet, Examples)
{
    const auto v = two_cycle_capacity();
    const auto cells = components(two_cycles());
    const auto equal = comonotone_step_choquet(v, set({0, 3}, 4), cells, {q("2/3"), q("2/3")});
    EXPECT_EQ(equal.general, q("2/3") * v(set({0, 3}, 4)));
    EXPECT_EQ(equal.telescoped, equal.general);

    const auto first = comonotone_step_choquet(v, SubsetMask::full(4), cells, {1, 0});
    EXPECT_EQ(first.general, v(cells[0]));
    EXPECT_EQ(first.telescoped, v(cells[0]));

    const auto half = comonotone_step_choquet(v, set({0, 2}, 4), cells, {q("1/2"), 0});
    EXPECT_EQ(half.general, q("1/4"));
    EXPECT_EQ(half.telescoped, q("1/4"));
}

TEST(ChoquetIndependence, Examples)
{
    const auto v = two_cycle_capacity();
    const auto fec = two_cycle_fec();
    const auto a = asymptotic_independence_choquet(v, two_cycles(), fec, SubsetMask::full(4), set({0, 1}, 4));
    EXPECT_EQ(a.lhs, 1);
    EXPECT_TRUE(a.equal);

    const auto b = set({1, 2}, 4);
    const auto all = asymptotic_independence_choquet(v, two_cycles(), fec, b, SubsetMask::full(4));
    EXPECT_EQ(all.lhs, v(b));
    EXPECT_EQ(all.rhs, v(b));

    const auto single = asymptotic_independence_choquet(v, two_cycles(), fec, set({0}, 4), set({0}, 4), 4);
    EXPECT_EQ(single.lhs, q("1/4"));
    EXPECT_EQ(single.rhs, q("1/4"));
    EXPECT_EQ(single.trace, (std::vector<Rational>{q("1/2"), q("1/4"), q("1/3"), q("1/4")}));
}

TEST(ChoquetIndependence, IndexOrderCanDiffer)
{
    // C meets only the second cell, so the index-order sum starts with a zero level
    const auto v = two_cycle_capacity();
    const auto r = asymptotic_independence_choquet(v, two_cycles(), two_cycle_fec(), set({0, 2}, 4), set({2}, 4));
    EXPECT_TRUE(r.equal);
    EXPECT_EQ(r.lhs, q("1/4"));
    EXPECT_EQ(r.rhs_index_order, 0);
    EXPECT_TRUE(r.index_order_differs);
}

TEST(CoreIndependence, Examples)
{
    const auto v = two_cycle_capacity();
    const auto fec = two_cycle_fec();
    const auto uniform = prob({"1/4", "1/4", "1/4", "1/4"});
    const auto b = set({0, 3}, 4);
    const auto all = asymptotic_independence_core(v, two_cycles(), fec, uniform, b, SubsetMask::full(4));
    EXPECT_EQ(all.lhs, uniform(b));
    EXPECT_TRUE(all.equal);

    const auto r = asymptotic_independence_core(v, two_cycles(), fec, uniform, set({0, 2}, 4), set({0}, 4));
    EXPECT_EQ(r.lhs, q("1/8"));
    EXPECT_EQ(r.rhs, q("1/8"));

    const auto s = asymptotic_independence_core(v, two_cycles(), fec, q1(), set({0}, 4), set({0}, 4));
    EXPECT_EQ(s.lhs, q("1/4"));
    EXPECT_TRUE(s.equal);

    EXPECT_THROW(asymptotic_independence_core(v, two_cycles(), fec, prob({"1", "0", "0", "0"}), b, b), PreconditionError);
}

TEST(BirkhoffProperties, RandomMaps)
{
    random::Rng rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = 1 + rng.index(7);
        const auto t = random::random_map(rng, m);
        const auto f = random::random_function_values(rng, m);
        const auto g = birkhoff_limit(t, f);
        for (std::size_t w = 0; w < m; ++w) EXPECT_EQ(g[t(w)], g[w]);
        for (const auto& q : ergodic_probabilities(t)) EXPECT_EQ(integrate(g, q), integrate(f, q));

        // on cycle points the average over whole multiples of L is exact from N = L on
        const auto orbits = orbit_structure(t);
        const std::size_t period = orbits.period;
        const std::size_t k = 1 + rng.index(3);
        const auto avg = birkhoff_average(t, f, k * period);
        const auto literal = oracle::oracle_birkhoff(t, f.values(), k * period);
        for (std::size_t w = 0; w < m; ++w) {
            EXPECT_EQ(avg[w], literal[w]);
            if (orbits.periodic_points().contains(w)) { EXPECT_EQ(avg[w], g[w]); }
        }
        // starting after the preperiod, every whole number of periods is exact everywhere
        std::vector<Rational> tail(m, Rational(0));
        for (std::size_t w = 0; w < m; ++w) {
            std::size_t x = t.iterate(w, orbits.preperiod);
            for (std::size_t i = 0; i < k * period; ++i, x = t(x)) tail[w] += f[x];
            tail[w] /= static_cast<unsigned long>(k * period);
            EXPECT_EQ(tail[w], g[w]);
        }
    }
}

TEST(IndependenceProperties, RandomFecSystems)
{
    random::Rng rng(59);
    int checked = 0;
    while (checked < 25) {
        const auto sys = random::random_invariant_system(rng, 2, 4);
        const auto outcome = fec_decompose(sys.capacity, sys.map);
        const auto* fec = std::get_if<FECResult>(&outcome);
        if (!fec) continue;
        ++checked;
        const auto m = sys.map.size();
        const auto vertices = core_vertices(sys.capacity);
        for (const auto& b : all_subsets(m))
            for (const auto& c : all_subsets(m)) {
                const auto r = asymptotic_independence_choquet(sys.capacity, sys.map, *fec, b, c);
                EXPECT_TRUE(r.equal) << b.to_string() << " " << c.to_string();
                for (const auto& p : vertices) {
                    const auto s = asymptotic_independence_core(sys.capacity, sys.map, *fec, p, b, c);
                    EXPECT_TRUE(s.equal);
                    EXPECT_EQ(s.lhs, oracle::oracle_correlation(p.masses(), sys.map, b, c, 4 * oracle::oracle_period(sys.map)));
                }
            }
    }
}
