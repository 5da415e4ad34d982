#include "ergocap/capacity.hpp"
#include "ergocap/oracle.hpp"
#include "ergocap/random_systems.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace ergocap;
using namespace testing_support;

namespace {
UpperProb two_point() { return envelope({prob({"1/2", "1/2"}), prob({"1", "0"})}); }
} // namespace

TEST(Envelope, Examples)
{
    const auto v = two_point();
    EXPECT_EQ(v(set({0}, 2)), 1);
    EXPECT_EQ(v(set({1}, 2)), q("1/2"));

    const auto p = prob({"1/6", "1/3", "1/2"});
    const auto single = envelope({p});
    for (const auto& a : all_subsets(3)) EXPECT_EQ(single(a), p(a));

    const auto w = two_cycle_capacity();
    EXPECT_EQ(w(set({0, 1}, 4)), 1);
    EXPECT_EQ(w(set({2, 3}, 4)), 1);
    EXPECT_EQ(w(set({0}, 4)), q("1/2"));
    EXPECT_EQ(w(SubsetMask::empty(4)), 0);
    EXPECT_EQ(w(SubsetMask::full(4)), 1);
}

TEST(Envelope, Preconditions)
{
    EXPECT_THROW(envelope({}), PreconditionError);
    EXPECT_THROW(envelope({prob({"1"}), prob({"1/2", "1/2"})}), PreconditionError);
}

TEST(CoreContains, Examples)
{
    const auto v = two_cycle_capacity();
    EXPECT_TRUE(core_contains(v, q1()));
    EXPECT_TRUE(core_contains(v, q2()));
    EXPECT_TRUE(core_contains(v, prob({"1/4", "1/4", "1/4", "1/4"})));
    EXPECT_FALSE(core_contains(v, prob({"1", "0", "0", "0"})));
}

TEST(CoreVertices, Examples)
{
    const auto p = prob({"1/6", "1/3", "1/2"});
    EXPECT_EQ(core_vertices(envelope({p})), (std::vector<Prob>{p}));
    EXPECT_EQ(core_vertices(two_point()), (std::vector<Prob>{prob({"1/2", "1/2"}), prob({"1", "0"})}));
    // V({0,2}) = 1/2 forces p0 = p1 and p2 = p3, so the core is the segment [Q1, Q2].
    EXPECT_EQ(core_vertices(two_cycle_capacity()), (std::vector<Prob>{q2(), q1()}));
}

TEST(InvariantCoreVertices, Examples)
{
    EXPECT_EQ(invariant_core_vertices(two_cycle_capacity(), two_cycles()), (std::vector<Prob>{q2(), q1()}));
    EXPECT_EQ(invariant_core_vertices(envelope({q1()}), two_cycles()), (std::vector<Prob>{q1()}));
    EXPECT_TRUE(invariant_core_vertices(envelope({prob({"1/3", "2/3"})}), map({1, 0})).empty());
}

TEST(ChoquetIntegral, Examples)
{
    const auto a = set({1, 3}, 4);
    EXPECT_EQ(choquet_integral(two_cycle_capacity(), FunctionOnSpace::indicator(a)), two_cycle_capacity()(a));
    EXPECT_EQ(choquet_integral(two_point(), fn({"1", "0"})), 1);
    EXPECT_EQ(choquet_integral(two_point(), fn({"0", "1"})), q("1/2"));
    EXPECT_EQ(choquet_integral(two_cycle_capacity(), fn({"1", "1", "1/2", "1/2"})), 1);
}

TEST(ChoquetIntegral, NegativeValuesAndConstants)
{
    const auto v = two_point();
    EXPECT_EQ(choquet_integral(v, FunctionOnSpace::constant(q("-3/2"), 2)), q("-3/2"));
    // -1 + 3 * V({0}) with f = (2,-1)
    EXPECT_EQ(choquet_integral(v, fn({"2", "-1"})), 2);
    EXPECT_EQ(choquet_integral(v, fn({"-1", "2"})), q("1/2"));
}

TEST(IsInvariantCapacity, Examples)
{
    EXPECT_TRUE(is_invariant_capacity(two_cycle_capacity(), two_cycles()));
    EXPECT_FALSE(is_invariant_capacity(envelope({prob({"1/3", "2/3"})}), map({1, 0})));
    EXPECT_TRUE(is_invariant_capacity(two_point(), Transformation::identity(2)));
}

TEST(NullSupport, Examples)
{
    EXPECT_EQ(null_support(two_cycle_capacity()), SubsetMask::full(4));
    EXPECT_EQ(null_support(envelope({prob({"1", "0"})})), set({0}, 2));
    EXPECT_EQ(null_support(envelope({q1()})), set({0, 1}, 4));
    EXPECT_TRUE(is_continuous_at_empty(two_point()));
}

TEST(CapacityProperties, RandomEnvelopes)
{
    random::Rng rng(19);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t m = 1 + rng.index(5);
        const auto v = random::random_capacity(rng, m);
        const auto subsets = all_subsets(m);
        const auto s = null_support(v);
        const auto vertices = core_vertices(v);
        ASSERT_FALSE(vertices.empty());

        for (const auto& a : subsets) {
            for (const auto& b : subsets) EXPECT_LE(v(a | b), v(a) + v(b));
            Rational best = 0;
            for (const auto& p : vertices) best = std::max(best, p(a));
            EXPECT_EQ(best, v(a));
            EXPECT_EQ(best, oracle::oracle_core_max(v, a));
            EXPECT_EQ(v(a) > 0, !(a & s).is_empty());
            EXPECT_EQ(choquet_integral(v, FunctionOnSpace::indicator(a)), v(a));
        }
        for (const auto& p : vertices) EXPECT_TRUE(core_contains(v, p));
        for (const auto& g : v.generators()) EXPECT_TRUE(core_contains(v, g));

        // changing f only on V-null points leaves the integral alone
        const auto f = random::random_function_values(rng, m);
        auto g = f.values();
        for (std::size_t w = 0; w < m; ++w)
            if (!s.contains(w)) g[w] += 7;
        EXPECT_EQ(choquet_integral(v, FunctionOnSpace(g)), choquet_integral(v, f));
        EXPECT_EQ(choquet_integral(v, f), oracle::oracle_choquet(v, f.values()));
    }
}

TEST(CapacityProperties, ChoquetBoundsCoreExpectations)
{
    // E_P f <= int f dV for P in the core, with equality on indicators;
    // strict inequality is possible since envelopes need not be 2-alternating
    random::Rng rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t m = 2 + rng.index(4);
        const auto v = random::random_capacity(rng, m);
        const auto vertices = core_vertices(v);
        const auto f = random::random_function_values(rng, m);
        Rational best = integrate(f, vertices.front());
        for (const auto& p : vertices) best = std::max(best, integrate(f, p));
        EXPECT_GE(choquet_integral(v, f), best);
    }
}
