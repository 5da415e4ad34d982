#include "ergocap/noninvariant.hpp"
#include "ergocap/oracle.hpp"
#include "ergocap/random_systems.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace ergocap;
using namespace testing_support;

namespace {

// point 1 is null; each 2-cycle is a cell
NoninvariantSystem sample() { return {prob({"1/8", "0", "1/4", "5/8"}), two_cycles()}; }

} // namespace

TEST(NoninvariantSystem, RequiresPermutation)
{
    EXPECT_THROW(NoninvariantSystem(prob({"1/2", "1/2"}), map({0, 0})), PreconditionError);
    EXPECT_THROW(NoninvariantSystem(prob({"1/2", "1/2"}), map({0, 1, 2})), PreconditionError);
}

TEST(InvariantValueSet, Examples)
{
    EXPECT_EQ(invariant_value_set(prob({"1/5", "4/5", "0"}), map({1, 2, 0})), (std::vector<Rational>{0, 1}));
    EXPECT_EQ(invariant_value_set(prob({"1/8", "1/8", "3/8", "3/8"}), two_cycles()), (std::vector<Rational>{0, q("1/4"), q("3/4"), 1}));
    EXPECT_EQ(invariant_value_set(prob({"1/3", "2/3"}), Transformation::identity(2)), (std::vector<Rational>{0, q("1/3"), q("2/3"), 1}));
}

TEST(IrreduciblePartition, Examples)
{
    EXPECT_EQ(irreducible_partition(prob({"1/8", "1/8", "3/8", "3/8"}), two_cycles()).cells.cells(),
              (std::vector<SubsetMask>{set({0, 1}, 4), set({2, 3}, 4)}));
    EXPECT_EQ(irreducible_partition(prob({"1/2", "0", "1/2"}), map({1, 2, 0})).cells.cells(), (std::vector<SubsetMask>{SubsetMask::full(3)}));
    EXPECT_EQ(irreducible_partition(q1(), two_cycles()).cells.cells(), (std::vector<SubsetMask>{SubsetMask::full(4)}));
    EXPECT_THROW(irreducible_partition(q1(), map({0, 0, 3, 3})), PreconditionError);
}

TEST(IrreduciblePartition, Sample)
{
    const auto part = irreducible_partition(sample());
    EXPECT_EQ(part.conditionals, (std::vector<Prob>{prob({"1", "0", "0", "0"}), prob({"0", "0", "2/7", "5/7"})}));
    EXPECT_EQ(part.limits, (std::vector<Prob>{q1(), q2()}));
    EXPECT_EQ(part.capacities[0], envelope({q1(), prob({"1", "0", "0", "0"}), prob({"0", "1", "0", "0"})}));
    EXPECT_EQ(part.capacities[1](set({3}, 4)), q("5/7"));
    EXPECT_EQ(part.capacities[1](set({0, 1}, 4)), 0);
}

TEST(QLimit, Examples)
{
    EXPECT_EQ(q_limit(prob({"1/3", "2/3"}), map({1, 0})), prob({"1/2", "1/2"}));
    EXPECT_EQ(q_limit(q1(), two_cycles()), q1());
    EXPECT_EQ(q_limit(prob({"1", "0", "0", "0"}), map({1, 2, 3, 0})), prob({"1/4", "1/4", "1/4", "1/4"}));
}

TEST(VComponent, Examples)
{
    EXPECT_EQ(v_component(prob({"1/3", "2/3"}), map({1, 0}))(set({0}, 2)), q("2/3"));
    const auto p = prob({"1/6", "1/3", "1/2"});
    EXPECT_EQ(v_component(p, map({0, 1, 2})), envelope({p}));
    EXPECT_EQ(v_component(prob({"1", "0", "0", "0"}), map({1, 2, 3, 0}))(set({0, 1}, 4)), 1);
}

TEST(VComponent, WindowsThatAvoidZero)
{
    // the through-zero windows top out at 5/9 on {0}; the window at index -1 alone reaches 2/3
    const std::vector<Rational> p{q("1/3"), q("2/3")};
    const auto swap = map({1, 0});
    EXPECT_EQ(oracle::oracle_window_sup_through_zero(p, swap, set({0}, 2), 8), q("5/9"));
    EXPECT_EQ(oracle::oracle_window_sup(p, swap, set({0}, 2), 8), q("2/3"));
    const auto v = v_component(Prob(p), swap);
    EXPECT_TRUE(is_invariant_capacity(v, swap));
    EXPECT_EQ(v(set({0}, 2)), q("2/3"));
    EXPECT_EQ(v(set({1}, 2)), q("2/3"));
}

TEST(VerifyConstruction, Examples)
{
    const auto two = verify_construction(sample());
    EXPECT_TRUE(two.all()) << (two.failures.empty() ? "" : two.failures.front());

    const NoninvariantSystem one(prob({"1", "0", "0", "0"}), map({1, 2, 3, 0}));
    const auto single = irreducible_partition(one);
    EXPECT_EQ(single.cells.size(), 1u);
    EXPECT_TRUE(verify_construction(one).all());
}

TEST(VerifyConstruction, CorruptedCapacity)
{
    auto part = irreducible_partition(sample());
    part.capacities[1] = envelope({prob({"0", "0", "1", "0"})});
    const auto r = verify_construction(part, two_cycles());
    EXPECT_FALSE(r.components_fz_ergodic);
    EXPECT_FALSE(r.all());
    EXPECT_FALSE(r.failures.empty());

    auto limits = irreducible_partition(sample());
    limits.limits[0] = prob({"0", "0", "1/2", "1/2"});
    EXPECT_FALSE(verify_construction(limits, two_cycles()).limits_ergodic);
}

TEST(NoninvariantLln, Examples)
{
    const auto sys = sample();
    EXPECT_TRUE(noninvariant_lln(sys, fn({"1", "0", "0", "0"})));
    EXPECT_TRUE(noninvariant_lln(sys, FunctionOnSpace::constant(q("5/2"), 4)));

    auto part = irreducible_partition(sys);
    part.limits[1] = prob({"0", "0", "1", "0"});
    EXPECT_FALSE(noninvariant_lln(sys, part, fn({"0", "0", "1", "0"})));
}

TEST(NoninvariantIndependence, Examples)
{
    const auto sys = sample();
    const auto b = set({0, 3}, 4);
    const auto all = noninvariant_independence(sys, b, SubsetMask::full(4));
    EXPECT_EQ(all.lhs, sys.probability()(b));
    EXPECT_TRUE(all.equal);

    const auto r = noninvariant_independence(sys, set({0}, 4), set({0}, 4));
    EXPECT_EQ(r.lhs, q("1/16"));
    EXPECT_EQ(r.rhs, q("1/16"));

    const auto part = irreducible_partition(sys);
    for (const auto& x : all_subsets(4))
        for (const auto& y : all_subsets(4)) EXPECT_TRUE(noninvariant_independence(sys, part, x, y).equal);
}

TEST(OrbitSaturation, Examples)
{
    EXPECT_EQ(orbit_saturation(two_cycles(), set({0}, 4)), set({0, 1}, 4));
    EXPECT_EQ(orbit_saturation(map({1, 2, 0, 3}), set({2, 3}, 4)), SubsetMask::full(4));
    EXPECT_EQ(orbit_saturation(two_cycles(), SubsetMask::empty(4)), SubsetMask::empty(4));
}

TEST(NoninvariantProperties, RandomPermutationSystems)
{
    random::Rng rng(67);
    for (int trial = 0; trial < 60; ++trial) {
        const auto ps = random::random_permutation_system(rng, 2, 5);
        const NoninvariantSystem sys(ps.probability, ps.map);
        const auto& t = sys.map();
        const auto& p = sys.probability();
        const std::size_t m = t.size();
        const auto part = irreducible_partition(sys);
        const auto report = verify_construction(part, t);
        EXPECT_TRUE(report.all()) << (report.failures.empty() ? "" : report.failures.front());
        EXPECT_LE(invariant_value_set(p, t).size(), std::size_t{1} << components(t).size());

        const auto invariant = invariant_sets(t);
        const long bound = 4 * static_cast<long>(oracle::oracle_period(t));
        for (std::size_t j = 0; j < part.cells.size(); ++j) {
            const auto& cell = part.cells[j];
            EXPECT_GT(p(cell), 0);
            for (const auto& b : invariant) {
                if (b.is_subset_of(cell)) { EXPECT_TRUE(p(b) == 0 || p(b) == p(cell)); }
                EXPECT_EQ(part.limits[j](b), part.conditionals[j](b));
            }
            for (const auto& a : all_subsets(m)) {
                const auto& vj = part.capacities[j];
                EXPECT_GE(vj(a), part.conditionals[j](a));
                EXPECT_GE(vj(a), part.limits[j](a));
                EXPECT_EQ(vj(a), oracle::oracle_window_sup(part.conditionals[j].masses(), t, a, bound));
            }
        }

        std::set<SubsetMask> saturated;
        for (const auto& a : all_subsets(m)) {
            EXPECT_EQ(orbit_saturation(t, a), oracle::oracle_saturation(t, a));
            saturated.insert(orbit_saturation(t, a));
        }
        EXPECT_EQ(saturated, std::set<SubsetMask>(invariant.begin(), invariant.end()));

        for (int k = 0; k < 5; ++k) EXPECT_TRUE(noninvariant_lln(sys, part, random::random_function_values(rng, m)));
        for (const auto& b : all_subsets(m)) {
            const auto c = all_subsets(m)[rng.index(std::size_t{1} << m)];
            const auto r = noninvariant_independence(sys, part, b, c);
            EXPECT_TRUE(r.equal);
            EXPECT_EQ(r.lhs, oracle::oracle_correlation(p.masses(), t, b, c, static_cast<std::size_t>(bound)));
        }
    }
}
