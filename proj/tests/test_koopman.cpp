#include "ergocap/fec.hpp"
#include "ergocap/koopman.hpp"
#include "ergocap/linalg.hpp"
#include "ergocap/random_systems.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace ergocap;
using namespace testing_support;

TEST(KoopmanMatrix, Examples)
{
    EXPECT_EQ(koopman_matrix(Transformation::identity(2)).dense(), (std::vector<std::vector<int>>{{1, 0}, {0, 1}}));
    EXPECT_EQ(koopman_matrix(map({1, 0})).dense(), (std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
    EXPECT_EQ(koopman_matrix(map({1, 2, 3, 0})).dense(),
              (std::vector<std::vector<int>>{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}}));
    EXPECT_EQ(koopman_matrix(map({1, 2, 3, 0})).apply(fn({"1", "2", "3", "4"})), fn({"2", "3", "4", "1"}));
}

TEST(InvariantBasis, Examples)
{
    EXPECT_EQ(invariant_function_basis(two_cycle_capacity(), two_cycles()),
              (std::vector<FunctionOnSpace>{fn({"1", "1", "0", "0"}), fn({"0", "0", "1", "1"})}));
    EXPECT_EQ(invariant_function_basis(envelope({prob({"1/4", "1/4", "1/4", "1/4"})}), map({1, 2, 3, 0})),
              (std::vector<FunctionOnSpace>{fn({"1", "1", "1", "1"})}));
    EXPECT_EQ(invariant_function_basis(envelope({q1()}), two_cycles()), (std::vector<FunctionOnSpace>{fn({"1", "1", "0", "0"})}));
    EXPECT_THROW(invariant_function_basis(envelope({prob({"1/3", "2/3"})}), map({1, 0})), PreconditionError);
}

TEST(Multiplicity, Examples)
{
    EXPECT_EQ(eigenvalue_one_multiplicity(two_cycle_capacity(), two_cycles()), 2u);
    EXPECT_EQ(eigenvalue_one_multiplicity(envelope({q1()}), two_cycles()), 1u);
    // not FEC, yet both graph components carry positive capacity
    EXPECT_EQ(eigenvalue_one_multiplicity(envelope({q1(), prob({"3/8", "3/8", "1/8", "1/8"})}), two_cycles()), 2u);
}

namespace {

// dim { f on S : f(Tw) = f(w) for w in S } by rank of the constraint system
std::size_t eigenspace_dimension(const UpperProb& v, const Transformation& t)
{
    const auto s = null_support(v);
    std::vector<std::size_t> index(t.size(), 0);
    std::size_t n = 0;
    for (auto w : s.points()) index[w] = n++;
    linalg::Matrix rows;
    for (auto w : s.points()) {
        std::vector<Rational> row(n, Rational(0));
        row[index[w]] += 1;
        row[index[t(w)]] -= 1;
        rows.push_back(row);
    }
    return n - linalg::rank(rows);
}

} // namespace

TEST(KoopmanProperties, RandomSystems)
{
    random::Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sys = random::random_invariant_system(rng, 2, 6);
        const auto basis = invariant_function_basis(sys.capacity, sys.map);
        const auto s = null_support(sys.capacity);
        const auto u = koopman_matrix(sys.map);
        for (const auto& b : basis) {
            const auto shifted = u.apply(b);
            for (auto w : s.points()) EXPECT_EQ(shifted[w], b[w]);
        }
        EXPECT_EQ(basis.size(), eigenspace_dimension(sys.capacity, sys.map));

        const auto outcome = fec_decompose(sys.capacity, sys.map);
        if (const auto* r = std::get_if<FECResult>(&outcome)) { EXPECT_EQ(basis.size(), r->size()); }
        if (is_fz_ergodic(sys.capacity, sys.map)) { EXPECT_EQ(basis.size(), 1u); }
    }
}
