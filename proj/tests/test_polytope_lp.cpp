#include "ergocap/linalg.hpp"
#include "ergocap/lp.hpp"
#include "ergocap/polytope.hpp"
#include "ergocap/random_systems.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace ergocap;
using namespace testing_support;
using lp::Relation;

TEST(Lp, SmallPrograms)
{
    // max x + y  s.t. x + 2y <= 4, 3x + y <= 6
    const auto r = lp::maximize({1, 1}, {{{1, 2}, Relation::LessEqual, 4}, {{3, 1}, Relation::LessEqual, 6}});
    ASSERT_EQ(r.status, lp::Status::Optimal);
    EXPECT_EQ(r.value, q("14/5"));
    EXPECT_EQ(r.x, (std::vector<Rational>{q("8/5"), q("6/5")}));
}

TEST(Lp, EqualityAndInfeasible)
{
    const auto eq = lp::maximize({0, 1}, {{{1, 1}, Relation::Equal, 1}, {{0, 1}, Relation::LessEqual, q("1/3")}});
    ASSERT_EQ(eq.status, lp::Status::Optimal);
    EXPECT_EQ(eq.value, q("1/3"));

    const auto none = lp::maximize({1}, {{{1}, Relation::GreaterEqual, 2}, {{1}, Relation::LessEqual, 1}});
    EXPECT_EQ(none.status, lp::Status::Infeasible);

    const auto open = lp::maximize({1, 0}, {{{0, 1}, Relation::LessEqual, 1}});
    EXPECT_EQ(open.status, lp::Status::Unbounded);
}

TEST(Lp, DegenerateCorner)
{
    // three constraints meet at (1,1); Bland's rule must still terminate
    const auto r = lp::maximize({1, 1}, {{{1, 0}, Relation::LessEqual, 1},
                                         {{0, 1}, Relation::LessEqual, 1},
                                         {{1, 1}, Relation::LessEqual, 2},
                                         {{1, -1}, Relation::LessEqual, 0}});
    ASSERT_EQ(r.status, lp::Status::Optimal);
    EXPECT_EQ(r.value, 2);
}

TEST(Polytope, SimplexAndSections)
{
    EXPECT_EQ(polytope::simplex_section_vertices(3, {}, {}),
              (std::vector<polytope::Point>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
    // x0 >= x1 on the 2-simplex segment
    EXPECT_EQ(polytope::simplex_section_vertices(2, {{1, -1}}, {}), (std::vector<polytope::Point>{{q("1/2"), q("1/2")}, {1, 0}}));
    // x0 = x1 and x1 - 1 >= 0 cannot both hold with x0 + x1 = 1
    EXPECT_TRUE(polytope::simplex_section_vertices(2, {{-1, 0}}, {{1, 0}, {0, 1}}).empty());
}

TEST(Linalg, SolveAndRank)
{
    const linalg::Matrix a{{1, 1}, {1, -1}};
    const auto s = linalg::solve(a, {3, 1});
    ASSERT_EQ(s.kind, linalg::SolutionKind::Unique);
    EXPECT_EQ(s.x, (std::vector<Rational>{2, 1}));
    EXPECT_EQ(linalg::solve({{1, 1}, {2, 2}}, {1, 3}).kind, linalg::SolutionKind::None);
    EXPECT_EQ(linalg::solve({{1, 1}, {2, 2}}, {1, 2}).kind, linalg::SolutionKind::Many);
    EXPECT_EQ(linalg::rank({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}}), 2u);
}

TEST(PolytopeVsLp, CoreMaxima)
{
    // every linear objective's maximum over the core is attained at an
    // enumerated vertex; the simplex computes it without the vertex list
    random::Rng rng(97);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t m = 2 + rng.index(4);
        const auto v = random::random_capacity(rng, m);
        const auto vertices = core_vertices(v);
        std::vector<lp::Constraint> rows;
        for (const auto& a : all_subsets(m)) {
            if (a.is_empty()) continue;
            std::vector<Rational> coeffs(m, Rational(0));
            for (auto w : a.points()) coeffs[w] = 1;
            rows.push_back({coeffs, a == SubsetMask::full(m) ? Relation::Equal : Relation::LessEqual, a == SubsetMask::full(m) ? Rational(1) : v(a)});
        }
        for (int k = 0; k < 4; ++k) {
            const auto f = random::random_function_values(rng, m);
            const auto r = lp::maximize(f.values(), rows);
            ASSERT_EQ(r.status, lp::Status::Optimal);
            Rational best = integrate(f, vertices.front());
            for (const auto& p : vertices) best = std::max(best, integrate(f, p));
            EXPECT_EQ(r.value, best);
        }
        for (const auto& p : vertices) EXPECT_TRUE(core_contains(v, p));
    }
}
