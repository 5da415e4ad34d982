#pragma once

#include "ergocap/capacity.hpp"
#include "ergocap/measure.hpp"
#include "ergocap/space.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace testing_support {

using namespace ergocap;

inline Rational q(const char* text) { return parse_rational(text); }

inline SubsetMask set(std::initializer_list<std::size_t> points, std::size_t width)
{
    std::uint32_t bits = 0;
    for (auto p : points) bits |= std::uint32_t{1} << p;
    return {bits, width};
}

inline Prob prob(std::initializer_list<const char*> masses)
{
    std::vector<Rational> m;
    for (auto t : masses) m.push_back(parse_rational(t));
    return Prob(std::move(m));
}

inline FunctionOnSpace fn(std::initializer_list<const char*> values)
{
    std::vector<Rational> v;
    for (auto t : values) v.push_back(parse_rational(t));
    return FunctionOnSpace(std::move(v));
}

inline Transformation map(std::initializer_list<std::size_t> table) { return Transformation(std::vector<std::size_t>(table)); }

// The running example: two 2-cycles with the uniform measure on each.
inline Transformation two_cycles() { return map({1, 0, 3, 2}); }
inline Prob q1() { return prob({"1/2", "1/2", "0", "0"}); }
inline Prob q2() { return prob({"0", "0", "1/2", "1/2"}); }
inline UpperProb two_cycle_capacity() { return envelope({q1(), q2()}); }

} // namespace testing_support
