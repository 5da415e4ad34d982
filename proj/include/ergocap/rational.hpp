#pragma once

#include "ergocap/error.hpp"

#include <gmpxx.h>

#include <cctype>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ergocap {

/// Arbitrary-precision rational, always kept in canonical (lowest-terms) form.
using Rational = mpq_class;

/// Formats as "p/q" in lowest terms; integers are written with denominator 1.
inline std::string to_string(const Rational& r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Parses "p/q" or "p" (optional leading '-'). Decimal notation is rejected.
inline Rational parse_rational(std::string_view text)
{
    auto is_integer = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den) || (den.front() == '-' || den.front() == '+'))
        throw InputError("not an exact rational literal: \"" + std::string(text) + "\"");
    mpz_class n(std::string(num.front() == '+' ? num.substr(1) : num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

/// num/den reduced to lowest terms (mpq_class does not reduce on construction).
inline Rational ratio(long num, long den)
{
    require(den != 0, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational sum(std::span<const Rational> values)
{
    Rational total = 0;
    for (const auto& v : values) total += v;
    return total;
}

inline std::vector<std::string> to_strings(std::span<const Rational> values)
{
    std::vector<std::string> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(to_string(v));
    return out;
}

} // namespace ergocap
