#pragma once

/// Exact vertex enumeration for polytopes cut out of the probability simplex,
/// by the double description method.
///
/// The polytope { x >= 0, sum x = 1, a.x >= 0 (a in A), e.x = 0 (e in E) } is
/// the section of the pointed cone { x >= 0, a.x >= 0, e.x = 0 } by sum x = 1,
/// so its vertices are the extreme rays of that cone. We start from the
/// orthant, whose extreme rays are the unit vectors, and intersect with one
/// constraint at a time. Rays are kept normalised to sum 1, i.e. as points of
/// the simplex. Adjacency uses the combinatorial test: two rays are adjacent
/// iff no third ray is tight on every constraint they share.

#include "ergocap/rational.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

namespace ergocap::polytope {

using Point = std::vector<Rational>;

namespace detail {

class Bits {
public:
    explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool subset_of(const Bits& o) const
    {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~o.words_[k]) return false;
        return true;
    }
    Bits operator&(const Bits& o) const
    {
        Bits r = *this;
        for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= o.words_[k];
        return r;
    }

private:
    std::vector<std::uint64_t> words_;
};

struct Ray {
    Point point;
    Bits tight;
};

inline Rational dot(const std::vector<Rational>& a, const Point& x)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(x[i]) != 0) s += a[i] * x[i];
    return s;
}

} // namespace detail

/// Vertices of { x in simplex : a.x >= 0 for each inequality, e.x = 0 for each
/// equality }, sorted lexicographically and free of duplicates. Empty when the
/// polytope is empty.
inline std::vector<Point> simplex_section_vertices(std::size_t dim, const std::vector<std::vector<Rational>>& inequalities,
                                                   const std::vector<std::vector<Rational>>& equalities)
{
    using detail::Bits;
    using detail::Ray;
    const std::size_t total = dim + equalities.size() + inequalities.size();

    std::vector<Ray> rays;
    for (std::size_t i = 0; i < dim; ++i) {
        Ray r{Point(dim, Rational(0)), Bits(total)};
        r.point[i] = 1;
        for (std::size_t j = 0; j < dim; ++j)
            if (j != i) r.tight.set(j);
        rays.push_back(std::move(r));
    }

    auto add_constraint = [&](const std::vector<Rational>& h, std::size_t index, bool equality) {
        std::vector<Rational> value(rays.size());
        std::vector<std::size_t> pos, neg;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            value[r] = detail::dot(h, rays[r].point);
            const int s = sgn(value[r]);
            if (s > 0) pos.push_back(r);
            else if (s < 0) neg.push_back(r);
        }

        std::vector<Ray> next;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            const int s = sgn(value[r]);
            if (s == 0) {
                Ray z = rays[r];
                z.tight.set(index);
                next.push_back(std::move(z));
            } else if (s > 0 && !equality) {
                next.push_back(rays[r]);
            }
        }
        for (auto p : pos) {
            for (auto n : neg) {
                const Bits common = rays[p].tight & rays[n].tight;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
                    if (r != p && r != n && common.subset_of(rays[r].tight)) adjacent = false;
                if (!adjacent) continue;
                // Convex combination of the two points with h-value zero.
                const Rational wp = -value[n], wn = value[p];
                const Rational denom = wp + wn;
                Ray c{Point(dim), common};
                for (std::size_t i = 0; i < dim; ++i) c.point[i] = (wp * rays[p].point[i] + wn * rays[n].point[i]) / denom;
                c.tight.set(index);
                next.push_back(std::move(c));
            }
        }
        rays = std::move(next);
    };

    std::size_t index = dim;
    for (const auto& e : equalities) {
        require(e.size() == dim, "equality constraint has wrong width");
        add_constraint(e, index++, true);
        if (rays.empty()) return {};
    }
    for (const auto& a : inequalities) {
        require(a.size() == dim, "inequality constraint has wrong width");
        add_constraint(a, index++, false);
        if (rays.empty()) return {};
    }

    std::vector<Point> out;
    out.reserve(rays.size());
    for (auto& r : rays) out.push_back(std::move(r.point));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace ergocap::polytope
