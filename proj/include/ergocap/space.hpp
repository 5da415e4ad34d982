#pragma once

/// Finite measurable spaces: the full power set of {0, ..., m-1} encoded as
/// bitmasks, deterministic maps on the points, and the invariant sets of a map.
///
/// Every quantifier over measurable sets becomes a loop over 2^m masks, so the
/// space size is capped at 16. Anything that enumerates subsets together with
/// a polytope or LP per subset is only practical for m <= 10.

#include "ergocap/error.hpp"

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace ergocap {

inline constexpr std::size_t kMaxSpaceSize = 16;

class FiniteSpace {
public:
    explicit FiniteSpace(std::size_t size) : size_(size)
    {
        require(size >= 1 && size <= kMaxSpaceSize, "space size must lie in [1, 16], got " + std::to_string(size));
    }

    std::size_t size() const noexcept { return size_; }
    std::size_t subset_count() const noexcept { return std::size_t{1} << size_; }

private:
    std::size_t size_;
};

/// A subset of a finite space, stored as a bit vector of fixed width.
class SubsetMask {
public:
    SubsetMask() = default;
    SubsetMask(std::uint32_t bits, std::size_t width) : bits_(bits), width_(width)
    {
        require(width <= kMaxSpaceSize, "subset width exceeds 16");
        require(width == 32 || (bits >> width) == 0, "subset has bits outside its width");
    }

    static SubsetMask empty(std::size_t width) { return {0u, width}; }
    static SubsetMask full(std::size_t width) { return {low_bits(width), width}; }
    static SubsetMask singleton(std::size_t point, std::size_t width)
    {
        require(point < width, "point out of range");
        return {std::uint32_t{1} << point, width};
    }

    std::uint32_t bits() const noexcept { return bits_; }
    std::size_t width() const noexcept { return width_; }
    bool contains(std::size_t point) const noexcept { return point < width_ && ((bits_ >> point) & 1u); }
    bool is_empty() const noexcept { return bits_ == 0; }
    std::size_t count() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
    /// Least element; only meaningful for non-empty sets.
    std::size_t least() const noexcept { return static_cast<std::size_t>(std::countr_zero(bits_)); }

    bool is_subset_of(const SubsetMask& other) const
    {
        same_width(other);
        return (bits_ & ~other.bits_) == 0;
    }

    SubsetMask complement() const { return {~bits_ & low_bits(width_), width_}; }

    SubsetMask operator|(const SubsetMask& o) const { same_width(o); return {bits_ | o.bits_, width_}; }
    SubsetMask operator&(const SubsetMask& o) const { same_width(o); return {bits_ & o.bits_, width_}; }
    SubsetMask operator-(const SubsetMask& o) const { same_width(o); return {bits_ & ~o.bits_, width_}; }

    std::vector<std::size_t> points() const
    {
        std::vector<std::size_t> out;
        for (std::size_t w = 0; w < width_; ++w)
            if (contains(w)) out.push_back(w);
        return out;
    }

    friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
    friend auto operator<=>(const SubsetMask& a, const SubsetMask& b)
    {
        if (auto c = a.width_ <=> b.width_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }

    /// "{0,2,3}" notation, used by reports.
    std::string to_string() const
    {
        std::string out = "{";
        bool first = true;
        for (std::size_t w = 0; w < width_; ++w) {
            if (!contains(w)) continue;
            if (!first) out += ",";
            out += std::to_string(w);
            first = false;
        }
        return out + "}";
    }

private:
    static std::uint32_t low_bits(std::size_t width) { return width >= 32 ? ~0u : ((std::uint32_t{1} << width) - 1u); }
    void same_width(const SubsetMask& o) const { require(width_ == o.width_, "subset widths differ"); }

    std::uint32_t bits_ = 0;
    std::size_t width_ = 0;
};

/// Every subset of an m-point space, in increasing bitmask order.
inline std::vector<SubsetMask> all_subsets(std::size_t width)
{
    FiniteSpace space(width);
    std::vector<SubsetMask> out;
    out.reserve(space.subset_count());
    for (std::uint32_t b = 0; b < space.subset_count(); ++b) out.emplace_back(b, width);
    return out;
}

/// A deterministic map T on the points: table[w] = T(w).
class Transformation {
public:
    explicit Transformation(std::vector<std::size_t> table) : table_(std::move(table))
    {
        FiniteSpace space(table_.size());
        for (auto target : table_)
            require(target < table_.size(), "map entry " + std::to_string(target) + " out of range");
    }

    static Transformation identity(std::size_t size)
    {
        std::vector<std::size_t> t(size);
        std::iota(t.begin(), t.end(), std::size_t{0});
        return Transformation(std::move(t));
    }

    std::size_t size() const noexcept { return table_.size(); }
    std::size_t operator()(std::size_t point) const { return table_.at(point); }
    const std::vector<std::size_t>& table() const noexcept { return table_; }

    /// T^k(w) by direct iteration.
    std::size_t iterate(std::size_t point, std::size_t k) const
    {
        for (std::size_t i = 0; i < k; ++i) point = table_[point];
        return point;
    }

    friend bool operator==(const Transformation&, const Transformation&) = default;

private:
    std::vector<std::size_t> table_;
};

/// Ordered list of non-empty, pairwise disjoint cells covering the space.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<SubsetMask> cells) : cells_(std::move(cells))
    {
        require(!cells_.empty(), "partition has no cells");
        const std::size_t width = cells_.front().width();
        SubsetMask seen = SubsetMask::empty(width);
        for (const auto& c : cells_) {
            require(c.width() == width, "partition cells have different widths");
            require(!c.is_empty(), "partition has an empty cell");
            require((seen & c).is_empty(), "partition cells overlap");
            seen = seen | c;
        }
        require(seen == SubsetMask::full(width), "partition cells do not cover the space");
    }

    const std::vector<SubsetMask>& cells() const noexcept { return cells_; }
    std::size_t size() const noexcept { return cells_.size(); }
    const SubsetMask& operator[](std::size_t i) const { return cells_.at(i); }
    std::size_t width() const { return cells_.empty() ? 0 : cells_.front().width(); }

    /// Index of the cell containing the point.
    std::size_t cell_of(std::size_t point) const
    {
        for (std::size_t i = 0; i < cells_.size(); ++i)
            if (cells_[i].contains(point)) return i;
        throw PreconditionError("point not covered by partition");
    }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<SubsetMask> cells_;
};

/// T^{-1}A = { w : T(w) in A }.
inline SubsetMask preimage(const Transformation& map, const SubsetMask& set)
{
    require(map.size() == set.width(), "preimage: widths differ");
    std::uint32_t bits = 0;
    for (std::size_t w = 0; w < map.size(); ++w)
        if (set.contains(map(w))) bits |= std::uint32_t{1} << w;
    return {bits, set.width()};
}

inline bool is_invertible(const Transformation& map)
{
    std::vector<bool> hit(map.size(), false);
    for (auto t : map.table()) {
        if (hit[t]) return false;
        hit[t] = true;
    }
    return true;
}

/// Weakly connected components of the functional graph w -> T(w), ordered by
/// least element.
inline Partition components(const Transformation& map)
{
    const std::size_t m = map.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t w = 0; w < m; ++w) {
        auto a = find(w), b = find(map(w));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::uint32_t> by_root(m, 0);
    for (std::size_t w = 0; w < m; ++w) by_root[find(w)] |= std::uint32_t{1} << w;
    std::vector<SubsetMask> cells;
    for (std::size_t r = 0; r < m; ++r)
        if (by_root[r] != 0) cells.emplace_back(by_root[r], m);
    // Roots are least elements, so cells are already in least-element order.
    return Partition(std::move(cells));
}

/// All A with T^{-1}A = A: every union of components, in increasing bitmask order.
inline std::vector<SubsetMask> invariant_sets(const Transformation& map)
{
    const auto comps = components(map);
    const std::size_t n = comps.size();
    std::vector<SubsetMask> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint32_t choice = 0; choice < (std::uint32_t{1} << n); ++choice) {
        SubsetMask u = SubsetMask::empty(map.size());
        for (std::size_t i = 0; i < n; ++i)
            if ((choice >> i) & 1u) u = u | comps[i];
        if (preimage(map, u) != u) throw InternalError("union of components is not invariant");
        out.push_back(u);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// A periodic orbit, listed in dynamical order starting from its least point.
struct Cycle {
    SubsetMask points;
    std::vector<std::size_t> order;

    std::size_t length() const noexcept { return order.size(); }
    friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Periodic orbits of T, ordered by least element.
inline std::vector<Cycle> cycles(const Transformation& map)
{
    const std::size_t m = map.size();
    // 0 = unvisited, 1 = on the current walk, 2 = finished
    std::vector<int> state(m, 0);
    std::vector<Cycle> out;
    for (std::size_t start = 0; start < m; ++start) {
        if (state[start] != 0) continue;
        std::vector<std::size_t> walk;
        std::size_t w = start;
        while (state[w] == 0) {
            state[w] = 1;
            walk.push_back(w);
            w = map(w);
        }
        if (state[w] == 1) {
            auto first = std::find(walk.begin(), walk.end(), w);
            std::vector<std::size_t> order(first, walk.end());
            std::rotate(order.begin(), std::min_element(order.begin(), order.end()), order.end());
            std::uint32_t bits = 0;
            for (auto p : order) bits |= std::uint32_t{1} << p;
            out.push_back(Cycle{SubsetMask(bits, m), std::move(order)});
        }
        for (auto p : walk) state[p] = 2;
    }
    std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) { return a.order.front() < b.order.front(); });
    return out;
}

/// Everything about the long-run behaviour of a finite map: which cycle each
/// point falls into, how long that takes, and the common period.
struct OrbitStructure {
    std::vector<Cycle> cycles;
    std::vector<std::size_t> cycle_of;   ///< index into cycles, per point
    std::vector<std::size_t> depth;      ///< steps until the orbit reaches its cycle
    std::size_t period = 1;              ///< lcm of cycle lengths
    std::size_t preperiod = 0;           ///< max depth

    SubsetMask periodic_points() const
    {
        SubsetMask u = SubsetMask::empty(cycle_of.size());
        for (const auto& c : cycles) u = u | c.points;
        return u;
    }
};

inline OrbitStructure orbit_structure(const Transformation& map)
{
    OrbitStructure s;
    s.cycles = cycles(map);
    const std::size_t m = map.size();
    s.cycle_of.assign(m, 0);
    s.depth.assign(m, 0);
    for (std::size_t w = 0; w < m; ++w) {
        std::size_t x = w, d = 0;
        for (;;) {
            auto it = std::find_if(s.cycles.begin(), s.cycles.end(), [&](const Cycle& c) { return c.points.contains(x); });
            if (it != s.cycles.end()) {
                s.cycle_of[w] = static_cast<std::size_t>(it - s.cycles.begin());
                break;
            }
            x = map(x);
            ++d;
        }
        s.depth[w] = d;
        s.preperiod = std::max(s.preperiod, d);
    }
    for (const auto& c : s.cycles) s.period = std::lcm(s.period, c.length());
    return s;
}

} // namespace ergocap
