#pragma once

#include "ergocap/capacity.hpp"
#include "ergocap/space.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

namespace ergocap {

/// (U_T f)(w) = f(T w) as a 0/1 matrix: row w has its single one in column T(w).
class KoopmanMatrix {
public:
    explicit KoopmanMatrix(const Transformation& map) : columns_(map.table()) {}

    std::size_t size() const noexcept { return columns_.size(); }
    int operator()(std::size_t row, std::size_t col) const { return columns_.at(row) == col ? 1 : 0; }

    FunctionOnSpace apply(const FunctionOnSpace& f) const
    {
        require(f.size() == size(), "Koopman operator applied to a function of different width");
        std::vector<Rational> out(size());
        for (std::size_t w = 0; w < size(); ++w) out[w] = f[columns_[w]];
        return FunctionOnSpace(std::move(out));
    }

    std::vector<std::vector<int>> dense() const
    {
        std::vector<std::vector<int>> d(size(), std::vector<int>(size(), 0));
        for (std::size_t w = 0; w < size(); ++w) d[w][columns_[w]] = 1;
        return d;
    }

private:
    std::vector<std::size_t> columns_;
};

inline KoopmanMatrix koopman_matrix(const Transformation& map) { return KoopmanMatrix(map); }

/// Basis of the eigenvalue-1 eigenspace modulo V-null sets: functions with
/// f(Tw) = f(w) at every w in S = null_support(V), identified when they agree
/// on S. T maps S into itself when V is invariant, so the basis is the set of
/// indicators of the components of the functional graph restricted to S.
inline std::vector<FunctionOnSpace> invariant_function_basis(const UpperProb& v, const Transformation& map)
{
    require(is_invariant_capacity(v, map), "invariant_function_basis: capacity is not invariant");
    const SubsetMask s = null_support(v);
    const std::size_t m = map.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto w : s.points()) {
        if (!s.contains(map(w))) throw InternalError("invariant capacity whose support is not forward-closed");
        auto a = find(w), b = find(map(w));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<FunctionOnSpace> basis;
    for (auto root : s.points()) {
        if (find(root) != root) continue;
        std::uint32_t bits = 0;
        for (auto w : s.points())
            if (find(w) == root) bits |= std::uint32_t{1} << w;
        basis.push_back(FunctionOnSpace::indicator(SubsetMask(bits, m)));
    }
    return basis;
}

inline std::size_t eigenvalue_one_multiplicity(const UpperProb& v, const Transformation& map)
{
    return invariant_function_basis(v, map).size();
}

} // namespace ergocap
