#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frames/common.hpp"

namespace frames {

// Pairwise summation in ascending index order. The result depends only on the
// input sequence, never on how callers parallelize the production of terms.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    constexpr std::size_t kBlock = 32;
    if (v.size() <= kBlock) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v));
}

inline double pairwise_sum(const Eigen::VectorXd& v) {
    return pairwise_sum(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

inline Complex pairwise_sum(const VectorXc& v) {
    return pairwise_sum(std::span<const Complex>(v.data(), static_cast<std::size_t>(v.size())));
}

// Squared l2 norm with pairwise accumulation.
inline double squared_norm(const VectorXc& v) {
    return pairwise_sum(Eigen::VectorXd(v.cwiseAbs2()));
}

inline double l2_norm(const VectorXc& v) { return std::sqrt(squared_norm(v)); }

// <a, b> = sum a_l conj(b_l)
inline Complex inner(const VectorXc& a, const VectorXc& b) {
    return pairwise_sum(VectorXc(a.cwiseProduct(b.conjugate())));
}

}  // namespace frames
