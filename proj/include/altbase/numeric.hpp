#pragma once

#include <cmath>
#include <cstddef>

namespace altbase {

// Arguments of floor/ceil within this distance of an integer are snapped to it.
inline constexpr double kSnapEps = 1e-12;

inline double snap_to_integer(double v, double eps = kSnapEps) {
    const double r = std::round(v);
    return std::abs(v - r) <= eps ? r : v;
}

inline long long snap_floor(double v, double eps = kSnapEps) {
    return static_cast<long long>(std::floor(snap_to_integer(v, eps)));
}

inline long long snap_ceil(double v, double eps = kSnapEps) {
    return static_cast<long long>(std::ceil(snap_to_integer(v, eps)));
}

// Non-negative remainder of n modulo p, for any sign of n.
inline std::size_t wrap_index(long long n, std::size_t p) {
    const auto m = static_cast<long long>(p);
    return static_cast<std::size_t>(((n % m) + m) % m);
}

}  // namespace altbase
