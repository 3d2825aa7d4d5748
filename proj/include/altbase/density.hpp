#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "altbase/errors.hpp"
#include "altbase/piecewise_linear.hpp"

namespace altbase {

/*
 * Invariant density of a constant-slope map T of [0,1) (slope B > 1) via
 * Gora's formula:
 *
 *   h(x) = (1/C) ( d_0 + sum_j d_j sum_{m=1..M} chi_[0, T^m(c_j)](x) / B^m )
 *
 * where c_1 < ... < c_K are the right endpoints of the not-onto branches,
 * T(c_j) is the left limit of T at c_j, S_ij = sum_m [T^m(c_i) > c_j] / B^m,
 * (d_1 ... d_K) = (1 ... 1)(Id - S)^{-1}, d_0 = 1, and C normalizes h.
 * The series over m are truncated at depth M.
 */
struct DensitySpec {
    std::size_t K = 0;
    std::vector<double> c;
    std::vector<std::vector<double>> orbit;  // orbit[j][m-1] = T^m(c_j), m = 1..M
    Eigen::MatrixXd S;
    std::vector<double> d;  // d[0] = d_0 = 1, d[j] for j = 1..K
    double C = 1.0;
    double B = 2.0;
    std::size_t M = 0;
};

inline constexpr double kOntoTol = 1e-9;
inline constexpr double kOrbitSnapTol = 1e-9;
inline constexpr double kTailTolerance = 1e-12;
inline constexpr double kRcondThreshold = 1e-10;

// Depth at which the discarded tail B^{-M} / (B - 1) drops below `tolerance`, and at least 15 digits.
inline std::size_t default_truncation(double B, double tolerance = kTailTolerance) {
    const double digits15 = std::ceil(15.0 * std::log(10.0) / std::log(B));
    const double tail = std::ceil(std::log(1.0 / (tolerance * (B - 1.0))) / std::log(B));
    return static_cast<std::size_t>(std::max({1.0, digits15, tail}));
}

namespace detail {

/*
 * One step of T with Gora's conventions at breakpoints: points within
 * kOrbitSnapTol of a breakpoint are snapped onto it and take the left
 * limit there (the image end of the branch to the left). That is where the
 * c_j need it; at an onto-branch breakpoint the left limit is 1, which then
 * follows the left limit at the domain end.
 */
inline std::size_t nearest_breakpoint(const PiecewiseLinearMap& map, double y) {
    const auto& a = map.breakpoints();
    auto it = std::lower_bound(a.begin(), a.end(), y);
    std::size_t nearest = it == a.end() ? a.size() - 1 : static_cast<std::size_t>(it - a.begin());
    if (nearest > 0 && std::abs(a[nearest - 1] - y) < std::abs(a[nearest] - y)) --nearest;
    return nearest;
}

// Orbit points within kOrbitSnapTol of a breakpoint are replaced by it, so
// comparisons against the c_j are exact.
inline double snap_to_breakpoint(const PiecewiseLinearMap& map, double y) {
    const double a = map.breakpoints()[nearest_breakpoint(map, y)];
    return std::abs(a - y) <= kOrbitSnapTol ? a : y;
}

inline double gora_step(const PiecewiseLinearMap& map, double y) {
    const std::size_t k = nearest_breakpoint(map, y);
    if (std::abs(map.breakpoints()[k] - y) <= kOrbitSnapTol) {
        if (k == 0) return 0.0;
        return snap_to_breakpoint(map, std::min(1.0, map.image_end(k - 1)));
    }
    return snap_to_breakpoint(map, map(y));
}

}  // namespace detail

inline DensitySpec gora_density(const PiecewiseLinearMap& map, std::optional<std::size_t> depth = std::nullopt,
                                double tolerance = kTailTolerance) {
    if (map.domain_end() != 1.0) throw DomainError("Gora density needs a map of [0,1)");
    DensitySpec spec;
    spec.B = map.slope();
    spec.M = depth.value_or(default_truncation(spec.B, tolerance));
    if (spec.M == 0) throw TruncationTooShallow("truncation depth must be >= 1");
    const double discarded = std::pow(spec.B, -static_cast<double>(spec.M)) / (spec.B - 1.0);
    if (discarded > tolerance) {
        throw TruncationTooShallow("depth " + std::to_string(spec.M) + " discards " + std::to_string(discarded) +
                                   " > tolerance " + std::to_string(tolerance));
    }

    for (std::size_t k = 0; k < map.branch_count(); ++k) {
        if (map.image_end(k) < 1.0 - kOntoTol) spec.c.push_back(map.branch(k).hi);
    }
    spec.K = spec.c.size();
    spec.d.assign(spec.K + 1, 1.0);
    if (spec.K == 0) {
        spec.S = Eigen::MatrixXd::Zero(0, 0);
        spec.C = 1.0;
        return spec;
    }

    spec.orbit.assign(spec.K, std::vector<double>(spec.M));
    for (std::size_t j = 0; j < spec.K; ++j) {
        double y = spec.c[j];
        for (std::size_t m = 0; m < spec.M; ++m) {
            y = detail::gora_step(map, y);
            spec.orbit[j][m] = y;
        }
    }

    std::vector<double> inv_pow(spec.M);
    double w = 1.0;
    for (std::size_t m = 0; m < spec.M; ++m) {
        w /= spec.B;
        inv_pow[m] = w;
    }

    spec.S = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.K), static_cast<Eigen::Index>(spec.K));
    for (std::size_t i = 0; i < spec.K; ++i) {
        for (std::size_t j = 0; j < spec.K; ++j) {
            double sum = 0.0;
            for (std::size_t m = 0; m < spec.M; ++m) {
                if (spec.orbit[i][m] > spec.c[j]) sum += inv_pow[m];
            }
            spec.S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sum;
        }
    }

    // Row vector d = 1 (Id - S)^{-1}, i.e. (Id - S)^T d^T = 1.
    const Eigen::Index K = static_cast<Eigen::Index>(spec.K);
    const Eigen::MatrixXd A = (Eigen::MatrixXd::Identity(K, K) - spec.S).transpose();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rcond = lu.rcond();
    if (!(rcond >= kRcondThreshold)) {
        throw SingularSystem("Id - S is singular (reciprocal condition " + std::to_string(rcond) + ")");
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(K);
    const Eigen::VectorXd sol = lu.solve(ones);
    if ((A * sol - ones).lpNorm<Eigen::Infinity>() >= 1e-9) {
        throw SingularSystem("Id - S solve residual too large");
    }
    for (std::size_t j = 0; j < spec.K; ++j) spec.d[j + 1] = sol(static_cast<Eigen::Index>(j));

    double C = spec.d[0];
    for (std::size_t j = 0; j < spec.K; ++j) {
        for (std::size_t m = 0; m < spec.M; ++m) C += spec.d[j + 1] * spec.orbit[j][m] * inv_pow[m];
    }
    spec.C = C;
    if (!(spec.C > 0.0)) throw SingularSystem("normalization constant is not positive");
    return spec;
}

inline double density_eval(const DensitySpec& spec, double x) {
    double sum = spec.d[0];
    for (std::size_t j = 0; j < spec.K; ++j) {
        double inner = 0.0;
        double w = 1.0;
        for (std::size_t m = 0; m < spec.M; ++m) {
            w /= spec.B;
            if (x <= spec.orbit[j][m]) inner += w;
        }
        sum += spec.d[j + 1] * inner;
    }
    return sum / spec.C;
}

// mu([a, b)) by integrating the step density exactly.
inline double measure_interval(const DensitySpec& spec, double a, double b) {
    if (!(a >= 0.0 && a <= b && b <= 1.0)) {
        throw DomainError("measure_interval needs 0 <= a <= b <= 1");
    }
    double sum = (b - a) * spec.d[0];
    for (std::size_t j = 0; j < spec.K; ++j) {
        double inner = 0.0;
        double w = 1.0;
        for (std::size_t m = 0; m < spec.M; ++m) {
            w /= spec.B;
            const double t = std::clamp(spec.orbit[j][m], a, b);
            inner += (t - a) * w;
        }
        sum += spec.d[j + 1] * inner;
    }
    return sum / spec.C;
}

}  // namespace altbase
