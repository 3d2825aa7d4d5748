#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "altbase/base.hpp"
#include "altbase/errors.hpp"

namespace altbase {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

/*
 * Constant-slope expanding map of [0, domain_end): branch k is
 * [a_k, a_{k+1}) and maps x to slope * (x - a_k). `breakpoints` holds
 * a_0 = 0 < a_1 < ... < a_K = domain_end.
 */
class PiecewiseLinearMap {
public:
    PiecewiseLinearMap(std::vector<double> breakpoints, double slope)
        : breakpoints_(std::move(breakpoints)), slope_(slope) {
        if (breakpoints_.size() < 2 || breakpoints_.front() != 0.0) {
            throw DomainError("piecewise linear map needs breakpoints 0 = a_0 < ... < a_K");
        }
        for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
            if (!(breakpoints_[k] > breakpoints_[k - 1])) throw DomainError("breakpoints must be strictly ascending");
        }
        if (!(slope_ > 1.0)) throw DomainError("slope must exceed 1");
    }

    double slope() const noexcept { return slope_; }
    double domain_end() const noexcept { return breakpoints_.back(); }
    std::size_t branch_count() const noexcept { return breakpoints_.size() - 1; }
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

    Interval branch(std::size_t k) const { return {breakpoints_[k], breakpoints_[k + 1]}; }

    // Right end of the image of branch k (the image is [0, this)).
    double image_end(std::size_t k) const { return slope_ * (breakpoints_[k + 1] - breakpoints_[k]); }

    std::size_t branch_of(double x) const {
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
        std::size_t k = it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
        return std::min(k, branch_count() - 1);
    }

    double operator()(double x) const {
        const std::size_t k = branch_of(x);
        return slope_ * (x - breakpoints_[k]);
    }

private:
    std::vector<double> breakpoints_;
    double slope_;
};

namespace detail {

// Breakpoints closer than this are treated as one.
inline constexpr double kBreakpointTol = 1e-12;

// Refines `current` (images [0, s*(a_{k+1}-a_k))) by composing with T_beta, whose branches start at j/beta.
inline std::vector<double> refine(const std::vector<double>& current, double slope, double beta, int max_digit) {
    std::vector<double> out;
    out.reserve(current.size() * static_cast<std::size_t>(max_digit + 1));
    for (std::size_t k = 0; k + 1 < current.size(); ++k) {
        const double a = current[k];
        const double b = current[k + 1];
        out.push_back(a);
        for (int j = 1; j <= max_digit; ++j) {
            const double pt = a + (j / beta) / slope;
            if (pt < b - kBreakpointTol) out.push_back(pt);
        }
    }
    out.push_back(current.back());
    return out;
}

inline PiecewiseLinearMap compose_from(const AlternateBase& base, std::size_t slot, double domain_end) {
    if (slot >= base.size()) throw DomainError("slot " + std::to_string(slot) + " outside [0, p-1]");
    std::vector<double> pts{0.0, domain_end};
    double slope = 1.0;
    for (std::size_t k = 0; k < base.size(); ++k) {
        const auto pos = static_cast<long long>(slot + k);
        pts = refine(pts, slope, base.beta(pos), base.alphabet(pos));
        slope *= base.beta(pos);
    }
    return PiecewiseLinearMap(std::move(pts), slope);
}

}  // namespace detail

// T_{beta_{slot+p-1}} o ... o T_{beta_slot} on [0,1): the map under which mu_{beta,slot} is invariant.
inline PiecewiseLinearMap compose_map(const AlternateBase& base, std::size_t slot) {
    return detail::compose_from(base, slot, 1.0);
}

// pi_2 o T_beta^p o delta_slot on the extended domain [0, x_slot).
inline PiecewiseLinearMap compose_extended_map(const AlternateBase& base, std::size_t slot) {
    return detail::compose_from(base, slot, base.xmax(static_cast<long long>(slot)));
}

// The classical greedy T_beta on [0,1) as a single-factor map.
inline PiecewiseLinearMap beta_map(double beta) {
    return compose_map(AlternateBase({beta}), 0);
}

// Disjoint ascending intervals {x : map(x) in [a, b)}.
inline std::vector<Interval> preimage(const PiecewiseLinearMap& map, double a, double b) {
    if (!(a >= 0.0 && a <= b)) throw DomainError("preimage needs 0 <= a <= b");
    std::vector<Interval> out;
    if (a == b) return out;
    const double s = map.slope();
    for (std::size_t k = 0; k < map.branch_count(); ++k) {
        const Interval br = map.branch(k);
        const double lo = std::max(br.lo, br.lo + a / s);
        const double hi = std::min(br.hi, br.lo + b / s);
        if (hi > lo) {
            if (!out.empty() && out.back().hi == lo) {
                out.back().hi = hi;
            } else {
                out.push_back({lo, hi});
            }
        }
    }
    return out;
}

}  // namespace altbase
