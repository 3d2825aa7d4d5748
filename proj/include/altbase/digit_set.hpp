#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "altbase/base.hpp"
#include "altbase/errors.hpp"
#include "altbase/numeric.hpp"
#include "altbase/piecewise_linear.hpp"
#include "altbase/transform.hpp"

namespace altbase {

inline constexpr double kMaxDigitTuples = 1e7;

/*
 * Finite digit set 0 = d_0 < d_1 < ... < d_m paired with a base beta > 1.
 * (beta, Delta)-representations of x in [0, d_m/(beta-1)) are words over
 * Delta with x = sum_n a_n / beta^{n+1}.
 */
class DigitSet {
public:
    DigitSet(std::vector<double> digits, double beta) : digits_(std::move(digits)), beta_(beta) {
        if (!(beta_ > 1.0) || !std::isfinite(beta_)) throw DomainError("digit set base must be > 1");
        std::sort(digits_.begin(), digits_.end());
        if (digits_.empty() || std::abs(digits_.front()) > 1e-12) throw DomainError("digit set must contain 0 as least digit");
        digits_.front() = 0.0;
        const double tol = 1e-9 * std::max(1.0, digits_.back());
        std::vector<double> merged{digits_.front()};
        for (std::size_t k = 1; k < digits_.size(); ++k) {
            if (digits_[k] - merged.back() > tol) merged.push_back(digits_[k]);
        }
        digits_ = std::move(merged);
        if (digits_.size() < 2) throw DomainError("digit set needs a positive digit");
    }

    const std::vector<double>& digits() const noexcept { return digits_; }
    double beta() const noexcept { return beta_; }
    double max_digit() const noexcept { return digits_.back(); }
    std::size_t size() const noexcept { return digits_.size(); }
    // Right end of the representable interval, d_m / (beta - 1).
    double upper() const noexcept { return digits_.back() / (beta_ - 1.0); }

private:
    std::vector<double> digits_;
    double beta_;
};

// f_beta(c_0, ..., c_{p-1}) = sum_i beta_{p-1} ... beta_{i+1} c_i.
inline double f_beta(const AlternateBase& base, const std::vector<int>& tuple) {
    if (tuple.size() != base.size()) throw AlphabetError("tuple length must equal the base length");
    double v = 0.0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        const auto pos = static_cast<long long>(i);
        if (tuple[i] < 0 || tuple[i] > base.alphabet(pos)) {
            throw AlphabetError("component " + std::to_string(i) + " outside [0, " +
                                std::to_string(base.alphabet(pos)) + "]");
        }
        v = v * base.beta(pos) + tuple[i];
    }
    return v;
}

namespace detail {

inline void check_tuple_bound(const AlternateBase& base) {
    double count = 1.0;
    for (int m : base.alphabets()) count *= m + 1;
    if (count > kMaxDigitTuples) throw SearchTooLarge("digit tuple enumeration exceeds 1e7");
}

// Calls fn(tuple) for every p-tuple in ascending lexicographic order.
template <typename Fn>
void for_each_tuple(const AlternateBase& base, Fn&& fn) {
    check_tuple_bound(base);
    std::vector<int> c(base.size(), 0);
    while (true) {
        fn(static_cast<const std::vector<int>&>(c));
        std::size_t k = c.size();
        while (k > 0 && c[k - 1] == base.alphabet(static_cast<long long>(k - 1))) c[--k] = 0;
        if (k == 0) return;
        ++c[k - 1];
    }
}

}  // namespace detail

// Delta_beta = im f_beta, paired with B = beta_{p-1} ... beta_0.
inline DigitSet delta_set(const AlternateBase& base) {
    std::vector<double> values;
    detail::for_each_tuple(base, [&](const std::vector<int>& c) { values.push_back(f_beta(base, c)); });
    return DigitSet(std::move(values), base.product());
}

inline bool is_allowable(const DigitSet& ds) {
    const auto& d = ds.digits();
    double gap = 0.0;
    for (std::size_t k = 1; k < d.size(); ++k) gap = std::max(gap, d[k] - d[k - 1]);
    return gap <= ds.upper() + 1e-12;
}

// {0, d_m - d_{m-1}, ..., d_m - d_1, d_m}
inline DigitSet tilde(const DigitSet& ds) {
    const auto& d = ds.digits();
    std::vector<double> mirrored(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) mirrored[k] = d.back() - d[d.size() - 1 - k];
    mirrored.front() = 0.0;
    mirrored.back() = d.back();
    return DigitSet(std::move(mirrored), ds.beta());
}

struct DeltaStep {
    double image = 0.0;
    double digit = 0.0;
};

// Greedy (beta, Delta)-transformation: the greatest d with d/beta <= x.
inline DeltaStep greedy_delta_step(const DigitSet& ds, double x) {
    if (!is_allowable(ds)) throw NotAllowable("digit set is not allowable for its base");
    const double top = ds.upper();
    if (!(x >= -kSnapEps && x < top + kSnapEps)) {
        throw DomainError("greedy (beta, Delta) step needs 0 <= x < d_m/(beta-1)");
    }
    x = std::clamp(x, 0.0, top);
    const double scaled = ds.beta() * x;
    const double slack = kSnapEps * std::max(1.0, scaled);
    const auto& d = ds.digits();
    auto it = std::upper_bound(d.begin(), d.end(), scaled + slack);
    const double digit = it == d.begin() ? 0.0 : *(it - 1);
    return {std::max(0.0, scaled - digit), digit};
}

// Lazy (beta, Delta)-transformation: the least d with d/beta + d_m/(beta(beta-1)) >= x.
inline DeltaStep lazy_delta_step(const DigitSet& ds, double x) {
    if (!is_allowable(ds)) throw NotAllowable("digit set is not allowable for its base");
    const double top = ds.upper();
    if (!(x > 0.0 && x <= top + kSnapEps)) {
        throw DomainError("lazy (beta, Delta) step needs 0 < x <= d_m/(beta-1)");
    }
    x = std::min(x, top);
    const double scaled = ds.beta() * x;
    const double need = scaled - top;
    const double slack = kSnapEps * std::max(1.0, scaled);
    const auto& d = ds.digits();
    auto it = std::lower_bound(d.begin(), d.end(), need - slack);
    const double digit = it == d.end() ? d.back() : *it;
    return {std::min(top, scaled - digit), digit};
}

// Monotonicity of f_beta in the lexicographic order, by the closed-form inequalities
// sum_{i=j}^{p-1} beta_{p-1}...beta_{i+1} m_i <= beta_{p-1}...beta_j for j in [1, p-2].
inline bool nondecreasing_by_criterion(const AlternateBase& base) {
    const std::size_t p = base.size();
    for (std::size_t j = 1; j + 2 <= p; ++j) {
        double lhs = 0.0;
        for (std::size_t i = j; i < p; ++i) lhs = lhs * base.beta(static_cast<long long>(i)) + base.alphabet(static_cast<long long>(i));
        const double rhs = base.partial_product(static_cast<long long>(j), p - j);
        if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) return false;
    }
    return true;
}

struct MonotonicityViolation {
    std::vector<int> lower;  // lexicographically smaller tuple
    std::vector<int> upper;  // its successor, with a smaller f_beta value
};

// First lexicographically adjacent pair where f_beta decreases, if any.
inline std::optional<MonotonicityViolation> find_monotonicity_violation(const AlternateBase& base) {
    std::optional<MonotonicityViolation> found;
    std::vector<int> prev;
    double prev_value = 0.0;
    detail::for_each_tuple(base, [&](const std::vector<int>& c) {
        const double v = f_beta(base, c);
        if (!found && !prev.empty() && v < prev_value - 1e-12 * std::max(1.0, prev_value)) {
            found = MonotonicityViolation{prev, c};
        }
        prev = c;
        prev_value = v;
    });
    return found;
}

inline bool nondecreasing_bruteforce(const AlternateBase& base) { return !find_monotonicity_violation(base); }

// pi_2 o T_beta^p o delta_0 (x), by p literal greedy steps.
inline double alternate_greedy_block(const AlternateBase& base, double x) {
    StatePoint s{0, x};
    for (std::size_t k = 0; k < base.size(); ++k) s = greedy_step(base, s).state;
    return s.value;
}

// pi_2 o L_beta^p o delta_0 (x), by p literal lazy steps.
inline double alternate_lazy_block(const AlternateBase& base, double x) {
    StatePoint s{0, x};
    for (std::size_t k = 0; k < base.size(); ++k) s = lazy_step(base, s).state;
    return s.value;
}

struct Disagreement {
    Interval interval;
    double witness = 0.0;
    double delta_image = 0.0;  // image under the (B, Delta_beta)-transformation
    double base_image = 0.0;   // image under the p-fold alternate base transformation
};

/*
 * Maximal intervals where the (B, Delta_beta)-transformation and the p-fold
 * alternate base transformation differ. Greedy reports are half-open
 * [lo, hi) within [0, x_beta); lazy reports are (lo, hi] within (0, x_beta].
 */
struct DisagreementReport {
    std::vector<Disagreement> intervals;
    bool left_open = false;

    bool empty() const { return intervals.empty(); }
};

inline constexpr double kDisagreementTol = 1e-9;
inline constexpr double kMinCellWidth = 1e-12;

/*
 * Both maps are affine with slope B between consecutive points of
 * {d/B : d in Delta_beta} and the breakpoints of the p-fold composed map,
 * so each cell of the merged partition is decided at its midpoint.
 */
inline DisagreementReport compare_transforms(const AlternateBase& base) {
    const DigitSet ds = delta_set(base);
    const double top = base.xmax(0);
    const double B = base.product();

    std::vector<double> cuts = compose_extended_map(base, 0).breakpoints();
    for (double d : ds.digits()) {
        if (d / B < top) cuts.push_back(d / B);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> merged;
    for (double c : cuts) {
        if (merged.empty() || c - merged.back() > kMinCellWidth) merged.push_back(c);
    }
    if (top - merged.back() <= kMinCellWidth) merged.back() = top;
    else merged.push_back(top);

    DisagreementReport report;
    bool open = false;
    for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
        const double lo = merged[k];
        const double hi = merged[k + 1];
        const double mid = 0.5 * (lo + hi);
        const double delta_image = greedy_delta_step(ds, mid).image;
        const double base_image = alternate_greedy_block(base, mid);
        const bool differ = std::abs(delta_image - base_image) > kDisagreementTol;
        if (differ) {
            if (open) {
                report.intervals.back().interval.hi = hi;
            } else {
                report.intervals.push_back({{lo, hi}, mid, delta_image, base_image});
            }
        }
        open = differ;
    }
    return report;
}

// Lazy-side comparison obtained by conjugating the greedy one with x -> x_beta - x.
inline DisagreementReport compare_lazy_transforms(const AlternateBase& base) {
    const double top = base.xmax(0);
    DisagreementReport greedy = compare_transforms(base);
    DisagreementReport lazy;
    lazy.left_open = true;
    for (auto it = greedy.intervals.rbegin(); it != greedy.intervals.rend(); ++it) {
        lazy.intervals.push_back({{top - it->interval.hi, top - it->interval.lo},
                                  top - it->witness,
                                  top - it->delta_image,
                                  top - it->base_image});
    }
    return lazy;
}

}  // namespace altbase
