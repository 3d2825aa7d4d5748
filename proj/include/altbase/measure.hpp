#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "altbase/base.hpp"
#include "altbase/density.hpp"
#include "altbase/piecewise_linear.hpp"

namespace altbase {

// mu_{beta,i} for every slot i, each the invariant measure of the slot's composed map.
class InvariantMeasure {
public:
    explicit InvariantMeasure(const AlternateBase& base, std::optional<std::size_t> depth = std::nullopt)
        : base_(base) {
        specs_.reserve(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) specs_.push_back(gora_density(compose_map(base, i), depth));
    }

    const AlternateBase& base() const { return base_; }
    const DensitySpec& slot(std::size_t i) const { return specs_.at(i); }
    std::size_t size() const { return specs_.size(); }

private:
    AlternateBase base_;
    std::vector<DensitySpec> specs_;
};

struct IntervalMeasureQuery {
    std::size_t slot = 0;
    double a = 0.0;
    double b = 1.0;
};

// (1/p) sum_i mu_{beta,i}([d/beta_i, (d+1)/beta_i) n [0,1)).
inline double frequency(const InvariantMeasure& mu, int digit) {
    if (digit < 0) return 0.0;
    const AlternateBase& base = mu.base();
    double sum = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double beta = base.beta(static_cast<long long>(i));
        const double lo = std::min(1.0, digit / beta);
        const double hi = std::min(1.0, (digit + 1) / beta);
        sum += measure_interval(mu.slot(i), lo, hi);
    }
    return sum / static_cast<double>(base.size());
}

inline double frequency(const AlternateBase& base, int digit) { return frequency(InvariantMeasure(base), digit); }

// Entropy (1/p) log(beta_{p-1} ... beta_0), natural log.
inline double entropy(const AlternateBase& base) {
    return std::log(base.product()) / static_cast<double>(base.size());
}

// mu_beta of a union of {i} x [a_i, b_i): (1/p) sum over the supplied slots.
inline double mu_product(const InvariantMeasure& mu, const std::vector<IntervalMeasureQuery>& queries) {
    std::vector<bool> seen(mu.size(), false);
    double sum = 0.0;
    for (const auto& q : queries) {
        if (q.slot >= mu.size()) throw DomainError("query slot outside [0, p-1]");
        if (seen[q.slot]) throw DomainError("duplicate slot in measure query");
        seen[q.slot] = true;
        sum += measure_interval(mu.slot(q.slot), q.a, q.b);
    }
    return sum / static_cast<double>(mu.size());
}

inline double mu_product(const AlternateBase& base, const std::vector<IntervalMeasureQuery>& queries) {
    return mu_product(InvariantMeasure(base), queries);
}

}  // namespace altbase
