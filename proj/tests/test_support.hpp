#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <cstddef>
#include <vector>

#include "altbase/base.hpp"

namespace altbase::testing {

inline const double kSqrt5 = std::sqrt(5.0);
inline const double kSqrt13 = std::sqrt(13.0);
inline const double kPhi = (1.0 + kSqrt5) / 2.0;
inline const double kBeta0 = (1.0 + kSqrt13) / 2.0;
inline const double kBeta1 = (5.0 + kSqrt13) / 6.0;

inline AlternateBase sqrt13_base() { return AlternateBase({kBeta0, kBeta1}); }
inline AlternateBase phi_phi_sqrt5_base() { return AlternateBase({kPhi, kPhi, kSqrt5}); }
inline AlternateBase counterexample_base() { return AlternateBase({1.5, 1.5, 4.0}); }
inline AlternateBase half_roots_base() {
    return AlternateBase({std::sqrt(5.0) / 2.0, std::sqrt(6.0) / 2.0, std::sqrt(7.0) / 2.0});
}

// Normalized Parry density of the classical beta map, from the orbit of 1 in long double.
class ParryDensity {
public:
    ParryDensity(long double beta, int terms) : beta_(beta) {
        long double y = 1.0L;
        long double w = 1.0L;
        for (int n = 0; n < terms; ++n) {
            orbit_.push_back(y);
            weight_.push_back(w);
            const long double t = beta_ * y;
            y = t - std::floor(t);
            if (n == 0) y = t - std::ceil(t) + 1.0L;  // T(1) as a left limit
            w /= beta_;
        }
        norm_ = 0.0L;
        for (std::size_t n = 0; n < orbit_.size(); ++n) norm_ += weight_[n] * orbit_[n];
    }

    double operator()(double x) const {
        long double s = 0.0L;
        for (std::size_t n = 0; n < orbit_.size(); ++n) {
            if (x < orbit_[n]) s += weight_[n];
        }
        return static_cast<double>(s / norm_);
    }

private:
    long double beta_;
    std::vector<long double> orbit_;
    std::vector<long double> weight_;
    long double norm_;
};

// Small hand-rolled generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    AlternateBase base(std::size_t max_p, double max_beta) {
        const std::size_t p = index(1, max_p);
        std::vector<double> betas(p);
        for (auto& b : betas) b = uniform(1.05, max_beta);
        return AlternateBase(std::move(betas));
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace altbase::testing
