#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "altbase/errors.hpp"
#include "altbase/numeric.hpp"

namespace altbase {

/*
 * An alternate base (beta_0, ..., beta_{p-1}), every beta_i > 1, applied
 * cyclically: position n of a digit word uses beta_{n mod p}.
 *
 * Cached on construction:
 *   product   B = beta_{p-1} ... beta_0
 *   alphabet  m_i = ceil(beta_i) - 1, the largest digit of slot i
 *   xmax      x_i = sum_{n>=0} m_{i+n} / (beta_i ... beta_{i+n}), the value of the
 *             all-maximal digit word read from slot i. Closed form:
 *             x_i = (sum_k m_{i+k} beta_{i+p-1} ... beta_{i+k+1}) / (B - 1),
 *             which satisfies x_i * beta_i - m_i = x_{i+1}.
 */
class AlternateBase {
public:
    explicit AlternateBase(std::vector<double> betas) : betas_(std::move(betas)) {
        if (betas_.empty()) {
            throw DomainError("alternate base must have at least one component");
        }
        for (std::size_t i = 0; i < betas_.size(); ++i) {
            if (!std::isfinite(betas_[i]) || betas_[i] <= 1.0) {
                throw DomainError("base component " + std::to_string(i) + " must be a finite real > 1");
            }
        }
        const std::size_t p = betas_.size();
        product_ = 1.0;
        for (double b : betas_) product_ *= b;
        alphabets_.resize(p);
        for (std::size_t i = 0; i < p; ++i) {
            alphabets_[i] = static_cast<int>(snap_ceil(betas_[i]) - 1);
        }
        xmax_.resize(p);
        for (std::size_t i = 0; i < p; ++i) {
            // Horner over the block of p digits starting at slot i.
            double num = 0.0;
            for (std::size_t k = 0; k < p; ++k) {
                num = num * betas_[(i + k) % p] + alphabets_[(i + k) % p];
            }
            xmax_[i] = num / (product_ - 1.0);
        }
    }

    std::size_t size() const noexcept { return betas_.size(); }
    double product() const noexcept { return product_; }

    double beta(long long n) const { return betas_[wrap_index(n, size())]; }
    int alphabet(long long n) const { return alphabets_[wrap_index(n, size())]; }
    double xmax(long long n) const { return xmax_[wrap_index(n, size())]; }

    std::span<const double> betas() const noexcept { return betas_; }
    std::span<const int> alphabets() const noexcept { return alphabets_; }
    std::span<const double> xmaxes() const noexcept { return xmax_; }

    int max_alphabet() const noexcept {
        int m = 0;
        for (int a : alphabets_) m = a > m ? a : m;
        return m;
    }

    // Product beta_{offset} * ... * beta_{offset+n-1}.
    double partial_product(long long offset, std::size_t n) const {
        double r = 1.0;
        for (std::size_t k = 0; k < n; ++k) r *= beta(offset + static_cast<long long>(k));
        return r;
    }

    bool operator==(const AlternateBase& other) const { return betas_ == other.betas_; }

private:
    std::vector<double> betas_;
    double product_ = 1.0;
    std::vector<int> alphabets_;
    std::vector<double> xmax_;
};

inline AlternateBase new_base(std::vector<double> betas) { return AlternateBase(std::move(betas)); }

// The rotation beta^{(n)} = (beta_n, ..., beta_{n+p-1}); n is reduced mod p.
inline AlternateBase shift_base(const AlternateBase& base, long long n) {
    const std::size_t p = base.size();
    std::vector<double> rotated(p);
    for (std::size_t k = 0; k < p; ++k) rotated[k] = base.beta(n + static_cast<long long>(k));
    return AlternateBase(std::move(rotated));
}

// A point (i, x) of the phase space, the disjoint union of {i} x [0, x_i).
struct StatePoint {
    std::size_t slot = 0;
    double value = 0.0;
};

// Finite digit word a_0 ... a_{n-1}; digit n is read in slot base_offset + n.
struct DigitWord {
    std::vector<int> digits;
    std::size_t base_offset = 0;

    bool operator==(const DigitWord&) const = default;

    std::string to_string() const {
        bool wide = false;
        for (int d : digits) wide = wide || d > 9;
        std::string s;
        for (std::size_t k = 0; k < digits.size(); ++k) {
            if (wide && k > 0) s += ',';
            s += std::to_string(digits[k]);
        }
        return s;
    }
};

}  // namespace altbase
