#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "altbase/base.hpp"
#include "altbase/errors.hpp"
#include "altbase/numeric.hpp"

namespace altbase {

struct StepResult {
    StatePoint state;
    int digit = 0;
};

namespace detail {

inline std::string describe(const StatePoint& s) {
    return "(" + std::to_string(s.slot) + ", " + std::to_string(s.value) + ")";
}

inline void check_slot(const AlternateBase& base, const StatePoint& s) {
    if (s.slot >= base.size()) {
        throw DomainError("slot " + std::to_string(s.slot) + " outside [0, p-1]");
    }
}

}  // namespace detail

/*
 * Extended greedy transformation on {i} x [0, x_i):
 *   x in [0,1)    -> digit floor(beta_i x)
 *   x in [1, x_i) -> digit ceil(beta_i) - 1
 * and x' = beta_i x - digit in slot (i+1) mod p. Values within kSnapEps
 * outside the domain are clamped onto it.
 */
inline StepResult greedy_step(const AlternateBase& base, StatePoint s) {
    detail::check_slot(base, s);
    const double top = base.xmax(s.slot);
    double x = s.value;
    if (!(x >= -kSnapEps && x <= top + kSnapEps)) {
        throw DomainError("greedy state " + detail::describe(s) + " outside [0, x_i)");
    }
    if (x < 0.0) x = 0.0;
    if (x > top) x = top;

    const double beta = base.beta(s.slot);
    const int max_digit = base.alphabet(s.slot);
    const double scaled = beta * x;
    long long digit = x < 1.0 ? snap_floor(scaled) : max_digit;
    if (digit > max_digit) digit = max_digit;
    if (digit < 0) digit = 0;
    double next = scaled - static_cast<double>(digit);
    if (next < 0.0) next = 0.0;
    return {{(s.slot + 1) % base.size(), next}, static_cast<int>(digit)};
}

/*
 * Lazy transformation on {i} x (0, x_i]:
 *   x in (0, x_i - 1]   -> digit 0
 *   x in (x_i - 1, x_i] -> digit ceil(beta_i x - x_{i+1})
 * and x' = beta_i x - digit in slot (i+1) mod p.
 */
inline StepResult lazy_step(const AlternateBase& base, StatePoint s) {
    detail::check_slot(base, s);
    const double top = base.xmax(s.slot);
    double x = s.value;
    if (!(x > 0.0 && x <= top + kSnapEps)) {
        throw DomainError("lazy state " + detail::describe(s) + " outside (0, x_i]");
    }
    if (x > top) x = top;

    const std::size_t next_slot = (s.slot + 1) % base.size();
    const double next_top = base.xmax(next_slot);
    const double beta = base.beta(s.slot);
    const int max_digit = base.alphabet(s.slot);
    const double scaled = beta * x;
    long long digit = 0;
    if (x > top - 1.0 + kSnapEps) {
        digit = snap_ceil(scaled - next_top);
        if (digit > max_digit) digit = max_digit;
        if (digit < 0) digit = 0;
    }
    double next = scaled - static_cast<double>(digit);
    if (next > next_top) next = next_top;
    return {{next_slot, next}, static_cast<int>(digit)};
}

// First n greedy digits of x read from slot `offset`.
inline DigitWord greedy_expand(const AlternateBase& base, double x, std::size_t n, std::size_t offset = 0) {
    if (offset >= base.size()) throw DomainError("offset outside [0, p-1]");
    if (!(x >= 0.0 && x < base.xmax(offset))) {
        throw DomainError("greedy expansion needs 0 <= x < x_beta, got " + std::to_string(x));
    }
    DigitWord w{{}, offset};
    w.digits.reserve(n);
    StatePoint s{offset, x};
    for (std::size_t k = 0; k < n; ++k) {
        auto r = greedy_step(base, s);
        w.digits.push_back(r.digit);
        s = r.state;
    }
    return w;
}

// First n lazy digits of x read from slot `offset`.
inline DigitWord lazy_expand(const AlternateBase& base, double x, std::size_t n, std::size_t offset = 0) {
    if (offset >= base.size()) throw DomainError("offset outside [0, p-1]");
    if (!(x > 0.0 && x <= base.xmax(offset))) {
        throw DomainError("lazy expansion needs 0 < x <= x_beta, got " + std::to_string(x));
    }
    DigitWord w{{}, offset};
    w.digits.reserve(n);
    StatePoint s{offset, x};
    for (std::size_t k = 0; k < n; ++k) {
        auto r = lazy_step(base, s);
        w.digits.push_back(r.digit);
        s = r.state;
    }
    return w;
}

// Value of the tail 0^n followed by the all-maximal word, i.e. x_{offset+n} / (beta_offset ... beta_{offset+n-1}).
inline double max_tail(const AlternateBase& base, std::size_t n, std::size_t offset = 0) {
    const auto off = static_cast<long long>(offset);
    return base.xmax(off + static_cast<long long>(n)) / base.partial_product(off, n);
}

// sum_n a_n / (beta_offset ... beta_{offset+n}), optionally plus the all-maximal tail.
inline double evaluate(const AlternateBase& base, const DigitWord& w, bool with_max_tail = false) {
    const auto off = static_cast<long long>(w.base_offset);
    double value = 0.0;
    double denom = 1.0;
    for (std::size_t k = 0; k < w.digits.size(); ++k) {
        const long long pos = off + static_cast<long long>(k);
        const int a = w.digits[k];
        if (a < 0 || a > base.alphabet(pos)) {
            throw AlphabetError("digit " + std::to_string(a) + " at position " + std::to_string(k) +
                                " outside [0, " + std::to_string(base.alphabet(pos)) + "]");
        }
        denom *= base.beta(pos);
        value += a / denom;
    }
    if (with_max_tail) {
        value += base.xmax(off + static_cast<long long>(w.digits.size())) / denom;
    }
    return value;
}

// Greedy/lazy conjugacy (i, x) -> (i, x_i - x). It is its own inverse.
inline StatePoint phi(const AlternateBase& base, StatePoint s) {
    detail::check_slot(base, s);
    const double top = base.xmax(s.slot);
    if (!(s.value >= -kSnapEps && s.value <= top + kSnapEps)) {
        throw DomainError("state " + detail::describe(s) + " outside [0, x_i]");
    }
    return {s.slot, top - s.value};
}

// Pull-based source of Cantor base components beta_n > 1.
class CantorBaseStream {
public:
    using Generator = std::function<double(std::size_t)>;

    explicit CantorBaseStream(Generator gen) : gen_(std::move(gen)) {}

    static CantorBaseStream periodic(const AlternateBase& base) {
        return CantorBaseStream([base](std::size_t n) { return base.beta(static_cast<long long>(n)); });
    }

    double operator[](std::size_t n) const {
        const double b = gen_(n);
        if (!std::isfinite(b) || b <= 1.0) {
            throw DomainError("Cantor base component " + std::to_string(n) + " must be > 1");
        }
        return b;
    }

    std::vector<double> prefix(std::size_t n) const {
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = (*this)[k];
        return out;
    }

private:
    Generator gen_;
};

// Greedy digits a_n = floor(beta_n T_{beta_{n-1}} ... T_{beta_0}(x)) for x in [0,1).
inline DigitWord greedy_expand_cantor(const CantorBaseStream& seq, double x, std::size_t n) {
    if (!(x >= 0.0 && x < 1.0)) {
        throw DomainError("Cantor greedy expansion needs 0 <= x < 1");
    }
    DigitWord w;
    w.digits.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double beta = seq[k];
        const long long max_digit = snap_ceil(beta) - 1;
        const double scaled = beta * x;
        long long digit = snap_floor(scaled);
        if (digit > max_digit) digit = max_digit;
        x = scaled - static_cast<double>(digit);
        if (x < 0.0) x = 0.0;
        w.digits.push_back(static_cast<int>(digit));
    }
    return w;
}

}  // namespace altbase
