#pragma once

// Brute-force and statistical oracles. Nothing in here goes through the
// transformations' digit rules: tuple searches work directly on the value
// sums and the ergodic estimators only count what the orbit produces.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "altbase/base.hpp"
#include "altbase/errors.hpp"
#include "altbase/transform.hpp"

namespace altbase::oracle {

inline constexpr double kMaxEnumeration = 1e7;
// Slack on value comparisons; keeps boundary ties on the side the transformations pick.
inline constexpr double kValueTol = 1e-13;

struct TupleSearchResult {
    std::vector<int> tuple;
    double value = 0.0;
};

// Number of tuples in prod_{k<n} [0, m_{offset+k}], capped at a bit above the bound.
inline double tuple_count(const AlternateBase& base, std::size_t n, std::size_t offset = 0) {
    double count = 1.0;
    for (std::size_t k = 0; k < n && count <= kMaxEnumeration * 10; ++k) {
        count *= base.alphabet(static_cast<long long>(offset + k)) + 1;
    }
    return count;
}

namespace detail {

inline void check_bound(const AlternateBase& base, std::size_t n, std::size_t offset) {
    if (tuple_count(base, n, offset) > kMaxEnumeration) {
        throw SearchTooLarge("tuple enumeration exceeds 1e7 candidates");
    }
}

// weights[k] = 1 / (beta_offset ... beta_{offset+k})
inline std::vector<double> weights(const AlternateBase& base, std::size_t n, std::size_t offset) {
    std::vector<double> w(n);
    double denom = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        denom *= base.beta(static_cast<long long>(offset + k));
        w[k] = 1.0 / denom;
    }
    return w;
}

// tails[k] = value of the all-maximal word from position k on.
inline std::vector<double> max_tails(const AlternateBase& base, std::size_t n, std::size_t offset) {
    std::vector<double> t(n + 1);
    double denom = 1.0;
    for (std::size_t k = 0; k <= n; ++k) {
        t[k] = base.xmax(static_cast<long long>(offset + k)) / denom;
        if (k < n) denom *= base.beta(static_cast<long long>(offset + k));
    }
    return t;
}

struct Search {
    const AlternateBase& base;
    std::size_t offset;
    std::size_t n;
    double x;
    std::vector<double> w;
    std::vector<double> tail;
    std::vector<int> cur;

    bool greatest(std::size_t k, double v) {
        if (k == n) return true;
        for (int c = base.alphabet(static_cast<long long>(offset + k)); c >= 0; --c) {
            const double nv = v + c * w[k];
            // Smallest completion appends zeros.
            if (nv > x + kValueTol) continue;
            cur[k] = c;
            if (greatest(k + 1, nv)) return true;
        }
        return false;
    }

    bool least(std::size_t k, double v) {
        if (k == n) return true;
        const int top = base.alphabet(static_cast<long long>(offset + k));
        for (int c = 0; c <= top; ++c) {
            const double nv = v + c * w[k];
            // Largest completion appends the all-maximal tail.
            if (nv + tail[k + 1] < x - kValueTol) continue;
            cur[k] = c;
            if (least(k + 1, nv)) return true;
        }
        return false;
    }
};

inline double tuple_value(const std::vector<int>& c, const std::vector<double>& w) {
    double v = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * w[k];
    return v;
}

// Advances c to the lexicographic successor; false after the last tuple.
inline bool next_tuple(const AlternateBase& base, std::size_t offset, std::vector<int>& c) {
    for (std::size_t k = c.size(); k-- > 0;) {
        if (c[k] < base.alphabet(static_cast<long long>(offset + k))) {
            ++c[k];
            return true;
        }
        c[k] = 0;
    }
    return false;
}

}  // namespace detail

// Lexicographically greatest n-tuple with value <= x (descending search, prefix pruning).
inline TupleSearchResult lex_greatest(const AlternateBase& base, double x, std::size_t n, std::size_t offset = 0) {
    if (!(x >= 0.0 && x < base.xmax(offset))) throw DomainError("lex_greatest needs 0 <= x < x_beta");
    detail::check_bound(base, n, offset);
    detail::Search s{base, offset, n, x, detail::weights(base, n, offset), {}, std::vector<int>(n, 0)};
    s.greatest(0, 0.0);
    return {s.cur, detail::tuple_value(s.cur, s.w)};
}

// Lexicographically least n-tuple with value + all-maximal tail >= x.
inline TupleSearchResult lex_least(const AlternateBase& base, double x, std::size_t n, std::size_t offset = 0) {
    if (!(x > 0.0 && x <= base.xmax(offset))) throw DomainError("lex_least needs 0 < x <= x_beta");
    detail::check_bound(base, n, offset);
    detail::Search s{base, offset, n, x, detail::weights(base, n, offset), detail::max_tails(base, n, offset),
                     std::vector<int>(n, 0)};
    s.least(0, 0.0);
    return {s.cur, detail::tuple_value(s.cur, s.w)};
}

// Full enumeration without pruning; used to cross-check the pruned searches.
inline TupleSearchResult lex_greatest_naive(const AlternateBase& base, double x, std::size_t n,
                                            std::size_t offset = 0) {
    detail::check_bound(base, n, offset);
    const auto w = detail::weights(base, n, offset);
    std::vector<int> c(n, 0);
    TupleSearchResult best{c, 0.0};
    do {
        const double v = detail::tuple_value(c, w);
        if (v <= x + kValueTol) best = {c, v};
    } while (detail::next_tuple(base, offset, c));
    return best;
}

inline TupleSearchResult lex_least_naive(const AlternateBase& base, double x, std::size_t n,
                                         std::size_t offset = 0) {
    detail::check_bound(base, n, offset);
    const auto w = detail::weights(base, n, offset);
    const double tail = detail::max_tails(base, n, offset)[n];
    std::vector<int> c(n, 0);
    do {
        const double v = detail::tuple_value(c, w);
        if (v + tail >= x - kValueTol) return {c, v};
    } while (detail::next_tuple(base, offset, c));
    throw DomainError("no admissible tuple; x exceeds x_beta");
}

// ---------------------------------------------------------------------------
// Ergodic averages.
//
// Random numbers come from std::mt19937_64 (the standard 64-bit Mersenne
// Twister, algorithm id "mt19937_64") mapped to doubles as (u >> 11) * 2^-53,
// so runs are bit-reproducible on any conforming implementation.
//
// Floating-point orbits of maps whose multiplications are exact (integer
// bases) shed one significand bit per doubling and collapse onto 0 after ~53
// steps; their last few points sit on coarse dyadic grids. Once the orbit of a
// non-zero start becomes a multiple of 2^-30 (including 0) it is restarted from
// a fresh uniform point of [0,1); `restarts` records how often that happened.
// ---------------------------------------------------------------------------

inline constexpr const char* kRngAlgorithm = "mt19937_64";

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// sqrt(2) - 1: the recommended generic start for ergodic averages.
inline constexpr double kDefaultStart = 0.41421356237309504880;

struct EmpiricalStats {
    std::vector<std::uint64_t> counts;
    std::uint64_t iterations = 0;
    std::uint64_t seed = 0;
    StatePoint start;
    std::uint64_t restarts = 0;

    std::vector<double> normalized() const {
        std::vector<double> out(counts.size(), 0.0);
        if (iterations == 0) return out;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            out[k] = static_cast<double>(counts[k]) / static_cast<double>(iterations);
        }
        return out;
    }
};

// Pools two runs with the same binning (e.g. over disjoint sub-seeds).
inline EmpiricalStats merge(const EmpiricalStats& a, const EmpiricalStats& b) {
    if (a.counts.size() != b.counts.size()) throw DomainError("cannot merge histograms with different binning");
    EmpiricalStats out = a;
    for (std::size_t k = 0; k < out.counts.size(); ++k) out.counts[k] += b.counts[k];
    out.iterations += b.iterations;
    out.restarts += b.restarts;
    return out;
}

namespace detail {

class Orbit {
public:
    Orbit(const AlternateBase& base, double x0, std::uint64_t seed) : base_(base), rng_(seed), state_{0, x0} {
        if (!(x0 >= 0.0 && x0 < 1.0)) throw DomainError("ergodic start must lie in [0,1)");
        restartable_ = x0 != 0.0;
    }

    StepResult step() {
        auto r = greedy_step(base_, state_);
        state_ = r.state;
        if (restartable_ && exhausted(state_.value)) {
            state_.value = rng_.uniform();
            ++restarts_;
        }
        return r;
    }

    const StatePoint& state() const { return state_; }
    std::uint64_t restarts() const { return restarts_; }

private:
    static bool exhausted(double v) {
        const double scaled = v * 0x1.0p30;
        return scaled == std::floor(scaled);
    }

    const AlternateBase& base_;
    Rng rng_;
    StatePoint state_;
    bool restartable_ = true;
    std::uint64_t restarts_ = 0;
};

inline double resolve_start(std::optional<double> x0, std::uint64_t seed) {
    if (x0) return *x0;
    // Draw from an independent stream so restarts do not replay the start.
    Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);
    return rng.uniform();
}

}  // namespace detail

// Counts of every digit 0..max alphabet over the first N greedy digits of (0, x0).
// A missing x0 is drawn uniformly from the seeded generator.
inline EmpiricalStats digit_counts(const AlternateBase& base, std::optional<double> x0, std::uint64_t N,
                                   std::uint64_t seed) {
    const double start = detail::resolve_start(x0, seed);
    detail::Orbit orbit(base, start, seed);
    EmpiricalStats stats;
    stats.counts.assign(static_cast<std::size_t>(base.max_alphabet()) + 1, 0);
    stats.iterations = N;
    stats.seed = seed;
    stats.start = {0, start};
    for (std::uint64_t k = 0; k < N; ++k) ++stats.counts[static_cast<std::size_t>(orbit.step().digit)];
    stats.restarts = orbit.restarts();
    return stats;
}

// (1/N) #{k < N : a_k = digit} along the greedy orbit of (0, x0).
inline double birkhoff_frequency(const AlternateBase& base, std::optional<double> x0, int digit, std::uint64_t N,
                                 std::uint64_t seed) {
    if (N == 0) throw DomainError("birkhoff_frequency needs N >= 1");
    if (digit < 0 || digit > base.max_alphabet()) {
        // Still validate the start point.
        const double start = detail::resolve_start(x0, seed);
        if (!(start >= 0.0 && start < 1.0)) throw DomainError("ergodic start must lie in [0,1)");
        return 0.0;
    }
    const auto stats = digit_counts(base, x0, N, seed);
    return static_cast<double>(stats.counts[static_cast<std::size_t>(digit)]) / static_cast<double>(N);
}

// Histogram over `bins` uniform bins of [0,1) of the points pi_2(T^{kp+slot}(0, x0)), k < N.
inline EmpiricalStats empirical_histogram(const AlternateBase& base, std::size_t slot, std::optional<double> x0,
                                          std::uint64_t N, std::size_t bins, std::uint64_t seed = 0) {
    if (slot >= base.size()) throw DomainError("slot outside [0, p-1]");
    if (bins == 0) throw DomainError("histogram needs at least one bin");
    const double start = detail::resolve_start(x0, seed);
    detail::Orbit orbit(base, start, seed);
    EmpiricalStats stats;
    stats.counts.assign(bins, 0);
    stats.seed = seed;
    stats.start = {0, start};
    if (N == 0) return stats;
    for (std::size_t k = 0; k < slot; ++k) orbit.step();
    for (std::uint64_t k = 0; k < N; ++k) {
        auto bin = static_cast<std::size_t>(orbit.state().value * static_cast<double>(bins));
        if (bin >= bins) bin = bins - 1;
        ++stats.counts[bin];
        for (std::size_t j = 0; j < base.size(); ++j) orbit.step();
    }
    stats.iterations = N;
    stats.restarts = orbit.restarts();
    return stats;
}

}  // namespace altbase::oracle
