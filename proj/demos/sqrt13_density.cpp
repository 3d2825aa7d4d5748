// Invariant density of the alternate base ((1+sqrt(13))/2, (5+sqrt(13))/6).

#include <cmath>
#include <cstdio>

#include "altbase/altbase.hpp"

int main() {
    const double s = std::sqrt(13.0);
    const altbase::AlternateBase base({(1.0 + s) / 2.0, (5.0 + s) / 6.0});

    const auto digits = altbase::greedy_expand(base, (1.0 + std::sqrt(5.0)) / 5.0, 12);
    std::printf("greedy digits of (1+sqrt5)/5: %s\n", digits.to_string().c_str());

    const altbase::InvariantMeasure mu(base);
    for (std::size_t i = 0; i < base.size(); ++i) {
        const auto& spec = mu.slot(i);
        std::printf("slot %zu: K=%zu C=%.12f\n", i, spec.K, spec.C);
        for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) std::printf("  h(%.1f) = %.12f\n", x, altbase::density_eval(spec, x));
    }
    std::printf("mu_0([0, 1/beta_0)) = %.12f\n", altbase::measure_interval(mu.slot(0), 0.0, 1.0 / base.beta(0)));
    for (int d = 0; d <= base.max_alphabet(); ++d) std::printf("freq(%d) = %.12f\n", d, altbase::frequency(mu, d));
    std::printf("entropy = %.12f\n", altbase::entropy(base));
}
