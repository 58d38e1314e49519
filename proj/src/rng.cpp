#include "kcover/rng.hpp"

#include <stdexcept>

namespace kcover {

namespace {

double log_factorial(std::uint64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

} // namespace

std::uint64_t Rng::poisson(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("poisson: mean must be positive");

    if (mean < 30.0) {
        // Inversion by sequential search.
        const double p0 = std::exp(-mean);
        double p = p0;
        double cum = p0;
        const double u = uniform();
        std::uint64_t n = 0;
        while (u > cum) {
            ++n;
            p *= mean / static_cast<double>(n);
            cum += p;
            if (n > 2000) break; // cum has saturated to 1 in double precision
        }
        return n;
    }

    // PTRS: W. Hormann, "The transformed rejection method for generating
    // Poisson random variables" (1993).
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);

    for (;;) {
        double u = uniform() - 0.5;
        double v = uniform_pos();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (kf < 0.0) continue;
        const std::uint64_t k = static_cast<std::uint64_t>(kf);
        if (us >= 0.07 && v <= v_r) return k;
        if (us < 0.013 && v > us) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = -mean + kf * log_mean - log_factorial(k);
        if (lhs <= rhs) return k;
    }
}

} // namespace kcover
