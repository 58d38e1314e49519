#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "kcover/sampler.hpp"

using namespace kcover;

TEST_CASE("binomial sampling basics") {
    const DomainPair pair = DomainPair::same(Region::square(1.0));

    SUBCASE("exact counts and determinism") {
        const ProcessPair a = sample_binomial(pair, 3, 2, 42);
        const ProcessPair b = sample_binomial(pair, 3, 2, 42);
        CHECK(a.x_count() == 3);
        CHECK(a.y_count() == 2);
        CHECK(a.xs == b.xs);
        CHECK(a.ys == b.ys);
        const ProcessPair c = sample_binomial(pair, 3, 2, 43);
        CHECK(a.xs != c.xs);
    }

    SUBCASE("rejects empty samples") {
        CHECK_THROWS_AS(sample_binomial(pair, 0, 2, 1), std::invalid_argument);
        CHECK_THROWS_AS(sample_binomial(pair, 2, 0, 1), std::invalid_argument);
    }

    SUBCASE("containment in a nested pair") {
        const DomainPair nested = DomainPair::nested(Region::disk(1.0), Region::disk(0.9));
        const ProcessPair p = sample_binomial(nested, 10000, 10000, 7);
        for (std::size_t i = 0; i < p.y_count(); ++i) {
            const double nx = p.ys[2 * i], ny = p.ys[2 * i + 1];
            CHECK(nx * nx + ny * ny <= 0.81 + 1e-15);
        }
        for (std::size_t i = 0; i < p.x_count(); ++i) {
            const double nx = p.xs[2 * i], ny = p.xs[2 * i + 1];
            CHECK(nx * nx + ny * ny <= 1.0 + 1e-15);
        }
    }

    SUBCASE("left-half count is binomial(n, 1/2)") {
        const int seeds = 1000, n = 100;
        double total = 0;
        for (int s = 0; s < seeds; ++s) {
            const ProcessPair p = sample_binomial(pair, n, 1, 1000 + s);
            int left = 0;
            for (std::size_t i = 0; i < p.x_count(); ++i)
                if (p.xs[2 * i] < 0.5) ++left;
            total += left;
        }
        const double mean = total / seeds;
        const double se = std::sqrt(n * 0.25 / seeds);
        CHECK(std::abs(mean - 50.0) <= 3.0 * se);
    }
}

TEST_CASE("poisson sampling") {
    const DomainPair pair = DomainPair::same(Region::square(1.0));

    SUBCASE("rejects nonpositive intensity") {
        CHECK_THROWS_AS(sample_poisson(pair, 0.0, 1.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(sample_poisson(pair, 1.0, -2.0, 1), std::invalid_argument);
    }

    SUBCASE("count moments at t = 50") {
        const int seeds = 10000;
        double sum = 0, sum2 = 0, sum_y = 0, cross = 0;
        for (int s = 0; s < seeds; ++s) {
            const ProcessPair p = sample_poisson(pair, 50.0, 50.0, 555 + s);
            const double nx = static_cast<double>(p.x_count());
            const double ny = static_cast<double>(p.y_count());
            sum += nx;
            sum2 += nx * nx;
            sum_y += ny;
            cross += nx * ny;
        }
        const double mean = sum / seeds;
        const double var = sum2 / seeds - mean * mean;
        CHECK(std::abs(mean - 50.0) <= 3.0 * std::sqrt(50.0 / seeds));
        // sd of the sample variance of Poisson(50) is ~ sqrt((2*50^2 + 50)/N)
        CHECK(std::abs(var - 50.0) <= 3.0 * std::sqrt((2 * 2500.0 + 50) / seeds));
        // independence surrogate between |xs| and |ys|
        const double mean_y = sum_y / seeds;
        const double cov = cross / seeds - mean * mean_y;
        const double corr = cov / 50.0; // var of each is 50
        CHECK(std::abs(corr) <= 0.03);
    }

    SUBCASE("thinning: counts in a half-volume subregion are Poisson(t/2)") {
        const int seeds = 4000;
        const double lambda = 10.0; // t = 20, S = left half
        std::vector<int> hist(31, 0);
        for (int s = 0; s < seeds; ++s) {
            const ProcessPair p = sample_poisson(pair, 20.0, 1.0, 9000 + s);
            int in_s = 0;
            for (std::size_t i = 0; i < p.x_count(); ++i)
                if (p.xs[2 * i] < 0.5) ++in_s;
            ++hist[std::min<int>(in_s, 30)];
        }
        // chi-square against the Poisson(10) pmf with tail bins merged
        double chi2 = 0.0;
        int df = 0;
        double tail_expected = seeds, tail_observed = seeds;
        for (int j = 0; j <= 20; ++j) {
            const double pj = std::exp(-lambda + j * std::log(lambda) - std::lgamma(j + 1.0));
            const double expected = seeds * pj;
            if (expected < 5.0) continue;
            chi2 += (hist[j] - expected) * (hist[j] - expected) / expected;
            ++df;
            tail_expected -= expected;
            tail_observed -= hist[j];
        }
        chi2 += (tail_observed - tail_expected) * (tail_observed - tail_expected) /
                std::max(tail_expected, 1e-9);
        // df bins + tail - 1; Wilson-Hilferty critical value at 1e-3
        const double k = df;
        const double crit =
            k * std::pow(1.0 - 2.0 / (9 * k) + 3.0902 * std::sqrt(2.0 / (9 * k)), 3.0);
        CHECK(chi2 <= crit);
    }
}

TEST_CASE("replicate streams are uncorrelated") {
    Rng probe(0);
    const int streams = 10000;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < streams; ++i) {
        Rng a(mix_seed(321, static_cast<std::uint64_t>(i)));
        Rng b(mix_seed(321, static_cast<std::uint64_t>(i) + 1));
        const double u = a.uniform(), v = b.uniform();
        sx += u;
        sy += v;
        sxy += u * v;
        sxx += u * u;
        syy += v * v;
    }
    const double n = streams;
    const double corr = (sxy / n - sx / n * sy / n) /
                        std::sqrt((sxx / n - sx / n * sx / n) * (syy / n - sy / n * sy / n));
    CHECK(std::abs(corr) <= 0.03);
}

TEST_CASE("poisson count generator moments across the PTRS boundary") {
    for (const double mean : {5.0, 29.5, 30.5, 200.0, 5000.0}) {
        Rng rng(888);
        const int n = 20000;
        double s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            const double v = static_cast<double>(rng.poisson(mean));
            s += v;
            s2 += v * v;
        }
        const double m = s / n;
        const double var = s2 / n - m * m;
        CHECK(std::abs(m - mean) <= 4.0 * std::sqrt(mean / n));
        CHECK(std::abs(var - mean) <= 4.0 * std::sqrt((2 * mean * mean + mean) / n));
    }
}
