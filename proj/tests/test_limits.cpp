#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kcover/analytic.hpp"
#include "kcover/limits.hpp"

using namespace kcover;

namespace {

constexpr double kPi = std::numbers::pi;

DomainPair disk_pair() { return DomainPair::same(Region::disk(1.0)); }
DomainPair torus_pair(int d = 2) { return DomainPair::same(Region::torus(d, 1.0)); }
DomainPair ball_pair(int d) { return DomainPair::same(Region::ball(d, 1.0)); }
DomainPair square_pair() { return DomainPair::same(Region::square(1.0)); }
DomainPair interior_pair() {
    return DomainPair::nested(Region::disk(1.0), Region::disk(0.9));
}

double factorial(int n) { return std::tgamma(n + 1.0); }

} // namespace

TEST_CASE("setting construction and regime classification") {
    CHECK(classify_regime(torus_pair()) == Regime::torus);
    CHECK(classify_regime(disk_pair()) == Regime::smooth_boundary);
    CHECK(classify_regime(square_pair()) == Regime::polygon);
    CHECK(classify_regime(interior_pair()) == Regime::interior);

    const Setting s = make_setting(disk_pair(), 2, 1.0);
    CHECK(s.d == 2);
    CHECK(s.f0 == doctest::Approx(1.0 / kPi).epsilon(1e-14));
    CHECK(s.sigma_A == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-13));
    CHECK(s.J == 1);
    CHECK(make_setting(disk_pair(), 1, 1.0).J == 0);
    CHECK(make_setting(ball_pair(3), 1, 1.0).J == 1);
}

TEST_CASE("c_dk closed form in two dimensions") {
    for (int k = 1; k <= 6; ++k) {
        const double want = std::sqrt(kPi) / (factorial(k - 1) * std::pow(2.0, k));
        CHECK(c_dk(2, k) == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(c_dk(3, 1) == doctest::Approx(std::pow(kPi, -1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("centering constants") {
    const Centering a = centering(make_setting(interior_pair(), 1, 1.0));
    CHECK(a.c1 == 1.0);
    CHECK(a.c2 == 0.0);
    const Centering a3 = centering(make_setting(interior_pair(), 3, 1.0));
    CHECK(a3.c1 == 1.0);
    CHECK(a3.c2 == 2.0);

    const Centering b = centering(make_setting(disk_pair(), 1, 1.0));
    CHECK(b.c1 == 1.0);
    CHECK(b.c2 == 0.0);

    const Centering c = centering(make_setting(disk_pair(), 2, 1.0));
    CHECK(c.c1 == doctest::Approx(1.0));
    CHECK(c.c2 == doctest::Approx(1.0));

    const Centering d = centering(make_setting(ball_pair(3), 1, 1.0));
    CHECK(d.c1 == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(d.c2 == doctest::Approx(-4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("transform statistic") {
    const Setting s = make_setting(torus_pair(), 1, 1.0);
    const double n = 1e4;
    const double L = std::log(n);
    CHECK(transform_statistic(0.0, n, s) == doctest::Approx(-L).epsilon(1e-13));
    CHECK_THROWS_AS(transform_statistic(0.1, 2.0, s), std::invalid_argument);

    // interior k=1 inversion: n theta f0 R^d = log n + beta gives T = beta
    const double beta = 1.37;
    const double R = std::sqrt((L + beta) / (n * kPi));
    CHECK(transform_statistic(R, n, s) == doctest::Approx(beta).epsilon(1e-10));
}

TEST_CASE("r_t and the transform round trip") {
    const double t = 1e4;
    for (const int k : {1, 2, 3}) {
        for (const auto& pair :
             {torus_pair(), disk_pair(), square_pair(), interior_pair(), ball_pair(3)}) {
            const Setting s = make_setting(pair, k, 1.0);
            for (const double beta : {-2.0, 0.0, 3.0}) {
                const double r = r_t(beta, t, s);
                CHECK(transform_statistic(r, t, s) == doctest::Approx(beta).epsilon(1e-9));
            }
        }
    }

    // clamp at very negative beta
    const Setting s = make_setting(torus_pair(), 1, 1.0);
    CHECK(r_t(-1000.0, t, s) == 0.0);

    // interior closed form at t = e^10
    const double te = std::exp(10.0);
    CHECK(r_t(0.0, te, s) ==
          doctest::Approx(std::sqrt(10.0 / (te * kPi))).epsilon(1e-12));

    // boundary d=3 k=2: substitute the root back
    const Setting s3 = make_setting(ball_pair(3), 2, 1.0, 1.0);
    const double t6 = 1e6;
    const double beta = 0.7;
    const double r = r_t(beta, t6, s3);
    const double lhs = s3.f0 * t6 * s3.theta_d * std::pow(r, 3);
    const double rhs =
        (4.0 / 3.0) * std::log(t6) + (2.0 / 3.0) * std::log(std::log(t6)) + beta;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("limit cdf values") {
    const Setting interior = make_setting(interior_pair(), 1, 1.0);
    CHECK(limit_cdf(interior)(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    // interior k: Gumbel location log(tau/(k-1)!)
    const Setting interior3 = make_setting(interior_pair(), 3, 2.0);
    const CdfModel g3 = limit_cdf(interior3);
    CHECK(g3(1.0) == doctest::Approx(std::exp(-2.0 * std::exp(-1.0) / 2.0)).epsilon(1e-12));

    const Setting d2k2 = make_setting(disk_pair(), 2, 1.0);
    CHECK(limit_cdf(d2k2)(0.0) == doctest::Approx(std::exp(-(1.0 + kPi / 2.0))).epsilon(1e-12));

    // d=2, k>=3: pure scale-2 Gumbel, no interior term
    const Setting d2k3 = make_setting(disk_pair(), 3, 1.0);
    const double sig = 2.0 * std::sqrt(kPi);
    for (const double beta : {-1.0, 0.0, 2.0}) {
        const double want = std::exp(-c_dk(2, 3) * sig * std::exp(-0.5 * beta));
        CHECK(limit_cdf(d2k3)(beta) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("TCEV factorization into its two Gumbel components") {
    const Setting s = make_setting(disk_pair(), 2, 1.3);
    const CdfModel tcev = limit_cdf(s);
    const CdfModel g1 = CdfModel::gumbel(std::log(s.tau), 1.0);
    const CdfModel g2 = CdfModel::gumbel_from_log_rate(
        std::log(s.tau * std::sqrt(kPi) * s.sigma_A / 4.0), 2.0);
    for (double beta = -5.0; beta <= 10.0; beta += 0.05)
        CHECK(std::abs(tcev(beta) - g1(beta) * g2(beta)) <= 1e-12);
}

TEST_CASE("corrected cdf") {
    SUBCASE("d2k1 disk closed value at n = 1e4") {
        const Setting s = make_setting(disk_pair(), 1, 1.0, 1.0);
        const CdfModel f = corrected_cdf(s, 1e4, SampleMode::binomial);
        const double want = std::exp(-kPi / std::sqrt(std::log(1e4))) * std::exp(-1.0);
        CHECK(f(0.0) == doctest::Approx(want).epsilon(1e-12));
    }

    SUBCASE("correction lies below the limit for d2k1") {
        const Setting s = make_setting(disk_pair(), 1, 1.0, 1.0);
        const CdfModel f = corrected_cdf(s, 1e4);
        const CdfModel g = limit_cdf(s);
        for (double beta = -5.0; beta <= 10.0; beta += 0.1) CHECK(f(beta) < g(beta));
    }

    SUBCASE("torus k=1 correction vanishes") {
        const Setting s = make_setting(torus_pair(), 1, 1.0, 1.0);
        const CdfModel f = corrected_cdf(s, 1e4);
        const CdfModel g = limit_cdf(s);
        for (double beta = -3.0; beta <= 6.0; beta += 0.25)
            CHECK(f(beta) == doctest::Approx(g(beta)).epsilon(1e-14));
    }

    SUBCASE("interior d>=3 includes the refined 1/log n factor") {
        const Setting s = make_setting(
            DomainPair::nested(Region::ball(3, 1.0), Region::ball(3, 0.8)), 2, 1.0, 1.0);
        const double n = 1e4, L = std::log(n), LL = std::log(L);
        const CdfModel f = corrected_cdf(s, n);
        const double beta = 0.4, eb = std::exp(-beta);
        const double want = std::exp(-eb * (1.0 + LL / L) - eb * (1.0 + beta) / L);
        CHECK(f(beta) == doctest::Approx(want).epsilon(1e-12));
    }

    SUBCASE("converges to the limit as n grows") {
        // the d2k1 correction decays like 1/sqrt(log n), the others like
        // loglog n / log n; at n = 1e300 (the largest double-representable
        // decade) the sup distance is a few percent and still shrinking
        for (const auto& pair : {torus_pair(), disk_pair(), square_pair(), ball_pair(3)}) {
            for (const int k : {1, 2, 3}) {
                const Setting s = make_setting(pair, k, 1.0, 1.0);
                const CdfModel g = limit_cdf(s);
                double prev_sup = 2.0;
                for (const double n : {1e3, 1e6, 1e300}) {
                    const CdfModel f = corrected_cdf(s, n);
                    double sup = 0.0;
                    for (double beta = -5.0; beta <= 10.0; beta += 0.25)
                        sup = std::max(sup, std::abs(f(beta) - g(beta)));
                    CHECK((sup < prev_sup || sup == 0.0));
                    prev_sup = sup;
                }
                // d2k1 still has ~0.055 left at n = 1e300 (decay 1/sqrt(log n))
                CHECK(prev_sup <= 0.08);
            }
        }
        // where the correction vanishes identically the two laws coincide
        const Setting plain = make_setting(torus_pair(), 1, 1.0, 1.0);
        const CdfModel f = corrected_cdf(plain, 1e300);
        const CdfModel g = limit_cdf(plain);
        for (double beta = -5.0; beta <= 10.0; beta += 0.25)
            CHECK(std::abs(f(beta) - g(beta)) <= 1e-14);
    }

    SUBCASE("monotone and a valid cdf on the default grid") {
        for (const auto& pair : {torus_pair(), disk_pair(), square_pair(), ball_pair(3),
                                 ball_pair(4), interior_pair()}) {
            for (const int k : {1, 2, 3}) {
                const Setting s = make_setting(pair, k, 1.0, 1.0);
                for (const double n : {1e3, 1e4, 1e6}) {
                    const CdfModel f = corrected_cdf(s, n);
                    double prev = -1.0;
                    for (double beta = -5.0; beta <= 10.0; beta += 0.05) {
                        const double v = f(beta);
                        CHECK(v >= 0.0);
                        CHECK(v <= 1.0);
                        CHECK(v >= prev - 1e-15);
                        prev = v;
                    }
                }
            }
        }
    }

    SUBCASE("rejects tiny n") {
        const Setting s = make_setting(disk_pair(), 1, 1.0, 1.0);
        CHECK_THROWS_AS(corrected_cdf(s, 10.0), std::invalid_argument);
    }
}

TEST_CASE("median") {
    const CdfModel g = CdfModel::gumbel(0.7, 2.0);
    CHECK(g.median() == doctest::Approx(0.7 - 2.0 * std::log(std::log(2.0))).epsilon(1e-12));
    CHECK(CdfModel::gumbel(0.0, 1.0).median() ==
          doctest::Approx(0.3665129205816643).epsilon(1e-10));

    const Setting s = make_setting(disk_pair(), 1, 1.0, 1.0);
    const CdfModel f = corrected_cdf(s, 1e4);
    const double m = median_shift(f);
    CHECK(f(m) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("regime table is complete for d in 2..5, k in 1..5") {
    for (int d = 2; d <= 5; ++d) {
        std::vector<DomainPair> pairs = {torus_pair(d), ball_pair(d)};
        if (d == 2) {
            pairs.push_back(square_pair());
            pairs.push_back(disk_pair());
        }
        pairs.push_back(DomainPair::nested(Region::ball(d, 1.0), Region::ball(d, 0.7)));
        for (const auto& pair : pairs) {
            for (int k = 1; k <= 5; ++k) {
                const Setting s = make_setting(pair, k, 1.0, 1.0);
                const Centering c = centering(s);
                CHECK(std::isfinite(c.c1));
                const CdfModel lim = limit_cdf(s);
                const CdfModel cor = corrected_cdf(s, 1e4);
                CHECK(lim(-40.0) <= 1e-6);
                CHECK(lim(60.0) >= 1.0 - 1e-6);
                CHECK(cor(60.0) >= 1.0 - 1e-2);
                double prev = -1.0;
                for (double beta = -6.0; beta <= 12.0; beta += 0.5) {
                    CHECK(lim(beta) >= prev);
                    prev = lim(beta);
                }
            }
        }
    }
}

TEST_CASE("empirical model") {
    const CdfModel e = CdfModel::empirical({1.0, 2.0, 3.0, 4.0});
    CHECK(e(0.5) == 0.0);
    CHECK(e(1.0) == doctest::Approx(0.25));
    CHECK(e(2.5) == doctest::Approx(0.5));
    CHECK(e(9.0) == 1.0);
}

TEST_CASE("corrected cdf equals exp(-tau * expansion) where the retained terms coincide") {
    // the finite-n law and the closed-form expectation expansion keep the
    // same terms except in two places: the planar k=2 law drops the bulk
    // loglog/log factor, and the planar interior law drops the (1+beta)/log
    // term; everywhere else the composition is exact
    const double n = 1e4;
    struct Case {
        DomainPair pair;
        int k;
        bool exact;
    };
    const Case cases[] = {
        {disk_pair(), 1, true},
        {disk_pair(), 3, true},
        {ball_pair(3), 1, true},
        {ball_pair(3), 2, true},
        {DomainPair::nested(Region::ball(3, 1.0), Region::ball(3, 0.8)), 2, true},
        {disk_pair(), 2, false},
        {interior_pair(), 2, false},
    };
    for (const auto& c : cases) {
        const Setting s = make_setting(c.pair, c.k, 1.0, 1.0);
        const CdfModel f = corrected_cdf(s, n, SampleMode::binomial);
        const double L = std::log(n);
        for (double beta = -2.0; beta <= 6.0; beta += 0.5) {
            const double composed = std::exp(-s.tau_n * moat_bulk_expansion(s, n, beta));
            if (c.exact) {
                CHECK(f(beta) == doctest::Approx(composed).epsilon(1e-12));
            } else {
                // they differ by a multiplicative exp(O(loglog n / log n)) factor
                const double ratio = f(beta) > 0 && composed > 0 ? f(beta) / composed : 1.0;
                CHECK(std::abs(std::log(ratio)) <=
                      std::exp(-beta) * (3.0 * std::log(L) + std::abs(1.0 + beta)) / L + 1e-12);
            }
        }
    }
}
