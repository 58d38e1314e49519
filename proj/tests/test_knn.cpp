#include <doctest.h>

#include <cmath>
#include <limits>

#include "kcover/knn.hpp"
#include "oracles.hpp"

using namespace kcover;

namespace {

ProcessPair manual_pair(std::vector<double> xs, std::vector<double> ys, int dim) {
    ProcessPair p;
    p.xs = std::move(xs);
    p.ys = std::move(ys);
    p.dim = dim;
    return p;
}

std::vector<double> random_points(const Region& reg, std::size_t n, Rng& rng) {
    const std::size_t d = static_cast<std::size_t>(reg.dim());
    std::vector<double> pts(n * d);
    for (std::size_t i = 0; i < n; ++i) reg.sample_uniform(rng, {pts.data() + i * d, d});
    return pts;
}

} // namespace

TEST_CASE("index basics") {
    const Region sq = Region::square(1.0);
    const SpatialIndex one(std::vector<double>{0.5, 0.5}, sq);
    CHECK(one.point_count() == 1);
    CHECK(one.kth_nearest_distance(std::vector{0.5, 0.9}, 1) ==
          doctest::Approx(0.4).epsilon(1e-13));
    CHECK_THROWS_AS(one.kth_nearest_distance(std::vector{0.5, 0.9}, 2), std::invalid_argument);
    CHECK_THROWS_AS(SpatialIndex(std::vector<double>{}, sq), std::invalid_argument);

    const Region torus = Region::torus(2, 1.0);
    const SpatialIndex wrapped(std::vector<double>{0.05, 0.5, 0.95, 0.5}, torus);
    CHECK(wrapped.kth_nearest_distance(std::vector{0.05, 0.5}, 2) ==
          doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("two-point worked examples") {
    const Region sq = Region::square(1.0);
    const SpatialIndex idx(std::vector<double>{0.0, 0.0, 1.0, 0.0}, sq);
    CHECK(idx.kth_nearest_distance(std::vector{0.2, 0.0}, 1) == doctest::Approx(0.2));
    CHECK(idx.kth_nearest_distance(std::vector{0.2, 0.0}, 2) == doctest::Approx(0.8));
}

TEST_CASE("exact agreement with brute force") {
    Rng rng(314);
    const Region regions[] = {Region::square(1.0), Region::disk(1.0), Region::torus(2, 1.0),
                              Region::ball(3, 1.0),
                              Region::polygon({{0, 0}, {1.3, 0.1}, {0.9, 1.1}, {0.05, 0.6}})};
    for (const Region& reg : regions) {
        const bool wrap = reg.kind() == RegionKind::torus;
        const double side = wrap ? reg.side() : 0.0;
        const int d = reg.dim();
        const std::vector<double> pts = random_points(reg, 1000, rng);
        const SpatialIndex idx(pts, reg);
        std::vector<double> q(static_cast<std::size_t>(d));
        for (int it = 0; it < 100; ++it) {
            reg.sample_uniform(rng, q);
            for (const std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{5}}) {
                const double got = idx.kth_nearest_distance(q, k);
                const double want = oracle::brute_kth(pts, d, q, k, wrap, side);
                CHECK(got == want); // bit-exact: same metric arithmetic
            }
        }
    }
}

TEST_CASE("count_in_ball") {
    Rng rng(2718);
    const Region torus = Region::torus(2, 1.0);
    const std::vector<double> pts = random_points(torus, 500, rng);
    const SpatialIndex idx(pts, torus);
    std::vector<double> q(2);
    torus.sample_uniform(rng, q);
    CHECK(idx.count_in_ball(q, 0.0) == 0);
    CHECK(idx.count_in_ball(q, 1.0) == 500); // wrap diameter is sqrt(2)/2
    for (int it = 0; it < 50; ++it) {
        torus.sample_uniform(rng, q);
        const double r = rng.uniform() * 0.4;
        CHECK(idx.count_in_ball(q, r) == oracle::brute_count_in_ball(pts, 2, q, r, true, 1.0));
    }
    const Region disk = Region::disk(1.0);
    const std::vector<double> dpts = random_points(disk, 400, rng);
    const SpatialIndex didx(dpts, disk);
    for (int it = 0; it < 50; ++it) {
        disk.sample_uniform(rng, q);
        const double r = rng.uniform() * 1.2;
        CHECK(didx.count_in_ball(q, r) == oracle::brute_count_in_ball(dpts, 2, q, r));
    }
}

TEST_CASE("coverage threshold") {
    const Region sq = Region::square(1.0);

    SUBCASE("worked examples") {
        CHECK(coverage_threshold(manual_pair({0.0, 0.0}, {0.3, 0.4}, 2), sq, 1) ==
              doctest::Approx(0.5).epsilon(1e-13));
        // every Y coincides with an X
        CHECK(coverage_threshold(manual_pair({0.1, 0.2, 0.7, 0.9}, {0.7, 0.9, 0.1, 0.2}, 2),
                                 sq, 1) == 0.0);
        // conventions
        CHECK(coverage_threshold(manual_pair({0.1, 0.2}, {0.5, 0.5}, 2), sq, 5) ==
              std::numeric_limits<double>::infinity());
        CHECK(coverage_threshold(manual_pair({0.1, 0.2}, {}, 2), sq, 1) == 0.0);
    }

    SUBCASE("random instances match brute force") {
        Rng rng(31);
        const DomainPair pair = DomainPair::same(sq);
        for (int it = 0; it < 20; ++it) {
            const ProcessPair p = sample_binomial(pair, 200, 200, 5000 + it);
            const double got = coverage_threshold(p, sq, 2);
            const double want = oracle::brute_coverage(p.xs, p.ys, 2, 2);
            CHECK(got == want);
        }
    }

    SUBCASE("monotone in k, antitone in n") {
        Rng rng(32);
        const DomainPair pair = DomainPair::same(sq);
        for (int it = 0; it < 50; ++it) {
            ProcessPair p = sample_binomial(pair, 120, 60, 7000 + it);
            double prev = 0.0;
            for (std::size_t k = 1; k <= 5; ++k) {
                const double v = coverage_threshold(p, sq, k);
                CHECK(v >= prev);
                prev = v;
            }
            // adding X-points never increases the threshold
            const double before = coverage_threshold(p, sq, 2);
            ProcessPair bigger = p;
            std::vector<double> extra(2);
            for (int e = 0; e < 40; ++e) {
                sq.sample_uniform(rng, extra);
                bigger.xs.insert(bigger.xs.end(), extra.begin(), extra.end());
            }
            CHECK(coverage_threshold(bigger, sq, 2) <= before);
        }
    }

    SUBCASE("scale equivariance") {
        const double lambda = 2.5;
        const DomainPair pair = DomainPair::same(Region::disk(1.0));
        const ProcessPair p = sample_binomial(pair, 300, 150, 99);
        ProcessPair scaled = p;
        for (double& v : scaled.xs) v *= lambda;
        for (double& v : scaled.ys) v *= lambda;
        const double base = coverage_threshold(p, Region::disk(1.0), 3);
        const double big = coverage_threshold(scaled, Region::disk(lambda), 3);
        CHECK(big == doctest::Approx(lambda * base).epsilon(1e-12));
    }

    SUBCASE("definition consistency via count_in_ball") {
        const DomainPair pair = DomainPair::same(Region::torus(2, 1.0));
        const Region torus = Region::torus(2, 1.0);
        const ProcessPair p = sample_binomial(pair, 400, 200, 1234);
        const std::size_t k = 3;
        const double R = coverage_threshold(p, torus, k);
        const SpatialIndex idx(p.xs, torus);
        bool witness = false;
        for (std::size_t j = 0; j < p.y_count(); ++j) {
            const std::span<const double> y{p.ys.data() + 2 * j, 2};
            CHECK(idx.count_in_ball(y, R) >= k);
            if (idx.count_in_ball(y, R * (1.0 - 1e-9)) < k) witness = true;
        }
        CHECK(witness);
    }
}

TEST_CASE("cell size override does not change answers") {
    Rng rng(77);
    const Region sq = Region::square(1.0);
    const std::vector<double> pts = random_points(sq, 300, rng);
    const SpatialIndex coarse(pts, sq, 0.5);
    const SpatialIndex fine(pts, sq, 0.02);
    std::vector<double> q(2);
    for (int it = 0; it < 40; ++it) {
        sq.sample_uniform(rng, q);
        CHECK(coarse.kth_nearest_distance(q, 3) == fine.kth_nearest_distance(q, 3));
        CHECK(coarse.count_in_ball(q, 0.21) == fine.count_in_ball(q, 0.21));
    }
}
