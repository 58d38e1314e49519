#include "kcover/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kcover/quadrature.hpp"

namespace kcover {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

// smallest a with h(a) >= w, by bisection (h is strictly increasing)
double slice_inverse(double w, int d) {
    const double half = 0.5 * unit_ball_volume(d);
    if (w >= half) return 1.0;
    if (w <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (slice_volume(mid, d) < w)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

} // namespace

double poisson_lower_tail(double mu, int k) {
    if (!(mu >= 0.0)) throw std::invalid_argument("poisson_lower_tail: mu must be >= 0");
    if (k < 1) throw std::invalid_argument("poisson_lower_tail: k must be >= 1");
    if (mu == 0.0) return 1.0;
    const double log_mu = std::log(mu);
    double p = 0.0;
    for (int j = 0; j < k; ++j)
        p += std::exp(-mu + j * log_mu - std::lgamma(static_cast<double>(j) + 1.0));
    return p < 1.0 ? p : 1.0;
}

double VacancyQuery::mu(std::span<const double> x) const {
    return t * (1.0 / pair.A.volume()) * pair.A.ball_intersection_volume(x, r);
}

double vacancy_probability(const VacancyQuery& q, std::span<const double> x) {
    if (!q.pair.B.contains(x))
        throw std::invalid_argument("vacancy_probability: x must lie in B");
    return poisson_lower_tail(q.mu(x), q.k);
}

double gamma_quadrature(const VacancyQuery& q) {
    const Region& A = q.pair.A;
    const Region& B = q.pair.B;
    const int d = A.dim();
    const double f0 = 1.0 / A.volume();
    const double theta_d = unit_ball_volume(d);
    const double full_ball_mu = q.t * f0 * theta_d * std::pow(q.r, d);
    const double p_bulk = poisson_lower_tail(full_ball_mu, q.k);
    const QuadOptions opts{1e-14, 1e-9, 4000};

    if (A.kind() == RegionKind::torus) {
        if (!(q.r < 0.5 * A.side()))
            throw std::invalid_argument("gamma_quadrature: torus needs r < side/2");
        return q.t * p_bulk; // p_t is constant by translation invariance
    }

    if (q.pair.interior_flag) {
        // clearance between B and the boundary of A decides whether the
        // integrand is constant over B
        double clearance;
        if (B.kind() == RegionKind::disk || B.kind() == RegionKind::ball) {
            // concentric with A when A is a ball; otherwise measure directly
            if (A.kind() == RegionKind::disk || A.kind() == RegionKind::ball)
                clearance = A.radius() - B.radius();
            else {
                std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
                clearance = A.distance_to_boundary(origin) - B.radius();
            }
        } else {
            clearance = 0.0;
        }
        if (clearance >= q.r) return q.t * p_bulk;
        if ((A.kind() == RegionKind::disk || A.kind() == RegionKind::ball) &&
            (B.kind() == RegionKind::disk || B.kind() == RegionKind::ball)) {
            // concentric radial integral over B
            const double RA = A.radius(), RB = B.radius();
            const double inner = std::max(RA - q.r, 0.0);
            double acc = theta_d * std::pow(std::min(inner, RB), d) * p_bulk;
            if (RB > inner) {
                auto f = [&](double rho) {
                    const double mu = q.t * f0 * ball_lens_volume(RA, q.r, rho, d);
                    return poisson_lower_tail(mu, q.k) * d * theta_d * std::pow(rho, d - 1);
                };
                acc += integrate(f, inner, RB, opts);
            }
            return q.t / B.volume() * acc;
        }
        throw std::invalid_argument(
            "gamma_quadrature: interior pair with r beyond clearance needs concentric balls");
    }

    // B = A from here on
    switch (A.kind()) {
        case RegionKind::disk:
        case RegionKind::ball: {
            const double R = A.radius();
            if (!(q.r < R))
                throw std::invalid_argument("gamma_quadrature: need r < radius");
            const double inner = R - q.r;
            double acc = theta_d * std::pow(inner, d) * p_bulk;
            auto f = [&](double rho) {
                const double mu = q.t * f0 * ball_lens_volume(R, q.r, rho, d);
                return poisson_lower_tail(mu, q.k) * d * theta_d * std::pow(rho, d - 1);
            };
            acc += integrate(f, inner, R, opts);
            return q.t * f0 * acc;
        }
        case RegionKind::square: {
            const double s = A.side();
            if (!(q.r < 0.5 * s))
                throw std::invalid_argument("gamma_quadrature: need r < side/2");
            const double w = s - 2.0 * q.r;
            // interior block with the constant integrand
            double acc = w * w * p_bulk;
            // four edge strips: a straight boundary cut, so the sliced-ball
            // volume is exact there
            auto edge = [&](double a) {
                const double mu =
                    q.t * f0 * (0.5 * kPi + slice_volume(a / q.r, 2)) * q.r * q.r;
                return poisson_lower_tail(mu, q.k);
            };
            acc += 4.0 * w * integrate(edge, 0.0, q.r, opts);
            // four corner squares, exact 2D integration with polygon clipping
            const auto& verts = A.vertices();
            auto corner_inner = [&](double x) {
                auto g = [&](double y) {
                    const double mu = q.t * f0 * circle_polygon_area(verts, x, y, q.r);
                    return poisson_lower_tail(mu, q.k);
                };
                return integrate(g, 0.0, q.r, {1e-15, 1e-10, 2000});
            };
            acc += 4.0 * integrate(corner_inner, 0.0, q.r, {1e-14, 1e-9, 2000});
            return q.t * f0 * acc;
        }
        default:
            throw std::invalid_argument("gamma_quadrature: polygon domains use gamma_mc");
    }
}

McEstimate gamma_mc(const VacancyQuery& q, std::size_t samples, std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("gamma_mc: need at least 1000 samples");
    const Region& B = q.pair.B;
    const bool on_torus = q.pair.A.kind() == RegionKind::torus;
    if (on_torus && !(q.r < 0.5 * q.pair.A.side()))
        throw std::invalid_argument("gamma_mc: torus needs r < side/2");
    const int d = B.dim();
    const double theta_d = unit_ball_volume(d);
    const double full_mu =
        q.t * (1.0 / q.pair.A.volume()) * theta_d * std::pow(q.r, d);
    const double p_bulk = poisson_lower_tail(full_mu, q.k);

    Rng rng(mix_seed(seed, 0x67616d6d61ULL));
    std::vector<double> x(static_cast<std::size_t>(d));
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        B.sample_uniform(rng, x);
        // p_t is constant at depth >= r; evaluating the exact tail only in
        // the moat keeps the estimator identical and cheap
        const double p = (on_torus || q.pair.A.distance_to_boundary(x) >= q.r)
                             ? p_bulk
                             : poisson_lower_tail(q.mu(x), q.k);
        const double delta = p - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (p - mean);
    }
    const double n = static_cast<double>(samples);
    const double var = m2 / (n - 1.0);
    return {q.t * mean, q.t * std::sqrt(var / n)};
}

double moat_bulk_expansion(const Setting& s, double t, double beta) {
    if (!(t > std::exp(1.0)))
        throw std::invalid_argument("moat_bulk_expansion: t must exceed e");
    const double L = std::log(t);
    const double LL = std::log(L);
    const double eb = std::exp(-beta);
    const double eb2 = std::exp(-0.5 * beta);
    const double sqrt_pi = std::sqrt(kPi);

    if (!s.boundary()) {
        const double j = s.k - 1;
        return eb / factorial(s.k - 1) *
               (1.0 + j * j * LL / L + j * (1.0 + beta) / L);
    }
    const int d = s.d, k = s.k;
    if (d == 2 && k == 1) return eb + s.sigma_A * sqrt_pi * eb2 / (2.0 * std::sqrt(L));
    if (d == 2 && k == 2)
        return eb * (1.0 + LL / L) +
               s.sigma_A * sqrt_pi * eb2 / 4.0 * (1.0 + LL / (2.0 * L));
    if (d == 2) {
        const double c = 2.0 * k - 3.0;
        return s.sigma_A * sqrt_pi * eb2 / (factorial(k - 1) * std::pow(2.0, k)) *
               (1.0 + c * c * LL / (2.0 * L));
    }
    const double a = k - 2.0 + 1.0 / d;
    return eb2 * s.cdk * s.sigma_A *
           (1.0 + a * a * LL / ((1.0 - 1.0 / d) * L) +
            (a * beta + 4.0 * k - 4.0) / ((2.0 - 2.0 / d) * L));
}

LemexpResult lemexp_check(double s, double alpha0, int ell, int d, int variant) {
    if (!(s > 1.0)) throw std::invalid_argument("lemexp_check: s must exceed 1");
    if (!(alpha0 > 0.0)) throw std::invalid_argument("lemexp_check: alpha0 must be positive");
    if (ell < 0 || d < 2 || (variant != 1 && variant != 2))
        throw std::invalid_argument("lemexp_check: bad arguments");

    const double theta_dm1 = unit_ball_volume(d - 1);
    auto integrand = [&](double a) {
        const double h = slice_volume(a, d);
        double v = std::exp(-s * h) * std::pow(alpha0 + h, ell);
        if (variant == 2) v *= 1.0 + ell / (s * (alpha0 + h));
        return v;
    };
    // the boundary layer has width ~ 1/s; split there so the adaptive rule
    // spends its effort where the mass is
    const double a_cut = slice_inverse(60.0 / s, d);
    double lhs = integrate(integrand, 0.0, a_cut, {1e-19, 1e-13, 4000});
    if (a_cut < 1.0) lhs += integrate(integrand, a_cut, 1.0, {1e-19, 1e-9, 2000});
    lhs *= theta_dm1;

    const double lead = std::pow(alpha0, ell) / s;
    const double second =
        ell == 0 ? 0.0 : ell * std::pow(alpha0, ell - 1) / (s * s);
    const double rhs = lead + (variant == 2 ? 2.0 : 1.0) * second;
    return {lhs, rhs, lhs - rhs};
}

double predicted_probability(const DomainPair& pair, const Setting& setting, double n_or_t,
                             double r, SampleMode mode, std::size_t mc_samples,
                             std::uint64_t mc_seed) {
    const double x = mode == SampleMode::poisson ? setting.tau : setting.tau_n;
    const VacancyQuery q{pair, n_or_t, r, setting.k};
    double gamma;
    if (pair.B.kind() == RegionKind::polygon)
        gamma = gamma_mc(q, mc_samples, mc_seed).estimate;
    else
        gamma = gamma_quadrature(q);
    return std::exp(-x * gamma);
}

} // namespace kcover
