#pragma once

#include <cstdint>
#include <span>

#include "kcover/geometry.hpp"
#include "kcover/limits.hpp"

namespace kcover {

// Pr[Poisson(mu) <= k-1], evaluated in log space so that mu up to 1e6 is
// safe (underflows cleanly to 0, never NaN).
double poisson_lower_tail(double mu, int k);

// Everything needed to evaluate vacancy probabilities p_t(x) and their
// integral gamma_t(B) at a fixed radius r and multiplicity k.
struct VacancyQuery {
    DomainPair pair;
    double t = 1.0;  // X-process intensity
    double r = 0.0;  // coverage radius
    int k = 1;

    // mean number of X-points in B(x, r): t * f0 * |B_r(x) intersect A|
    double mu(std::span<const double> x) const;
};

// p_t(x) = Pr[x not covered k times] for x in B.
double vacancy_probability(const VacancyQuery& q, std::span<const double> x);

// gamma_t(B) = (t/|B|) integral_B p_t(x) dx by exact dimension reduction:
// constant on the torus and in the interior regime with clearance >= r,
// radial for disks/balls, interior + edge strips + corner squares for the
// square. Polygons are rejected (use gamma_mc). Relative target 1e-8.
double gamma_quadrature(const VacancyQuery& q);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Monte Carlo evaluation of the same integral: t * mean of p_t over uniform
// points of B. p_t itself is exact, so sampling error is the only error.
McEstimate gamma_mc(const VacancyQuery& q, std::size_t samples, std::uint64_t seed);

// Closed-form asymptotic expansion of gamma_t(B) at r = r_t(beta), without
// O(.) remainders; same normalization as gamma_quadrature, so
// t*E|V| = expansion * |B|.
double moat_bulk_expansion(const Setting& setting, double t, double beta);

struct LemexpResult {
    double lhs = 0.0;      // quadrature value of the boundary-layer integral
    double rhs = 0.0;      // two-term expansion
    double residual = 0.0; // lhs - rhs
};

// Boundary-layer integral theta_{d-1} int_0^1 e^{-s h(a)} (alpha0+h(a))^l da
// against its expansion alpha0^l/s + l alpha0^(l-1)/s^2. variant = 2 checks
// the companion integral with the (1 + l/(s(alpha0+h))) factor, whose
// expansion has coefficient 2l on the s^-2 term.
LemexpResult lemexp_check(double s, double alpha0, int ell, int d, int variant = 1);

// exp(-tau gamma) (Poisson mode) or exp(-tau_n gamma_n) (binomial mode),
// with gamma from gamma_quadrature, or gamma_mc when B is a polygon.
double predicted_probability(const DomainPair& pair, const Setting& setting, double n_or_t,
                             double r, SampleMode mode, std::size_t mc_samples = 1000000,
                             std::uint64_t mc_seed = 0x9E3779B97F4A7C15ULL);

} // namespace kcover
