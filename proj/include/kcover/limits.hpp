#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kcover/geometry.hpp"
#include "kcover/sampler.hpp"

namespace kcover {

// Which limit-law regime applies to a domain pair.
enum class Regime { interior, torus, smooth_boundary, polygon };

Regime classify_regime(const DomainPair& pair);

// The constant c_{d,k} multiplying sigma_A in the boundary-regime location
// parameter.
double c_dk(int d, int k);

// Regime data plus every derived constant the limit laws need.
struct Setting {
    int d = 2;
    int k = 1;
    Regime regime = Regime::torus;
    double tau = 1.0;   // limiting ratio m(n)/n
    double tau_n = 1.0; // ratio at the finite n actually simulated
    double f0 = 1.0;    // 1/|A|
    double sigma_A = 0.0; // only meaningful for boundary regimes
    double theta_d = 0.0;
    double cdk = 0.0;
    int J = 0; // 1 iff d >= 3 or k >= 2

    bool boundary() const {
        return regime == Regime::smooth_boundary || regime == Regime::polygon;
    }
};

Setting make_setting(const DomainPair& pair, int k, double tau, double tau_n);
inline Setting make_setting(const DomainPair& pair, int k, double tau) {
    return make_setting(pair, k, tau, tau);
}

// (c1, c2) with statistic T = n theta_d f0 R^d - c1 log n - c2 loglog n.
struct Centering {
    double c1 = 1.0;
    double c2 = 0.0;
};
Centering centering(const Setting& setting);

double transform_statistic(double R, double n_or_t, const Setting& setting);

// The radius r_t(beta) whose transformed statistic equals beta:
// f0 t theta_d r^d = max(c1 log t + c2 loglog t + beta, 0).
double r_t(double beta, double t, const Setting& setting);

// An evaluable CDF over the transformed statistic.
class CdfModel {
  public:
    enum class Kind { gumbel, tcev, corrected, empirical };

    CdfModel(); // standard Gumbel(0, 1)

    static CdfModel gumbel(double location, double scale);
    // Gumbel written as F(x) = exp(-rate * e^(-x/scale)); equivalent to
    // location = scale * log(rate) in the standard parameterization.
    static CdfModel gumbel_from_log_rate(double log_rate, double scale);
    static CdfModel tcev(double rate1, double rate2);
    static CdfModel corrected(std::function<double(double)> eval, std::string label);
    static CdfModel empirical(std::vector<double> sorted_samples);

    double operator()(double beta) const { return eval_(beta); }
    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }

    double gumbel_location() const { return location_; }
    double gumbel_scale() const { return scale_; }

    // beta with F(beta) = 1/2; closed form for Gumbel, bisection to 1e-10
    // otherwise. Throws if the model cannot be inverted (flat evaluator).
    double median() const;

    // two-column table (beta, F(beta))
    std::vector<std::pair<double, double>> curve(double beta_min, double beta_max,
                                                 double step) const;

  private:
    Kind kind_ = Kind::gumbel;
    double location_ = 0.0;
    double scale_ = 1.0;
    std::function<double(double)> eval_;
    std::string label_;
};

// Limiting law of the transformed statistic.
CdfModel limit_cdf(const Setting& setting);

// Finite-n law: the limit expression with its vanishing multiplicative
// factor retained and only O(.) remainders dropped.
// Binomial mode uses tau_n, Poisson mode uses tau.
CdfModel corrected_cdf(const Setting& setting, double n_or_t,
                       SampleMode mode = SampleMode::binomial);

double median_shift(const CdfModel& model);

} // namespace kcover
