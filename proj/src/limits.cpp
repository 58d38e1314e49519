#include "kcover/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kcover {

namespace {

constexpr double kE = std::numbers::e;

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

} // namespace

Regime classify_regime(const DomainPair& pair) {
    if (pair.interior_flag) return Regime::interior;
    switch (pair.A.kind()) {
        case RegionKind::torus:
            return Regime::torus;
        case RegionKind::disk:
        case RegionKind::ball:
            return Regime::smooth_boundary;
        case RegionKind::square:
        case RegionKind::polygon:
            return Regime::polygon;
    }
    return Regime::torus;
}

double c_dk(int d, int k) {
    if (d < 2 || k < 1) throw std::invalid_argument("c_dk: need d >= 2 and k >= 1");
    const double theta_d = unit_ball_volume(d);
    const double theta_dm1 = unit_ball_volume(d - 1);
    const double inv = 1.0 / d;
    return std::pow(theta_d, 1.0 - inv) * std::pow(1.0 - inv, k - 2 + inv) /
           (factorial(k - 1) * std::pow(2.0, 1.0 - inv) * theta_dm1);
}

Setting make_setting(const DomainPair& pair, int k, double tau, double tau_n) {
    if (k < 1) throw std::invalid_argument("make_setting: k must be >= 1");
    if (!(tau > 0.0)) throw std::invalid_argument("make_setting: tau must be positive");
    Setting s;
    s.d = pair.A.dim();
    s.k = k;
    s.regime = classify_regime(pair);
    if (s.regime == Regime::polygon && s.d != 2)
        throw std::invalid_argument("make_setting: polygonal regime requires d = 2");
    s.tau = tau;
    s.tau_n = tau_n;
    s.f0 = 1.0 / pair.A.volume();
    s.theta_d = unit_ball_volume(s.d);
    s.cdk = c_dk(s.d, k);
    s.J = (s.d >= 3 || k >= 2) ? 1 : 0;
    if (s.boundary()) s.sigma_A = sigma(pair.A);
    return s;
}

Centering centering(const Setting& s) {
    if (!s.boundary()) return {1.0, static_cast<double>(s.k - 1)};
    if (s.d == 2 && s.k == 1) return {1.0, 0.0};
    return {2.0 - 2.0 / s.d, 2.0 * s.k - 4.0 + 2.0 / s.d};
}

double transform_statistic(double R, double n_or_t, const Setting& s) {
    if (!(R >= 0.0)) throw std::invalid_argument("transform_statistic: R must be >= 0");
    if (!(n_or_t > kE))
        throw std::invalid_argument("transform_statistic: n must exceed e");
    const Centering c = centering(s);
    const double L = std::log(n_or_t);
    return n_or_t * s.theta_d * s.f0 * std::pow(R, s.d) - c.c1 * L - c.c2 * std::log(L);
}

double r_t(double beta, double t, const Setting& s) {
    if (!(t > kE)) throw std::invalid_argument("r_t: t must exceed e");
    const double L = std::log(t);
    double rhs;
    if (s.boundary()) {
        rhs = (2.0 - 2.0 / s.d) * L + (2.0 * s.k - 4.0 + 2.0 / s.d) * s.J * std::log(L) + beta;
    } else {
        rhs = L + (s.k - 1) * std::log(L) + beta;
    }
    rhs = std::max(rhs, 0.0);
    return std::pow(rhs / (s.f0 * t * s.theta_d), 1.0 / s.d);
}

CdfModel::CdfModel() {
    eval_ = [](double beta) { return std::exp(-std::exp(-beta)); };
    label_ = "gumbel";
}

CdfModel CdfModel::gumbel(double location, double scale) {
    CdfModel m;
    m.kind_ = Kind::gumbel;
    m.location_ = location;
    m.scale_ = scale;
    m.eval_ = [location, scale](double beta) {
        return std::exp(-std::exp(-(beta - location) / scale));
    };
    m.label_ = "gumbel";
    return m;
}

CdfModel CdfModel::gumbel_from_log_rate(double log_rate, double scale) {
    return gumbel(scale * log_rate, scale);
}

CdfModel CdfModel::tcev(double rate1, double rate2) {
    CdfModel m;
    m.kind_ = Kind::tcev;
    m.eval_ = [rate1, rate2](double beta) {
        return std::exp(-(rate1 * std::exp(-beta) + rate2 * std::exp(-0.5 * beta)));
    };
    m.label_ = "tcev";
    return m;
}

CdfModel CdfModel::corrected(std::function<double(double)> eval, std::string label) {
    CdfModel m;
    m.kind_ = Kind::corrected;
    m.eval_ = std::move(eval);
    m.label_ = std::move(label);
    return m;
}

CdfModel CdfModel::empirical(std::vector<double> sorted_samples) {
    if (sorted_samples.empty())
        throw std::invalid_argument("CdfModel::empirical: no samples");
    CdfModel m;
    m.kind_ = Kind::empirical;
    auto samples = std::make_shared<std::vector<double>>(std::move(sorted_samples));
    const double n = static_cast<double>(samples->size());
    m.eval_ = [samples, n](double beta) {
        const auto it = std::upper_bound(samples->begin(), samples->end(), beta);
        return static_cast<double>(it - samples->begin()) / n;
    };
    m.label_ = "empirical";
    return m;
}

double CdfModel::median() const {
    if (kind_ == Kind::gumbel) return location_ - scale_ * std::log(std::log(2.0));
    // bisection on an expanding bracket
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (eval_(lo) > 0.5) {
        lo = lo * 2.0 - 1.0;
        if (++guard > 200) throw std::runtime_error("median: no lower bracket");
    }
    guard = 0;
    while (eval_(hi) < 0.5) {
        hi = hi * 2.0 + 1.0;
        if (++guard > 200) throw std::runtime_error("median: no upper bracket");
    }
    if (!(eval_(hi) >= 0.5 && eval_(lo) <= 0.5))
        throw std::runtime_error("median: model not invertible");
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (eval_(mid) < 0.5)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<std::pair<double, double>> CdfModel::curve(double beta_min, double beta_max,
                                                       double step) const {
    if (!(step > 0.0)) throw std::invalid_argument("curve: step must be positive");
    std::vector<std::pair<double, double>> out;
    const int n = static_cast<int>(std::floor((beta_max - beta_min) / step + 1e-9)) + 1;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double beta = beta_min + i * step;
        out.emplace_back(beta, eval_(beta));
    }
    return out;
}

CdfModel limit_cdf(const Setting& s) {
    if (!s.boundary())
        return CdfModel::gumbel(std::log(s.tau / factorial(s.k - 1)), 1.0);
    if (s.d == 2 && s.k == 1) return CdfModel::gumbel(std::log(s.tau), 1.0);
    if (s.d == 2 && s.k == 2) {
        const double rate2 = s.tau * std::sqrt(std::numbers::pi) * s.sigma_A / 4.0;
        return CdfModel::tcev(s.tau, rate2);
    }
    return CdfModel::gumbel_from_log_rate(std::log(s.cdk * s.tau * s.sigma_A), 2.0);
}

CdfModel corrected_cdf(const Setting& s, double n_or_t, SampleMode mode) {
    if (!(n_or_t > std::exp(std::exp(1.0)))) // need loglog n > 0
        throw std::invalid_argument("corrected_cdf: n must exceed e^e");
    const double x = mode == SampleMode::binomial ? s.tau_n : s.tau;
    const double L = std::log(n_or_t);
    const double LL = std::log(L);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    const int d = s.d, k = s.k;
    const double sig = s.sigma_A, cdk_ = s.cdk;

    std::function<double(double)> eval;
    std::string label;
    if (!s.boundary()) {
        const double j = k - 1;
        const double jfact = factorial(k - 1);
        const bool refine = d >= 3;
        eval = [x, L, LL, j, jfact, refine](double beta) {
            const double eb = std::exp(-beta);
            double expo = x * eb / jfact * (1.0 + j * j * LL / L);
            if (refine) expo += x * eb * j * (1.0 + beta) / (jfact * L);
            return std::exp(-expo);
        };
        label = "corrected-interior";
    } else if (d == 2 && k == 1) {
        eval = [x, L, sig, sqrt_pi](double beta) {
            const double expo = x * std::exp(-beta) +
                                x * sqrt_pi * sig * std::exp(-0.5 * beta) / (2.0 * std::sqrt(L));
            return std::exp(-expo);
        };
        label = "corrected-d2k1";
    } else if (d == 2 && k == 2) {
        eval = [x, L, LL, sig, sqrt_pi](double beta) {
            const double eb2 = std::exp(-0.5 * beta);
            const double expo = x * (std::exp(-beta) + sqrt_pi * sig * eb2 / 4.0) +
                                x * sqrt_pi * sig * eb2 * LL / (8.0 * L);
            return std::exp(-expo);
        };
        label = "corrected-d2k2";
    } else if (d == 2) {
        const double a = (k - 2.0 + 1.0 / d);
        eval = [x, L, LL, sig, cdk_, a, d](double beta) {
            const double eb2 = std::exp(-0.5 * beta);
            const double expo =
                cdk_ * x * sig * eb2 * (1.0 + a * a * LL / ((1.0 - 1.0 / d) * L));
            return std::exp(-expo);
        };
        label = "corrected-d2khi";
    } else {
        const double a = (k - 2.0 + 1.0 / d);
        eval = [x, L, LL, sig, cdk_, a, d, k](double beta) {
            const double eb2 = std::exp(-0.5 * beta);
            const double expo = x * eb2 * cdk_ * sig *
                                (1.0 + a * a * LL / ((1.0 - 1.0 / d) * L) +
                                 (a * beta + 4.0 * k - 4.0) / ((2.0 - 2.0 / d) * L));
            return std::exp(-std::max(expo, 0.0));
        };
        label = "corrected-dhi";
    }
    return CdfModel::corrected(std::move(eval), std::move(label));
}

double median_shift(const CdfModel& model) { return model.median(); }

} // namespace kcover
