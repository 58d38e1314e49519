#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kcover {

// Gauss-Kronrod 7-15 panel. Returns the K15 estimate, writes an error
// estimate based on |K15 - G7|.
template <class Func>
double quad_g7k15(const Func& f, double a, double b, double& err) {
    // abscissa, G7 weight, K15 weight
    static const double nw[8][3] = {
        {0.000000000000000, 0.417959183673469, 0.209482141084728},
        {0.405845151377397, 0.381830050505119, 0.190350578064785},
        {0.741531185599394, 0.279705391489277, 0.140653259715525},
        {0.949107912342759, 0.129484966168870, 0.063092092629979},
        {0.207784955007898, 0.0, 0.204432940075298},
        {0.586087235467691, 0.0, 0.169004726639267},
        {0.864864423359769, 0.0, 0.104790010322250},
        {0.991455371120813, 0.0, 0.022935322010529},
    };

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double y0 = f(mid);
    double g7 = nw[0][1] * y0;
    double k15 = nw[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * nw[i][0];
        const double yi = f(mid + dx) + f(mid - dx);
        g7 += nw[i][1] * yi;
        k15 += nw[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;

    err = std::abs(k15 - g7);
    err = 200.0 * err * std::sqrt(err > 0 ? err : 0.0);
    return k15;
}

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_intervals = 4000;
};

// Adaptive bisection driven by the embedded G7 error estimate.
// Throws on failure to converge; callers treat that as a numerical failure.
template <class Func>
double integrate(const Func& f, double a, double b, const QuadOptions& opt = {}) {
    if (a == b) return 0.0;

    struct Interval {
        double a, b, value, err;
    };
    std::vector<Interval> work;
    double err0;
    double v0 = quad_g7k15(f, a, b, err0);
    work.push_back({a, b, v0, err0});

    double total = v0;
    double total_err = err0;
    int splits = 0;
    while (total_err > opt.abs_tol + opt.rel_tol * std::abs(total)) {
        if (++splits > opt.max_intervals)
            throw std::runtime_error("integrate: interval budget exhausted");
        // split the interval with the largest error estimate
        std::size_t worst = 0;
        for (std::size_t i = 1; i < work.size(); ++i)
            if (work[i].err > work[worst].err) worst = i;
        const Interval iv = work[worst];
        const double m = 0.5 * (iv.a + iv.b);
        if (m <= iv.a || m >= iv.b)
            throw std::runtime_error("integrate: interval underflow before convergence");
        double e1, e2;
        const double v1 = quad_g7k15(f, iv.a, m, e1);
        const double v2 = quad_g7k15(f, m, iv.b, e2);
        work[worst] = {iv.a, m, v1, e1};
        work.push_back({m, iv.b, v2, e2});
        total += v1 + v2 - iv.value;
        total_err += e1 + e2 - iv.err;
    }

    // compensated re-summation for a stable final value
    double sum = 0.0, c = 0.0;
    for (const auto& iv : work) {
        const double y = iv.value - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace kcover
