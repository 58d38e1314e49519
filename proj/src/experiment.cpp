#include "kcover/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

namespace kcover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    if (nthreads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    std::atomic<bool> failed{false};
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) throw std::runtime_error("parallel_for: a replicate failed");
}

double sorted_median(const std::vector<double>& s) {
    const std::size_t n = s.size();
    return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

} // namespace

std::size_t BetaGrid::size() const {
    if (!(step > 0.0)) throw std::invalid_argument("beta_grid: step must be positive");
    return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
}

double Report::ecdf(double beta) const {
    const auto it = std::upper_bound(samples.begin(), samples.end(), beta);
    return static_cast<double>(it - samples.begin()) / static_cast<double>(samples.size());
}

double ks_distance(const std::vector<double>& sorted_samples, const CdfModel& model) {
    if (sorted_samples.empty()) throw std::invalid_argument("ks_distance: no samples");
    const double n = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double x = sorted_samples[i];
        // the lower-rank comparison uses the model's left limit so that an
        // empirical model compared against its own samples scores zero
        const double f_hi = std::isinf(x) ? 1.0 : model(x);
        const double f_lo = std::isinf(x)
                                ? 1.0
                                : model(std::nextafter(x, -std::numeric_limits<double>::infinity()));
        d = std::max(d, std::abs(f_hi - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(f_lo - static_cast<double>(i) / n));
    }
    return d;
}

Report run_single(const ExperimentConfig& config, double n_or_t) {
    if (config.replicates < 1) throw std::invalid_argument("run_single: need replicates >= 1");
    if (config.publication && config.replicates < 100)
        throw std::invalid_argument("run_single: publication reports need >= 100 replicates");
    if (!(n_or_t > std::exp(std::exp(1.0))))
        throw std::invalid_argument("run_single: n must exceed e^e");

    const auto t_start = std::chrono::steady_clock::now();

    double tau_n = config.tau;
    std::uint64_t n_count = 0, m_count = 0;
    if (config.mode == SampleMode::binomial) {
        n_count = static_cast<std::uint64_t>(n_or_t);
        m_count = static_cast<std::uint64_t>(std::floor(config.tau * static_cast<double>(n_count)));
        if (m_count == 0) throw std::invalid_argument("run_single: floor(tau*n) must be >= 1");
        tau_n = static_cast<double>(m_count) / static_cast<double>(n_count);
    }

    Report rep;
    rep.setting = make_setting(config.domain, config.k, config.tau, tau_n);
    rep.config = config;
    rep.n_or_t = n_or_t;
    rep.mode = config.mode;
    rep.seed = config.seed;

    const std::size_t k = static_cast<std::size_t>(config.k);
    std::vector<double> samples(config.replicates);
    std::atomic<std::size_t> failures{0};
    parallel_for(config.replicates, config.threads, [&](std::size_t i) {
        const std::uint64_t rep_seed = mix_seed(config.seed, i);
        const ProcessPair pp =
            config.mode == SampleMode::binomial
                ? sample_binomial(config.domain, n_count, m_count, rep_seed)
                : sample_poisson(config.domain, n_or_t, config.tau * n_or_t, rep_seed);
        const double R = coverage_threshold(pp, config.domain.A, k);
        if (std::isinf(R)) {
            samples[i] = kInf;
            failures.fetch_add(1);
        } else {
            samples[i] = transform_statistic(R, n_or_t, rep.setting);
        }
    });
    rep.sample_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    std::sort(samples.begin(), samples.end());
    rep.samples = std::move(samples);
    rep.failed_replicates = failures.load();
    rep.median_sample = sorted_median(rep.samples);

    rep.limit_model = limit_cdf(rep.setting);
    rep.corrected_model = corrected_cdf(rep.setting, n_or_t, config.mode);
    rep.ks_limit = ks_distance(rep.samples, rep.limit_model);
    rep.ks_corrected = ks_distance(rep.samples, rep.corrected_model);

    const std::size_t g = config.beta_grid.size();
    rep.curves.resize(g);
    for (std::size_t i = 0; i < g; ++i) {
        const double beta = config.beta_grid.at(i);
        rep.curves[i] = {beta, rep.ecdf(beta), rep.limit_model(beta), rep.corrected_model(beta)};
    }
    rep.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

std::vector<Report> run_campaign(const ExperimentConfig& config) {
    std::vector<Report> out;
    out.reserve(config.n_values.size());
    for (const double n : config.n_values) out.push_back(run_single(config, n));
    return out;
}

Report median_recenter(const Report& report) {
    if (report.samples.size() < 2)
        throw std::invalid_argument("median_recenter: need at least 2 samples");
    Report out = report;
    const double med_s = report.median_sample;
    const double med_lim = report.limit_model.median();
    const double med_cor = report.corrected_model.median();

    for (auto& s : out.samples)
        if (!std::isinf(s)) s -= med_s;
    out.median_sample = sorted_median(out.samples);

    const CdfModel lim = report.limit_model;
    const CdfModel cor = report.corrected_model;
    out.limit_model = CdfModel::corrected(
        [lim, med_lim](double b) { return lim(b + med_lim); }, "limit-recentered");
    out.corrected_model = CdfModel::corrected(
        [cor, med_cor](double b) { return cor(b + med_cor); }, "corrected-recentered");

    for (auto& row : out.curves) {
        double count = 0.0;
        {
            const auto it = std::upper_bound(out.samples.begin(), out.samples.end(), row.beta);
            count = static_cast<double>(it - out.samples.begin());
        }
        row.empirical = count / static_cast<double>(out.samples.size());
        row.limit = out.limit_model(row.beta);
        row.corrected = out.corrected_model(row.beta);
    }
    out.ks_limit = ks_distance(out.samples, out.limit_model);
    out.ks_corrected = ks_distance(out.samples, out.corrected_model);
    return out;
}

} // namespace kcover
