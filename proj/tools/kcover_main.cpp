#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcover/analytic.hpp"
#include "kcover/config.hpp"
#include "kcover/errors.hpp"
#include "kcover/experiment.hpp"

namespace {

using namespace kcover;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cmd_simulate(const std::string& config_file, int threads, const std::string& out_dir,
                 bool dump_points) {
    ExperimentConfig config = load_config(config_file);
    if (threads >= 0) config.threads = threads;
    if (!out_dir.empty()) config.output_dir = out_dir;

    const std::vector<Report> reports = run_campaign(config);
    for (const Report& rep : reports) {
        std::filesystem::path dir = config.output_dir;
        if (reports.size() > 1) dir /= "n_" + std::to_string(static_cast<long long>(rep.n_or_t));
        emit(rep, dir);
        if (dump_points) {
            // replicate 0 of this campaign, regenerated from its derived seed
            const std::uint64_t rs = mix_seed(config.seed, 0);
            ProcessPair pp;
            if (config.mode == SampleMode::binomial) {
                const auto n = static_cast<std::uint64_t>(rep.n_or_t);
                const auto m =
                    static_cast<std::uint64_t>(std::floor(config.tau * static_cast<double>(n)));
                pp = sample_binomial(config.domain, n, m, rs);
            } else {
                pp = sample_poisson(config.domain, rep.n_or_t, config.tau * rep.n_or_t, rs);
            }
            write_points_csv(pp, dir / "points.csv");
        }
        std::cout << "n=" << fmt(rep.n_or_t) << " replicates=" << rep.samples.size()
                  << " failed=" << rep.failed_replicates << " ks_limit=" << fmt(rep.ks_limit)
                  << " ks_corrected=" << fmt(rep.ks_corrected) << " -> " << dir.string() << "\n";
    }
    return 0;
}

int cmd_gamma(const std::string& config_file) {
    const GammaConfig config = load_gamma_config(config_file);
    const Setting setting = make_setting(config.domain, config.k, config.tau, config.tau);
    std::cout << "t,beta,gamma_quadrature,gamma_mc,mc_stderr,expansion,predicted_probability\n";
    for (const double t : config.t_values) {
        for (const double beta : config.betas) {
            const double r = r_t(beta, t, setting);
            const VacancyQuery q{config.domain, t, r, config.k};
            double gq = std::numeric_limits<double>::quiet_NaN();
            if (config.domain.B.kind() != RegionKind::polygon) gq = gamma_quadrature(q);
            const McEstimate mc = gamma_mc(q, config.mc_samples, config.seed);
            const double expansion = moat_bulk_expansion(setting, t, beta);
            const double pred = predicted_probability(config.domain, setting, t, r, config.mode,
                                                      config.mc_samples, config.seed);
            std::cout << fmt(t) << ',' << fmt(beta) << ',' << fmt(gq) << ',' << fmt(mc.estimate)
                      << ',' << fmt(mc.std_error) << ',' << fmt(expansion) << ',' << fmt(pred)
                      << "\n";
        }
    }
    return 0;
}

int cmd_check_lemexp(int ell, double alpha0, int d, const std::string& s_grid, int variant) {
    double lo = 0, hi = 0, factor = 0;
    if (std::sscanf(s_grid.c_str(), "%lf:%lf:%lf", &lo, &hi, &factor) != 3 || lo <= 1.0 ||
        hi < lo || factor <= 1.0)
        throw std::invalid_argument("--s-grid must be lo:hi:factor with lo>1, hi>=lo, factor>1");
    std::cout << "s,lhs,rhs,residual\n";
    for (double s = lo; s <= hi * (1.0 + 1e-12); s *= factor) {
        const LemexpResult r = lemexp_check(s, alpha0, ell, d, variant);
        std::cout << fmt(s) << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ',' << fmt(r.residual)
                  << "\n";
    }
    return 0;
}

int cmd_curves(const std::string& config_file) {
    const ExperimentConfig config = load_config(config_file);
    std::cout << "beta,limit";
    for (const double n : config.n_values)
        std::cout << ",corrected_n" << static_cast<long long>(n);
    std::cout << "\n";

    double tau_n = config.tau;
    if (config.mode == SampleMode::binomial && !config.n_values.empty()) {
        const double n0 = config.n_values.front();
        tau_n = std::floor(config.tau * n0) / n0;
    }
    const Setting setting = make_setting(config.domain, config.k, config.tau, tau_n);
    const CdfModel limit = limit_cdf(setting);
    std::vector<CdfModel> corrected;
    for (const double n : config.n_values) {
        double tn = config.tau;
        if (config.mode == SampleMode::binomial)
            tn = std::floor(config.tau * n) / n;
        corrected.push_back(
            corrected_cdf(make_setting(config.domain, config.k, config.tau, tn), n, config.mode));
    }
    const std::size_t g = config.beta_grid.size();
    for (std::size_t i = 0; i < g; ++i) {
        const double beta = config.beta_grid.at(i);
        std::cout << fmt(beta) << ',' << fmt(limit(beta));
        for (const auto& model : corrected) std::cout << ',' << fmt(model(beta));
        std::cout << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-sample k-coverage threshold laboratory"};
    app.require_subcommand(1);

    std::string config_file, out_dir, s_grid = "100:10000:2";
    int threads = -1, ell = 0, d = 2, variant = 1;
    double alpha0 = 1.0;
    bool dump_points = false;

    auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo campaign and emit reports");
    simulate->add_option("--config", config_file, "JSON experiment config")->required();
    simulate->add_option("--threads", threads, "worker threads (0 = hardware)");
    simulate->add_option("--out", out_dir, "output directory (overrides config)");
    simulate->add_flag("--dump-points", dump_points, "also write replicate 0's points.csv");

    auto* gamma = app.add_subcommand("gamma", "vacancy-expectation tables (CSV on stdout)");
    gamma->add_option("--config", config_file, "JSON gamma config")->required();

    auto* lemexp = app.add_subcommand("check-lemexp", "boundary-layer integral vs expansion");
    lemexp->add_option("--ell", ell, "power of (alpha0 + h)")->required();
    lemexp->add_option("--alpha0", alpha0, "offset alpha0")->required();
    lemexp->add_option("--d", d, "dimension")->required();
    lemexp->add_option("--s-grid", s_grid, "geometric grid lo:hi:factor");
    lemexp->add_option("--variant", variant, "1 or 2 (companion integral)");

    auto* curves = app.add_subcommand("curves", "limit/corrected CDF tables without simulation");
    curves->add_option("--config", config_file, "JSON experiment config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(config_file, threads, out_dir, dump_points);
        if (gamma->parsed()) return cmd_gamma(config_file);
        if (lemexp->parsed()) return cmd_check_lemexp(ell, alpha0, d, s_grid, variant);
        if (curves->parsed()) return cmd_curves(config_file);
    } catch (const kcover::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
