#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "kcover/config.hpp"
#include "kcover/errors.hpp"
#include "kcover/experiment.hpp"

namespace kcover {

namespace {

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_stream(const std::ofstream& out, const std::filesystem::path& p) {
    if (!out) throw IoError("cannot write file: " + p.string());
}

} // namespace

void write_points_csv(const ProcessPair& pair, const std::filesystem::path& file) {
    std::ofstream out(file);
    require_stream(out, file);
    out << "role";
    for (int j = 1; j <= pair.dim; ++j) out << ",coord_" << j;
    out << '\n';
    const std::size_t d = static_cast<std::size_t>(pair.dim);
    auto rows = [&](const std::vector<double>& pts, char role) {
        for (std::size_t i = 0; i * d < pts.size(); ++i) {
            out << role;
            for (std::size_t j = 0; j < d; ++j) out << ',' << fmt_double(pts[i * d + j]);
            out << '\n';
        }
    };
    rows(pair.xs, 'X');
    rows(pair.ys, 'Y');
    if (!out.flush()) throw IoError("write failed: " + file.string());
}

void emit(const Report& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());

    {
        const auto path = dir / "curves.csv";
        std::ofstream out(path);
        require_stream(out, path);
        out << "beta,empirical,limit,corrected\n";
        for (const auto& row : report.curves)
            out << fmt_double(row.beta) << ',' << fmt_double(row.empirical) << ','
                << fmt_double(row.limit) << ',' << fmt_double(row.corrected) << '\n';
        if (!out.flush()) throw IoError("write failed: " + path.string());
    }
    {
        const auto path = dir / "samples.csv";
        std::ofstream out(path);
        require_stream(out, path);
        for (const double s : report.samples) out << fmt_double(s) << '\n';
        if (!out.flush()) throw IoError("write failed: " + path.string());
    }
    {
        // companion gnuplot script; plotting stays out of the core
        const auto path = dir / "plot.gp";
        std::ofstream out(path);
        require_stream(out, path);
        out << "set datafile separator ','\n"
               "set key left top\n"
               "set xlabel 'beta'\n"
               "set ylabel 'P[T <= beta]'\n"
               "set yrange [0:1]\n"
               "plot 'curves.csv' skip 1 using 1:2 with lines lw 2 title 'empirical', \\\n"
               "     'curves.csv' skip 1 using 1:3 with lines dt 2 title 'limit', \\\n"
               "     'curves.csv' skip 1 using 1:4 with lines dt 3 title 'corrected'\n"
               "pause -1\n";
        if (!out.flush()) throw IoError("write failed: " + path.string());
    }
    {
        const auto path = dir / "meta.json";
        std::ofstream out(path);
        require_stream(out, path);
        nlohmann::json j;
        j["config"] = config_to_json(report.config);
        j["n_or_t"] = report.n_or_t;
        j["mode"] = report.mode == SampleMode::binomial ? "binomial" : "poisson";
        j["seed"] = report.seed;
        j["version"] = "kcover 0.1.0";
        j["replicates"] = report.samples.size();
        j["failed_replicates"] = report.failed_replicates;
        j["ks_limit"] = report.ks_limit;
        j["ks_corrected"] = report.ks_corrected;
        j["median_sample"] = report.median_sample;
        j["runtime"] = {{"sample_seconds", report.sample_seconds},
                        {"total_seconds", report.total_seconds}};
        out << j.dump(2) << '\n';
        if (!out.flush()) throw IoError("write failed: " + path.string());
    }
}

} // namespace kcover
