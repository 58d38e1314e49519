#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kcover/knn.hpp"
#include "kcover/limits.hpp"

namespace kcover {

struct BetaGrid {
    double min = -5.0;
    double max = 10.0;
    double step = 0.01;

    std::size_t size() const;
    double at(std::size_t i) const { return min + static_cast<double>(i) * step; }
};

struct ExperimentConfig {
    DomainPair domain = DomainPair::same(Region::torus(2, 1.0));
    int k = 1;
    double tau = 1.0;
    SampleMode mode = SampleMode::binomial;
    std::vector<double> n_values = {10000.0}; // counts (binomial) or intensities (poisson)
    std::size_t replicates = 1000;
    std::uint64_t seed = 1;
    BetaGrid beta_grid;
    std::string output_dir = "out";
    int threads = 0;           // 0 = hardware concurrency
    bool publication = false;  // publication-grade reports need >= 100 replicates
};

struct CurveRow {
    double beta = 0.0;
    double empirical = 0.0;
    double limit = 0.0;
    double corrected = 0.0;
};

struct Report {
    Setting setting;
    ExperimentConfig config; // echo of the generating configuration
    double n_or_t = 0.0;
    SampleMode mode = SampleMode::binomial;
    std::uint64_t seed = 0;
    std::vector<double> samples; // transformed statistics, sorted, +inf for failures
    std::size_t failed_replicates = 0;
    std::vector<CurveRow> curves;
    CdfModel limit_model;
    CdfModel corrected_model;
    double ks_limit = 0.0;
    double ks_corrected = 0.0;
    double median_sample = 0.0;
    double sample_seconds = 0.0;
    double total_seconds = 0.0;

    // empirical CDF value at beta (failures never enter a finite bucket)
    double ecdf(double beta) const;
};

// One-sided sup distance between the empirical CDF of sorted samples and a
// model CDF, evaluated at the sample points.
double ks_distance(const std::vector<double>& sorted_samples, const CdfModel& model);

// Runs `config.replicates` independent replicates for one n (or t): sample
// the pair, take the coverage threshold, transform. Deterministic for a
// given (config, seed) regardless of thread count.
Report run_single(const ExperimentConfig& config, double n_or_t);

// One report per entry of n_values.
std::vector<Report> run_campaign(const ExperimentConfig& config);

// Subtracts the sample median from the samples and each model's median from
// its curve; all three curves then pass through (0, 1/2).
Report median_recenter(const Report& report);

// Writes curves.csv, samples.csv and meta.json into dir.
void emit(const Report& report, const std::filesystem::path& dir);

// Point dump, one row per point: role (X or Y), coord_1..coord_d.
void write_points_csv(const ProcessPair& pair, const std::filesystem::path& file);

} // namespace kcover
