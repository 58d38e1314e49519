#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcover/experiment.hpp"

namespace kcover {

// Region wire format:
//   {"kind": "disk"|"square"|"ball"|"torus"|"polygon",
//    "radius"/"side": number, "d": integer, "vertices": [[x,y],...]}
nlohmann::json region_to_json(const Region& region);
Region region_from_json(const nlohmann::json& j);

// Domain pair: {"A": <region>, "B": <region>}; omit B for B = A.
nlohmann::json domain_to_json(const DomainPair& pair);
DomainPair domain_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);

// Configuration of the `gamma` subcommand: vacancy-expectation tables.
struct GammaConfig {
    DomainPair domain = DomainPair::same(Region::torus(2, 1.0));
    int k = 1;
    double tau = 1.0;
    SampleMode mode = SampleMode::poisson;
    std::vector<double> t_values = {1000.0};
    std::vector<double> betas = {0.0};
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 1;
};

GammaConfig gamma_config_from_json(const nlohmann::json& j);
GammaConfig load_gamma_config(const std::filesystem::path& file);

} // namespace kcover
