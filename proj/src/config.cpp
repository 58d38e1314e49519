#include "kcover/config.hpp"

#include <fstream>
#include <stdexcept>

#include "kcover/errors.hpp"

namespace kcover {

using nlohmann::json;

json region_to_json(const Region& region) {
    json j;
    switch (region.kind()) {
        case RegionKind::square:
            j["kind"] = "square";
            j["side"] = region.side();
            break;
        case RegionKind::disk:
            j["kind"] = "disk";
            j["radius"] = region.radius();
            break;
        case RegionKind::ball:
            j["kind"] = "ball";
            j["d"] = region.dim();
            j["radius"] = region.radius();
            break;
        case RegionKind::torus:
            j["kind"] = "torus";
            j["d"] = region.dim();
            j["side"] = region.side();
            break;
        case RegionKind::polygon: {
            j["kind"] = "polygon";
            json verts = json::array();
            for (const auto& v : region.vertices()) verts.push_back({v[0], v[1]});
            j["vertices"] = verts;
            break;
        }
    }
    return j;
}

Region region_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "square") return Region::square(j.at("side").get<double>());
    if (kind == "disk") return Region::disk(j.at("radius").get<double>());
    if (kind == "ball")
        return Region::ball(j.at("d").get<int>(), j.at("radius").get<double>());
    if (kind == "torus")
        return Region::torus(j.at("d").get<int>(), j.at("side").get<double>());
    if (kind == "polygon") {
        std::vector<std::array<double, 2>> verts;
        for (const auto& v : j.at("vertices"))
            verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        return Region::polygon(std::move(verts));
    }
    throw std::invalid_argument("region_from_json: unknown kind '" + kind + "'");
}

json domain_to_json(const DomainPair& pair) {
    json j;
    j["A"] = region_to_json(pair.A);
    if (pair.interior_flag) j["B"] = region_to_json(pair.B);
    return j;
}

DomainPair domain_from_json(const json& j) {
    Region a = region_from_json(j.at("A"));
    if (j.contains("B")) return DomainPair::nested(std::move(a), region_from_json(j.at("B")));
    return DomainPair::same(std::move(a));
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["domain"] = domain_to_json(c.domain);
    j["k"] = c.k;
    j["tau"] = c.tau;
    j["mode"] = c.mode == SampleMode::binomial ? "binomial" : "poisson";
    j["n_values"] = c.n_values;
    j["replicates"] = c.replicates;
    j["seed"] = c.seed;
    j["beta_grid"] = {{"min", c.beta_grid.min}, {"max", c.beta_grid.max}, {"step", c.beta_grid.step}};
    j["output_dir"] = c.output_dir;
    j["threads"] = c.threads;
    j["publication"] = c.publication;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.domain = domain_from_json(j.at("domain"));
    c.k = j.at("k").get<int>();
    c.tau = j.at("tau").get<double>();
    const std::string mode = j.value("mode", "binomial");
    if (mode == "binomial")
        c.mode = SampleMode::binomial;
    else if (mode == "poisson")
        c.mode = SampleMode::poisson;
    else
        throw std::invalid_argument("config: mode must be 'binomial' or 'poisson'");
    if (j.contains("n_values"))
        c.n_values = j.at("n_values").get<std::vector<double>>();
    else if (j.contains("t_values"))
        c.n_values = j.at("t_values").get<std::vector<double>>();
    c.replicates = j.value("replicates", std::size_t{1000});
    c.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("beta_grid")) {
        const auto& g = j.at("beta_grid");
        c.beta_grid.min = g.value("min", -5.0);
        c.beta_grid.max = g.value("max", 10.0);
        c.beta_grid.step = g.value("step", 0.01);
    }
    c.output_dir = j.value("output_dir", std::string("out"));
    c.threads = j.value("threads", 0);
    c.publication = j.value("publication", false);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config file: " + file.string());
    json j;
    in >> j;
    return config_from_json(j);
}

GammaConfig gamma_config_from_json(const json& j) {
    GammaConfig c;
    c.domain = domain_from_json(j.at("domain"));
    c.k = j.at("k").get<int>();
    c.tau = j.value("tau", 1.0);
    const std::string mode = j.value("mode", "poisson");
    c.mode = mode == "binomial" ? SampleMode::binomial : SampleMode::poisson;
    c.t_values = j.at("t_values").get<std::vector<double>>();
    if (j.contains("betas"))
        c.betas = j.at("betas").get<std::vector<double>>();
    c.mc_samples = j.value("mc_samples", std::size_t{100000});
    c.seed = j.value("seed", std::uint64_t{1});
    return c;
}

GammaConfig load_gamma_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config file: " + file.string());
    json j;
    in >> j;
    return gamma_config_from_json(j);
}

} // namespace kcover
