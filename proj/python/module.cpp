#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kcover/analytic.hpp"
#include "kcover/config.hpp"
#include "kcover/experiment.hpp"
#include "kcover/geometry.hpp"
#include "kcover/knn.hpp"
#include "kcover/limits.hpp"
#include "kcover/sampler.hpp"

namespace py = pybind11;
using namespace kcover;

namespace {

py::array_t<double> points_array(const std::vector<double>& flat, int dim) {
    const py::ssize_t n = static_cast<py::ssize_t>(flat.size()) / dim;
    py::array_t<double> arr({n, static_cast<py::ssize_t>(dim)});
    std::copy(flat.begin(), flat.end(), arr.mutable_data());
    return arr;
}

std::vector<double> flatten(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected an (n, d) array");
    return std::vector<double>(arr.data(), arr.data() + arr.size());
}

} // namespace

PYBIND11_MODULE(_kcover, m) {
    m.doc() = "Two-sample k-coverage thresholds: geometry, sampling, limit laws";

    py::class_<Region>(m, "Region")
        .def_static("square", &Region::square, py::arg("side"))
        .def_static("disk", &Region::disk, py::arg("radius"))
        .def_static("ball", &Region::ball, py::arg("d"), py::arg("radius"))
        .def_static("torus", &Region::torus, py::arg("d"), py::arg("side"))
        .def_static("polygon", &Region::polygon, py::arg("vertices"))
        .def_property_readonly("dim", &Region::dim)
        .def_property_readonly("volume", &Region::volume)
        .def_property_readonly("perimeter", &Region::perimeter)
        .def_property_readonly("reach", &Region::reach)
        .def("contains",
             [](const Region& r, const std::vector<double>& x) { return r.contains(x); })
        .def("distance_to_boundary",
             [](const Region& r, const std::vector<double>& x) {
                 return r.distance_to_boundary(x);
             })
        .def("ball_intersection_volume",
             [](const Region& r, const std::vector<double>& x, double rad) {
                 return r.ball_intersection_volume(x, rad);
             })
        .def("metric_distance",
             [](const Region& r, const std::vector<double>& x, const std::vector<double>& y) {
                 return r.metric_distance(x, y);
             })
        .def(
            "sample_uniform",
            [](const Region& r, std::size_t count, std::uint64_t seed) {
                Rng rng(seed);
                std::vector<double> flat(count * static_cast<std::size_t>(r.dim()));
                for (std::size_t i = 0; i < count; ++i)
                    r.sample_uniform(rng, {flat.data() + i * static_cast<std::size_t>(r.dim()),
                                           static_cast<std::size_t>(r.dim())});
                return points_array(flat, r.dim());
            },
            py::arg("count"), py::arg("seed"));

    py::class_<DomainPair>(m, "DomainPair")
        .def_static("same", &DomainPair::same, py::arg("a"))
        .def_static("nested", &DomainPair::nested, py::arg("a"), py::arg("b"))
        .def_readonly("A", &DomainPair::A)
        .def_readonly("B", &DomainPair::B)
        .def_readonly("interior_flag", &DomainPair::interior_flag);

    m.def("unit_ball_volume", &unit_ball_volume, py::arg("d"));
    m.def("slice_volume", &slice_volume, py::arg("a"), py::arg("d"));
    m.def("cap_approx_volume", &cap_approx_volume, py::arg("a"), py::arg("r"), py::arg("d"));
    m.def("sigma", &sigma, py::arg("region"));
    m.def("c_dk", &c_dk, py::arg("d"), py::arg("k"));

    py::enum_<SampleMode>(m, "SampleMode")
        .value("binomial", SampleMode::binomial)
        .value("poisson", SampleMode::poisson);

    py::class_<ProcessPair>(m, "ProcessPair")
        .def_property_readonly("xs", [](const ProcessPair& p) { return points_array(p.xs, p.dim); })
        .def_property_readonly("ys", [](const ProcessPair& p) { return points_array(p.ys, p.dim); })
        .def_readonly("dim", &ProcessPair::dim)
        .def_readonly("seed", &ProcessPair::seed)
        .def_property_readonly("x_count", &ProcessPair::x_count)
        .def_property_readonly("y_count", &ProcessPair::y_count);

    m.def("sample_binomial", &sample_binomial, py::arg("pair"), py::arg("n"), py::arg("m"),
          py::arg("seed"));
    m.def("sample_poisson", &sample_poisson, py::arg("pair"), py::arg("t"), py::arg("u"),
          py::arg("seed"));

    py::class_<SpatialIndex>(m, "SpatialIndex")
        .def(py::init([](py::array_t<double> pts, const Region& region, double cell_size) {
                 return SpatialIndex(flatten(pts), region, cell_size);
             }),
             py::arg("points"), py::arg("region"), py::arg("cell_size") = 0.0)
        .def_property_readonly("point_count", &SpatialIndex::point_count)
        .def("kth_nearest_distance",
             [](const SpatialIndex& idx, const std::vector<double>& q, std::size_t k) {
                 return idx.kth_nearest_distance(q, k);
             })
        .def("count_in_ball", [](const SpatialIndex& idx, const std::vector<double>& q, double r) {
            return idx.count_in_ball(q, r);
        });

    m.def("coverage_threshold", &coverage_threshold, py::arg("pair"), py::arg("region_for_metric"),
          py::arg("k"));

    py::enum_<Regime>(m, "Regime")
        .value("interior", Regime::interior)
        .value("torus", Regime::torus)
        .value("smooth_boundary", Regime::smooth_boundary)
        .value("polygon", Regime::polygon);

    py::class_<Setting>(m, "Setting")
        .def_readonly("d", &Setting::d)
        .def_readonly("k", &Setting::k)
        .def_readonly("regime", &Setting::regime)
        .def_readonly("tau", &Setting::tau)
        .def_readonly("tau_n", &Setting::tau_n)
        .def_readonly("f0", &Setting::f0)
        .def_readonly("sigma_A", &Setting::sigma_A)
        .def_readonly("theta_d", &Setting::theta_d)
        .def_readonly("c_dk", &Setting::cdk)
        .def_readonly("J", &Setting::J);

    m.def("make_setting",
          py::overload_cast<const DomainPair&, int, double, double>(&make_setting),
          py::arg("pair"), py::arg("k"), py::arg("tau"), py::arg("tau_n"));
    m.def("make_setting", py::overload_cast<const DomainPair&, int, double>(&make_setting),
          py::arg("pair"), py::arg("k"), py::arg("tau"));

    m.def("centering", [](const Setting& s) {
        const Centering c = centering(s);
        return std::pair<double, double>(c.c1, c.c2);
    });
    m.def("transform_statistic", &transform_statistic, py::arg("R"), py::arg("n_or_t"),
          py::arg("setting"));
    m.def("r_t", &r_t, py::arg("beta"), py::arg("t"), py::arg("setting"));

    py::class_<CdfModel>(m, "CdfModel")
        .def("__call__", &CdfModel::operator())
        .def("median", &CdfModel::median)
        .def("curve", &CdfModel::curve, py::arg("beta_min"), py::arg("beta_max"), py::arg("step"))
        .def_property_readonly("label", &CdfModel::label);

    m.def("limit_cdf", &limit_cdf, py::arg("setting"));
    m.def("corrected_cdf", &corrected_cdf, py::arg("setting"), py::arg("n_or_t"),
          py::arg("mode") = SampleMode::binomial);
    m.def("median_shift", &median_shift, py::arg("model"));

    m.def("poisson_lower_tail", &poisson_lower_tail, py::arg("mu"), py::arg("k"));

    py::class_<VacancyQuery>(m, "VacancyQuery")
        .def(py::init([](const DomainPair& pair, double t, double r, int k) {
                 return VacancyQuery{pair, t, r, k};
             }),
             py::arg("pair"), py::arg("t"), py::arg("r"), py::arg("k"))
        .def("mu", [](const VacancyQuery& q, const std::vector<double>& x) { return q.mu(x); });

    m.def("vacancy_probability",
          [](const VacancyQuery& q, const std::vector<double>& x) {
              return vacancy_probability(q, x);
          });
    m.def("gamma_quadrature", &gamma_quadrature, py::arg("query"));
    m.def(
        "gamma_mc",
        [](const VacancyQuery& q, std::size_t samples, std::uint64_t seed) {
            const McEstimate e = gamma_mc(q, samples, seed);
            return std::pair<double, double>(e.estimate, e.std_error);
        },
        py::arg("query"), py::arg("samples"), py::arg("seed"));
    m.def("moat_bulk_expansion", &moat_bulk_expansion, py::arg("setting"), py::arg("t"),
          py::arg("beta"));
    m.def(
        "lemexp_check",
        [](double s, double alpha0, int ell, int d, int variant) {
            const LemexpResult r = lemexp_check(s, alpha0, ell, d, variant);
            return std::make_tuple(r.lhs, r.rhs, r.residual);
        },
        py::arg("s"), py::arg("alpha0"), py::arg("ell"), py::arg("d"), py::arg("variant") = 1);
    m.def("predicted_probability", &predicted_probability, py::arg("pair"), py::arg("setting"),
          py::arg("n_or_t"), py::arg("r"), py::arg("mode"),
          py::arg("mc_samples") = std::size_t{1000000},
          py::arg("mc_seed") = std::uint64_t{0x9E3779B97F4A7C15ULL});

    py::class_<BetaGrid>(m, "BetaGrid")
        .def(py::init([](double min, double max, double step) {
                 return BetaGrid{min, max, step};
             }),
             py::arg("min") = -5.0, py::arg("max") = 10.0, py::arg("step") = 0.01)
        .def_readwrite("min", &BetaGrid::min)
        .def_readwrite("max", &BetaGrid::max)
        .def_readwrite("step", &BetaGrid::step);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("domain", &ExperimentConfig::domain)
        .def_readwrite("k", &ExperimentConfig::k)
        .def_readwrite("tau", &ExperimentConfig::tau)
        .def_readwrite("mode", &ExperimentConfig::mode)
        .def_readwrite("n_values", &ExperimentConfig::n_values)
        .def_readwrite("replicates", &ExperimentConfig::replicates)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("beta_grid", &ExperimentConfig::beta_grid)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("publication", &ExperimentConfig::publication);

    py::class_<Report>(m, "Report")
        .def_readonly("n_or_t", &Report::n_or_t)
        .def_readonly("samples", &Report::samples)
        .def_readonly("failed_replicates", &Report::failed_replicates)
        .def_readonly("ks_limit", &Report::ks_limit)
        .def_readonly("ks_corrected", &Report::ks_corrected)
        .def_readonly("median_sample", &Report::median_sample)
        .def_property_readonly("limit_model", [](const Report& r) { return r.limit_model; })
        .def_property_readonly("corrected_model",
                               [](const Report& r) { return r.corrected_model; })
        .def("ecdf", &Report::ecdf);

    m.def("run_single", &run_single, py::arg("config"), py::arg("n_or_t"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_campaign", &run_campaign, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("median_recenter", &median_recenter, py::arg("report"));
    m.def("emit", &emit, py::arg("report"), py::arg("dir"));
    m.def("write_points_csv", &write_points_csv, py::arg("pair"), py::arg("file"));
    m.def("ks_distance", &ks_distance, py::arg("sorted_samples"), py::arg("model"));

    m.def("mix_seed", &mix_seed, py::arg("seed"), py::arg("i"));
}
