#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hawkes/core.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/stats.hpp"
#include "hawkes/testing.hpp"

#include <optional>

namespace py = pybind11;
using namespace hawkes;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    const int d = static_cast<int>(rows.size());
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows[i].size()) != d)
            throw Error(ErrorCode::InvalidConfig, "matrix rows must all have length d");
        for (int j = 0; j < d; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> from_matrix(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

ModelSpec make_spec(int dimension, const std::string& linearity, bool baseline_only,
                    const std::string& mark_link, bool mark_density,
                    const std::string& b_structure) {
    ModelSpec spec;
    spec.dimension = dimension;
    if (linearity == "linear")
        spec.linearity = Linearity::Linear;
    else if (linearity == "nonlinear")
        spec.linearity = Linearity::NonLinear;
    else
        throw Error(ErrorCode::InvalidConfig, "linearity must be 'linear' or 'nonlinear'");
    spec.baseline_only = baseline_only;
    spec.mark_link = link_from_name(mark_link);
    spec.has_mark_density = mark_density || link_is_normalized(spec.mark_link);
    if (b_structure == "per_receiver")
        spec.b_structure = BStructure::PerReceiver;
    else if (b_structure == "full")
        spec.b_structure = BStructure::FullMatrix;
    else
        throw Error(ErrorCode::InvalidConfig, "b_structure must be 'per_receiver' or 'full'");
    spec.validate();
    return spec;
}

HawkesParams make_params(const ModelSpec& spec, const Vec& m,
                         const std::vector<std::vector<double>>& a,
                         const std::vector<std::vector<double>>& b,
                         const std::optional<std::vector<std::vector<double>>>& gamma,
                         double psi) {
    HawkesParams params = HawkesParams::zeros(spec);
    params.m = m;
    if (!a.empty()) params.a = to_matrix(a);
    if (!b.empty()) params.b = to_matrix(b);
    if (gamma) params.gamma = to_matrix(*gamma);
    if (psi > 0.0) params.psi = psi;
    params.validate(spec);
    return params;
}

Realization make_realization(const std::vector<std::tuple<double, int, double>>& marked_events,
                             double horizon, int dimension) {
    std::vector<MarkedEvent> events;
    events.reserve(marked_events.size());
    for (const auto& [t, c, k] : marked_events) events.push_back(MarkedEvent{t, c, k});
    return Realization(std::move(events), horizon, dimension, true);
}

Realization make_unmarked_realization(const std::vector<std::pair<double, int>>& plain_events,
                                      double horizon, int dimension) {
    std::vector<MarkedEvent> events;
    events.reserve(plain_events.size());
    for (const auto& [t, c] : plain_events) events.push_back(MarkedEvent{t, c, kNoMark});
    return Realization(std::move(events), horizon, dimension, false);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "marked exponential Hawkes processes: simulation, fitting, testing";

    py::register_exception<Error>(m, "HawkesError");

    py::class_<MarkedEvent>(m, "MarkedEvent")
        .def(py::init([](double time, int component, double mark) {
                 return MarkedEvent{time, component, mark};
             }),
             py::arg("time"), py::arg("component") = 1, py::arg("mark") = kNoMark)
        .def_readonly("time", &MarkedEvent::time)
        .def_readonly("component", &MarkedEvent::component)
        .def_readonly("mark", &MarkedEvent::mark)
        .def("__repr__", [](const MarkedEvent& e) {
            return "MarkedEvent(t=" + std::to_string(e.time) +
                   ", c=" + std::to_string(e.component) + ")";
        });

    py::class_<Realization>(m, "Realization")
        .def_static("marked", &make_realization, py::arg("events"), py::arg("horizon"),
                    py::arg("dimension") = 1)
        .def_static("unmarked", &make_unmarked_realization, py::arg("events"),
                    py::arg("horizon"), py::arg("dimension") = 1)
        .def_property_readonly("horizon", &Realization::horizon)
        .def_property_readonly("dimension", &Realization::dimension)
        .def_property_readonly("is_marked", &Realization::marked)
        .def("__len__", &Realization::size)
        .def("times",
             [](const Realization& r) {
                 Vec t;
                 for (const auto& e : r.events()) t.push_back(e.time);
                 return t;
             })
        .def("components",
             [](const Realization& r) {
                 std::vector<int> c;
                 for (const auto& e : r.events()) c.push_back(e.component);
                 return c;
             })
        .def("marks", [](const Realization& r) {
            Vec k;
            for (const auto& e : r.events()) k.push_back(e.mark);
            return k;
        });

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init(&make_spec), py::arg("dimension") = 1, py::arg("linearity") = "linear",
             py::arg("baseline_only") = false, py::arg("mark_link") = "none",
             py::arg("mark_density") = false, py::arg("b_structure") = "per_receiver")
        .def_readonly("dimension", &ModelSpec::dimension)
        .def_property_readonly("is_marked", &ModelSpec::marked);

    py::class_<HawkesParams>(m, "HawkesParams")
        .def(py::init(&make_params), py::arg("spec"), py::arg("m"),
             py::arg("a") = std::vector<std::vector<double>>{},
             py::arg("b") = std::vector<std::vector<double>>{},
             py::arg("gamma") = std::nullopt, py::arg("psi") = 0.0)
        .def_readonly("m", &HawkesParams::m)
        .def_property_readonly("a", [](const HawkesParams& p) { return from_matrix(p.a); })
        .def_property_readonly("b", [](const HawkesParams& p) { return from_matrix(p.b); })
        .def_property_readonly("gamma",
                               [](const HawkesParams& p) { return from_matrix(p.gamma); })
        .def_readonly("psi", &HawkesParams::psi);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("params", &FitResult::params)
        .def_readonly("log_lik", &FitResult::log_lik)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("gradient_norm", &FitResult::gradient_norm)
        .def_property_readonly("fisher",
                               [](const FitResult& f) { return from_matrix(f.fisher); })
        .def_property_readonly("param_names", [](const FitResult& f) {
            std::vector<std::string> names;
            for (const auto& e : f.layout().entries()) names.push_back(e.name);
            return names;
        });

    m.def(
        "simulate",
        [](const ModelSpec& spec, const HawkesParams& params, double horizon,
           std::uint64_t seed, std::uint64_t max_events) {
            SimConfig config{spec, params, horizon, seed, max_events};
            return simulate_hawkes(config);
        },
        py::arg("spec"), py::arg("params"), py::arg("horizon"), py::arg("seed") = 1,
        py::arg("max_events") = 10'000'000);

    m.def(
        "simulate_repetitions",
        [](const ModelSpec& spec, const HawkesParams& params, double horizon, std::size_t n,
           std::uint64_t seed, int jobs) {
            SimConfig config{spec, params, horizon, seed, 10'000'000};
            return simulate_repetitions(config, n, jobs);
        },
        py::arg("spec"), py::arg("params"), py::arg("horizon"), py::arg("n"),
        py::arg("seed") = 1, py::arg("jobs") = 0);

    m.def("simulate_poisson", &simulate_poisson, py::arg("rate"), py::arg("horizon"),
          py::arg("seed") = 1);

    m.def(
        "intensity",
        [](const HawkesParams& params, const ModelSpec& spec, const Realization& realization,
           double t) {
            const IntensityValue v = intensity_at(params, spec, realization, t);
            return py::make_tuple(v.lambda_star, v.lambda);
        },
        py::arg("params"), py::arg("spec"), py::arg("realization"), py::arg("t"));

    m.def(
        "compensator",
        [](const HawkesParams& params, const ModelSpec& spec, const Realization& realization,
           double t) {
            const CompensatorResult c = compensator(params, spec, realization, t);
            return py::make_tuple(c.per_component, c.total);
        },
        py::arg("params"), py::arg("spec"), py::arg("realization"), py::arg("t"));

    m.def(
        "time_change",
        [](const HawkesParams& params, const ModelSpec& spec, const Realization& realization) {
            const TimeChangeResult tc = time_change(params, spec, realization);
            py::dict out;
            out["per_component"] = tc.per_component;
            out["merged"] = tc.merged_times;
            out["mark_pit"] = tc.mark_pit;
            out["horizon_mass"] = tc.horizon_mass;
            return out;
        },
        py::arg("params"), py::arg("spec"), py::arg("realization"));

    m.def("log_likelihood", &log_likelihood, py::arg("params"), py::arg("spec"),
          py::arg("realization"), py::arg("include_mark_density") = false);

    m.def("log_likelihood_gradient", &log_likelihood_gradient, py::arg("params"),
          py::arg("spec"), py::arg("realization"), py::arg("include_mark_density") = false);

    m.def(
        "fit",
        [](const ModelSpec& spec, const Realization& realization, int multistart, int jobs) {
            FitOptions options;
            options.multistart = multistart;
            options.jobs = jobs;
            return fit_mle(spec, realization, std::nullopt, std::nullopt, options);
        },
        py::arg("spec"), py::arg("realization"), py::arg("multistart") = 5,
        py::arg("jobs") = 0);

    m.def(
        "stationarity",
        [](const HawkesParams& params, const ModelSpec& spec) {
            const StationarityReport report = stationarity_check(params, spec);
            py::dict out;
            out["spectral_radius"] = report.spectral_radius;
            out["stationary"] = report.stationary;
            out["normalized"] = report.normalized;
            return out;
        },
        py::arg("params"), py::arg("spec"));

    m.def(
        "test_coefficient",
        [](const FitResult& fit, double t_max, const std::string& coef, double theta0,
           double alpha) {
            const auto report =
                testing::test_single_coefficient(fit, t_max, coef, theta0, alpha);
            py::dict out;
            out["name"] = report.name;
            out["statistic"] = report.statistic;
            out["pvalue"] = report.pvalue;
            out["reject"] = report.reject;
            return out;
        },
        py::arg("fit"), py::arg("t_max"), py::arg("coef"), py::arg("theta0"),
        py::arg("alpha") = 0.05);

    m.def(
        "gof_subsample_test",
        [](const std::vector<Realization>& reps, const ModelSpec& spec, std::size_t p_of_n,
           std::size_t num_subsets, double xi, double alpha, std::uint64_t seed, int jobs) {
            testing::GofOptions options;
            options.p_of_n = p_of_n;
            options.num_subsets = num_subsets;
            options.xi = xi;
            options.alpha = alpha;
            options.seed = seed;
            options.jobs = jobs;
            const testing::GofReport report = testing::gof_subsample_test(reps, spec, options);
            py::dict out;
            out["pvalues"] = report.per_subset_pvalues;
            out["band_inside"] = report.band.inside;
            out["rejections_at_05"] = report.rejection_count_at_05;
            out["ks_distance_to_uniform"] = report.ks_distance_to_uniform;
            out["xi"] = report.xi_used;
            out["p_of_n"] = report.p_of_n_used;
            return out;
        },
        py::arg("reps"), py::arg("spec"), py::arg("p_of_n") = 0,
        py::arg("num_subsets") = 200, py::arg("xi") = 0.0, py::arg("alpha") = 0.05,
        py::arg("seed") = 20240001, py::arg("jobs") = 0);

    m.def(
        "residual_diagnostics",
        [](const HawkesParams& params, const ModelSpec& spec, const Realization& realization) {
            const auto report = testing::residual_diagnostics(params, spec, realization);
            py::dict out;
            std::vector<double> pvalues;
            for (const auto& ks : report.per_component) pvalues.push_back(ks.pvalue);
            out["per_component_pvalues"] = pvalues;
            out["merged_uniform_pvalue"] = report.merged_uniform.pvalue;
            if (report.has_mark_report) out["mark_uniform_pvalue"] = report.mark_uniform.pvalue;
            return out;
        },
        py::arg("params"), py::arg("spec"), py::arg("realization"));

    m.def("normal_cdf", &stats::normal_cdf, py::arg("x"));
    m.def("normal_quantile", &stats::normal_quantile, py::arg("p"));
    m.def("chi2_sf", &stats::chi2_sf, py::arg("x"), py::arg("dof"));
    m.def(
        "ks_test_uniform",
        [](Vec sample) {
            const auto report = stats::ks_test_uniform(std::move(sample));
            return py::make_tuple(report.statistic, report.pvalue);
        },
        py::arg("sample"));
    m.def(
        "ks_test_exp1",
        [](const Vec& increments) {
            const auto report = stats::ks_test_exp1(increments);
            return py::make_tuple(report.statistic, report.pvalue);
        },
        py::arg("increments"));
}
