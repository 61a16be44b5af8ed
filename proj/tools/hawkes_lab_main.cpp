#include "hawkes/experiments.hpp"
#include "hawkes/io.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/testing.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <sstream>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace hawkes;

namespace {

// exit codes: 0 ok, 2 config error, 3 data error, 4 numerical failure
int exit_code_for(const Error& error) {
    switch (error.code()) {
        case ErrorCode::InvalidConfig:
        case ErrorCode::UnknownExperiment:
        case ErrorCode::RequiresRepetitions:
            return 2;
        case ErrorCode::InvalidData:
        case ErrorCode::MissingMark:
        case ErrorCode::NonPositiveMark:
        case ErrorCode::EmptySample:
        case ErrorCode::NonPositiveIncrement:
        case ErrorCode::TooFewSamples:
        case ErrorCode::EmptyComponent:
            return 3;
        default:
            return 4;
    }
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir = ".";
    std::string qq_out;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required = true) {
    auto* opt = cmd->add_option("--config", flags.config_path, "run configuration (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--qq-out", flags.qq_out, "write QQ-plot data (CSV) to this path");
    cmd->add_option("--seed", flags.seed, "override the config seed");
    cmd->add_option("--alpha", flags.alpha, "override the test level");
    cmd->add_option("--jobs", flags.jobs, "parallel worker count (default HAWKES_LAB_JOBS)");
}

io::Provenance g_provenance;

io::RunConfig load_config(const CommonFlags& flags) {
    std::ifstream in(flags.config_path);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config " + flags.config_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    io::RunConfig config = io::parse_run_config(buffer.str());
    if (flags.seed != 0) config.seed = flags.seed;
    if (flags.alpha > 0.0) config.alpha = flags.alpha;
    g_provenance.config_digest = io::fnv1a_digest(buffer.str());
    g_provenance.seed = config.seed;
    return config;
}

std::optional<FitBounds> config_bounds(const io::RunConfig& config) {
    if (config.bounds.empty()) return std::nullopt;
    const ParamLayout layout(config.spec);
    FitBounds bounds = FitBounds::defaults(layout);
    for (const auto& [name, range] : config.bounds)
        bounds.set(layout, name, range.first, range.second);
    return bounds;
}

std::vector<Realization> load_data_files(const std::vector<std::string>& files,
                                         const io::RunConfig& config) {
    if (files.empty()) throw Error(ErrorCode::InvalidData, "no input files given");
    std::vector<Realization> reps;
    io::CsvReadOptions read_options;
    read_options.horizon = config.horizon;
    read_options.dimension = config.spec.dimension;
    read_options.jitter_ties = config.jitter_ties;
    for (const auto& f : files) reps.push_back(io::read_events_csv(f, read_options));
    return reps;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidData, "cannot write " + path.string());
    out << text << "\n";
}

int cmd_simulate(const CommonFlags& flags) {
    const io::RunConfig config = load_config(flags);
    if (!config.has_params)
        throw Error(ErrorCode::InvalidConfig, "simulate requires a 'params' section");
    if (!(config.horizon > 0.0))
        throw Error(ErrorCode::InvalidConfig, "simulate requires a positive horizon");
    SimConfig sim;
    sim.spec = config.spec;
    sim.params = config.params;
    sim.horizon = config.horizon;
    sim.seed = config.seed;

    fs::create_directories(flags.out_dir);
    const std::vector<Realization> reps =
        simulate_repetitions(sim, config.repetitions, flags.jobs);
    io::Manifest manifest;
    manifest.spec = config.spec;
    manifest.params = config.params;
    manifest.horizon = config.horizon;
    manifest.seed = config.seed;
    for (std::size_t r = 0; r < reps.size(); ++r) {
        char name[32];
        std::snprintf(name, sizeof(name), "rep_%04zu.csv", r);
        io::write_events_csv(fs::path(flags.out_dir) / name, reps[r]);
        manifest.files.push_back(name);
    }
    io::write_manifest(fs::path(flags.out_dir) / "manifest.json", manifest);
    std::cout << "wrote " << reps.size() << " repetition(s) to " << flags.out_dir << "\n";
    return 0;
}

int cmd_fit(const CommonFlags& flags, const std::vector<std::string>& files) {
    const io::RunConfig config = load_config(flags);
    const std::vector<Realization> reps = load_data_files(files, config);
    FitOptions options;
    options.multistart = config.multistart;
    options.jobs = flags.jobs;
    fs::create_directories(flags.out_dir);

    if (reps.size() == 1) {
        const FitResult fit = fit_mle(config.spec, reps[0], config.init, config_bounds(config), options);
        const std::string report = io::fit_to_json(fit, &g_provenance);
        write_text(fs::path(flags.out_dir) / "fit.json", report);
        std::cout << report << "\n";
        if (!fit.converged) return 4;
        return 0;
    }
    const RepetitionFits fits = fit_repetitions(config.spec, reps, config_bounds(config), options);
    std::string report = "{\n  \"repetitions\": " + std::to_string(reps.size()) +
                         ",\n  \"used\": " + std::to_string(fits.used) +
                         ",\n  \"mean_params\": " +
                         io::params_to_json(config.spec, fits.mean_params) + "\n}";
    write_text(fs::path(flags.out_dir) / "fit.json", report);
    std::cout << report << "\n";
    return 0;
}

int cmd_test(const std::string& which, const CommonFlags& flags,
             const std::vector<std::string>& files) {
    const io::RunConfig config = load_config(flags);
    const std::vector<Realization> reps = load_data_files(files, config);
    FitOptions fit_options;
    fit_options.multistart = config.multistart;
    fit_options.jobs = flags.jobs;
    fs::create_directories(flags.out_dir);
    const double t_max = reps[0].horizon();

    auto write_report = [&](const testing::TestReport& report) {
        const std::string text = io::test_report_to_json(report, &g_provenance);
        write_text(fs::path(flags.out_dir) / ("test_" + which + ".json"), text);
        std::cout << text << "\n";
    };

    if (which == "coef") {
        const FitResult fit = fit_mle(config.spec, reps[0], config.init, config_bounds(config),
                                      fit_options);
        const auto report = testing::test_single_coefficient(fit, t_max, config.coef_name,
                                                             config.theta0, config.alpha);
        write_report(report);
        return report.reject ? 0 : 0;
    }
    if (which == "equality") {
        if (config.coef_name_b.empty())
            throw Error(ErrorCode::InvalidConfig, "equality test requires 'coef_b'");
        const FitResult fit = fit_mle(config.spec, reps[0], config.init, config_bounds(config),
                                      fit_options);
        write_report(testing::test_coefficient_equality(fit, t_max, config.coef_name,
                                                        config.coef_name_b, config.alpha));
        return 0;
    }
    if (which == "zscore") {
        ModelSpec unmarked = config.spec;
        unmarked.mark_link = MarkLinkKind::NoMark;
        unmarked.has_mark_density = false;
        write_report(testing::test_mark_zscore(reps[0], unmarked, config.spec, config.alpha,
                                               testing::GammaTying::PerPair, fit_options));
        return 0;
    }
    if (which == "bootstrap") {
        write_report(testing::test_bootstrap_coefficient(reps[0], config.spec, config.coef_name,
                                                         config.theta0, config.bootstrap_b,
                                                         config.alpha, config.seed,
                                                         fit_options));
        return 0;
    }
    if (which == "gof") {
        if (reps.size() < 2)
            throw Error(ErrorCode::RequiresRepetitions,
                        "the goodness-of-fit test needs repeated observations");
        testing::GofOptions options;
        options.p_of_n = config.p_of_n;
        options.num_subsets = config.num_subsets;
        options.xi = config.xi;
        options.alpha = config.alpha;
        options.seed = config.seed;
        options.component = config.component;
        options.jobs = flags.jobs;
        options.fit_options = fit_options;
        const testing::GofReport report = testing::gof_subsample_test(reps, config.spec,
                                                                      options);
        const std::string text = io::gof_report_to_json(report, &g_provenance);
        write_text(fs::path(flags.out_dir) / "test_gof.json", text);
        std::cout << text << "\n";
        if (!flags.qq_out.empty()) {
            const auto band = stats::uniform_band(report.per_subset_pvalues.size(),
                                                  config.alpha);
            io::write_qq_csv(flags.qq_out, report.per_subset_pvalues, band, "uniform");
        }
        return 0;
    }
    if (which == "residuals") {
        const FitResult fit = fit_mle(config.spec, reps[0], config.init, config_bounds(config),
                                      fit_options);
        const auto residuals = testing::residual_diagnostics(fit.params, config.spec, reps[0]);
        std::string text = "{\n  \"per_component\": [";
        for (std::size_t i = 0; i < residuals.per_component.size(); ++i) {
            if (i) text += ", ";
            text += "{\"statistic\": " + std::to_string(residuals.per_component[i].statistic) +
                    ", \"pvalue\": " + std::to_string(residuals.per_component[i].pvalue) + "}";
        }
        text += "],\n  \"merged_uniform_pvalue\": " +
                std::to_string(residuals.merged_uniform.pvalue);
        if (residuals.has_mark_report)
            text += ",\n  \"mark_uniform_pvalue\": " +
                    std::to_string(residuals.mark_uniform.pvalue);
        text += "\n}";
        write_text(fs::path(flags.out_dir) / "test_residuals.json", text);
        std::cout << text << "\n";
        if (!flags.qq_out.empty() && !residuals.per_component_increments[0].empty()) {
            Vec pit;
            for (double x : residuals.per_component_increments[0])
                pit.push_back(-std::expm1(-x));
            const auto band = stats::uniform_band(pit.size(), config.alpha);
            io::write_qq_csv(flags.qq_out, pit, band, "uniform");
        }
        return 0;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown test '" + which + "'");
}

int cmd_experiment(const std::string& name, const CommonFlags& flags,
                   const experiments::ExperimentOverrides& overrides) {
    const auto files = experiments::run_experiment(name, flags.out_dir, overrides);
    for (const auto& f : files) std::cout << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation, fitting and testing of marked exponential Hawkes processes"};
    app.require_subcommand(1);

    CommonFlags sim_flags;
    auto* sim = app.add_subcommand("simulate", "simulate repetitions to CSV files");
    add_common(sim, sim_flags);

    CommonFlags fit_flags;
    std::vector<std::string> fit_files;
    auto* fit = app.add_subcommand("fit", "maximum-likelihood fit of event files");
    add_common(fit, fit_flags);
    fit->add_option("files", fit_files, "event CSV files")->required();

    CommonFlags test_flags;
    std::vector<std::string> test_files;
    std::string test_kind;
    auto* test = app.add_subcommand("test", "run a hypothesis test");
    test->add_option("kind", test_kind, "coef|equality|zscore|bootstrap|gof|residuals")
        ->required();
    add_common(test, test_flags);
    test->add_option("files", test_files, "event CSV files")->required();

    CommonFlags exp_flags;
    std::string experiment_name;
    experiments::ExperimentOverrides overrides;
    auto* exp = app.add_subcommand("experiment", "run a built-in study");
    exp->add_option("name", experiment_name, "experiment name (fig1..fig13)")->required();
    exp->add_option("--out", exp_flags.out_dir, "output directory");
    exp->add_option("--seed", overrides.seed, "override the study seed");
    exp->add_option("--reps", overrides.reps, "override the replication count");
    exp->add_option("--horizon", overrides.horizon, "override the observation horizon");
    exp->add_option("--jobs", overrides.jobs, "parallel worker count");
    exp->add_option("--subsets", overrides.num_subsets, "override the GoF subset count");
    exp->add_option("--bootstrap-b", overrides.bootstrap_b, "override the bootstrap size");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_flags);
        if (fit->parsed()) return cmd_fit(fit_flags, fit_files);
        if (test->parsed()) return cmd_test(test_kind, test_flags, test_files);
        if (exp->parsed()) return cmd_experiment(experiment_name, exp_flags, overrides);
    } catch (const Error& error) {
        std::cerr << "error [" << error_code_name(error.code()) << "]: " << error.what()
                  << "\n";
        return exit_code_for(error);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 4;
    }
    return 2;
}
