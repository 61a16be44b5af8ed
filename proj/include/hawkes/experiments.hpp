#pragma once

#include "hawkes/simulate.hpp"
#include "hawkes/testing.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hawkes::experiments {

// Simulation presets used across the experiment drivers.
SimConfig poisson_scenario(double rate, double horizon, std::uint64_t seed);
SimConfig linear_scenario(double a, double b, double horizon, std::uint64_t seed);
SimConfig nonlinear_scenario(double a, double b, double horizon, std::uint64_t seed);
// phi(x) = exp(gamma x), marks Exponential(psi)
SimConfig marked_exp_scenario(double a, double b, double gamma, double psi, double horizon,
                              std::uint64_t seed);
// phi(x) = ((psi-gamma)/psi) exp(gamma x)
SimConfig marked_normalized_scenario(double a, double b, double gamma, double psi,
                                     double horizon, std::uint64_t seed);
// phi(x) = x^gamma (no normalizing constant)
SimConfig marked_power_scenario(double a, double b, double gamma, double psi, double horizon,
                                std::uint64_t seed);
// d=2, m=(0.5,0.2), a=((0.4,0.2),(0.2,0.6)), b=(1,b2)
SimConfig bivariate_scenario(double b2, double horizon, std::uint64_t seed);

struct ExperimentOverrides {
    std::size_t reps = 0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    int jobs = 0;
    std::size_t num_subsets = 0;
    int bootstrap_b = 0;
};

std::vector<std::string> experiment_catalog();

// Runs a built-in study (fig1 ... fig13) at desk scale, writing QQ data,
// rejection-rate tables, and a summary JSON into out_dir. Returns the list
// of files written.
std::vector<std::string> run_experiment(const std::string& name,
                                        const std::filesystem::path& out_dir,
                                        const ExperimentOverrides& overrides = {});

} // namespace hawkes::experiments
