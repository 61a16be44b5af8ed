#pragma once

#include "hawkes/likelihood.hpp"
#include "hawkes/testing.hpp"
#include "hawkes/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hawkes::io {

// CSV schema: header "time,component,mark" (mark column optional), 1-based
// components, '.' decimal separator. Rows need not be sorted; ties are
// rejected unless jitter is requested.
struct CsvReadOptions {
    double horizon = 0.0; // 0: inferred as max time rounded up
    int dimension = 0;    // 0: inferred as max component
    bool jitter_ties = false;
};

Realization read_events_csv(const std::filesystem::path& path, const CsvReadOptions& options = {});
void write_events_csv(const std::filesystem::path& path, const Realization& realization);

// Run configuration (JSON). Unknown keys are rejected.
struct RunConfig {
    ModelSpec spec;
    HawkesParams params;
    bool has_params = false;
    std::optional<HawkesParams> init;
    std::vector<std::pair<std::string, std::pair<double, double>>> bounds;
    double horizon = 0.0;
    std::uint64_t seed = 1;
    std::size_t repetitions = 1;
    double alpha = 0.05;
    int bootstrap_b = 150;
    std::size_t p_of_n = 0;
    std::size_t num_subsets = 200;
    double xi = 0.0;
    double theta0 = 0.0;
    std::string coef_name = "a[1,1]";
    std::string coef_name_b; // second coefficient for equality tests
    int component = 0;
    int multistart = 5;
    bool jitter_ties = false;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

inline constexpr const char* kLibraryVersion = "0.1.0";

// reproducibility trail attached to every emitted report
struct Provenance {
    std::uint64_t config_digest = 0; // FNV-1a of the configuration text
    std::uint64_t seed = 0;
};

std::uint64_t fnv1a_digest(const std::string& text);

std::string spec_to_json(const ModelSpec& spec);
std::string params_to_json(const ModelSpec& spec, const HawkesParams& params);
std::string fit_to_json(const FitResult& fit, const Provenance* provenance = nullptr);
std::string test_report_to_json(const testing::TestReport& report,
                                const Provenance* provenance = nullptr);
std::string gof_report_to_json(const testing::GofReport& report,
                               const Provenance* provenance = nullptr);

struct Manifest {
    ModelSpec spec;
    HawkesParams params;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> files;
};

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

// QQ-plot data: sorted sample against theoretical quantiles plus band bounds.
void write_qq_csv(const std::filesystem::path& path, const Vec& sample,
                  const stats::BandResult& band, const std::string& reference);

// 1e-9 * mean gap perturbation of tied times, applied before validation.
std::vector<MarkedEvent> jitter_ties(std::vector<MarkedEvent> events);

} // namespace hawkes::io
