#include "hawkes/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace hawkes::io {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void config_error(const std::string& message) {
    throw Error(ErrorCode::InvalidConfig, message);
}

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : object.items())
        if (!allowed.count(item.key()))
            config_error("unknown key '" + item.key() + "' in " + where);
}

Vec parse_vec(const json& node, int expected, const std::string& where) {
    Vec out;
    if (node.is_number()) {
        out.assign(1, node.get<double>());
    } else if (node.is_array()) {
        for (const auto& v : node) out.push_back(v.get<double>());
    } else {
        config_error(where + " must be a number or an array");
    }
    if (expected > 0 && static_cast<int>(out.size()) != expected)
        config_error(where + " must have length " + std::to_string(expected));
    return out;
}

Matrix parse_mat(const json& node, int d, const std::string& where) {
    Matrix out(d, d);
    if (node.is_number()) {
        if (d != 1) config_error(where + " must be a " + std::to_string(d) + "x matrix");
        out(0, 0) = node.get<double>();
        return out;
    }
    if (!node.is_array() || static_cast<int>(node.size()) != d)
        config_error(where + " must be a " + std::to_string(d) + "-row matrix");
    for (int i = 0; i < d; ++i) {
        if (!node[i].is_array() || static_cast<int>(node[i].size()) != d)
            config_error(where + " row " + std::to_string(i + 1) + " must have length " +
                         std::to_string(d));
        for (int j = 0; j < d; ++j) out(i, j) = node[i][j].get<double>();
    }
    return out;
}

Matrix parse_b(const json& node, const ModelSpec& spec) {
    const int d = spec.dimension;
    Matrix out(d, d);
    if (node.is_number()) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out(i, j) = node.get<double>();
        return out;
    }
    if (node.is_array() && !node.empty() && node[0].is_array()) return parse_mat(node, d, "b");
    const Vec rows = parse_vec(node, d, "b");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = rows[i];
    return out;
}

ModelSpec parse_spec(const json& node) {
    reject_unknown_keys(node,
                        {"dimension", "linearity", "baseline_only", "mark_link", "mark_density",
                         "b_structure"},
                        "model");
    ModelSpec spec;
    spec.dimension = node.value("dimension", 1);
    const std::string linearity = node.value("linearity", "linear");
    if (linearity == "linear")
        spec.linearity = Linearity::Linear;
    else if (linearity == "nonlinear")
        spec.linearity = Linearity::NonLinear;
    else
        config_error("linearity must be 'linear' or 'nonlinear'");
    spec.baseline_only = node.value("baseline_only", false);
    spec.mark_link = link_from_name(node.value("mark_link", "none"));
    spec.has_mark_density = node.value("mark_density", link_is_marked(spec.mark_link));
    if (link_is_normalized(spec.mark_link)) spec.has_mark_density = true;
    const std::string bs = node.value("b_structure", "per_receiver");
    if (bs == "per_receiver")
        spec.b_structure = BStructure::PerReceiver;
    else if (bs == "full")
        spec.b_structure = BStructure::FullMatrix;
    else
        config_error("b_structure must be 'per_receiver' or 'full'");
    spec.validate();
    return spec;
}

HawkesParams parse_params(const json& node, const ModelSpec& spec) {
    reject_unknown_keys(node, {"m", "a", "b", "gamma", "psi"}, "params");
    HawkesParams params = HawkesParams::zeros(spec);
    const int d = spec.dimension;
    if (node.contains("m")) params.m = parse_vec(node.at("m"), d, "m");
    if (node.contains("a")) params.a = parse_mat(node.at("a"), d, "a");
    if (node.contains("b")) params.b = parse_b(node.at("b"), spec);
    if (node.contains("gamma")) params.gamma = parse_mat(node.at("gamma"), d, "gamma");
    if (node.contains("psi")) params.psi = node.at("psi").get<double>();
    params.validate(spec);
    return params;
}

json spec_json(const ModelSpec& spec) {
    json node;
    node["dimension"] = spec.dimension;
    node["linearity"] = spec.linearity == Linearity::Linear ? "linear" : "nonlinear";
    node["baseline_only"] = spec.baseline_only;
    node["mark_link"] = link_name(spec.mark_link);
    node["mark_density"] = spec.has_mark_density;
    node["b_structure"] =
        spec.b_structure == BStructure::PerReceiver ? "per_receiver" : "full";
    return node;
}

void attach_provenance(json& node, const Provenance* provenance) {
    node["library_version"] = kLibraryVersion;
    if (!provenance) return;
    char digest[32];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(provenance->config_digest));
    node["config_digest"] = digest;
    node["seed"] = provenance->seed;
}

json params_json(const ModelSpec& spec, const HawkesParams& params) {
    json node;
    const int d = spec.dimension;
    node["m"] = params.m;
    json a = json::array();
    for (int i = 0; i < d; ++i) {
        json row = json::array();
        for (int j = 0; j < d; ++j) row.push_back(params.a(i, j));
        a.push_back(row);
    }
    node["a"] = a;
    if (spec.b_structure == BStructure::PerReceiver) {
        json b = json::array();
        for (int i = 0; i < d; ++i) b.push_back(params.b(i, 0));
        node["b"] = b;
    } else {
        json b = json::array();
        for (int i = 0; i < d; ++i) {
            json row = json::array();
            for (int j = 0; j < d; ++j) row.push_back(params.b(i, j));
            b.push_back(row);
        }
        node["b"] = b;
    }
    if (spec.marked()) {
        json g = json::array();
        for (int i = 0; i < d; ++i) {
            json row = json::array();
            for (int j = 0; j < d; ++j) row.push_back(params.gamma(i, j));
            g.push_back(row);
        }
        node["gamma"] = g;
        if (spec.has_mark_density) node["psi"] = params.psi;
    }
    return node;
}

} // namespace

std::vector<MarkedEvent> jitter_ties(std::vector<MarkedEvent> events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const MarkedEvent& a, const MarkedEvent& b) { return a.time < b.time; });
    if (events.size() < 2) return events;
    const double span = events.back().time - events.front().time;
    const double jitter = 1e-9 * span / static_cast<double>(events.size() - 1);
    for (std::size_t k = 1; k < events.size(); ++k)
        if (!(events[k].time > events[k - 1].time))
            events[k].time = events[k - 1].time + jitter;
    return events;
}

Realization read_events_csv(const std::filesystem::path& path, const CsvReadOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidData, "cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::InvalidData, "empty file " + path.string());
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(),
                               [](char c) { return c == ' ' || c == '\r' || c == '\t'; }),
                s.end());
        return s;
    };
    const std::string header = strip(line);
    bool has_mark_column;
    if (header == "time,component,mark")
        has_mark_column = true;
    else if (header == "time,component")
        has_mark_column = false;
    else
        throw Error(ErrorCode::InvalidData,
                    "expected header 'time,component[,mark]' in " + path.string());

    std::vector<MarkedEvent> events;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = strip(line);
        if (row.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(row);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        const std::size_t expected = has_mark_column ? 3 : 2;
        if (cells.size() != expected)
            throw Error(ErrorCode::InvalidData, path.string() + ":" + std::to_string(line_no) +
                                                    ": wrong number of columns");
        try {
            MarkedEvent e;
            e.time = std::stod(cells[0]);
            e.component = std::stoi(cells[1]);
            if (has_mark_column) e.mark = std::stod(cells[2]);
            events.push_back(e);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidData,
                        path.string() + ":" + std::to_string(line_no) + ": parse error");
        }
    }

    std::stable_sort(events.begin(), events.end(),
                     [](const MarkedEvent& a, const MarkedEvent& b) { return a.time < b.time; });
    if (options.jitter_ties) events = jitter_ties(std::move(events));

    int dimension = options.dimension;
    if (dimension == 0)
        for (const auto& e : events) dimension = std::max(dimension, e.component);
    if (dimension == 0) dimension = 1;
    double horizon = options.horizon;
    if (horizon <= 0.0) {
        double max_time = 0.0;
        for (const auto& e : events) max_time = std::max(max_time, e.time);
        horizon = max_time > 0.0 ? max_time * (1.0 + 1e-9) : 1.0;
    }
    return Realization(std::move(events), horizon, dimension, has_mark_column);
}

void write_events_csv(const std::filesystem::path& path, const Realization& realization) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidData, "cannot write " + path.string());
    out << (realization.marked() ? "time,component,mark\n" : "time,component\n");
    for (const auto& e : realization.events()) {
        out << format_double(e.time) << "," << e.component;
        if (realization.marked()) out << "," << format_double(e.mark);
        out << "\n";
    }
}

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    reject_unknown_keys(root,
                        {"model", "params", "init", "bounds", "horizon", "seed", "repetitions",
                         "alpha", "bootstrap_b", "p_of_n", "num_subsets", "xi", "theta0",
                         "coef", "coef_b", "component", "multistart", "jitter_ties"},
                        "config");
    RunConfig config;
    if (!root.contains("model")) config_error("config requires a 'model' section");
    config.spec = parse_spec(root.at("model"));
    if (root.contains("params")) {
        config.params = parse_params(root.at("params"), config.spec);
        config.has_params = true;
    } else {
        config.params = HawkesParams::zeros(config.spec);
    }
    if (root.contains("init")) config.init = parse_params(root.at("init"), config.spec);
    if (root.contains("bounds")) {
        const json& node = root.at("bounds");
        if (!node.is_object()) config_error("bounds must map parameter names to [lo, hi]");
        for (const auto& item : node.items()) {
            const json& range = item.value();
            if (!range.is_array() || range.size() != 2)
                config_error("bounds entry '" + item.key() + "' must be [lo, hi]");
            config.bounds.push_back(
                {item.key(), {range[0].get<double>(), range[1].get<double>()}});
        }
    }
    config.horizon = root.value("horizon", 0.0);
    config.seed = root.value("seed", std::uint64_t{1});
    config.repetitions = root.value("repetitions", std::size_t{1});
    config.alpha = root.value("alpha", 0.05);
    config.bootstrap_b = root.value("bootstrap_b", 150);
    config.p_of_n = root.value("p_of_n", std::size_t{0});
    config.num_subsets = root.value("num_subsets", std::size_t{200});
    config.xi = root.value("xi", 0.0);
    config.theta0 = root.value("theta0", 0.0);
    config.coef_name = root.value("coef", std::string("a[1,1]"));
    config.coef_name_b = root.value("coef_b", std::string());
    config.component = root.value("component", 0);
    config.multistart = root.value("multistart", 5);
    config.jitter_ties = root.value("jitter_ties", false);
    if (!(config.alpha > 0.0) || !(config.alpha < 1.0)) config_error("alpha must be in (0,1)");
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

std::string spec_to_json(const ModelSpec& spec) { return spec_json(spec).dump(2); }

std::string params_to_json(const ModelSpec& spec, const HawkesParams& params) {
    return params_json(spec, params).dump(2);
}

std::uint64_t fnv1a_digest(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string fit_to_json(const FitResult& fit, const Provenance* provenance) {
    json node;
    attach_provenance(node, provenance);
    node["model"] = spec_json(fit.spec);
    node["params"] = params_json(fit.spec, fit.params);
    node["log_lik"] = fit.log_lik;
    node["converged"] = fit.converged;
    node["iterations"] = fit.iterations;
    node["gradient_norm"] = fit.gradient_norm;
    const ParamLayout layout(fit.spec);
    json names = json::array();
    for (const auto& entry : layout.entries()) names.push_back(entry.name);
    node["param_names"] = names;
    if (!fit.fisher.empty()) {
        json fisher = json::array();
        for (int i = 0; i < fit.fisher.rows(); ++i) {
            json row = json::array();
            for (int j = 0; j < fit.fisher.cols(); ++j) row.push_back(fit.fisher(i, j));
            fisher.push_back(row);
        }
        node["fisher"] = fisher;
    }
    return node.dump(2);
}

std::string test_report_to_json(const testing::TestReport& report,
                                const Provenance* provenance) {
    json node;
    attach_provenance(node, provenance);
    node["name"] = report.name;
    node["statistic"] = report.statistic;
    node["pvalue"] = report.pvalue;
    node["alpha"] = report.alpha;
    node["reject"] = report.reject;
    node["details"] = report.details;
    return node.dump(2);
}

std::string gof_report_to_json(const testing::GofReport& report,
                               const Provenance* provenance) {
    json node;
    attach_provenance(node, provenance);
    node["model_label"] = report.model_label;
    node["pvalues"] = report.per_subset_pvalues;
    node["rejections_at_05"] = report.rejection_count_at_05;
    node["ks_distance_to_uniform"] = report.ks_distance_to_uniform;
    node["band_inside"] = report.band.inside;
    node["band_alpha"] = report.band.global_alpha;
    if (report.band.first_violation)
        node["band_first_violation"] = *report.band.first_violation;
    node["xi"] = report.xi_used;
    node["p_of_n"] = report.p_of_n_used;
    node["fits_used"] = report.fits_used;
    return node.dump(2);
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    json node;
    node["model"] = spec_json(manifest.spec);
    node["params"] = params_json(manifest.spec, manifest.params);
    node["horizon"] = manifest.horizon;
    node["seed"] = manifest.seed;
    node["files"] = manifest.files;
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidData, "cannot write " + path.string());
    out << node.dump(2) << "\n";
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidData, "cannot open manifest " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidData, std::string("invalid manifest: ") + e.what());
    }
    Manifest manifest;
    manifest.spec = parse_spec(root.at("model"));
    manifest.params = parse_params(root.at("params"), manifest.spec);
    manifest.horizon = root.value("horizon", 0.0);
    manifest.seed = root.value("seed", std::uint64_t{0});
    if (root.contains("files"))
        manifest.files = root.at("files").get<std::vector<std::string>>();
    return manifest;
}

void write_qq_csv(const std::filesystem::path& path, const Vec& sample,
                  const stats::BandResult& band, const std::string& reference) {
    if (sample.size() != band.n)
        throw Error(ErrorCode::InvalidConfig, "sample size does not match the band");
    Vec sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    const bool normal = reference == "normal";
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidData, "cannot write " + path.string());
    out << "theoretical_quantile,empirical_quantile,band_lower,band_upper\n";
    const std::size_t n = sorted.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        double theo = u, lo = band.lower[k], hi = band.upper[k];
        double value = sorted[k];
        if (normal) {
            theo = stats::normal_quantile(u);
            lo = stats::normal_quantile(std::clamp(lo, 1e-15, 1.0 - 1e-15));
            hi = stats::normal_quantile(std::clamp(hi, 1e-15, 1.0 - 1e-15));
        }
        out << format_double(theo) << "," << format_double(value) << "," << format_double(lo)
            << "," << format_double(hi) << "\n";
    }
}

} // namespace hawkes::io
