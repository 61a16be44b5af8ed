#include "hawkes/types.hpp"

#include "hawkes/rng.hpp"

#include <algorithm>
#include <cmath>

namespace hawkes {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidData: return "InvalidData";
        case ErrorCode::NonPositiveMark: return "NonPositiveMark";
        case ErrorCode::InvalidNormalization: return "InvalidNormalization";
        case ErrorCode::MissingMark: return "MissingMark";
        case ErrorCode::NonLinearSpec: return "NonLinearSpec";
        case ErrorCode::PerReceiverRequired: return "PerReceiverRequired";
        case ErrorCode::SpecMismatch: return "SpecMismatch";
        case ErrorCode::EmptyComponent: return "EmptyComponent";
        case ErrorCode::NonFiniteLikelihood: return "NonFiniteLikelihood";
        case ErrorCode::SingularFisher: return "SingularFisher";
        case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
        case ErrorCode::NotNormalizedLink: return "NotNormalizedLink";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::NonPositiveIncrement: return "NonPositiveIncrement";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::XiTooLarge: return "XiTooLarge";
        case ErrorCode::RequiresRepetitions: return "RequiresRepetitions";
        case ErrorCode::UnknownExperiment: return "UnknownExperiment";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
    }
    return "Unknown";
}

Realization::Realization(std::vector<MarkedEvent> events, double horizon, int dimension,
                         bool marked)
    : events_(std::move(events)), horizon_(horizon), dimension_(dimension), marked_(marked) {
    if (horizon_ <= 0.0) throw Error(ErrorCode::InvalidData, "horizon must be positive");
    if (dimension_ < 1) throw Error(ErrorCode::InvalidData, "dimension must be >= 1");
    double prev = 0.0;
    for (std::size_t k = 0; k < events_.size(); ++k) {
        const MarkedEvent& e = events_[k];
        if (!(e.time > 0.0) || !(e.time <= horizon_) || !std::isfinite(e.time))
            throw Error(ErrorCode::InvalidData,
                        "event time " + std::to_string(e.time) + " outside (0, horizon]");
        if (k > 0 && !(e.time > prev))
            throw Error(ErrorCode::InvalidData,
                        "event times must be strictly increasing (tie or disorder at index " +
                            std::to_string(k) + ")");
        if (e.component < 1 || e.component > dimension_)
            throw Error(ErrorCode::InvalidData, "event component out of range 1..d");
        if (marked_ && !e.has_mark())
            throw Error(ErrorCode::MissingMark, "marked realization has an event without mark");
        if (!marked_ && e.has_mark())
            throw Error(ErrorCode::InvalidData, "unmarked realization carries a mark");
        prev = e.time;
    }
}

std::size_t Realization::count_component(int component) const {
    std::size_t n = 0;
    for (const auto& e : events_)
        if (e.component == component) ++n;
    return n;
}

std::vector<double> Realization::times_of_component(int component) const {
    std::vector<double> out;
    for (const auto& e : events_)
        if (e.component == component) out.push_back(e.time);
    return out;
}

double Realization::sum_of_marks() const {
    double s = 0.0;
    for (const auto& e : events_) s += e.mark;
    return s;
}

bool link_is_marked(MarkLinkKind kind) { return kind != MarkLinkKind::NoMark; }

bool link_is_normalized(MarkLinkKind kind) {
    return kind == MarkLinkKind::NormalizedExp || kind == MarkLinkKind::NormalizedPower;
}

std::string link_name(MarkLinkKind kind) {
    switch (kind) {
        case MarkLinkKind::NoMark: return "none";
        case MarkLinkKind::Exp: return "exp";
        case MarkLinkKind::Power: return "power";
        case MarkLinkKind::NormalizedExp: return "normalized_exp";
        case MarkLinkKind::NormalizedPower: return "normalized_power";
    }
    return "none";
}

MarkLinkKind link_from_name(const std::string& name) {
    if (name == "none" || name.empty()) return MarkLinkKind::NoMark;
    if (name == "exp") return MarkLinkKind::Exp;
    if (name == "power") return MarkLinkKind::Power;
    if (name == "normalized_exp") return MarkLinkKind::NormalizedExp;
    if (name == "normalized_power") return MarkLinkKind::NormalizedPower;
    throw Error(ErrorCode::InvalidConfig, "unknown mark link '" + name + "'");
}

void ModelSpec::validate() const {
    if (dimension < 1) throw Error(ErrorCode::InvalidConfig, "dimension must be >= 1");
    if (linearity == Linearity::NonLinear && b_structure != BStructure::PerReceiver)
        throw Error(ErrorCode::PerReceiverRequired,
                    "nonlinear models require per-receiver decay rates");
    if (baseline_only && marked())
        throw Error(ErrorCode::InvalidConfig, "baseline-only model cannot carry a mark link");
    if (link_is_normalized(mark_link) && !has_mark_density)
        throw Error(ErrorCode::InvalidConfig,
                    "normalized mark links require the Exponential mark density");
}

ModelSpec ModelSpec::poisson(int dimension) {
    ModelSpec s;
    s.dimension = dimension;
    s.baseline_only = true;
    return s;
}

ModelSpec ModelSpec::linear(int dimension, BStructure b) {
    ModelSpec s;
    s.dimension = dimension;
    s.b_structure = b;
    return s;
}

ModelSpec ModelSpec::nonlinear(int dimension) {
    ModelSpec s;
    s.dimension = dimension;
    s.linearity = Linearity::NonLinear;
    s.b_structure = BStructure::PerReceiver;
    return s;
}

ModelSpec ModelSpec::with_mark(MarkLinkKind link, bool mark_density) const {
    ModelSpec s = *this;
    s.mark_link = link;
    s.has_mark_density = mark_density || link_is_normalized(link);
    return s;
}

HawkesParams HawkesParams::zeros(const ModelSpec& spec) {
    HawkesParams p;
    const int d = spec.dimension;
    p.m = Vec(d, 1.0);
    p.a = Matrix(d, d, 0.0);
    p.b = Matrix(d, d, 1.0);
    p.gamma = Matrix(d, d, 0.0);
    p.psi = spec.has_mark_density ? 1.0 : 0.0;
    return p;
}

HawkesParams HawkesParams::univariate(double m, double a, double b, double gamma, double psi) {
    HawkesParams p;
    p.m = Vec{m};
    p.a = Matrix(1, 1, a);
    p.b = Matrix(1, 1, b);
    p.gamma = Matrix(1, 1, gamma);
    p.psi = psi;
    return p;
}

void HawkesParams::validate(const ModelSpec& spec) const {
    const int d = spec.dimension;
    if (static_cast<int>(m.size()) != d)
        throw Error(ErrorCode::SpecMismatch, "baseline vector has wrong length");
    for (double mi : m)
        if (!(mi > 0.0) || !std::isfinite(mi))
            throw Error(ErrorCode::SpecMismatch, "baseline rates must be strictly positive");
    if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d)
        throw Error(ErrorCode::SpecMismatch, "interaction matrices have wrong shape");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (!(b(i, j) > 0.0)) throw Error(ErrorCode::SpecMismatch, "decay rates must be positive");
            if (spec.b_structure == BStructure::PerReceiver && b(i, j) != b(i, 0))
                throw Error(ErrorCode::SpecMismatch, "per-receiver spec requires b_ij == b_i");
            if (spec.linearity == Linearity::Linear && !spec.baseline_only && a(i, j) < 0.0)
                throw Error(ErrorCode::SpecMismatch, "linear model requires a_ij >= 0");
            if (spec.baseline_only && a(i, j) != 0.0)
                throw Error(ErrorCode::SpecMismatch, "baseline-only model requires a == 0");
        }
    if (spec.marked()) {
        if (gamma.rows() != d || gamma.cols() != d)
            throw Error(ErrorCode::SpecMismatch, "gamma matrix has wrong shape");
        if (link_is_normalized(spec.mark_link) || spec.has_mark_density) {
            if (!(psi > 0.0)) throw Error(ErrorCode::SpecMismatch, "psi must be positive");
        }
        if (spec.mark_link == MarkLinkKind::NormalizedExp) {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    if (!(gamma(i, j) < psi))
                        throw Error(ErrorCode::InvalidNormalization,
                                    "normalized exponential link requires gamma_ij < psi");
        }
        if (spec.mark_link == MarkLinkKind::NormalizedPower) {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    if (!(gamma(i, j) > -1.0))
                        throw Error(ErrorCode::InvalidNormalization,
                                    "normalized power link requires gamma_ij > -1");
        }
    }
}

double ExponentialMarkDistribution::sample(Rng& rng) const { return rng.exponential(psi); }

} // namespace hawkes
