#pragma once

#include "hawkes/errors.hpp"
#include "hawkes/linalg.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hawkes {

constexpr double kNoMark = std::numeric_limits<double>::quiet_NaN();

struct MarkedEvent {
    double time = 0.0;
    int component = 1; // 1-based
    double mark = kNoMark;

    bool has_mark() const noexcept { return !std::isnan(mark); }
};

// An ordered event stream on [0, horizon]. Construction validates the
// ordering and component-range invariants; ties are rejected unless the
// caller jitters them first (see io::jitter_ties).
class Realization {
public:
    Realization() = default;
    Realization(std::vector<MarkedEvent> events, double horizon, int dimension, bool marked);

    const std::vector<MarkedEvent>& events() const noexcept { return events_; }
    double horizon() const noexcept { return horizon_; }
    int dimension() const noexcept { return dimension_; }
    bool marked() const noexcept { return marked_; }
    std::size_t size() const noexcept { return events_.size(); }

    std::size_t count_component(int component) const;
    std::vector<double> times_of_component(int component) const;
    double sum_of_marks() const;

private:
    std::vector<MarkedEvent> events_;
    double horizon_ = 0.0;
    int dimension_ = 1;
    bool marked_ = false;
};

enum class Linearity { Linear, NonLinear };
enum class BStructure { FullMatrix, PerReceiver };

enum class MarkLinkKind {
    NoMark,
    Exp,            // phi(x) = exp(gamma x)
    Power,          // phi(x) = x^gamma, x > 0
    NormalizedExp,  // phi(x) = ((psi - gamma)/psi) exp(gamma x), gamma < psi
    NormalizedPower // phi(x) = c x^gamma with c = psi^gamma / Gamma(1+gamma)
};

bool link_is_marked(MarkLinkKind kind);
bool link_is_normalized(MarkLinkKind kind);
std::string link_name(MarkLinkKind kind);
MarkLinkKind link_from_name(const std::string& name);

struct ModelSpec {
    int dimension = 1;
    Linearity linearity = Linearity::Linear;
    bool baseline_only = false; // Poisson model: all a_ij == 0
    MarkLinkKind mark_link = MarkLinkKind::NoMark;
    bool has_mark_density = false; // Exponential(psi) mark law attached
    BStructure b_structure = BStructure::PerReceiver;

    bool marked() const noexcept { return link_is_marked(mark_link); }
    void validate() const;

    static ModelSpec poisson(int dimension);
    static ModelSpec linear(int dimension, BStructure b = BStructure::PerReceiver);
    static ModelSpec nonlinear(int dimension);
    ModelSpec with_mark(MarkLinkKind link, bool mark_density = true) const;
};

// Full parameter set; b is stored densely and kept row-constant under
// PerReceiver. gamma/psi are meaningful only when the spec is marked.
struct HawkesParams {
    Vec m;        // baseline rates, length d
    Matrix a;     // interaction weights, d x d
    Matrix b;     // decay rates, d x d
    Matrix gamma; // mark-link exponents, d x d
    double psi = 0.0;

    static HawkesParams zeros(const ModelSpec& spec);
    static HawkesParams univariate(double m, double a, double b,
                                   double gamma = 0.0, double psi = 0.0);

    double b_receiver(int i) const { return b(i, 0); }
    void validate(const ModelSpec& spec) const;
};

struct ExponentialMarkDistribution {
    double psi = 1.0;

    double density(double x) const { return psi * std::exp(-psi * x); }
    double log_density(double x) const { return std::log(psi) - psi * x; }
    double cdf(double x) const { return x <= 0.0 ? 0.0 : -std::expm1(-psi * x); }
    double sample(class Rng& rng) const;
};

} // namespace hawkes
