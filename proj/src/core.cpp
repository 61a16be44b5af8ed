#include "hawkes/core.hpp"

#include "hawkes/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hawkes {

namespace {

double digamma(double x) {
    // Recurrence up to x >= 6, then the asymptotic series.
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
    return result;
}

double normalized_power_constant(double gamma, double psi) {
    // E[kappa^gamma] = Gamma(1+gamma) / psi^gamma under Exponential(psi).
    return std::exp(gamma * std::log(psi) - std::lgamma(1.0 + gamma));
}

} // namespace

double link_value(MarkLinkKind kind, double gamma, double psi, double kappa) {
    switch (kind) {
        case MarkLinkKind::NoMark:
            return 1.0;
        case MarkLinkKind::Exp:
            return std::exp(gamma * kappa);
        case MarkLinkKind::Power:
            if (!(kappa > 0.0))
                throw Error(ErrorCode::NonPositiveMark, "power link requires positive marks");
            return std::pow(kappa, gamma);
        case MarkLinkKind::NormalizedExp:
            if (!(gamma < psi))
                throw Error(ErrorCode::InvalidNormalization,
                            "normalized exponential link requires gamma < psi");
            return ((psi - gamma) / psi) * std::exp(gamma * kappa);
        case MarkLinkKind::NormalizedPower:
            if (!(kappa > 0.0))
                throw Error(ErrorCode::NonPositiveMark, "power link requires positive marks");
            if (!(gamma > -1.0))
                throw Error(ErrorCode::InvalidNormalization,
                            "normalized power link requires gamma > -1");
            return normalized_power_constant(gamma, psi) * std::pow(kappa, gamma);
    }
    return 1.0;
}

double link_dgamma(MarkLinkKind kind, double gamma, double psi, double kappa) {
    switch (kind) {
        case MarkLinkKind::NoMark:
            return 0.0;
        case MarkLinkKind::Exp:
            return kappa * std::exp(gamma * kappa);
        case MarkLinkKind::Power:
            return std::log(kappa) * std::pow(kappa, gamma);
        case MarkLinkKind::NormalizedExp:
            return link_value(kind, gamma, psi, kappa) * (kappa - 1.0 / (psi - gamma));
        case MarkLinkKind::NormalizedPower:
            return link_value(kind, gamma, psi, kappa) *
                   (std::log(psi) - digamma(1.0 + gamma) + std::log(kappa));
    }
    return 0.0;
}

double link_dpsi(MarkLinkKind kind, double gamma, double psi, double kappa) {
    switch (kind) {
        case MarkLinkKind::NormalizedExp:
            return link_value(kind, gamma, psi, kappa) * gamma / (psi * (psi - gamma));
        case MarkLinkKind::NormalizedPower:
            return link_value(kind, gamma, psi, kappa) * gamma / psi;
        default:
            return 0.0;
    }
}

double mark_link_eval(const ModelSpec& spec, const HawkesParams& params, int i, int j,
                      double kappa) {
    return link_value(spec.mark_link, params.gamma(i, j), params.psi, kappa);
}

IntensityState::IntensityState(const ModelSpec& spec, const HawkesParams& params)
    : spec_(&spec), params_(&params), s_(spec.dimension, spec.dimension, 0.0) {}

void IntensityState::advance(double dt) {
    if (dt == 0.0) return;
    const int d = spec_->dimension;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s_(i, j) *= std::exp(-params_->b(i, j) * dt);
    time_ += dt;
}

double IntensityState::jump_size(int i, int source, double mark) const {
    double phi = 1.0;
    if (spec_->marked()) {
        if (std::isnan(mark))
            throw Error(ErrorCode::MissingMark, "marked model requires a mark on every event");
        phi = mark_link_eval(*spec_, *params_, i, source, mark);
    }
    return params_->a(i, source) * phi;
}

void IntensityState::apply_event(int component, double mark) {
    const int j = component - 1;
    for (int i = 0; i < spec_->dimension; ++i) s_(i, j) += jump_size(i, j, mark);
}

double IntensityState::lambda_star(int i) const {
    double v = params_->m[i];
    for (int j = 0; j < spec_->dimension; ++j) v += s_(i, j);
    return v;
}

double IntensityState::lambda_star_at(int i, double dt) const {
    double v = params_->m[i];
    for (int j = 0; j < spec_->dimension; ++j)
        v += s_(i, j) * std::exp(-params_->b(i, j) * dt);
    return v;
}

Vec IntensityState::lambda_star_vector() const {
    Vec v(spec_->dimension);
    for (int i = 0; i < spec_->dimension; ++i) v[i] = lambda_star(i);
    return v;
}

IntensityValue intensity_at(const HawkesParams& params, const ModelSpec& spec,
                            const Realization& realization, double t) {
    params.validate(spec);
    const int d = spec.dimension;
    IntensityValue out;
    out.lambda_star.assign(d, 0.0);
    out.lambda.assign(d, 0.0);
    for (int i = 0; i < d; ++i) {
        double v = params.m[i];
        for (const auto& e : realization.events()) {
            if (!(e.time < t)) break;
            const int j = e.component - 1;
            double phi = 1.0;
            if (spec.marked()) phi = mark_link_eval(spec, params, i, j, e.mark);
            v += params.a(i, j) * phi * std::exp(-params.b(i, j) * (t - e.time));
        }
        out.lambda_star[i] = v;
        out.lambda[i] = std::max(v, 0.0);
    }
    if (spec.linearity == Linearity::Linear) out.lambda = out.lambda_star;
    return out;
}

EventLimits event_left_right_limits(const HawkesParams& params, const ModelSpec& spec,
                                    const Realization& realization) {
    params.validate(spec);
    if (spec.marked() && !realization.marked())
        throw Error(ErrorCode::MissingMark, "marked spec requires marked events");
    EventLimits out;
    out.left.reserve(realization.size());
    out.right.reserve(realization.size());

    IntensityState state(spec, params);
    double prev = 0.0;
    for (const auto& e : realization.events()) {
        state.advance(e.time - prev);
        Vec left = state.lambda_star_vector();
        state.apply_event(e.component, e.mark);
        Vec right = state.lambda_star_vector();
        out.left.push_back(std::move(left));
        out.right.push_back(std::move(right));
        prev = e.time;
    }
    return out;
}

namespace {

// One decayed-kernel segment of the raw-intensity integral:
// int_0^dt s * exp(-b u) du, per source pair.
double segment_mass(double s, double b, double dt) {
    return s * (-std::expm1(-b * dt)) / b;
}

CompensatorResult compensator_linear_impl(const HawkesParams& params, const ModelSpec& spec,
                                          const Realization& realization, double t_end) {
    const int d = spec.dimension;
    CompensatorResult out;
    out.per_component.assign(d, 0.0);

    IntensityState state(spec, params);
    double prev = 0.0;
    for (const auto& e : realization.events()) {
        if (e.time >= t_end) break;
        const double dt = e.time - prev;
        for (int i = 0; i < d; ++i) {
            double seg = params.m[i] * dt;
            for (int j = 0; j < d; ++j) seg += segment_mass(state.raw()(i, j), params.b(i, j), dt);
            out.per_component[i] += seg;
        }
        state.advance(dt);
        state.apply_event(e.component, e.mark);
        prev = e.time;
    }
    const double dt = t_end - prev;
    if (dt > 0.0) {
        for (int i = 0; i < d; ++i) {
            double seg = params.m[i] * dt;
            for (int j = 0; j < d; ++j) seg += segment_mass(state.raw()(i, j), params.b(i, j), dt);
            out.per_component[i] += seg;
        }
    }
    for (double v : out.per_component) out.total += v;
    return out;
}

CompensatorResult compensator_nonlinear_impl(const HawkesParams& params, const ModelSpec& spec,
                                             const Realization& realization, double t_end) {
    const int d = spec.dimension;
    CompensatorResult out;
    out.per_component.assign(d, 0.0);

    IntensityState state(spec, params);
    double prev = 0.0;
    auto add_segment = [&](double seg_start, double seg_end) {
        for (int i = 0; i < d; ++i) {
            const double mi = params.m[i];
            const double bi = params.b_receiver(i);
            const double lam_plus = state.lambda_star(i);
            const double restart = restart_time(lam_plus, mi, bi, seg_start, seg_end);
            out.per_component[i] += mi * (seg_end - restart) +
                                    (lam_plus - mi) / bi *
                                        (std::exp(-bi * (restart - seg_start)) -
                                         std::exp(-bi * (seg_end - seg_start)));
        }
    };
    for (const auto& e : realization.events()) {
        if (e.time >= t_end) break;
        add_segment(prev, e.time);
        state.advance(e.time - prev);
        state.apply_event(e.component, e.mark);
        prev = e.time;
    }
    if (t_end > prev) add_segment(prev, t_end);
    for (double v : out.per_component) out.total += v;
    return out;
}

} // namespace

CompensatorResult compensator_linear(const HawkesParams& params, const ModelSpec& spec,
                                     const Realization& realization, double t_end) {
    if (spec.linearity != Linearity::Linear)
        throw Error(ErrorCode::NonLinearSpec, "compensator_linear requires a linear spec");
    params.validate(spec);
    return compensator_linear_impl(params, spec, realization, t_end);
}

CompensatorResult compensator_nonlinear(const HawkesParams& params, const ModelSpec& spec,
                                        const Realization& realization, double t_end) {
    if (spec.b_structure != BStructure::PerReceiver)
        throw Error(ErrorCode::PerReceiverRequired,
                    "nonlinear compensator requires per-receiver decay rates");
    params.validate(spec);
    return compensator_nonlinear_impl(params, spec, realization, t_end);
}

CompensatorResult compensator(const HawkesParams& params, const ModelSpec& spec,
                              const Realization& realization, double t_end) {
    return spec.linearity == Linearity::Linear
               ? compensator_linear(params, spec, realization, t_end)
               : compensator_nonlinear(params, spec, realization, t_end);
}

double restart_time(double lambda_star_plus, double m_i, double b_i, double t_k, double t_next) {
    if (lambda_star_plus >= 0.0) return t_k;
    const double cross = t_k + std::log((m_i - lambda_star_plus) / m_i) / b_i;
    return std::min(cross, t_next);
}

TimeChangeResult time_change(const HawkesParams& params, const ModelSpec& spec,
                             const Realization& realization) {
    params.validate(spec);
    const int d = spec.dimension;
    TimeChangeResult out;
    out.per_component.assign(d, Vec{});

    const bool linear = spec.linearity == Linearity::Linear;
    IntensityState state(spec, params);
    Vec cumulative(d, 0.0);
    double prev = 0.0;

    auto segment_to = [&](double seg_end) {
        const double dt = seg_end - prev;
        for (int i = 0; i < d; ++i) {
            if (linear) {
                double seg = params.m[i] * dt;
                for (int j = 0; j < d; ++j)
                    seg += segment_mass(state.raw()(i, j), params.b(i, j), dt);
                cumulative[i] += seg;
            } else {
                const double mi = params.m[i];
                const double bi = params.b_receiver(i);
                const double lam_plus = state.lambda_star(i);
                const double restart = restart_time(lam_plus, mi, bi, prev, seg_end);
                cumulative[i] += mi * (seg_end - restart) +
                                 (lam_plus - mi) / bi *
                                     (std::exp(-bi * (restart - prev)) - std::exp(-bi * dt));
            }
        }
    };

    for (const auto& e : realization.events()) {
        segment_to(e.time);
        state.advance(e.time - prev);
        prev = e.time;
        double total = 0.0;
        for (int i = 0; i < d; ++i) total += cumulative[i];
        out.per_component[e.component - 1].push_back(cumulative[e.component - 1]);
        out.merged_times.push_back(total);
        if (realization.marked() && spec.has_mark_density) {
            const ExponentialMarkDistribution dist{params.psi};
            out.mark_pit.push_back(dist.cdf(e.mark));
        }
        state.apply_event(e.component, e.mark);
    }
    if (realization.horizon() > prev) segment_to(realization.horizon());
    out.horizon_mass = cumulative;
    for (double v : cumulative) out.horizon_mass_total += v;
    return out;
}

StationarityReport stationarity_check(const HawkesParams& params, const ModelSpec& spec,
                                      std::uint64_t mc_seed, int mc_samples) {
    params.validate(spec);
    const int d = spec.dimension;
    Matrix q(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) q(i, j) = std::abs(params.a(i, j)) / params.b(i, j);

    StationarityReport report;
    report.spectral_radius = power_iteration_radius(q);
    report.stationary = report.spectral_radius < 1.0;

    if (!spec.marked()) {
        report.normalized = true;
        return report;
    }
    if (link_is_normalized(spec.mark_link)) {
        report.normalized = true;
        return report;
    }
    if (!spec.has_mark_density) {
        // no mark law to average against; only gamma == 0 normalizes exactly
        bool all_zero = true;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) all_zero &= params.gamma(i, j) == 0.0;
        report.normalized = all_zero;
        return report;
    }
    // Monte-Carlo check of E_f[phi_ij(kappa)] = 1 for every pair.
    const ExponentialMarkDistribution dist{params.psi};
    bool all_normalized = true;
    for (int i = 0; i < d && all_normalized; ++i)
        for (int j = 0; j < d && all_normalized; ++j) {
            if (params.gamma(i, j) == 0.0) continue;
            Rng rng(derive_stream(mc_seed, static_cast<std::uint64_t>(i) * d + j));
            double sum = 0.0, sum_sq = 0.0;
            for (int s = 0; s < mc_samples; ++s) {
                const double phi =
                    link_value(spec.mark_link, params.gamma(i, j), params.psi, dist.sample(rng));
                sum += phi;
                sum_sq += phi * phi;
            }
            const double mean = sum / mc_samples;
            const double var = std::max(0.0, sum_sq / mc_samples - mean * mean);
            const double se = std::sqrt(var / mc_samples);
            if (std::abs(mean - 1.0) > 4.0 * se + 1e-3) all_normalized = false;
        }
    report.normalized = all_normalized;
    return report;
}

IdentifiabilityReport identifiability_check(const Realization& realization,
                                            const ModelSpec& spec) {
    const int d = spec.dimension;
    IdentifiabilityReport report;
    report.per_pair.assign(d, std::vector<bool>(d, false));

    if (!spec.marked()) {
        report.ok = true;
        for (int j = 0; j < d; ++j) {
            const bool has_jump = realization.count_component(j + 1) >= 1;
            for (int i = 0; i < d; ++i) report.per_pair[i][j] = has_jump;
            report.ok = report.ok && has_jump;
        }
        return report;
    }

    for (int j = 0; j < d; ++j) {
        // column j identifiable iff component j has two distinct positive marks
        double first_mark = kNoMark;
        bool distinct = false;
        for (const auto& e : realization.events()) {
            if (e.component != j + 1 || !(e.mark > 0.0)) continue;
            if (std::isnan(first_mark)) {
                first_mark = e.mark;
            } else if (e.mark != first_mark) {
                distinct = true;
                break;
            }
        }
        for (int i = 0; i < d; ++i) report.per_pair[i][j] = distinct;
    }
    report.ok = true;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) report.ok = report.ok && report.per_pair[i][j];
    return report;
}

namespace detail {

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

double quadrature_compensator_component(const HawkesParams& params, const ModelSpec& spec,
                                        const Realization& realization, int i, double t_end,
                                        bool truncate, double abs_tol) {
    // evaluate lambda*_i by brute force, independent of IntensityState
    auto lambda_star = [&](double t) {
        double v = params.m[i];
        for (const auto& e : realization.events()) {
            if (!(e.time < t)) break;
            const int j = e.component - 1;
            double phi = 1.0;
            if (spec.marked()) phi = mark_link_eval(spec, params, i, j, e.mark);
            v += params.a(i, j) * phi * std::exp(-params.b(i, j) * (t - e.time));
        }
        return v;
    };
    auto integrand = [&](double t) {
        const double v = lambda_star(t);
        return truncate ? std::max(v, 0.0) : v;
    };

    std::vector<double> breakpoints{0.0};
    for (const auto& e : realization.events())
        if (e.time < t_end) breakpoints.push_back(e.time);
    breakpoints.push_back(t_end);

    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        double lo = breakpoints[k];
        double hi = breakpoints[k + 1];
        if (!(hi > lo)) continue;
        std::vector<double> pieces{lo};
        if (truncate) {
            // locate a sign change by bisection so the kink is a split point
            const double eps = 1e-13 * std::max(1.0, hi - lo);
            double va = lambda_star(lo + eps);
            double vb = lambda_star(hi - eps);
            if ((va < 0.0) != (vb < 0.0)) {
                double x0 = lo + eps, x1 = hi - eps;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (x0 + x1);
                    if ((lambda_star(mid) < 0.0) == (va < 0.0))
                        x0 = mid;
                    else
                        x1 = mid;
                }
                pieces.push_back(0.5 * (x0 + x1));
            }
        }
        pieces.push_back(hi);
        for (std::size_t p = 0; p + 1 < pieces.size(); ++p)
            total += integrate(integrand, pieces[p], pieces[p + 1],
                               abs_tol / static_cast<double>(breakpoints.size()));
    }
    return total;
}

} // namespace detail

} // namespace hawkes
