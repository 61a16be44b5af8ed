#include "hawkes/likelihood.hpp"

#include "hawkes/parallel.hpp"
#include "hawkes/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hawkes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kFdEps = 6.055454452393343e-06; // cbrt(machine epsilon)

std::string pair_name(const char* base, int i, int j) {
    return std::string(base) + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
}

} // namespace

ParamLayout::ParamLayout(const ModelSpec& spec) : spec_(spec) {
    spec_.validate();
    const int d = spec_.dimension;
    for (int i = 0; i < d; ++i)
        entries_.push_back({ParamKind::Baseline, i, 0, true, "m[" + std::to_string(i + 1) + "]"});
    if (!spec_.baseline_only) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                entries_.push_back({ParamKind::Interaction, i, j, false, pair_name("a", i, j)});
        if (spec_.b_structure == BStructure::PerReceiver) {
            for (int i = 0; i < d; ++i)
                entries_.push_back({ParamKind::Decay, i, 0, true, "b[" + std::to_string(i + 1) + "]"});
        } else {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    entries_.push_back({ParamKind::Decay, i, j, true, pair_name("b", i, j)});
        }
        if (spec_.marked()) {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    entries_.push_back({ParamKind::Gamma, i, j, false, pair_name("gamma", i, j)});
            if (link_is_normalized(spec_.mark_link))
                entries_.push_back({ParamKind::Psi, 0, 0, true, "psi"});
        }
    }
}

Vec ParamLayout::pack(const HawkesParams& params) const {
    Vec theta(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const ParamEntry& e = entries_[k];
        switch (e.kind) {
            case ParamKind::Baseline: theta[k] = params.m[e.i]; break;
            case ParamKind::Interaction: theta[k] = params.a(e.i, e.j); break;
            case ParamKind::Decay:
                theta[k] = spec_.b_structure == BStructure::PerReceiver ? params.b(e.i, 0)
                                                                        : params.b(e.i, e.j);
                break;
            case ParamKind::Gamma: theta[k] = params.gamma(e.i, e.j); break;
            case ParamKind::Psi: theta[k] = params.psi; break;
        }
    }
    return theta;
}

HawkesParams ParamLayout::unpack(const Vec& theta) const {
    HawkesParams params = HawkesParams::zeros(spec_);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const ParamEntry& e = entries_[k];
        switch (e.kind) {
            case ParamKind::Baseline: params.m[e.i] = theta[k]; break;
            case ParamKind::Interaction: params.a(e.i, e.j) = theta[k]; break;
            case ParamKind::Decay:
                if (spec_.b_structure == BStructure::PerReceiver) {
                    for (int j = 0; j < spec_.dimension; ++j) params.b(e.i, j) = theta[k];
                } else {
                    params.b(e.i, e.j) = theta[k];
                }
                break;
            case ParamKind::Gamma: params.gamma(e.i, e.j) = theta[k]; break;
            case ParamKind::Psi: params.psi = theta[k]; break;
        }
    }
    return params;
}

int ParamLayout::index_of(const std::string& name) const {
    for (std::size_t k = 0; k < entries_.size(); ++k)
        if (entries_[k].name == name) return static_cast<int>(k);
    // single-index shorthand for d = 1: "m", "a", "b", "gamma"
    for (std::size_t k = 0; k < entries_.size(); ++k)
        if (entries_[k].name.rfind(name + "[", 0) == 0 && spec_.dimension == 1)
            return static_cast<int>(k);
    throw Error(ErrorCode::InvalidConfig, "unknown parameter name '" + name + "'");
}

std::vector<int> ParamLayout::gamma_indices() const {
    std::vector<int> idx;
    for (std::size_t k = 0; k < entries_.size(); ++k)
        if (entries_[k].kind == ParamKind::Gamma) idx.push_back(static_cast<int>(k));
    return idx;
}

FitBounds FitBounds::defaults(const ParamLayout& layout) {
    FitBounds bounds;
    const int n = layout.size();
    bounds.lower.assign(n, 0.0);
    bounds.upper.assign(n, 0.0);
    const bool linear = layout.spec().linearity == Linearity::Linear;
    for (int k = 0; k < n; ++k) {
        switch (layout.entry(k).kind) {
            case ParamKind::Baseline:
            case ParamKind::Decay:
            case ParamKind::Psi:
                bounds.lower[k] = 1e-8;
                bounds.upper[k] = 1e8;
                break;
            case ParamKind::Interaction:
                bounds.lower[k] = linear ? 0.0 : -1e6;
                bounds.upper[k] = 1e6;
                break;
            case ParamKind::Gamma:
                bounds.lower[k] = -50.0;
                bounds.upper[k] = 50.0;
                break;
        }
    }
    return bounds;
}

void FitBounds::set(const ParamLayout& layout, const std::string& name, double lo, double hi) {
    if (!(lo <= hi)) throw Error(ErrorCode::InvalidConfig, "bounds require lower <= upper");
    const int k = layout.index_of(name);
    lower[k] = lo;
    upper[k] = hi;
}

void FitBounds::fix(const ParamLayout& layout, const std::string& name, double value) {
    set(layout, name, value, value);
}

namespace detail {

PassResult likelihood_pass(const HawkesParams& params, const ModelSpec& spec,
                           const std::vector<MarkedEvent>& exciting,
                           const std::vector<MarkedEvent>& counted, double t_end,
                           const ParamLayout& layout, const PassOptions& options) {
    const int d = spec.dimension;
    const bool linear = spec.linearity == Linearity::Linear;
    const bool marked = spec.marked();
    const bool grad = options.want_gradient;
    if (grad && !linear)
        throw Error(ErrorCode::NumericalFailure,
                    "analytic gradients are only available for linear specs");

    const int p = layout.size();
    // index tables into the layout (-1: block absent from the layout)
    std::vector<int> m_idx(d, -1), b_idx(static_cast<std::size_t>(d) * d, -1),
        a_idx(static_cast<std::size_t>(d) * d, -1), g_idx(static_cast<std::size_t>(d) * d, -1);
    int psi_idx = -1;
    for (int k = 0; k < p; ++k) {
        const ParamEntry& e = layout.entry(k);
        switch (e.kind) {
            case ParamKind::Baseline: m_idx[e.i] = k; break;
            case ParamKind::Interaction: a_idx[e.i * d + e.j] = k; break;
            case ParamKind::Decay:
                if (spec.b_structure == BStructure::PerReceiver) {
                    for (int j = 0; j < d; ++j) b_idx[e.i * d + j] = k;
                } else {
                    b_idx[e.i * d + e.j] = k;
                }
                break;
            case ParamKind::Gamma: g_idx[e.i * d + e.j] = k; break;
            case ParamKind::Psi: psi_idx = k; break;
        }
    }

    // kernel states at the current time t+ (per receiver/source pair)
    Vec ps(static_cast<std::size_t>(d) * d, 0.0); // sum phi exp(-b age)
    Vec rs(static_cast<std::size_t>(d) * d, 0.0); // sum age phi exp(-b age)
    Vec gs(static_cast<std::size_t>(d) * d, 0.0); // sum dphi/dgamma exp(-b age)
    Vec ws(static_cast<std::size_t>(d) * d, 0.0); // sum dphi/dpsi exp(-b age)

    double event_terms = 0.0;
    Vec comp(d, 0.0);
    Vec grad_events, grad_comp;
    if (grad) {
        grad_events.assign(p, 0.0);
        grad_comp.assign(p, 0.0);
    }

    double t_cur = 0.0;
    std::size_t ie = 0, ic = 0;

    auto advance_to = [&](double t_next) {
        const double dt = t_next - t_cur;
        if (dt <= 0.0) return;
        for (int i = 0; i < d; ++i) {
            if (!linear) {
                // truncated-intensity segment via the restart point
                const double bi = params.b(i, 0);
                double lam_plus = params.m[i];
                for (int j = 0; j < d; ++j) lam_plus += params.a(i, j) * ps[i * d + j];
                const double restart =
                    lam_plus >= 0.0
                        ? 0.0
                        : std::min(std::log((params.m[i] - lam_plus) / params.m[i]) / bi, dt);
                comp[i] += params.m[i] * (dt - restart) +
                           (lam_plus - params.m[i]) / bi *
                               (std::exp(-bi * restart) - std::exp(-bi * dt));
            } else {
                comp[i] += params.m[i] * dt;
                if (grad && m_idx[i] >= 0) grad_comp[m_idx[i]] += dt;
            }
            if (spec.baseline_only) continue;
            for (int j = 0; j < d; ++j) {
                const std::size_t ij = static_cast<std::size_t>(i) * d + j;
                const double b = params.b(i, j);
                const double a = params.a(i, j);
                const double decay = std::exp(-b * dt);
                const double em1 = -std::expm1(-b * dt); // 1 - decay
                if (linear) {
                    comp[i] += a * ps[ij] * em1 / b;
                    if (grad) {
                        if (a_idx[ij] >= 0) grad_comp[a_idx[ij]] += ps[ij] * em1 / b;
                        if (b_idx[ij] >= 0)
                            grad_comp[b_idx[ij]] +=
                                a * (-rs[ij] * em1 / b + ps[ij] * (dt * decay / b - em1 / (b * b)));
                        if (g_idx[ij] >= 0) grad_comp[g_idx[ij]] += a * gs[ij] * em1 / b;
                        if (psi_idx >= 0) grad_comp[psi_idx] += a * ws[ij] * em1 / b;
                    }
                }
                rs[ij] = (rs[ij] + dt * ps[ij]) * decay;
                ps[ij] *= decay;
                if (marked) {
                    gs[ij] *= decay;
                    ws[ij] *= decay;
                }
            }
        }
        t_cur = t_next;
    };

    auto counted_event = [&](const MarkedEvent& e) -> bool {
        const int c = e.component - 1;
        double lam_star = params.m[c];
        for (int j = 0; j < d; ++j) lam_star += params.a(c, j) * ps[c * d + j];
        if (!(lam_star > 0.0)) return false; // log of zero intensity
        event_terms += std::log(lam_star);
        const bool mark_term =
            options.include_mark_density && spec.has_mark_density && e.has_mark();
        if (grad || options.event_scores) {
            const double inv = 1.0 / lam_star;
            Vec score;
            if (options.event_scores) score.assign(p, 0.0);
            auto put = [&](int idx, double v) {
                if (idx < 0) return;
                if (grad) grad_events[idx] += v;
                if (options.event_scores) score[idx] += v;
            };
            put(m_idx[c], inv);
            if (!spec.baseline_only)
                for (int j = 0; j < d; ++j) {
                    const std::size_t cj = static_cast<std::size_t>(c) * d + j;
                    const double a = params.a(c, j);
                    put(a_idx[cj], ps[cj] * inv);
                    put(b_idx[cj], -a * rs[cj] * inv);
                    if (marked) {
                        put(g_idx[cj], a * gs[cj] * inv);
                        if (psi_idx >= 0) put(psi_idx, a * ws[cj] * inv);
                    }
                }
            if (mark_term && psi_idx >= 0) put(psi_idx, 1.0 / params.psi - e.mark);
            if (options.event_scores) options.event_scores->push_back(std::move(score));
        }
        if (mark_term) event_terms += std::log(params.psi) - params.psi * e.mark;
        return true;
    };

    auto exciting_event = [&](const MarkedEvent& e) {
        if (spec.baseline_only) return;
        const int j = e.component - 1;
        for (int i = 0; i < d; ++i) {
            const std::size_t ij = static_cast<std::size_t>(i) * d + j;
            if (marked) {
                if (!e.has_mark())
                    throw Error(ErrorCode::MissingMark, "marked model requires event marks");
                ps[ij] += link_value(spec.mark_link, params.gamma(i, j), params.psi, e.mark);
                gs[ij] += link_dgamma(spec.mark_link, params.gamma(i, j), params.psi, e.mark);
                if (psi_idx >= 0)
                    ws[ij] += link_dpsi(spec.mark_link, params.gamma(i, j), params.psi, e.mark);
            } else {
                ps[ij] += 1.0;
            }
        }
    };

    while (true) {
        const double te =
            (ie < exciting.size() && exciting[ie].time < t_end) ? exciting[ie].time : t_end;
        const double tc = ic < counted.size() ? counted[ic].time : t_end;
        if (ic < counted.size() && counted[ic].time > t_end)
            throw Error(ErrorCode::InvalidData, "evaluation time beyond the horizon");
        const double t_next = std::min(te, tc);
        advance_to(t_next);
        if (ic < counted.size() && counted[ic].time == t_next && tc <= te) {
            if (!counted_event(counted[ic])) {
                PassResult res;
                res.value = kNegInf;
                return res;
            }
            ++ic;
            continue;
        }
        if (ie < exciting.size() && exciting[ie].time == t_next && te < t_end) {
            exciting_event(exciting[ie]);
            ++ie;
            continue;
        }
        break;
    }
    advance_to(t_end);

    PassResult res;
    res.value = event_terms;
    for (int i = 0; i < d; ++i) res.value -= comp[i];
    if (grad) {
        res.gradient.assign(p, 0.0);
        for (int k = 0; k < p; ++k) res.gradient[k] = grad_events[k] - grad_comp[k];
    }
    return res;
}

} // namespace detail

namespace {

void check_compatible(const ModelSpec& spec, const Realization& realization) {
    if (realization.dimension() != spec.dimension)
        throw Error(ErrorCode::SpecMismatch, "realization dimension does not match the spec");
    if (spec.marked() && !realization.marked())
        throw Error(ErrorCode::SpecMismatch, "marked spec requires marked data");
}

detail::PassResult self_pass(const HawkesParams& params, const ModelSpec& spec,
                             const Realization& realization, bool include_mark_density,
                             bool want_gradient, std::vector<Vec>* event_scores = nullptr) {
    detail::PassOptions options;
    options.include_mark_density = include_mark_density;
    options.want_gradient = want_gradient;
    options.event_scores = event_scores;
    const ParamLayout layout(spec);
    return detail::likelihood_pass(params, spec, realization.events(), realization.events(),
                                   realization.horizon(), layout, options);
}

// central differences with a one-sided fallback at the positivity boundary
Vec fd_gradient(const std::function<double(const Vec&)>& value, const Vec& theta,
                const Vec& lower) {
    const int n = static_cast<int>(theta.size());
    Vec grad(n, 0.0);
    const double f0 = value(theta);
    for (int k = 0; k < n; ++k) {
        const double h = kFdEps * std::max(1.0, std::abs(theta[k]));
        Vec hi = theta, lo = theta;
        hi[k] += h;
        if (theta[k] - h > lower[k]) {
            lo[k] -= h;
            grad[k] = (value(hi) - value(lo)) / (2.0 * h);
        } else {
            grad[k] = (value(hi) - f0) / h;
        }
    }
    return grad;
}

} // namespace

double log_likelihood(const HawkesParams& params, const ModelSpec& spec,
                      const Realization& realization, bool include_mark_density) {
    check_compatible(spec, realization);
    params.validate(spec);
    return self_pass(params, spec, realization, include_mark_density, false).value;
}

Vec log_likelihood_gradient(const HawkesParams& params, const ModelSpec& spec,
                            const Realization& realization, bool include_mark_density) {
    check_compatible(spec, realization);
    params.validate(spec);
    const ParamLayout layout(spec);
    if (spec.linearity == Linearity::Linear) {
        detail::PassResult res =
            self_pass(params, spec, realization, include_mark_density, true);
        if (!std::isfinite(res.value))
            throw Error(ErrorCode::NonFiniteLikelihood, "likelihood is not finite at params");
        return res.gradient;
    }
    const FitBounds bounds = FitBounds::defaults(layout);
    const Vec theta = layout.pack(params);
    auto value = [&](const Vec& t) {
        return self_pass(layout.unpack(t), spec, realization, include_mark_density, false).value;
    };
    if (!std::isfinite(value(theta)))
        throw Error(ErrorCode::NonFiniteLikelihood, "likelihood is not finite at params");
    return fd_gradient(value, theta, bounds.lower);
}

double fit_mark_psi(const Realization& realization) {
    if (!realization.marked() || realization.size() == 0)
        throw Error(ErrorCode::EmptyComponent, "psi estimation requires marked events");
    return static_cast<double>(realization.size()) / realization.sum_of_marks();
}

namespace {

struct ObjectiveSpec {
    const ModelSpec* spec;
    const ParamLayout* layout;
    const std::vector<MarkedEvent>* exciting;
    const std::vector<MarkedEvent>* counted;
    double t_end;
    bool include_mark_density;
    double fixed_psi; // used when psi is not an optimized coordinate
};

// optimizer coordinates: log for positive parameters, raw otherwise
Vec to_optimizer(const ParamLayout& layout, const Vec& raw) {
    Vec x = raw;
    for (int k = 0; k < layout.size(); ++k)
        if (layout.entry(k).log_transformed) x[k] = std::log(raw[k]);
    return x;
}

Vec from_optimizer(const ParamLayout& layout, const Vec& x) {
    Vec raw = x;
    for (int k = 0; k < layout.size(); ++k)
        if (layout.entry(k).log_transformed) raw[k] = std::exp(x[k]);
    return raw;
}

bool link_feasible(const ModelSpec& spec, const HawkesParams& params) {
    if (spec.mark_link == MarkLinkKind::NormalizedExp) {
        for (int i = 0; i < spec.dimension; ++i)
            for (int j = 0; j < spec.dimension; ++j)
                if (!(params.gamma(i, j) < params.psi - 1e-10)) return false;
    }
    if (spec.mark_link == MarkLinkKind::NormalizedPower) {
        for (int i = 0; i < spec.dimension; ++i)
            for (int j = 0; j < spec.dimension; ++j)
                if (!(params.gamma(i, j) > -1.0 + 1e-10)) return false;
    }
    return true;
}

Objective make_objective(const ObjectiveSpec& os) {
    return [os](const Vec& x, Vec* grad) -> double {
        const Vec raw = from_optimizer(*os.layout, x);
        HawkesParams params = os.layout->unpack(raw);
        if (os.fixed_psi > 0.0) params.psi = os.fixed_psi;
        if (!link_feasible(*os.spec, params)) {
            if (grad) grad->assign(x.size(), 0.0);
            return kNegInf;
        }
        detail::PassOptions options;
        options.include_mark_density = os.include_mark_density;
        const bool linear = os.spec->linearity == Linearity::Linear;
        options.want_gradient = grad != nullptr && linear;
        detail::PassResult res = detail::likelihood_pass(params, *os.spec, *os.exciting,
                                                         *os.counted, os.t_end, *os.layout,
                                                         options);
        if (grad) {
            if (!std::isfinite(res.value)) {
                grad->assign(x.size(), 0.0);
                return res.value;
            }
            Vec raw_grad;
            if (linear) {
                raw_grad = std::move(res.gradient);
            } else {
                const FitBounds fb = FitBounds::defaults(*os.layout);
                auto value_at = [&](const Vec& t) {
                    HawkesParams pt = os.layout->unpack(t);
                    if (os.fixed_psi > 0.0) pt.psi = os.fixed_psi;
                    if (!link_feasible(*os.spec, pt)) return kNegInf;
                    detail::PassOptions vo;
                    vo.include_mark_density = os.include_mark_density;
                    return detail::likelihood_pass(pt, *os.spec, *os.exciting, *os.counted,
                                                   os.t_end, *os.layout, vo)
                        .value;
                };
                raw_grad = fd_gradient(value_at, raw, fb.lower);
            }
            grad->resize(x.size());
            for (int k = 0; k < os.layout->size(); ++k)
                (*grad)[k] = os.layout->entry(k).log_transformed ? raw_grad[k] * raw[k]
                                                                 : raw_grad[k];
        }
        return res.value;
    };
}

HawkesParams heuristic_start(const ModelSpec& spec, const Realization& realization,
                             double psi_hat) {
    HawkesParams p = HawkesParams::zeros(spec);
    const int d = spec.dimension;
    for (int i = 0; i < d; ++i) {
        const double rate =
            static_cast<double>(realization.count_component(i + 1)) / realization.horizon();
        p.m[i] = std::max(0.5 * rate, 1e-4);
    }
    if (!spec.baseline_only) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                p.b(i, j) = 1.0;
                p.a(i, j) = 0.3;
            }
    }
    if (spec.marked()) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) p.gamma(i, j) = 0.0;
        p.psi = psi_hat > 0.0 ? psi_hat : 1.0;
    }
    return p;
}

HawkesParams random_start(const ModelSpec& spec, Rng& rng, double psi_hat) {
    HawkesParams p = HawkesParams::zeros(spec);
    const int d = spec.dimension;
    for (int i = 0; i < d; ++i) p.m[i] = rng.log_uniform(0.1, 10.0);
    if (!spec.baseline_only) {
        for (int i = 0; i < d; ++i) {
            const double bi = rng.log_uniform(0.1, 10.0);
            for (int j = 0; j < d; ++j) {
                const double bij = spec.b_structure == BStructure::PerReceiver
                                       ? bi
                                       : rng.log_uniform(0.1, 10.0);
                p.b(i, j) = bij;
                p.a(i, j) = spec.linearity == Linearity::Linear
                                ? rng.uniform(0.0, 0.9 * bij)
                                : rng.uniform(-bij, 0.9 * bij);
            }
        }
    }
    if (spec.marked()) {
        p.psi = psi_hat > 0.0 ? psi_hat : rng.log_uniform(0.1, 10.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double g = rng.uniform(-1.0, 1.0);
                if (spec.mark_link == MarkLinkKind::NormalizedExp) g = std::min(g, p.psi - 0.1);
                if (spec.mark_link == MarkLinkKind::NormalizedPower) g = std::max(g, -0.9);
                p.gamma(i, j) = g;
            }
    }
    return p;
}

FitResult fit_with_objective(const ModelSpec& spec, const ParamLayout& layout,
                             const ObjectiveSpec& os, const Realization& start_data,
                             const std::optional<HawkesParams>& init,
                             const std::optional<FitBounds>& bounds, const FitOptions& options,
                             double psi_hat) {
    FitBounds fb = bounds ? *bounds : FitBounds::defaults(layout);
    Vec lower_opt = fb.lower, upper_opt = fb.upper;
    for (int k = 0; k < layout.size(); ++k)
        if (layout.entry(k).log_transformed) {
            lower_opt[k] = std::log(std::max(fb.lower[k], 1e-12));
            upper_opt[k] = std::log(fb.upper[k]);
        }

    const Objective objective = make_objective(os);

    std::vector<HawkesParams> starts;
    starts.push_back(init ? *init : heuristic_start(spec, start_data, psi_hat));
    Rng rng(options.seed);
    for (int s = 1; s < std::max(1, options.multistart); ++s)
        starts.push_back(random_start(spec, rng, psi_hat));

    std::vector<OptimResult> results(starts.size());
    const int jobs = options.jobs > 0 ? options.jobs : default_jobs();
    parallel_for_index(starts.size(), jobs, [&](std::size_t s) {
        const Vec x0 = to_optimizer(layout, layout.pack(starts[s]));
        results[s] = maximize_bfgs(objective, x0, lower_opt, upper_opt, options.optim);
    });

    std::size_t best = 0;
    for (std::size_t s = 1; s < results.size(); ++s)
        if (results[s].value > results[best].value) best = s;
    // starts that stopped a value-noise above a converged one do not win
    const double tie = 1e-6 * (1.0 + std::abs(results[best].value));
    if (!results[best].converged) {
        for (std::size_t s = 0; s < results.size(); ++s)
            if (results[s].converged && results[s].value >= results[best].value - tie) {
                best = s;
                break;
            }
    }

    const OptimResult& opt = results[best];
    FitResult fit;
    fit.spec = spec;
    fit.params = layout.unpack(from_optimizer(layout, opt.x));
    if (os.fixed_psi > 0.0) fit.params.psi = os.fixed_psi;
    fit.log_lik = opt.value;
    fit.converged = opt.converged && std::isfinite(opt.value);
    fit.stalled = opt.stalled && std::isfinite(opt.value);
    fit.iterations = opt.iterations;
    fit.gradient_norm = opt.grad_norm;
    fit.trajectory = opt.trajectory;
    return fit;
}

} // namespace

FitResult fit_mle(const ModelSpec& spec, const Realization& realization,
                  const std::optional<HawkesParams>& init, const std::optional<FitBounds>& bounds,
                  const FitOptions& options) {
    spec.validate();
    check_compatible(spec, realization);
    for (int i = 0; i < spec.dimension; ++i)
        if (realization.count_component(i + 1) == 0)
            throw Error(ErrorCode::EmptyComponent,
                        "component " + std::to_string(i + 1) + " has no events");

    const ParamLayout layout(spec);
    const double t_max = realization.horizon();
    const bool separate_psi =
        spec.marked() && spec.has_mark_density && !link_is_normalized(spec.mark_link);
    const double psi_hat = spec.marked() && spec.has_mark_density ? fit_mark_psi(realization)
                                                                  : 0.0;

    FitResult fit;
    if (spec.baseline_only) {
        // closed-form Poisson MLE
        fit.spec = spec;
        fit.params = HawkesParams::zeros(spec);
        for (int i = 0; i < spec.dimension; ++i)
            fit.params.m[i] =
                static_cast<double>(realization.count_component(i + 1)) / t_max;
        fit.converged = true;
        fit.iterations = 0;
        fit.gradient_norm = 0.0;
        fit.log_lik = log_likelihood(fit.params, spec, realization, false);
        fit.trajectory = {fit.log_lik};
    } else {
        ObjectiveSpec os{&spec,
                         &layout,
                         &realization.events(),
                         &realization.events(),
                         t_max,
                         link_is_normalized(spec.mark_link), // joint ell^N + ell^f
                         separate_psi ? psi_hat : 0.0};
        fit = fit_with_objective(spec, layout, os, realization, init, bounds, options, psi_hat);
        if (separate_psi) fit.params.psi = psi_hat;
    }

    if (spec.has_mark_density && !link_is_normalized(spec.mark_link)) {
        // report the full likelihood including the separable mark term
        double ell_f = 0.0;
        for (const auto& e : realization.events())
            ell_f += std::log(fit.params.psi) - fit.params.psi * e.mark;
        fit.log_lik += ell_f;
    }

    if (options.compute_fisher && fit.converged) {
        try {
            fit.fisher = fisher_estimate(fit.params, spec, realization, FisherMethod::Hessian);
        } catch (const Error&) {
            fit.fisher = Matrix(); // left empty; consumers re-raise on use
        }
    }
    return fit;
}

Matrix fisher_estimate(const HawkesParams& params, const ModelSpec& spec,
                       const Realization& realization, FisherMethod method) {
    check_compatible(spec, realization);
    const ParamLayout layout(spec);
    const int p = layout.size();
    const double t_max = realization.horizon();
    const bool include_mark = link_is_normalized(spec.mark_link);

    if (method == FisherMethod::OuterProduct) {
        if (spec.linearity != Linearity::Linear)
            throw Error(ErrorCode::NumericalFailure,
                        "outer-product Fisher requires a linear spec");
        std::vector<Vec> scores;
        detail::PassOptions options;
        options.event_scores = &scores;
        options.include_mark_density = include_mark;
        detail::likelihood_pass(params, spec, realization.events(), realization.events(), t_max,
                                layout, options);
        Matrix fisher(p, p);
        for (const Vec& s : scores)
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j) fisher(i, j) += s[i] * s[j];
        for (auto& v : fisher.data()) v /= t_max;
        return fisher;
    }

    const Vec theta = layout.pack(params);
    const FitBounds fb = FitBounds::defaults(layout);
    Matrix hessian(p, p);
    if (spec.linearity == Linearity::Linear) {
        // central differences of the analytic gradient
        for (int k = 0; k < p; ++k) {
            const double h = kFdEps * std::max(1.0, std::abs(theta[k]));
            Vec hi = theta, lo = theta;
            hi[k] += h;
            lo[k] -= h;
            double denom = 2.0 * h;
            if (!(lo[k] > fb.lower[k])) {
                lo = theta;
                denom = h;
            }
            const Vec ghi = log_likelihood_gradient(layout.unpack(hi), spec, realization,
                                                    include_mark);
            const Vec glo = log_likelihood_gradient(layout.unpack(lo), spec, realization,
                                                    include_mark);
            for (int r = 0; r < p; ++r) hessian(r, k) = (ghi[r] - glo[r]) / denom;
        }
    } else {
        auto value = [&](const Vec& t) {
            return self_pass(layout.unpack(t), spec, realization, include_mark, false).value;
        };
        // second differences of the value; eps^(1/4) step
        Vec h(p);
        for (int k = 0; k < p; ++k) h[k] = 1.220703125e-4 * std::max(1.0, std::abs(theta[k]));
        const double f0 = value(theta);
        for (int i = 0; i < p; ++i) {
            for (int j = i; j < p; ++j) {
                Vec tpp = theta, tpm = theta, tmp = theta, tmm = theta;
                tpp[i] += h[i];
                tpp[j] += h[j];
                tpm[i] += h[i];
                tpm[j] -= h[j];
                tmp[i] -= h[i];
                tmp[j] += h[j];
                tmm[i] -= h[i];
                tmm[j] -= h[j];
                double hij;
                if (i == j) {
                    Vec tp = theta, tm = theta;
                    tp[i] += h[i];
                    tm[i] -= h[i];
                    hij = (value(tp) - 2.0 * f0 + value(tm)) / (h[i] * h[i]);
                } else {
                    hij = (value(tpp) - value(tpm) - value(tmp) + value(tmm)) /
                          (4.0 * h[i] * h[j]);
                }
                hessian(i, j) = hij;
                hessian(j, i) = hij;
            }
        }
    }

    Matrix fisher(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) fisher(i, j) = -hessian(i, j) / t_max;
    fisher.symmetrize();
    return fisher;
}

RepetitionFits fit_repetitions(const ModelSpec& spec, const std::vector<Realization>& reps,
                               const std::optional<FitBounds>& bounds,
                               const FitOptions& options) {
    RepetitionFits out;
    out.per_rep.resize(reps.size());
    std::vector<int> status(reps.size(), 0);
    const int jobs = options.jobs > 0 ? options.jobs : default_jobs();
    FitOptions rep_options = options;
    rep_options.jobs = 1; // parallelism lives at the repetition level
    parallel_for_index(reps.size(), jobs, [&](std::size_t r) {
        try {
            out.per_rep[r] = fit_mle(spec, reps[r], std::nullopt, bounds, rep_options);
            status[r] = out.per_rep[r].usable() ? (out.per_rep[r].converged ? 0 : 1) : 2;
        } catch (const Error&) {
            status[r] = 3;
            out.per_rep[r].converged = false;
            out.per_rep[r].spec = spec;
        }
    });

    const ParamLayout layout(spec);
    Vec mean(layout.size(), 0.0);
    std::size_t stalled = 0;
    for (std::size_t r = 0; r < reps.size(); ++r) {
        if (status[r] >= 2) {
            out.warnings.push_back("repetition " + std::to_string(r) +
                                   (status[r] == 2 ? " did not converge" : " failed") +
                                   "; excluded from the mean");
            continue;
        }
        if (status[r] == 1) ++stalled;
        const Vec theta = layout.pack(out.per_rep[r].params);
        for (int k = 0; k < layout.size(); ++k) mean[k] += theta[k];
        ++out.used;
    }
    if (stalled > 0)
        out.warnings.push_back(std::to_string(stalled) +
                               " repetition(s) stopped at the numerical noise floor of a "
                               "flat profile; their terminal iterates are used");
    if (out.used == 0)
        throw Error(ErrorCode::NumericalFailure, "no repetition produced a converged fit");
    for (double& v : mean) v /= static_cast<double>(out.used);
    out.mean_params = layout.unpack(mean);
    if (spec.marked() && spec.has_mark_density && !link_is_normalized(spec.mark_link)) {
        double psi = 0.0;
        for (std::size_t r = 0; r < reps.size(); ++r)
            if (status[r] <= 1) psi += out.per_rep[r].params.psi;
        out.mean_params.psi = psi / static_cast<double>(out.used);
    }
    return out;
}

double cross_log_likelihood(const HawkesParams& params, const ModelSpec& spec,
                            const Realization& history, const Realization& eval_points,
                            double t_end) {
    check_compatible(spec, history);
    params.validate(spec);
    const ParamLayout layout(spec);
    detail::PassOptions options;
    return detail::likelihood_pass(params, spec, history.events(), eval_points.events(), t_end,
                                   layout, options)
        .value;
}

Vec cross_log_likelihood_gradient(const HawkesParams& params, const ModelSpec& spec,
                                  const Realization& history, const Realization& eval_points,
                                  double t_end) {
    check_compatible(spec, history);
    params.validate(spec);
    const ParamLayout layout(spec);
    if (spec.linearity == Linearity::Linear) {
        detail::PassOptions options;
        options.want_gradient = true;
        return detail::likelihood_pass(params, spec, history.events(), eval_points.events(),
                                       t_end, layout, options)
            .gradient;
    }
    const FitBounds fb = FitBounds::defaults(layout);
    auto value = [&](const Vec& t) {
        detail::PassOptions options;
        return detail::likelihood_pass(layout.unpack(t), spec, history.events(),
                                       eval_points.events(), t_end, layout, options)
            .value;
    };
    return fd_gradient(value, layout.pack(params), fb.lower);
}

FitResult fit_cross_mle(const ModelSpec& spec, const Realization& history,
                        const Realization& eval_points, double t_end,
                        const std::optional<HawkesParams>& init, const FitOptions& options) {
    spec.validate();
    check_compatible(spec, history);
    const ParamLayout layout(spec);
    const double psi_hat = spec.marked() && spec.has_mark_density ? fit_mark_psi(history) : 0.0;
    const bool separate_psi =
        spec.marked() && spec.has_mark_density && !link_is_normalized(spec.mark_link);

    if (spec.baseline_only) {
        FitResult fit;
        fit.spec = spec;
        fit.params = HawkesParams::zeros(spec);
        for (int i = 0; i < spec.dimension; ++i)
            fit.params.m[i] =
                static_cast<double>(eval_points.count_component(i + 1)) / t_end;
        for (double& m : fit.params.m)
            if (!(m > 0.0)) throw Error(ErrorCode::EmptyComponent, "empty component in refit");
        fit.converged = true;
        fit.log_lik = cross_log_likelihood(fit.params, spec, history, eval_points, t_end);
        return fit;
    }

    ObjectiveSpec os{&spec,    &layout, &history.events(), &eval_points.events(), t_end,
                     false,    separate_psi ? psi_hat : 0.0};
    FitOptions cross_options = options;
    cross_options.compute_fisher = false;
    FitResult fit = fit_with_objective(spec, layout, os, history, init, std::nullopt,
                                       cross_options, psi_hat);
    if (separate_psi) fit.params.psi = psi_hat;
    return fit;
}

} // namespace hawkes
