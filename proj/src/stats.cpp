#include "hawkes/stats.hpp"

#include "hawkes/errors.hpp"
#include "hawkes/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace hawkes::stats {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

} // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw Error(ErrorCode::DomainError, "normal_quantile requires p in (0,1)");

    // Acklam's rational approximation, then one Halley refinement against the
    // erfc-based CDF; the refinement pins |cdf(q(p)) - p| below 1e-14.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw Error(ErrorCode::DomainError, "gamma_p requires a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw Error(ErrorCode::DomainError, "gamma_q requires a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_contfrac(a, x);
}

double chi2_sf(double x, int dof) {
    if (dof < 1) throw Error(ErrorCode::DomainError, "chi2_sf requires dof >= 1");
    if (x < 0.0) throw Error(ErrorCode::DomainError, "chi2_sf requires x >= 0");
    return gamma_q(0.5 * dof, 0.5 * x);
}

namespace {

double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

} // namespace

double incbeta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw Error(ErrorCode::DomainError, "incbeta requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double beta_quantile(double p, double a, double b) {
    if (!(p >= 0.0) || !(p <= 1.0))
        throw Error(ErrorCode::DomainError, "beta_quantile requires p in [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    double x = a / (a + b);
    for (int it = 0; it < 200; ++it) {
        const double f = incbeta(a, b, x) - p;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        // Newton step with bisection fallback
        const double ln_pdf = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) +
                              std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
        const double pdf = std::exp(ln_pdf);
        double next = x - f / pdf;
        if (!(next > lo) || !(next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-15 * std::max(1.0, std::abs(x))) return next;
        x = next;
    }
    return x;
}

double ks_statistic(const Vec& sorted_sample) {
    const std::size_t n = sorted_sample.size();
    if (n == 0) throw Error(ErrorCode::EmptySample, "KS statistic of an empty sample");
    double d = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = sorted_sample[k];
        if (!(u >= 0.0) || !(u <= 1.0))
            throw Error(ErrorCode::DomainError, "KS sample values must lie in [0,1]");
        const double hi = (static_cast<double>(k) + 1.0) / n - u;
        const double lo = u - static_cast<double>(k) / n;
        d = std::max({d, hi, lo});
    }
    return d;
}

double ks_pvalue(double d_statistic, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::EmptySample, "KS p-value of an empty sample");
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d_statistic;
    const double a2 = -2.0 * lambda * lambda;
    double fac = 2.0, sum = 0.0, last = 0.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = fac * std::exp(a2 * j * j);
        sum += term;
        if (std::abs(term) <= 1e-6 * last || std::abs(term) <= 1e-12 * std::abs(sum))
            return std::clamp(sum, 0.0, 1.0);
        fac = -fac;
        last = std::abs(term);
    }
    return 1.0; // series did not converge: lambda tiny, p indistinguishable from 1
}

KsReport ks_test_uniform(Vec sample) {
    std::sort(sample.begin(), sample.end());
    KsReport report;
    report.statistic = ks_statistic(sample);
    report.pvalue = ks_pvalue(report.statistic, sample.size());
    return report;
}

KsReport ks_test_exp1(const Vec& increments) {
    Vec u;
    u.reserve(increments.size());
    for (double x : increments) {
        if (!(x > 0.0))
            throw Error(ErrorCode::NonPositiveIncrement, "increments must be positive");
        u.push_back(-std::expm1(-x));
    }
    return ks_test_uniform(std::move(u));
}

namespace {

// Largest pointwise level at which a sorted uniform sample stays inside its
// equal-local-level beta intervals.
double sample_local_level(const Vec& sorted_u) {
    const std::size_t n = sorted_u.size();
    double eta = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double c = incbeta(static_cast<double>(k + 1), static_cast<double>(n - k),
                                 sorted_u[k]);
        eta = std::min(eta, 2.0 * std::min(c, 1.0 - c));
    }
    return eta;
}

std::mutex band_cache_mutex;
std::map<std::tuple<std::size_t, double, int, std::uint64_t>, BandResult> band_cache;

} // namespace

BandResult uniform_band(std::size_t n, double global_alpha, int mc_reps, std::uint64_t mc_seed) {
    if (n == 0) throw Error(ErrorCode::DomainError, "uniform_band requires n >= 1");
    if (!(global_alpha > 0.0) || !(global_alpha < 1.0))
        throw Error(ErrorCode::DomainError, "uniform_band requires alpha in (0,1)");
    {
        std::lock_guard<std::mutex> lock(band_cache_mutex);
        auto it = band_cache.find({n, global_alpha, mc_reps, mc_seed});
        if (it != band_cache.end()) return it->second;
    }

    // MC-calibrate the shared local level: coverage(eta) = P(sample level >= eta),
    // so the calibrated eta is the alpha-quantile of sampled local levels.
    Vec levels(mc_reps);
    Rng rng(mc_seed);
    Vec u(n);
    for (int rep = 0; rep < mc_reps; ++rep) {
        for (std::size_t k = 0; k < n; ++k) u[k] = rng.uniform();
        std::sort(u.begin(), u.end());
        levels[rep] = sample_local_level(u);
    }
    std::sort(levels.begin(), levels.end());
    const double idx = global_alpha * (mc_reps - 1);
    const std::size_t i0 = static_cast<std::size_t>(idx);
    const double frac = idx - static_cast<double>(i0);
    const double eta = i0 + 1 < levels.size()
                           ? levels[i0] * (1.0 - frac) + levels[i0 + 1] * frac
                           : levels.back();

    BandResult band;
    band.n = n;
    band.global_alpha = global_alpha;
    band.local_level = eta;
    band.lower.resize(n);
    band.upper.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = static_cast<double>(k + 1);
        const double b = static_cast<double>(n - k);
        band.lower[k] = beta_quantile(0.5 * eta, a, b);
        band.upper[k] = beta_quantile(1.0 - 0.5 * eta, a, b);
    }
    {
        std::lock_guard<std::mutex> lock(band_cache_mutex);
        band_cache[{n, global_alpha, mc_reps, mc_seed}] = band;
    }
    return band;
}

BandResult band_check(Vec sample, const BandResult& band) {
    if (sample.size() != band.n)
        throw Error(ErrorCode::DomainError, "sample size does not match the band");
    std::sort(sample.begin(), sample.end());
    BandResult out = band;
    out.inside = true;
    out.first_violation.reset();
    for (std::size_t k = 0; k < sample.size(); ++k) {
        if (sample[k] < band.lower[k] || sample[k] > band.upper[k]) {
            out.inside = false;
            out.first_violation = k + 1;
            break;
        }
    }
    return out;
}

BandResult normal_band_check(const Vec& sample, double global_alpha, int mc_reps) {
    Vec u;
    u.reserve(sample.size());
    for (double x : sample) u.push_back(normal_cdf(x));
    const BandResult band = uniform_band(sample.size(), global_alpha, mc_reps);
    return band_check(std::move(u), band);
}

Moments empirical_moments(const Vec& sample) {
    if (sample.size() < 2)
        throw Error(ErrorCode::TooFewSamples, "need at least two samples for sd");
    Moments m;
    for (double x : sample) m.mean += x;
    m.mean /= static_cast<double>(sample.size());
    double ss = 0.0;
    for (double x : sample) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / (static_cast<double>(sample.size()) - 1.0));
    return m;
}

double empirical_covariance(const Vec& x, const Vec& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error(ErrorCode::TooFewSamples, "paired samples of length >= 2 required");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / (static_cast<double>(x.size()) - 1.0);
}

} // namespace hawkes::stats
