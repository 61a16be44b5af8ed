#include "hawkes/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void project(Vec& x, const Vec& lower, const Vec& upper) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

// Gradient with components pointing out of the feasible box zeroed; its norm
// is the first-order optimality measure for bound-constrained ascent.
Vec projected_gradient(const Vec& x, const Vec& g, const Vec& lower, const Vec& upper) {
    Vec pg = g;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (lower[i] == upper[i]) {
            pg[i] = 0.0;
        } else if (x[i] <= lower[i] && g[i] < 0.0) {
            pg[i] = 0.0;
        } else if (x[i] >= upper[i] && g[i] > 0.0) {
            pg[i] = 0.0;
        }
    }
    return pg;
}

} // namespace

OptimResult maximize_bfgs(const Objective& objective, Vec x0, const Vec& lower, const Vec& upper,
                          const OptimOptions& options) {
    const std::size_t n = x0.size();
    OptimResult result;
    project(x0, lower, upper);

    Vec x = std::move(x0);
    Vec g(n, 0.0);
    double f = objective(x, &g);
    result.trajectory.push_back(f);
    if (!std::isfinite(f)) {
        result.x = x;
        result.value = f;
        result.grad_norm = kInf;
        return result;
    }

    Matrix h = Matrix::identity(static_cast<int>(n));
    Vec pg = projected_gradient(x, g, lower, upper);
    result.grad_norm = norm_inf(pg);
    int flat_steps = 0;

    // Armijo with a roundoff allowance: near the optimum the true ascent per
    // step falls below the evaluation noise of f.
    Vec x_new(n);
    double f_new = -kInf;
    auto line_search = [&](const Vec& direction) {
        const double noise = 1e-12 * (1.0 + std::abs(f));
        double alpha = 1.0;
        for (int ls = 0; ls < options.max_line_search; ++ls) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + alpha * direction[i];
            project(x_new, lower, upper);
            bool moved = false;
            for (std::size_t i = 0; i < n; ++i) moved = moved || x_new[i] != x[i];
            if (!moved) return false; // projection absorbed the whole step
            f_new = objective(x_new, nullptr);
            double step_dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) step_dot += g[i] * (x_new[i] - x[i]);
            if (std::isfinite(f_new) && step_dot >= 0.0 &&
                f_new >= f + options.armijo_c1 * step_dot - noise && f_new >= f - noise) {
                return true;
            }
            alpha *= options.step_shrink;
        }
        return false;
    };

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        result.iterations = iter;
        if (result.grad_norm <= options.grad_tol) {
            result.converged = true;
            break;
        }

        // ascent direction from the inverse-Hessian approximation
        Vec direction = mat_vec(h, pg);
        bool steepest = false;
        if (dot(direction, pg) <= 0.0) {
            h = Matrix::identity(static_cast<int>(n));
            direction = pg;
            steepest = true;
        }

        bool accepted = line_search(direction);
        if (!accepted && !steepest) {
            // quasi-Newton direction failed; retry from steepest ascent
            h = Matrix::identity(static_cast<int>(n));
            accepted = line_search(pg);
        }
        if (!accepted) {
            result.stalled = true; // no admissible uphill step left
            break;
        }
        if (f_new <= f + 1e-11 * (1.0 + std::abs(f))) {
            ++flat_steps;
            if (flat_steps >= 8) {
                // stuck on a ridge where f no longer resolves progress
                x = x_new;
                f = f_new;
                result.trajectory.push_back(f);
                objective(x, &g);
                pg = projected_gradient(x, g, lower, upper);
                result.grad_norm = norm_inf(pg);
                result.stalled = result.grad_norm > options.grad_tol;
                result.converged = !result.stalled;
                break;
            }
        } else {
            flat_steps = 0;
        }

        Vec g_new(n, 0.0);
        objective(x_new, &g_new);

        Vec s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = -dot(s, y); // curvature of the negated objective
        if (sy > 1e-12 * norm2(s) * norm2(y)) {
            // BFGS update of the inverse Hessian for minimizing -f
            const double rho = 1.0 / sy;
            Vec neg_y(n);
            for (std::size_t i = 0; i < n; ++i) neg_y[i] = -y[i];
            const Vec hy = mat_vec(h, neg_y);
            // H' = (I - rho s yT) H (I - rho y sT) + rho s sT, in -f coordinates
            Matrix hn(static_cast<int>(n), static_cast<int>(n));
            double yhy = 0.0;
            for (std::size_t i = 0; i < n; ++i) yhy += neg_y[i] * hy[i];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    double v = h(static_cast<int>(i), static_cast<int>(j));
                    v -= rho * (s[i] * hy[j] + hy[i] * s[j]);
                    v += rho * rho * yhy * s[i] * s[j] + rho * s[i] * s[j];
                    hn(static_cast<int>(i), static_cast<int>(j)) = v;
                }
            h = std::move(hn);
        }

        std::swap(x, x_new);
        g = std::move(g_new);
        f = f_new;
        result.trajectory.push_back(f);
        pg = projected_gradient(x, g, lower, upper);
        result.grad_norm = norm_inf(pg);
        if (result.grad_norm <= options.grad_tol) {
            result.converged = true;
            result.iterations = iter + 1;
            break;
        }
    }

    result.x = std::move(x);
    result.value = f;
    return result;
}

} // namespace hawkes
