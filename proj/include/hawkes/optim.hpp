#pragma once

#include "hawkes/linalg.hpp"

#include <functional>
#include <vector>

namespace hawkes {

// Objective for maximization. When `grad` is non-null the gradient must be
// filled alongside the value. Returning -inf marks an infeasible point; the
// line search backs away from it.
using Objective = std::function<double(const Vec& x, Vec* grad)>;

struct OptimOptions {
    double grad_tol = 1e-8;
    int max_iterations = 2000;
    double armijo_c1 = 1e-4;
    double step_shrink = 0.5;
    int max_line_search = 50;
};

struct OptimResult {
    Vec x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false; // projected gradient below tolerance
    bool stalled = false;   // objective stagnated at evaluation noise first
    double grad_norm = 0.0;
    std::vector<double> trajectory; // objective value per accepted iterate
};

// Dense BFGS ascent with box constraints handled by projection inside the
// line search. Coordinates with lower == upper are held fixed. Problem sizes
// here are tiny (tens of parameters), so the dense inverse-Hessian update is
// the simplest adequate choice.
OptimResult maximize_bfgs(const Objective& objective, Vec x0, const Vec& lower, const Vec& upper,
                          const OptimOptions& options = {});

} // namespace hawkes
