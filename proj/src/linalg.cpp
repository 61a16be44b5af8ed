#include "hawkes/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace hawkes {

Vec mat_vec(const Matrix& a, const Vec& x) {
    Vec y(static_cast<std::size_t>(a.rows()), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

double norm1(const Matrix& a) {
    double best = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double col = 0.0;
        for (int i = 0; i < a.rows(); ++i) col += std::abs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm_inf(const Vec& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

LuDecomposition::LuDecomposition(Matrix a) : lu_(std::move(a)) {
    const int n = lu_.rows();
    if (n != lu_.cols()) throw Error(ErrorCode::NumericalFailure, "LU requires a square matrix");
    perm_.resize(n);
    for (int i = 0; i < n; ++i) perm_[i] = i;

    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(lu_(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best))
            throw Error(ErrorCode::NumericalFailure, "singular matrix in LU factorization");
        if (pivot != k) {
            for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot, j));
            std::swap(perm_[k], perm_[pivot]);
            sign_ = -sign_;
        }
        for (int i = k + 1; i < n; ++i) {
            lu_(i, k) /= lu_(k, k);
            const double l = lu_(i, k);
            if (l == 0.0) continue;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
        }
    }
}

Vec LuDecomposition::solve(const Vec& rhs) const {
    const int n = lu_.rows();
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (int i = 1; i < n; ++i) {
        double s = x[i];
        for (int j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

Matrix LuDecomposition::inverse() const {
    const int n = lu_.rows();
    Matrix inv(n, n);
    Vec e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        const Vec col = solve(e);
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

double LuDecomposition::determinant() const {
    double det = sign_;
    for (int i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
    return det;
}

Matrix guarded_inverse(const Matrix& a, double max_condition, double* condition_out) {
    Matrix inv;
    try {
        LuDecomposition lu(a);
        inv = lu.inverse();
    } catch (const Error&) {
        throw Error(ErrorCode::SingularFisher, "matrix is numerically singular");
    }
    const double cond = norm1(a) * norm1(inv);
    if (condition_out) *condition_out = cond;
    if (!std::isfinite(cond) || cond > max_condition)
        throw Error(ErrorCode::SingularFisher,
                    "matrix condition number " + std::to_string(cond) + " exceeds guard");
    return inv;
}

double power_iteration_radius(const Matrix& q, double tol, int max_iter) {
    const int n = q.rows();
    if (n == 0) return 0.0;
    if (n == 1) return std::abs(q(0, 0));
    Vec v(n, 1.0);
    double radius = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vec w = mat_vec(q, v);
        const double nw = norm2(w);
        if (nw < 1e-300) return 0.0; // nilpotent-like: iterates vanish
        for (double& x : w) x /= nw;
        const double estimate = dot(w, mat_vec(q, w));
        if (std::abs(estimate - radius) <= tol * std::max(1.0, std::abs(estimate))) {
            return std::abs(estimate);
        }
        radius = estimate;
        v = std::move(w);
    }
    return std::abs(radius);
}

} // namespace hawkes
