#pragma once

#include "hawkes/errors.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace hawkes {

using Vec = std::vector<double>;

// Dense row-major matrix. Dimensions here are tiny (d <= tens, parameter
// counts <= dozens), so no external linear-algebra dependency is warranted.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    void symmetrize() {
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j) {
                const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
                (*this)(i, j) = v;
                (*this)(j, i) = v;
            }
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Vec mat_vec(const Matrix& a, const Vec& x);
Matrix mat_mul(const Matrix& a, const Matrix& b);
double norm1(const Matrix& a);
double norm2(const Vec& v);
double norm_inf(const Vec& v);
double dot(const Vec& a, const Vec& b);

// LU decomposition with partial pivoting; throws Error(NumericalFailure) on
// exactly singular input.
class LuDecomposition {
public:
    explicit LuDecomposition(Matrix a);

    Vec solve(const Vec& rhs) const;
    Matrix inverse() const;
    double determinant() const;

private:
    Matrix lu_;
    std::vector<int> perm_;
    int sign_ = 1;
};

// Inverse with a 1-norm condition estimate; throws Error(SingularFisher)
// when cond exceeds `max_condition` or the factorization fails.
Matrix guarded_inverse(const Matrix& a, double max_condition, double* condition_out = nullptr);

// Spectral radius of a nonnegative matrix by power iteration.
double power_iteration_radius(const Matrix& q, double tol = 1e-10, int max_iter = 10000);

} // namespace hawkes
