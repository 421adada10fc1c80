#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "semimetric/error.hpp"

namespace semimetric {

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows)
        : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
    {
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_)
                throw Error(Errc::invalid_argument, "ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix square(std::size_t n, double fill = 0.0) { return Matrix(n, n, fill); }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_.data() + i * cols_, cols_};
    }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    double sum() const noexcept
    {
        double s = 0.0;
        for (double v : data_)
            s += v;
        return s;
    }

    double max_abs() const noexcept
    {
        double m = 0.0;
        for (double v : data_)
            m = std::max(m, std::abs(v));
        return m;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double max_abs_difference(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(Errc::invalid_argument, "shape mismatch");
    double m = 0.0;
    auto x = a.data();
    auto y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i)
        m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

// Largest |m(i,j) - m(j,i)|; infinity for non-square input.
inline double asymmetry(const Matrix& m)
{
    if (!m.is_square())
        return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
    return worst;
}

inline void require_symmetric(const Matrix& m, double tol = 1e-9)
{
    if (!m.is_square())
        throw Error(Errc::contract_violation, "matrix is not square");
    if (asymmetry(m) > tol)
        throw Error(Errc::contract_violation, "matrix is not symmetric");
}

inline Matrix multiply(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        throw Error(Errc::invalid_argument, "shape mismatch in multiply");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0)
                continue;
            auto brow = b.row(k);
            auto crow = c.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j)
                crow[j] += aik * brow[j];
        }
    return c;
}

} // namespace semimetric
