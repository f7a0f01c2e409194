#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace typomap::linalg {

// Minimal row-major dense matrix; enough for the OK systems and the MDS
// Gram matrix, which top out at a few thousand rows.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// PA = LU with partial pivoting, factored in place. Throws Error on a
// numerically singular matrix.
class LuDecomposition {
public:
    explicit LuDecomposition(Matrix a);

    // Solves Ax = b; b.size() must equal the dimension.
    std::vector<double> solve(std::span<const double> b) const;

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

std::vector<double> mat_vec(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

} // namespace typomap::linalg
