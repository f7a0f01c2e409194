#include "typomap/linalg.hpp"

#include "typomap/error.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace typomap::linalg {

LuDecomposition::LuDecomposition(Matrix a) : lu_(std::move(a)) {
    const std::size_t n = lu_.rows();
    if (n != lu_.cols()) throw Error("LU: matrix not square");
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(lu_.at(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            double v = std::fabs(lu_.at(r, k));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) throw Error("LU: singular matrix");
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu_.at(k, c), lu_.at(piv, c));
            std::swap(perm_[k], perm_[piv]);
        }
        const double pivot = lu_.at(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double m = lu_.at(r, k) / pivot;
            lu_.at(r, k) = m;
            if (m == 0.0) continue;
            const double* src = lu_.row(k);
            double* dst = lu_.row(r);
            for (std::size_t c = k + 1; c < n; ++c) dst[c] -= m * src[c];
        }
    }
}

std::vector<double> LuDecomposition::solve(std::span<const double> b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw Error("LU solve: dimension mismatch");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    // forward substitution (unit lower)
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        const double* row = lu_.row(i);
        for (std::size_t j = 0; j < i; ++j) s -= row[j] * x[j];
        x[i] = s;
    }
    // back substitution
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        const double* row = lu_.row(ii);
        for (std::size_t j = ii + 1; j < n; ++j) s -= row[j] * x[j];
        x[ii] = s / row[ii];
    }
    return x;
}

std::vector<double> mat_vec(const Matrix& a, std::span<const double> x) {
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* row = a.row(r);
        double s = 0.0;
        for (std::size_t c = 0; c < a.cols(); ++c) s += row[c] * x[c];
        y[r] = s;
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

} // namespace typomap::linalg
