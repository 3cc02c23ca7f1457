#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mipat/error.hpp"

namespace mipat {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) return {};
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw dimension_mismatch(m.cols_, rows[i].size());
            std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Principal submatrix on the given (sorted or unsorted) index set.
inline Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> index) {
    Matrix out(index.size(), index.size());
    for (std::size_t i = 0; i < index.size(); ++i)
        for (std::size_t j = 0; j < index.size(); ++j) out(i, j) = m(index[i], index[j]);
    return out;
}

/**
 * Lower-triangular Cholesky factor L with m = L L^T. Throws
 * not_positive_definite when a pivot drops to or below
 * 1e-12 * dim * max|diag|. Only the lower triangle of m is read.
 */
inline Matrix cholesky(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw dimension_mismatch(n, m.cols());
    if (n == 0) throw invalid_input("cholesky of an empty matrix");
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
    const double tol = 1e-12 * static_cast<double>(n) * max_diag;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
        if (!(d > tol))
            throw not_positive_definite("matrix is not positive definite (pivot " + std::to_string(j + 1) +
                                        " = " + std::to_string(d) + ")");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

/// log det of a symmetric positive-definite matrix via Cholesky.
inline double logdet_spd(const Matrix& m) {
    const Matrix l = cholesky(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) sum += std::log(l(i, i));
    return 2.0 * sum;
}

/// k i.i.d. observations (rows) of n variables (columns).
class DataMatrix {
public:
    DataMatrix() = default;

    explicit DataMatrix(Matrix values) : values_(std::move(values)) {
        if (values_.rows() < 2) throw invalid_input("data needs at least 2 samples, got " + std::to_string(values_.rows()));
        if (values_.cols() < 1) throw invalid_input("data needs at least 1 variable");
        for (double v : values_.data())
            if (!std::isfinite(v)) throw invalid_input("data contains a non-finite value");
    }

    std::size_t samples() const { return values_.rows(); }
    std::size_t variables() const { return values_.cols(); }
    const Matrix& values() const { return values_; }

    /// The first `count` rows.
    DataMatrix head(std::size_t count) const {
        if (count > samples()) throw invalid_input("head: requested " + std::to_string(count) + " of " + std::to_string(samples()) + " rows");
        Matrix m(count, variables());
        for (std::size_t i = 0; i < count; ++i) std::copy(values_.row(i).begin(), values_.row(i).end(), m.row(i).begin());
        return DataMatrix(std::move(m));
    }

    friend bool operator==(const DataMatrix&, const DataMatrix&) = default;

private:
    Matrix values_;
};

/**
 * A correlation matrix together with the number of samples behind it. This
 * is all the information-statistic test needs.
 */
class CorrelationModel {
public:
    static constexpr double tolerance = 1e-12;

    CorrelationModel() = default;

    CorrelationModel(Matrix r, std::size_t samples) : r_(std::move(r)), samples_(samples) {
        const std::size_t n = r_.rows();
        if (n == 0 || n != r_.cols()) throw invalid_input("correlation matrix must be square and nonempty");
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(r_(i, i) - 1.0) > tolerance)
                throw invalid_input("correlation matrix diagonal entry " + std::to_string(i + 1) + " is not 1");
            for (std::size_t j = 0; j < n; ++j) {
                const double v = r_(i, j);
                if (!std::isfinite(v) || v < -1.0 - tolerance || v > 1.0 + tolerance)
                    throw invalid_input("correlation entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") outside [-1, 1]");
                if (std::abs(v - r_(j, i)) > tolerance)
                    throw invalid_input("correlation matrix is not symmetric at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            }
        }
    }

    std::size_t dimension() const { return r_.rows(); }
    std::size_t samples() const { return samples_; }
    const Matrix& correlation() const { return r_; }
    double operator()(std::size_t i, std::size_t j) const { return r_(i, j); }

private:
    Matrix r_;
    std::size_t samples_ = 0;
};

/// Pearson correlation of the columns. The (k - 1) denominator is used for
/// both covariances and variances.
inline CorrelationModel sample_correlation(const DataMatrix& data) {
    const std::size_t k = data.samples();
    const std::size_t n = data.variables();
    if (k < 3) throw degenerate_data("sample correlation needs at least 3 samples, got " + std::to_string(k));
    const Matrix& x = data.values();

    std::vector<double> mean(n, 0.0);
    for (std::size_t s = 0; s < k; ++s)
        for (std::size_t j = 0; j < n; ++j) mean[j] += x(s, j);
    for (double& m : mean) m /= static_cast<double>(k);

    Matrix cov(n, n);
    for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            const double di = x(s, i) - mean[i];
            for (std::size_t j = 0; j <= i; ++j) cov(i, j) += di * (x(s, j) - mean[j]);
        }
    }
    const double denom = static_cast<double>(k - 1);
    std::vector<double> sd(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double var = cov(i, i) / denom;
        if (!(var > 0.0)) throw degenerate_data("column " + std::to_string(i + 1) + " has zero sample variance");
        sd[i] = std::sqrt(var);
    }

    Matrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        r(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double v = std::clamp(cov(i, j) / denom / (sd[i] * sd[j]), -1.0, 1.0);
            r(i, j) = v;
            r(j, i) = v;
        }
    }
    return CorrelationModel(std::move(r), k);
}

} // namespace mipat
