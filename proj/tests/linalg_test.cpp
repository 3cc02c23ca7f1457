#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mipat/linalg.hpp"
#include "oracles.hpp"

using namespace mipat;

namespace {

DataMatrix columns(const std::vector<std::vector<double>>& cols) {
    Matrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < cols[j].size(); ++i) m(i, j) = cols[j][i];
    return DataMatrix(m);
}

Matrix random_spd(std::size_t n, std::mt19937_64& gen) {
    std::normal_distribution<double> z;
    Matrix a(n + 2, n);
    for (std::size_t i = 0; i < n + 2; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = z(gen);
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < n + 2; ++r) acc += a(r, i) * a(r, j);
            s(i, j) = acc;
        }
    return s;
}

} // namespace

TEST(Pearson, SmallHandExample) {
    auto m = sample_correlation(columns({{1, 2, 3, 4}, {1, 3, 2, 4}, {2, 1, 4, 3}}));
    EXPECT_NEAR(m(0, 1), 0.8, 1e-14);
    EXPECT_NEAR(m(0, 2), 0.6, 1e-14);
    EXPECT_NEAR(m(1, 2), 0.0, 1e-14);
    EXPECT_EQ(m(0, 0), 1.0);
    EXPECT_EQ(m.samples(), 4u);
}

TEST(Pearson, UnevenColumn) {
    auto m = sample_correlation(columns({{1, 2, 3, 4}, {1, 1, 2, 1}}));
    EXPECT_NEAR(m(0, 1), 0.2581988897, 1e-9);
    auto q = sample_correlation(columns({{0, 0, 1, 1}, {0, 1, 0, 1}}));
    EXPECT_NEAR(q(0, 1), 0.0, 1e-15);
}

TEST(Pearson, PerfectAndAnti) {
    auto m = sample_correlation(columns({{1, 5, 2, 8}, {1, 5, 2, 8}, {-1, -5, -2, -8}}));
    EXPECT_DOUBLE_EQ(m(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(m(0, 2), -1.0);
}

TEST(Pearson, Symmetric) {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> z;
    Matrix x(20, 5);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 5; ++j) x(i, j) = z(gen);
    auto m = sample_correlation(DataMatrix(x));
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(m(i, j), m(j, i));
}

TEST(Pearson, Errors) {
    EXPECT_THROW(sample_correlation(columns({{1, 1, 1, 1}, {1, 2, 3, 4}})), degenerate_data);
    EXPECT_THROW(sample_correlation(columns({{1, 2}, {2, 1}})), invalid_input);
    Matrix bad(3, 2, 1.0);
    bad(1, 1) = std::nan("");
    EXPECT_THROW(DataMatrix{bad}, invalid_input);
}

TEST(LogDet, Identity) {
    for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(logdet_spd(Matrix::identity(n)), 0.0);
}

TEST(LogDet, TwoByTwo) {
    for (double rho : {0.0, 0.3, -0.5, 0.9, 0.999}) {
        auto m = Matrix::from_rows({{1, rho}, {rho, 1}});
        EXPECT_NEAR(logdet_spd(m), std::log1p(-rho * rho), 1e-12) << rho;
    }
}

TEST(LogDet, SingularThrows) {
    EXPECT_THROW(logdet_spd(Matrix::from_rows({{1, 1}, {1, 1}})), not_positive_definite);
    EXPECT_THROW(logdet_spd(Matrix::from_rows({{1, 2}, {2, 1}})), not_positive_definite);
    EXPECT_THROW(cholesky(Matrix::from_rows({{1, 0, 0}, {0, -1, 0}, {0, 0, 1}})), not_positive_definite);
}

TEST(LogDet, CholeskyReconstructs) {
    std::mt19937_64 gen(11);
    for (std::size_t n = 1; n <= 7; ++n) {
        Matrix s = random_spd(n, gen);
        Matrix l = cholesky(s);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t r = 0; r < n; ++r) acc += l(i, r) * l(j, r);
                EXPECT_NEAR(acc, s(i, j), 1e-10 * std::abs(s(i, i) + s(j, j)));
                if (j > i) { EXPECT_EQ(l(i, j), 0.0); }
            }
    }
}

TEST(LogDet, MatchesCofactorDeterminant) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + trial % 5;
        Matrix s = random_spd(n, gen);
        std::vector<std::vector<long double>> a(n, std::vector<long double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a[i][j] = s(i, j);
        const double expected = static_cast<double>(std::log(oracle::cofactor_det(a)));
        EXPECT_NEAR(logdet_spd(s), expected, 1e-9 * std::max(1.0, std::abs(expected)));
    }
}

TEST(Submatrix, PicksRowsAndColumns) {
    auto m = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
    std::vector<std::size_t> idx{0, 2};
    auto s = principal_submatrix(m, idx);
    EXPECT_EQ(s, Matrix::from_rows({{1, 3}, {7, 9}}));
}

TEST(CorrelationModelTest, Validation) {
    EXPECT_NO_THROW(CorrelationModel(Matrix::identity(3), 10));
    EXPECT_THROW(CorrelationModel(Matrix::from_rows({{1, 0.2}, {0.3, 1}}), 10), invalid_input);
    EXPECT_THROW(CorrelationModel(Matrix::from_rows({{1, 1.5}, {1.5, 1}}), 10), invalid_input);
    EXPECT_THROW(CorrelationModel(Matrix::from_rows({{2, 0}, {0, 1}}), 10), invalid_input);
    EXPECT_THROW(CorrelationModel(Matrix(2, 3), 10), invalid_input);
}

TEST(DataMatrixTest, Head) {
    DataMatrix d = columns({{1, 2, 3, 4}, {5, 6, 7, 8}});
    auto h = d.head(3);
    EXPECT_EQ(h.samples(), 3u);
    EXPECT_EQ(h.values()(2, 1), 7.0);
    EXPECT_THROW(d.head(5), invalid_input);
}
