#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "mipat/linalg.hpp"

namespace mipat::hiv {

// Early HIV diagnosis data: six blood measurements on 107
// children. Correlations are stored to three decimals.

inline constexpr std::size_t samples = 107;

inline constexpr std::array<std::string_view, 6> names{
    "IgG", "IgA", "lymphocyte_B", "platelets", "lymphocyte_T4", "T4_T8_ratio"};

inline constexpr std::array<double, 6> variances{8.84, 0.192, 8.92e6, 2.03e4, 1.95e6, 1.39};

// Strict lower triangle, row by row.
inline constexpr std::array<double, 15> lower_correlations{
    0.483,
    0.220, 0.057,
    -0.040, -0.133, 0.149,
    0.253, -0.124, 0.523, 0.179,
    -0.276, -0.314, -0.183, 0.064, 0.213};

inline Matrix correlation_matrix() {
    Matrix r = Matrix::identity(6);
    std::size_t idx = 0;
    for (std::size_t i = 1; i < 6; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            r(i, j) = lower_correlations[idx];
            r(j, i) = lower_correlations[idx];
            ++idx;
        }
    return r;
}

inline CorrelationModel model() { return CorrelationModel(correlation_matrix(), samples); }

} // namespace mipat::hiv
