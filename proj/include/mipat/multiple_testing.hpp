#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mipat/error.hpp"

namespace mipat {

enum class Correction { fdr, bonferroni };

inline std::string_view to_string(Correction c) { return c == Correction::fdr ? "fdr" : "bonferroni"; }

inline Correction parse_correction(std::string_view s) {
    if (s == "fdr" || s == "bh") return Correction::fdr;
    if (s == "bonferroni") return Correction::bonferroni;
    throw invalid_input("unknown correction '" + std::string(s) + "' (expected fdr or bonferroni)");
}

struct CorrectionOutcome {
    std::vector<bool> rejected;             // index-aligned with the input
    std::size_t m_thres = 0;                // number of rejections
    std::optional<double> threshold_pvalue; // largest rejected p-value
};

namespace detail {

inline void check_pvalues(std::span<const double> p, double alpha) {
    if (p.empty()) throw invalid_input("multiple-testing correction needs at least one p-value");
    if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input("alpha must be in (0, 1), got " + std::to_string(alpha));
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0)) throw invalid_input("p-value outside [0, 1]: " + std::to_string(v));
}

} // namespace detail

/**
 * Benjamini-Hochberg step-up: m_thres is the largest i with p_(i) <= alpha i / m
 * (non-strict). The m_thres smallest p-values are rejected; equal p-values
 * are always on the same side of the cut.
 */
inline CorrectionOutcome bh_fdr(std::span<const double> pvalues, double alpha) {
    detail::check_pvalues(pvalues, alpha);
    const std::size_t m = pvalues.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });

    std::size_t m_thres = 0;
    for (std::size_t i = m; i >= 1; --i) {
        if (pvalues[order[i - 1]] <= alpha * static_cast<double>(i) / static_cast<double>(m)) {
            m_thres = i;
            break;
        }
    }

    CorrectionOutcome out;
    out.rejected.assign(m, false);
    out.m_thres = m_thres;
    if (m_thres > 0) {
        const double cut = pvalues[order[m_thres - 1]];
        out.threshold_pvalue = cut;
        for (std::size_t i = 0; i < m; ++i) out.rejected[i] = pvalues[i] <= cut;
    }
    return out;
}

/// Bonferroni: reject iff p <= alpha / m.
inline CorrectionOutcome bonferroni(std::span<const double> pvalues, double alpha) {
    detail::check_pvalues(pvalues, alpha);
    const double cut = alpha / static_cast<double>(pvalues.size());
    CorrectionOutcome out;
    out.rejected.assign(pvalues.size(), false);
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        if (pvalues[i] <= cut) {
            out.rejected[i] = true;
            ++out.m_thres;
            out.threshold_pvalue = std::max(out.threshold_pvalue.value_or(0.0), pvalues[i]);
        }
    }
    return out;
}

inline CorrectionOutcome correct(std::span<const double> pvalues, double alpha, Correction method) {
    return method == Correction::fdr ? bh_fdr(pvalues, alpha) : bonferroni(pvalues, alpha);
}

} // namespace mipat
