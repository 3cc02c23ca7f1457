#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mipat/error.hpp"
#include "mipat/inference.hpp"
#include "mipat/linalg.hpp"
#include "mipat/parallel.hpp"
#include "mipat/partition.hpp"
#include "mipat/random.hpp"

namespace mipat::sim {

/// Monte Carlo study parameters. Defaults are the full-scale study: six
/// variables, 500 models for each block count 1..6, 300 samples analysed on
/// nested prefixes of 50, 100, ..., 300 rows at alpha = 0.1 with FDR.
struct SimulationConfig {
    std::size_t n = 6;
    std::vector<std::size_t> block_counts{1, 2, 3, 4, 5, 6};
    std::size_t runs_per_k = 500;
    std::size_t max_samples = 300;
    std::vector<std::size_t> subset_sizes{50, 100, 150, 200, 250, 300};
    double alpha = 0.1;
    Correction correction = Correction::fdr;
    NullDistribution mode = NullDistribution::central;
    std::uint64_t master_seed = 1;

    void validate() const {
        if (n < 2 || n > 20) throw invalid_input("simulation: n must be in [2, 20]");
        if (block_counts.empty()) throw invalid_input("simulation: no block counts");
        for (std::size_t k : block_counts)
            if (k < 1 || k > n) throw invalid_input("simulation: block count " + std::to_string(k) + " outside [1, n]");
        if (runs_per_k < 1) throw invalid_input("simulation: runs per block count must be >= 1");
        if (subset_sizes.empty()) throw invalid_input("simulation: no subset sizes");
        for (std::size_t s : subset_sizes) {
            if (s > max_samples) throw invalid_input("simulation: subset size " + std::to_string(s) + " exceeds max samples");
            if (s < 3) throw invalid_input("simulation: subset size must be >= 3");
        }
        if (!(alpha > 0.0 && alpha < 1.0)) throw invalid_input("simulation: alpha must be in (0, 1)");
    }

    std::size_t total_runs() const { return block_counts.size() * runs_per_k; }
};

struct GeneratedModel {
    Partition truth;
    Matrix correlation;
};

/**
 * Random block-structured correlation model: a uniform K-block partition of
 * the n variables, a Wishart-rescaled correlation matrix inside each block
 * (a scalar 1 for singletons) and zeros across blocks.
 */
inline GeneratedModel generate_model(std::size_t n, std::size_t blocks, RngStream& rng) {
    GeneratedModel model;
    model.truth = random_partition_with_k_blocks(n, blocks, rng);
    model.correlation = Matrix::identity(n);
    for (const auto& block : model.truth.blocks()) {
        if (block.size() < 2) continue;
        const Matrix r = sample_wishart_correlation(block.size(), rng);
        for (std::size_t i = 0; i < block.size(); ++i)
            for (std::size_t j = 0; j < block.size(); ++j) model.correlation(block[i], block[j]) = r(i, j);
    }
    return model;
}

// ---------------------------------------------------------------------------
// Metrics

/// Probability that a random positive scores a smaller p-value than a random
/// negative, ties counting 1/2. Undefined without both classes.
inline std::optional<double> auc(std::span<const double> positive_p, std::span<const double> negative_p) {
    if (positive_p.empty() || negative_p.empty()) return std::nullopt;
    double wins = 0.0;
    for (double p : positive_p)
        for (double q : negative_p) wins += p < q ? 1.0 : (p == q ? 0.5 : 0.0);
    return wins / (static_cast<double>(positive_p.size()) * static_cast<double>(negative_p.size()));
}

/// AUC over p-values listed in enumerate_bipartitions(n) order.
inline std::optional<double> auc(std::span<const double> pvalues, const Partition& truth) {
    const auto bips = enumerate_bipartitions(truth.size());
    if (pvalues.size() != bips.size()) throw dimension_mismatch(bips.size(), pvalues.size());
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < bips.size(); ++i)
        (is_negative_case(bips[i], truth) ? neg : pos).push_back(pvalues[i]);
    return auc(std::span<const double>(pos), std::span<const double>(neg));
}

inline std::optional<double> sensitivity(const Confusion& c) {
    if (c.tp + c.fn == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

inline std::optional<double> specificity(const Confusion& c) {
    if (c.tn + c.fp == 0) return std::nullopt;
    return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

/// Mean |rho_ij| over pairs i < j sharing a block of the truth.
inline std::optional<double> within_block_correlation(const Partition& truth, const Matrix& correlation) {
    if (correlation.rows() != truth.size() || correlation.cols() != truth.size())
        throw dimension_mismatch(truth.size(), correlation.rows());
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 1; i < truth.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (truth.same_block(i, j)) {
                sum += std::abs(correlation(i, j));
                ++pairs;
            }
    if (pairs == 0) return std::nullopt;
    return sum / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// Campaign

struct SubsetResult {
    std::size_t size = 0;
    bool failed = false;
    std::string error;
    std::vector<double> pvalues;
    Confusion confusion;
    std::optional<double> auc;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    bool correct = false;
};

struct RunRecord {
    std::size_t run_id = 0;
    std::size_t blocks = 0;
    Partition truth;
    Matrix truth_correlation;
    std::optional<double> within_block_abs_corr;
    std::vector<SubsetResult> subsets;  // aligned with config.subset_sizes
};

struct CampaignResult {
    SimulationConfig config;
    std::vector<RunRecord> records;

    std::size_t failed_analyses() const {
        std::size_t f = 0;
        for (const auto& r : records)
            for (const auto& s : r.subsets) f += s.failed;
        return f;
    }

    std::size_t total_analyses() const { return records.size() * config.subset_sizes.size(); }
};

/// One run: model, one dataset of max_samples rows, and an analysis of each
/// prefix. Depends only on (master_seed, run_id).
inline RunRecord simulate_run(const SimulationConfig& config, std::size_t run_id, std::size_t blocks) {
    RngStream rng(config.master_seed, run_id);
    RunRecord rec;
    rec.run_id = run_id;
    rec.blocks = blocks;
    const GeneratedModel model = generate_model(config.n, blocks, rng);
    rec.truth = model.truth;
    rec.truth_correlation = model.correlation;
    rec.within_block_abs_corr = within_block_correlation(model.truth, model.correlation);
    const DataMatrix data = sample_mvn(model.correlation, config.max_samples, rng);

    const InferenceOptions opts{config.alpha, config.correction, config.mode, 1};
    for (std::size_t size : config.subset_sizes) {
        SubsetResult sub;
        sub.size = size;
        try {
            const InferenceOutcome out = infer_from_data(data.head(size), opts);
            sub.pvalues.reserve(out.tests.size());
            for (const auto& t : out.tests) sub.pvalues.push_back(t.p_value);
            sub.confusion = classify_against_truth(out, model.truth);
            sub.auc = auc(sub.pvalues, model.truth);
            sub.sensitivity = sensitivity(sub.confusion);
            sub.specificity = specificity(sub.confusion);
            sub.correct = out.mu_hat == model.truth;
        } catch (const error& e) {
            sub.failed = true;
            sub.error = e.what();
        }
        rec.subsets.push_back(std::move(sub));
    }
    return rec;
}

/// Runs every (K, run) pair, in parallel when threads > 1. Records come back
/// in run-id order whatever the scheduling; run ids enumerate block counts in
/// config order, runs_per_k each.
inline CampaignResult run_campaign(const SimulationConfig& config, unsigned threads = 1) {
    config.validate();
    CampaignResult result;
    result.config = config;
    result.records.resize(config.total_runs());
    parallel_for(result.records.size(), threads, [&](std::size_t id) {
        result.records[id] = simulate_run(config, id, config.block_counts[id / config.runs_per_k]);
    });
    return result;
}

/// Fraction of non-failed runs with the given block count whose mu_hat equals
/// the truth at subset index `size_index`. Undefined when no run qualifies.
inline std::optional<double> correct_ratio(std::span<const RunRecord> records, std::size_t blocks, std::size_t size_index) {
    std::size_t hits = 0, total = 0;
    for (const auto& r : records) {
        if (r.blocks != blocks) continue;
        const auto& s = r.subsets.at(size_index);
        if (s.failed) continue;
        ++total;
        hits += s.correct;
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(total);
}

/// Linear-interpolation quantile (R type 7) of an unsorted sample.
inline double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw invalid_input("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

struct Spread {
    std::size_t count = 0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

inline std::optional<Spread> spread(const std::vector<double>& values) {
    if (values.empty()) return std::nullopt;
    return Spread{values.size(), quantile(values, 0.5), quantile(values, 0.25), quantile(values, 0.75)};
}

/// A metric's defined values over non-failed runs of one (K, subset size) cell.
template <typename Get>
std::vector<double> collect(std::span<const RunRecord> records, std::size_t blocks, std::size_t size_index, Get get) {
    std::vector<double> out;
    for (const auto& r : records) {
        if (r.blocks != blocks) continue;
        const auto& s = r.subsets.at(size_index);
        if (s.failed) continue;
        if (std::optional<double> v = get(r, s)) out.push_back(*v);
    }
    return out;
}

} // namespace mipat::sim
