#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mipat/error.hpp"
#include "mipat/linalg.hpp"
#include "mipat/mdi_test.hpp"
#include "mipat/multiple_testing.hpp"
#include "mipat/parallel.hpp"
#include "mipat/partition.hpp"

namespace mipat {

struct InferenceOptions {
    double alpha = 0.1;
    Correction correction = Correction::fdr;
    NullDistribution mode = NullDistribution::central;
    unsigned threads = 1;
};

/**
 * Everything produced by one run of the pipeline: all m = 2^(n-1) - 1 tests
 * in enumeration order, which of them were rejected, the retained
 * bipartitions (delta_hat) and their meet (mu_hat).
 */
struct InferenceOutcome {
    std::size_t n = 0;
    std::size_t samples = 0;
    double alpha = 0.1;
    Correction correction = Correction::fdr;
    NullDistribution mode = NullDistribution::central;
    std::vector<TestResult> tests;
    std::vector<bool> rejected;
    std::vector<Bipartition> delta_hat;
    Partition mu_hat;
    std::size_t m = 0;
    std::size_t m_thres = 0;
};

/// mu_hat from a retained set; the empty set gives the one-block partition.
inline Partition finest_pattern(std::span<const Bipartition> retained, std::size_t n) {
    if (retained.empty()) return Partition::one_block(n);
    return meet_all(retained);
}

/// Applies the correction to precomputed tests and assembles the outcome.
inline InferenceOutcome assemble_outcome(std::vector<TestResult> tests, std::size_t n, std::size_t samples,
                                         const InferenceOptions& opts) {
    InferenceOutcome out;
    out.n = n;
    out.samples = samples;
    out.alpha = opts.alpha;
    out.correction = opts.correction;
    out.mode = opts.mode;
    out.m = tests.size();

    std::vector<double> p(tests.size());
    for (std::size_t i = 0; i < tests.size(); ++i) p[i] = tests[i].p_value;
    CorrectionOutcome corr = correct(p, opts.alpha, opts.correction);

    out.m_thres = corr.m_thres;
    out.rejected = std::move(corr.rejected);
    for (std::size_t i = 0; i < tests.size(); ++i)
        if (!out.rejected[i]) out.delta_hat.push_back(tests[i].bipartition);
    out.mu_hat = finest_pattern(out.delta_hat, n);
    out.tests = std::move(tests);
    return out;
}

/**
 * Tests every bipartition of the model's variables, corrects for multiple
 * comparisons and intersects the survivors. Any test that cannot be computed
 * (singular submatrix) aborts the whole inference: the meet is only
 * meaningful over the complete survivor set.
 */
inline InferenceOutcome infer_from_model(const CorrelationModel& model, const InferenceOptions& opts = {}) {
    const std::size_t n = model.dimension();
    if (n < 2) throw invalid_input("inference needs at least 2 variables, got " + std::to_string(n));
    if (model.samples() < 3) throw degenerate_data("inference needs at least 3 samples, got " + std::to_string(model.samples()));
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw invalid_input("alpha must be in (0, 1)");

    const double ld_full = detail::logdet_full(model);
    const auto bips = enumerate_bipartitions(n);
    std::vector<TestResult> tests(bips.size());
    parallel_for(bips.size(), opts.threads, [&](std::size_t i) {
        tests[i] = detail::test_with(model, bips[i], opts.mode, ld_full);
    });
    return assemble_outcome(std::move(tests), n, model.samples(), opts);
}

inline InferenceOutcome infer_from_data(const DataMatrix& data, const InferenceOptions& opts = {}) {
    if (data.variables() < 2) throw invalid_input("inference needs at least 2 variables, got " + std::to_string(data.variables()));
    if (data.samples() < 3) throw degenerate_data("inference needs at least 3 samples, got " + std::to_string(data.samples()));
    return infer_from_model(sample_correlation(data), opts);
}

/// Ground-truth comparison. Negatives are the bipartitions entailed by the
/// truth (independence holds); positives are all others.
struct Confusion {
    std::size_t tp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;

    std::size_t total() const { return tp + fn + tn + fp; }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// True iff the truth entails independence across b (truth <= b).
inline bool is_negative_case(const Bipartition& b, const Partition& truth) {
    if (truth.size() != b.size()) throw dimension_mismatch(truth.size(), b.size());
    for (std::size_t i = 1; i < truth.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (truth.same_block(i, j) && b.contains(i) != b.contains(j)) return false;
    return true;
}

inline Confusion classify_against_truth(const InferenceOutcome& outcome, const Partition& truth) {
    if (truth.size() != outcome.n) throw dimension_mismatch(outcome.n, truth.size());
    Confusion c;
    for (std::size_t i = 0; i < outcome.tests.size(); ++i) {
        const bool negative = is_negative_case(outcome.tests[i].bipartition, truth);
        const bool rejected = outcome.rejected[i];
        if (negative) (rejected ? c.fp : c.tn)++;
        else (rejected ? c.tp : c.fn)++;
    }
    return c;
}

} // namespace mipat
