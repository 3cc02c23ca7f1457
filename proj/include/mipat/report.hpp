#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "mipat/inference.hpp"
#include "mipat/partition.hpp"
#include "mipat/simulation.hpp"

namespace mipat::report {

using nlohmann::json;

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

inline json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// ---------------------------------------------------------------------------
// Inference outcome

/// Key-sorted JSON (nlohmann's default object type is an ordered std::map).
inline json outcome_json(const InferenceOutcome& out, const std::vector<std::string>& variables = {}) {
    json tests = json::array();
    for (const auto& t : out.tests) {
        tests.push_back({{"bipartition", format_partition(t.bipartition)},
                         {"statistic", t.statistic},
                         {"df", t.df},
                         {"p_value", t.p_value}});
    }
    json delta = json::array();
    for (const auto& b : out.delta_hat) delta.push_back(format_partition(b));
    json j{{"n", out.n},
           {"k", out.samples},
           {"alpha", out.alpha},
           {"correction", std::string(to_string(out.correction))},
           {"mode", std::string(to_string(out.mode))},
           {"m", out.m},
           {"m_thres", out.m_thres},
           {"tests", std::move(tests)},
           {"delta_hat", std::move(delta)},
           {"mu_hat", format_partition(out.mu_hat)}};
    if (!variables.empty()) j["variables"] = variables;
    return j;
}

inline std::string outcome_text(const InferenceOutcome& out) {
    std::ostringstream os;
    os << "n = " << out.n << ", k = " << out.samples << ", m = " << out.m << ", alpha = " << out.alpha << " ("
       << to_string(out.correction) << ", " << to_string(out.mode) << ")\n";
    os << "rejected: " << out.m_thres << " of " << out.m << "\n\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-24s %14s %5s %12s  %s\n", "bipartition", "statistic", "df", "p-value", "");
    os << line;
    for (std::size_t i = 0; i < out.tests.size(); ++i) {
        const auto& t = out.tests[i];
        std::snprintf(line, sizeof line, "%-24s %14.6f %5u %12.4e  %s\n", format_partition(t.bipartition).c_str(), t.statistic, t.df,
                      t.p_value, out.rejected[i] ? "rejected" : "retained");
        os << line;
    }
    os << "\ndelta_hat:";
    if (out.delta_hat.empty()) os << " (empty)";
    for (const auto& b : out.delta_hat) os << ' ' << format_partition(b);
    os << "\nmu_hat: " << format_partition(out.mu_hat) << '\n';
    return os.str();
}

/// One row per bipartition test.
inline std::string outcome_csv(const InferenceOutcome& out) {
    std::ostringstream os;
    os << "bipartition,statistic,df,p_value,rejected\n";
    for (std::size_t i = 0; i < out.tests.size(); ++i) {
        const auto& t = out.tests[i];
        os << csv_field(format_partition(t.bipartition)) << ',' << format_number(t.statistic) << ',' << t.df << ','
           << format_number(t.p_value) << ',' << (out.rejected[i] ? 1 : 0) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Simulation campaign

inline std::string campaign_csv(const sim::CampaignResult& result) {
    std::ostringstream os;
    os << "run_id,K,truth,subset_size,sensitivity,specificity,auc,correct,within_block_abs_corr,failed\n";
    for (const auto& r : result.records) {
        const std::string truth = csv_field(format_partition(r.truth));
        for (const auto& s : r.subsets) {
            os << r.run_id << ',' << r.blocks << ',' << truth << ',' << s.size << ',' << format_optional(s.sensitivity) << ','
               << format_optional(s.specificity) << ',' << format_optional(s.auc) << ',' << (s.failed ? "NA" : (s.correct ? "1" : "0"))
               << ',' << format_optional(r.within_block_abs_corr) << ',' << (s.failed ? 1 : 0) << '\n';
        }
    }
    return os.str();
}

inline json spread_json(const std::optional<sim::Spread>& s) {
    if (!s) return nullptr;
    return {{"count", s->count}, {"median", s->median}, {"q25", s->q25}, {"q75", s->q75}};
}

/// One summary cell per (K, subset size).
struct CellSummary {
    std::size_t blocks = 0;
    std::size_t size = 0;
    std::size_t runs = 0;
    std::size_t failed = 0;
    std::optional<sim::Spread> sensitivity;
    std::optional<sim::Spread> specificity;
    std::optional<sim::Spread> auc;
    std::optional<double> correct_ratio;
};

inline std::vector<CellSummary> summarize(const sim::CampaignResult& result) {
    std::vector<CellSummary> cells;
    const auto& cfg = result.config;
    for (std::size_t K : cfg.block_counts) {
        for (std::size_t si = 0; si < cfg.subset_sizes.size(); ++si) {
            CellSummary c;
            c.blocks = K;
            c.size = cfg.subset_sizes[si];
            for (const auto& r : result.records) {
                if (r.blocks != K) continue;
                ++c.runs;
                c.failed += r.subsets[si].failed;
            }
            c.sensitivity = sim::spread(sim::collect(result.records, K, si, [](auto&, auto& s) { return s.sensitivity; }));
            c.specificity = sim::spread(sim::collect(result.records, K, si, [](auto&, auto& s) { return s.specificity; }));
            c.auc = sim::spread(sim::collect(result.records, K, si, [](auto&, auto& s) { return s.auc; }));
            c.correct_ratio = sim::correct_ratio(result.records, K, si);
            cells.push_back(c);
        }
    }
    return cells;
}

/// AUC binned by mean within-block |rho| in tenths of [0, 1].
inline json correlation_bins(const sim::CampaignResult& result, std::size_t blocks, std::size_t size_index) {
    std::vector<std::vector<double>> bins(10);
    for (const auto& r : result.records) {
        if (r.blocks != blocks || !r.within_block_abs_corr) continue;
        const auto& s = r.subsets[size_index];
        if (s.failed || !s.auc) continue;
        const auto b = std::min<std::size_t>(9, static_cast<std::size_t>(*r.within_block_abs_corr * 10.0));
        bins[b].push_back(*s.auc);
    }
    json out = json::array();
    for (std::size_t b = 0; b < bins.size(); ++b) {
        out.push_back({{"lower", b / 10.0},
                       {"upper", (b + 1) / 10.0},
                       {"count", bins[b].size()},
                       {"median_auc", bins[b].empty() ? json(nullptr) : json(sim::quantile(bins[b], 0.5))}});
    }
    return out;
}

inline json campaign_summary_json(const sim::CampaignResult& result) {
    const auto& cfg = result.config;
    json cells = json::array();
    std::size_t idx = 0;
    for (const auto& c : summarize(result)) {
        const std::size_t si = idx++ % cfg.subset_sizes.size();
        cells.push_back({{"K", c.blocks},
                         {"subset_size", c.size},
                         {"runs", c.runs},
                         {"failed", c.failed},
                         {"sensitivity", spread_json(c.sensitivity)},
                         {"specificity", spread_json(c.specificity)},
                         {"auc", spread_json(c.auc)},
                         {"correct_ratio", optional_json(c.correct_ratio)},
                         {"auc_by_within_block_correlation", correlation_bins(result, c.blocks, si)}});
    }
    return {{"config",
             {{"n", cfg.n},
              {"block_counts", cfg.block_counts},
              {"runs_per_k", cfg.runs_per_k},
              {"max_samples", cfg.max_samples},
              {"subset_sizes", cfg.subset_sizes},
              {"alpha", cfg.alpha},
              {"correction", std::string(to_string(cfg.correction))},
              {"mode", std::string(to_string(cfg.mode))},
              {"master_seed", cfg.master_seed}}},
            {"runs", result.records.size()},
            {"analyses", result.total_analyses()},
            {"failed_analyses", result.failed_analyses()},
            {"cells", std::move(cells)}};
}

inline std::string campaign_table(const sim::CampaignResult& result) {
    std::ostringstream os;
    char line[200];
    std::snprintf(line, sizeof line, "%3s %6s %6s %6s %10s %10s %10s %9s\n", "K", "size", "runs", "failed", "med.sens", "med.spec",
                  "med.auc", "correct");
    os << line;
    auto med = [](const std::optional<sim::Spread>& s) { return s ? format_number(s->median) : std::string("NA"); };
    for (const auto& c : summarize(result)) {
        std::snprintf(line, sizeof line, "%3zu %6zu %6zu %6zu %10s %10s %10s %9s\n", c.blocks, c.size, c.runs, c.failed,
                      med(c.sensitivity).c_str(), med(c.specificity).c_str(), med(c.auc).c_str(),
                      format_optional(c.correct_ratio).c_str());
        os << line;
    }
    return os.str();
}

} // namespace mipat::report
