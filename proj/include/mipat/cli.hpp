#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mipat/error.hpp"
#include "mipat/hiv_data.hpp"
#include "mipat/inference.hpp"
#include "mipat/io.hpp"
#include "mipat/parallel.hpp"
#include "mipat/partition.hpp"
#include "mipat/report.hpp"
#include "mipat/simulation.hpp"

namespace mipat::cli {

enum ExitCode : int { ok = 0, internal_error = 1, user_error = 2 };

struct InferConfig {
    std::string data_path;
    std::string correlation_path;
    std::optional<std::size_t> samples;
    double alpha = 0.1;
    std::string correction = "fdr";
    std::string mode = "central";
    std::string format = "json";
    std::string output;
    unsigned threads = default_thread_count();
};

struct SimulateConfig {
    std::string config_path;
    std::optional<std::size_t> n;
    std::string blocks;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> samples;
    std::string sizes;
    std::optional<double> alpha;
    std::string correction;
    std::string mode;
    std::optional<std::uint64_t> seed;
    unsigned threads = default_thread_count();
    std::string csv_path = "simulation.csv";
    std::string summary_path = "simulation_summary.json";
};

struct HivConfig {
    double alpha = 0.1;
    std::string correction = "fdr";
    std::string mode = "central";
    std::string format = "text";
};

/// Seed used when --seed is absent: $MIPAT_SEED if set, else 1.
inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("MIPAT_SEED")) {
        try {
            std::size_t used = 0;
            const std::string s(env);
            const auto v = std::stoull(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw invalid_input(std::string("MIPAT_SEED is not an unsigned integer: '") + env + "'");
    }
    return 1;
}

/// "1..6", "1,2,5" or "3".
inline std::vector<std::size_t> parse_block_list(const std::string& text) {
    std::vector<std::size_t> out;
    auto to_size = [&](const std::string& s) -> std::size_t {
        std::size_t used = 0;
        try {
            const auto v = std::stoul(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw invalid_input("bad number '" + s + "' in list '" + text + "'");
    };
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const std::size_t lo = to_size(text.substr(0, dots)), hi = to_size(text.substr(dots + 2));
        if (lo > hi) throw invalid_input("empty range '" + text + "'");
        for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        out.push_back(to_size(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

/// "start:stop:step" (inclusive) or a comma list.
inline std::vector<std::size_t> parse_size_list(const std::string& text) {
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) return parse_block_list(text);
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw invalid_input("size range must be start:stop:step, got '" + text + "'");
    const auto parts = parse_block_list(text.substr(0, c1) + "," + text.substr(c1 + 1, c2 - c1 - 1) + "," + text.substr(c2 + 1));
    const std::size_t lo = parts[0], hi = parts[1], step = parts[2];
    if (step == 0 || lo > hi) throw invalid_input("bad size range '" + text + "'");
    std::vector<std::size_t> out;
    for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
    return out;
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw invalid_input("cannot write '" + path + "'");
    f << text;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_infer(const InferConfig& cfg, std::ostream& out) {
    if (cfg.data_path.empty() == cfg.correlation_path.empty())
        throw invalid_input("infer: give either a data CSV or --correlation (not both)");
    InferenceOptions opts;
    opts.alpha = cfg.alpha;
    opts.correction = parse_correction(cfg.correction);
    opts.mode = parse_null_distribution(cfg.mode);
    opts.threads = cfg.threads;
    if (cfg.format != "json" && cfg.format != "text" && cfg.format != "csv")
        throw invalid_input("infer: --format must be json, csv or text");

    InferenceOutcome outcome;
    std::vector<std::string> names;
    if (!cfg.data_path.empty()) {
        if (cfg.samples) throw invalid_input("infer: --samples only applies with --correlation");
        io::Table table = io::read_csv(cfg.data_path);
        if (table.values.cols() < 2) throw invalid_input("infer: need at least 2 columns, got " + std::to_string(table.values.cols()));
        if (table.values.rows() < 3) throw degenerate_data("infer: need at least 3 rows, got " + std::to_string(table.values.rows()));
        names = table.header;
        outcome = infer_from_data(DataMatrix(std::move(table.values)), opts);
    } else {
        if (!cfg.samples) throw invalid_input("infer: --correlation requires --samples");
        io::Table table = io::read_csv(cfg.correlation_path);
        if (table.values.rows() != table.values.cols())
            throw invalid_input("infer: correlation matrix is " + std::to_string(table.values.rows()) + "x" +
                                std::to_string(table.values.cols()) + ", expected square");
        if (table.values.cols() < 2) throw invalid_input("infer: need at least 2 variables");
        names = table.header;
        outcome = infer_from_model(CorrelationModel(std::move(table.values), *cfg.samples), opts);
    }

    const std::string text = cfg.format == "json"  ? report::outcome_json(outcome, names).dump(2) + "\n"
                             : cfg.format == "csv" ? report::outcome_csv(outcome)
                                                   : report::outcome_text(outcome);
    write_output(cfg.output, text, out);
    return ok;
}

/// Entailed dichotomies, one per line in string order.
inline int cmd_dichotomies(const std::string& partition, std::ostream& out) {
    std::vector<std::string> lines;
    for (const auto& b : entailed_dichotomies(parse_partition(partition))) lines.push_back(format_partition(b));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out << l << '\n';
    return ok;
}

inline int cmd_meet(const std::vector<std::string>& partitions, std::ostream& out) {
    if (partitions.empty()) throw invalid_input("meet: need at least one partition");
    std::vector<Partition> ps;
    for (const auto& s : partitions) ps.push_back(parse_partition(s));
    out << format_partition(meet_all(ps)) << '\n';
    return ok;
}

inline sim::SimulationConfig resolve_simulation_config(const SimulateConfig& cfg) {
    sim::SimulationConfig sc;
    sc.master_seed = default_seed();
    if (!cfg.config_path.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(io::read_file(cfg.config_path));
            for (const auto& [key, value] : j.items()) {
                if (key == "n") sc.n = value.get<std::size_t>();
                else if (key == "block_counts") sc.block_counts = value.get<std::vector<std::size_t>>();
                else if (key == "runs_per_k") sc.runs_per_k = value.get<std::size_t>();
                else if (key == "max_samples") sc.max_samples = value.get<std::size_t>();
                else if (key == "subset_sizes") sc.subset_sizes = value.get<std::vector<std::size_t>>();
                else if (key == "alpha") sc.alpha = value.get<double>();
                else if (key == "correction") sc.correction = parse_correction(value.get<std::string>());
                else if (key == "mode") sc.mode = parse_null_distribution(value.get<std::string>());
                else if (key == "master_seed") sc.master_seed = value.get<std::uint64_t>();
                else throw invalid_input("simulate: unknown config key '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw invalid_input("simulate: bad config file '" + cfg.config_path + "': " + e.what());
        }
    }
    if (cfg.n) sc.n = *cfg.n;
    if (!cfg.blocks.empty()) sc.block_counts = parse_block_list(cfg.blocks);
    if (cfg.runs) sc.runs_per_k = *cfg.runs;
    if (cfg.samples) sc.max_samples = *cfg.samples;
    if (!cfg.sizes.empty()) sc.subset_sizes = parse_size_list(cfg.sizes);
    else if (cfg.samples) {
        // Keep the default grid valid when only --samples shrinks the dataset.
        std::erase_if(sc.subset_sizes, [&](std::size_t s) { return s > sc.max_samples; });
        if (sc.subset_sizes.empty()) sc.subset_sizes = {sc.max_samples};
    }
    if (cfg.alpha) sc.alpha = *cfg.alpha;
    if (!cfg.correction.empty()) sc.correction = parse_correction(cfg.correction);
    if (!cfg.mode.empty()) sc.mode = parse_null_distribution(cfg.mode);
    if (cfg.seed) sc.master_seed = *cfg.seed;
    sc.validate();
    return sc;
}

inline int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err) {
    const sim::SimulationConfig sc = resolve_simulation_config(cfg);
    const sim::CampaignResult result = sim::run_campaign(sc, cfg.threads);
    write_output(cfg.csv_path, report::campaign_csv(result), out);
    write_output(cfg.summary_path, report::campaign_summary_json(result).dump(2) + "\n", out);
    out << report::campaign_table(result);
    const std::size_t failed = result.failed_analyses();
    out << "failed analyses: " << failed << " of " << result.total_analyses() << '\n';
    if (failed == result.total_analyses()) {
        err << "simulate: every analysis failed\n";
        return internal_error;
    }
    return ok;
}

inline int cmd_hiv(const HivConfig& cfg, std::ostream& out, std::ostream& err) {
    InferenceOptions opts;
    opts.alpha = cfg.alpha;
    opts.correction = parse_correction(cfg.correction);
    opts.mode = parse_null_distribution(cfg.mode);
    const InferenceOutcome outcome = infer_from_model(hiv::model(), opts);

    std::vector<std::size_t> order(outcome.tests.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return outcome.tests[a].p_value > outcome.tests[b].p_value; });
    const Bipartition expected = parse_bipartition("12356|4");
    const bool top_ok = outcome.tests[order.front()].bipartition == expected;

    if (cfg.format == "json") {
        std::vector<std::string> names(hiv::names.begin(), hiv::names.end());
        nlohmann::json j = report::outcome_json(outcome, names);
        nlohmann::json sorted = nlohmann::json::array();
        for (std::size_t i : order)
            sorted.push_back({{"bipartition", format_partition(outcome.tests[i].bipartition)}, {"p_value", outcome.tests[i].p_value}});
        j["sorted_by_p_value"] = std::move(sorted);
        out << j.dump(2) << '\n';
    } else if (cfg.format == "text") {
        out << "HIV example: n = 6, k = " << hiv::samples << ", " << outcome.m << " dichotomies\n\n";
        char line[96];
        for (std::size_t i : order) {
            const auto& t = outcome.tests[i];
            std::snprintf(line, sizeof line, "%-10s  p = %.4e  %s\n", format_partition(t.bipartition).c_str(), t.p_value,
                          outcome.rejected[i] ? "rejected" : "retained");
            out << line;
        }
        out << "\ndelta_hat:";
        for (const auto& b : outcome.delta_hat) out << ' ' << format_partition(b);
        out << "\nmu_hat: " << format_partition(outcome.mu_hat) << " (alpha = " << cfg.alpha << ", " << to_string(opts.correction) << ")\n";
    } else {
        throw invalid_input("hiv: --format must be json or text");
    }
    if (!top_ok) {
        err << "hiv: top surviving pattern is " << format_partition(outcome.tests[order.front()].bipartition) << ", expected 12356|4\n";
        return internal_error;
    }
    return ok;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Finest mutual-independence pattern extraction from dichotomic independence tests", "mipat"};
    app.require_subcommand(1);

    InferConfig infer;
    auto* infer_cmd = app.add_subcommand("infer", "Test every bipartition of a dataset and report mu_hat");
    infer_cmd->add_option("data", infer.data_path, "CSV file: k rows x n numeric columns, optional header row");
    infer_cmd->add_option("--correlation", infer.correlation_path, "CSV correlation matrix (n x n) instead of raw data");
    infer_cmd->add_option("--samples", infer.samples, "Sample count k behind --correlation");
    infer_cmd->add_option("--alpha", infer.alpha, "Significance level")->capture_default_str();
    infer_cmd->add_option("--correction", infer.correction, "fdr | bonferroni")->capture_default_str();
    infer_cmd->add_option("--mode", infer.mode, "central | noncentral")->capture_default_str();
    infer_cmd->add_option("--format", infer.format, "json | csv | text")->capture_default_str();
    infer_cmd->add_option("-o,--output", infer.output, "Output file (default: stdout)");
    infer_cmd->add_option("--threads", infer.threads, "Worker threads")->capture_default_str();

    std::string dichotomy_input;
    auto* dich_cmd = app.add_subcommand("dichotomies", "List the bipartitions entailed by a partition");
    dich_cmd->add_option("partition", dichotomy_input, "Partition, e.g. 12|3|4")->required();

    std::vector<std::string> meet_inputs;
    auto* meet_cmd = app.add_subcommand("meet", "Meet (intersection) of partitions");
    meet_cmd->add_option("partitions", meet_inputs, "Partitions, e.g. 123|4 124|3")->required();

    SimulateConfig simulate;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo campaign");
    sim_cmd->add_option("--config", simulate.config_path, "JSON config file (flags override it)");
    sim_cmd->add_option("--n", simulate.n, "Number of variables (default 6)");
    sim_cmd->add_option("--blocks", simulate.blocks, "Block counts, e.g. 1..6 or 2,3 (default 1..6)");
    sim_cmd->add_option("--runs", simulate.runs, "Models per block count (default 500)");
    sim_cmd->add_option("--samples", simulate.samples, "Rows per dataset (default 300)");
    sim_cmd->add_option("--sizes", simulate.sizes, "Subset sizes, start:stop:step or list (default 50:300:50)");
    sim_cmd->add_option("--alpha", simulate.alpha, "Significance level (default 0.1)");
    sim_cmd->add_option("--correction", simulate.correction, "fdr | bonferroni (default fdr)");
    sim_cmd->add_option("--mode", simulate.mode, "central | noncentral (default central)");
    sim_cmd->add_option("--seed", simulate.seed, "Master seed (default $MIPAT_SEED or 1)");
    sim_cmd->add_option("--threads", simulate.threads, "Worker threads")->capture_default_str();
    sim_cmd->add_option("--csv", simulate.csv_path, "Per-run CSV output")->capture_default_str();
    sim_cmd->add_option("--summary", simulate.summary_path, "JSON summary output")->capture_default_str();

    HivConfig hiv_cfg;
    auto* hiv_cmd = app.add_subcommand("hiv", "Reproduce the built-in HIV example");
    hiv_cmd->add_option("--alpha", hiv_cfg.alpha, "Significance level")->capture_default_str();
    hiv_cmd->add_option("--correction", hiv_cfg.correction, "fdr | bonferroni")->capture_default_str();
    hiv_cmd->add_option("--mode", hiv_cfg.mode, "central | noncentral")->capture_default_str();
    hiv_cmd->add_option("--format", hiv_cfg.format, "text | json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : user_error;
    }

    try {
        if (*infer_cmd) return cmd_infer(infer, out);
        if (*dich_cmd) return cmd_dichotomies(dichotomy_input, out);
        if (*meet_cmd) return cmd_meet(meet_inputs, out);
        if (*sim_cmd) return cmd_simulate(simulate, out, err);
        if (*hiv_cmd) return cmd_hiv(hiv_cfg, out, err);
    } catch (const invalid_input& e) {
        err << "error: " << e.what() << '\n';
        return user_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return internal_error;
    }
    return user_error;
}

} // namespace mipat::cli
