#include "bnsl/experiment.hpp"

#include <algorithm>
#include <future>
#include <ostream>

#include <fmt/format.h>

#include "bnsl/error.hpp"

namespace bnsl {

namespace {

SweepRow run_level(const ScoreTable& table, int percent, const SearchConfig& cfg) {
    const auto pruned = prune_percent(table, percent);
    const auto result = run_search(pruned, cfg);
    SweepRow row;
    row.percent = percent;
    row.cps_graph = pruned.total_entries();
    row.cps_per_node = pruned.n_vars() > 0 ? static_cast<double>(row.cps_graph) / pruned.n_vars() : 0.0;
    row.score = result.dag.total_score;
    row.time_to_best = result.time_to_best;
    return row;
}

std::string with_thousands(std::size_t v) {
    auto digits = std::to_string(v);
    std::string out;
    const auto n = digits.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && (n - i) % 3 == 0)
            out += ',';
        out += digits[i];
    }
    return out;
}

}  // namespace

double delta(double s_star, double s) {
    if (s_star == 0.0)
        throw ParameterError("delta: baseline score must be non-zero");
    return (s_star - s) / s_star;
}

SweepReport run_pruning_sweep(const ScoreTable& table, std::vector<int> levels, const SearchConfig& cfg,
                              const SweepOptions& opts) {
    cfg.validate();
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.empty() || levels.front() != 0)
        throw ParameterError("sweep levels must include 0 as the baseline");
    for (auto p : levels)
        if (p < 0 || p > 99)
            throw ParameterError("sweep levels must lie in [0, 99]");

    SweepReport report;
    report.ess = opts.ess;
    report.max_indeg = table.max_parent_set_size();
    report.seed = cfg.seed;
    report.strategy = cfg.strategy;
    report.restarts = cfg.restarts;
    report.time_limit = cfg.time_limit;
    report.parallel = opts.parallel;

    if (opts.parallel) {
        std::vector<std::future<SweepRow>> pending;
        for (auto p : levels)
            pending.push_back(std::async(std::launch::async, run_level, std::cref(table), p, std::cref(cfg)));
        for (auto& f : pending)
            report.rows.push_back(f.get());
    } else {
        for (auto p : levels)
            report.rows.push_back(run_level(table, p, cfg));
    }

    report.baseline_score = report.rows.front().score;
    for (auto& row : report.rows) {
        row.delta = delta(report.baseline_score, row.score);
        row.anomalous = row.delta > 0.0;
    }
    return report;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out, bool include_timing) {
    std::string buf = "p,cps_graph,cps_per_node,score,delta,time_to_best_s\n";
    for (const auto& row : report.rows) {
        buf += fmt::format("{},{},{:.2f},{:.6f},{:.9e},", row.percent, row.cps_graph, row.cps_per_node, row.score,
                           row.delta);
        buf += include_timing ? fmt::format("{:.6f}\n", row.time_to_best) : std::string("NA\n");
    }
    out << buf;
}

void write_sweep_table(const SweepReport& report, std::ostream& out, bool include_timing) {
    std::string buf;
    buf += fmt::format("# strategy={} seed={} restarts={} max_indeg={}", to_string(report.strategy), report.seed,
                       report.restarts, report.max_indeg);
    if (report.ess)
        buf += fmt::format(" ess={}", *report.ess);
    if (report.time_limit)
        buf += fmt::format(" time_limit={}s", *report.time_limit);
    buf += '\n';
    buf += fmt::format("# baseline score S* = {:.6f}\n", report.baseline_score);
    if (report.parallel)
        buf += "# levels ran in parallel: time column is not comparable across rows\n";

    buf += fmt::format("{:>8}  {:>12}  {:>10}  {:>16}  {:>12}  {:>12}\n", "Pruning", "CPSs graph", "per node",
                       "Score", "Delta", "Time (secs)");
    for (auto it = report.rows.rbegin(); it != report.rows.rend(); ++it) {
        const auto& row = *it;
        const double permille = row.delta * 1000.0;
        const auto delta_text = permille == 0.0 ? std::string("0‰") : fmt::format("{:.3f}‰", permille);
        const auto time_text = include_timing ? fmt::format("{:.3f}", row.time_to_best) : std::string("NA");
        buf += fmt::format("{:>7}%  {:>12}  {:>10.2f}  {:>16.6f}  {:>12}  {:>12}{}\n", row.percent,
                           with_thousands(row.cps_graph), row.cps_per_node, row.score, delta_text, time_text,
                           row.anomalous ? "  (pruned exceeds baseline)" : "");
    }
    out << buf;
}

}  // namespace bnsl
