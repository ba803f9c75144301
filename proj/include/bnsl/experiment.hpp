#ifndef BNSL_EXPERIMENT_HPP
#define BNSL_EXPERIMENT_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "bnsl/combinatorics.hpp"
#include "bnsl/cps.hpp"
#include "bnsl/search.hpp"

namespace bnsl {

/// Relative score loss (s_star - s) / s_star. With negative log scores a
/// worse pruned score gives a negative value. Throws ParameterError when
/// s_star is zero.
double delta(double s_star, double s);

struct SweepRow {
    int percent = 0;
    std::size_t cps_graph = 0;
    double cps_per_node = 0.0;
    double score = 0.0;
    double delta = 0.0;
    double time_to_best = 0.0;
    /// Pruned search beat the unpruned baseline (possible with heuristic search).
    bool anomalous = false;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // ascending percent
    double baseline_score = 0.0;

    // Configuration echo.
    std::optional<double> ess;
    int max_indeg = 0;
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::Order;
    int restarts = 0;
    std::optional<double> time_limit;
    /// Levels ran concurrently; timings are not comparable across rows.
    bool parallel = false;
};

struct SweepOptions {
    bool parallel = false;
    /// Recorded in the report only; the table itself carries no ess.
    std::optional<double> ess;
};

/// Prunes `table` at every level and searches each pruned table with the
/// same configuration. `levels` must contain 0, which provides the baseline.
SweepReport run_pruning_sweep(const ScoreTable& table, std::vector<int> levels, const SearchConfig& cfg,
                              const SweepOptions& opts = {});

/// Columns p,cps_graph,cps_per_node,score,delta,time_to_best_s. Delta is the
/// raw ratio. With include_timing = false the time column holds "NA".
void write_sweep_csv(const SweepReport& report, std::ostream& out, bool include_timing = true);

/// Aligned text table, highest pruning level first, delta in per mille.
void write_sweep_table(const SweepReport& report, std::ostream& out, bool include_timing = true);

}  // namespace bnsl

#endif  // BNSL_EXPERIMENT_HPP
