#ifndef BNSL_SEARCH_HPP
#define BNSL_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnsl/cps.hpp"

namespace bnsl {

/// A network structure: one chosen parent set per node.
struct Dag {
    std::vector<ParentSet> parent_choice;
    double total_score = 0.0;

    int n_vars() const { return static_cast<int>(parent_choice.size()); }
    bool has_root() const;
};

/// A permutation of node indices.
struct Ordering {
    std::vector<NodeIndex> perm;

    bool is_valid(int n_vars) const;
};

enum class Strategy { Greedy, Order, Exact };

std::string to_string(Strategy s);
/// Accepts "greedy", "order", "exact"; throws ParameterError otherwise.
Strategy parse_strategy(const std::string& s);

struct SearchConfig {
    std::uint64_t seed = 0;
    int restarts = 20;
    std::optional<double> time_limit;  // seconds
    Strategy strategy = Strategy::Order;
    int threads = 1;
    /// Keep every ordering the hill climber visits (start points and accepted moves).
    bool record_trace = false;
    int exact_cap = 20;

    /// Throws ParameterError if restarts < 1, time_limit <= 0 or threads < 1.
    void validate() const;
};

struct SearchResult {
    Dag dag;
    /// Seconds from search start until the returned score was first reached.
    double time_to_best = 0.0;
    std::vector<std::vector<NodeIndex>> trace;
};

bool is_acyclic(const Dag& g);

/// Sum of each node's chosen family score looked up in `table`; throws
/// MalformedTable if a choice is absent from the table.
double score_dag(const ScoreTable& table, const Dag& g);

/// Nodes in descending order of their best CPS score each take their highest
/// ranked CPS that keeps the partial graph acyclic.
Dag greedy_construct(const ScoreTable& table);

/// Optimal network among those consistent with `order`.
Dag best_net_for_order(const ScoreTable& table, const Ordering& order);

/// Steepest-ascent hill climbing over orderings with the insertion
/// neighbourhood and seeded random restarts.
SearchResult order_search(const ScoreTable& table, const SearchConfig& cfg);

/// Optimal network over all DAGs whose families appear in `table`, by dynamic
/// programming over variable subsets. Throws CapacityError if n_vars > cap.
Dag exact_dp(const ScoreTable& table, int cap = 20);

/// Dispatches on cfg.strategy and times the run.
SearchResult run_search(const ScoreTable& table, const SearchConfig& cfg);

/// Draws a uniformly random permutation of [0, n) from a 64-bit Mersenne
/// Twister stream. Bounded draws use rejection sampling, so the result only
/// depends on the seed.
std::vector<NodeIndex> random_permutation(int n, std::uint64_t seed);

}  // namespace bnsl

#endif  // BNSL_SEARCH_HPP
