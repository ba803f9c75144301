#ifndef BNSL_CPS_HPP
#define BNSL_CPS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bnsl/scoring.hpp"

namespace bnsl {

/// Ranking order of candidate parent sets: higher score first, then smaller
/// set, then lexicographically smaller sorted parent list.
bool ranks_before(const ScoredFamily& a, const ScoredFamily& b);

/// Per-node ranked lists of candidate parent sets (CPSs).
///
/// Construction sorts each list by ranks_before and checks that every node
/// has the empty set, no duplicate sets, no self-parents and sorted parents.
class ScoreTable {
public:
    ScoreTable() = default;
    ScoreTable(std::vector<std::string> names, std::vector<std::vector<ScoredFamily>> entries);

    int n_vars() const { return static_cast<int>(m_names.size()); }
    const std::vector<std::string>& names() const { return m_names; }
    const std::vector<ScoredFamily>& entries(NodeIndex v) const { return m_entries[v]; }
    const std::vector<std::vector<ScoredFamily>>& all_entries() const { return m_entries; }

    std::size_t total_entries() const;
    /// Largest parent-set size present anywhere in the table.
    int max_parent_set_size() const;

    bool legality_pruned() const { return m_legality_pruned; }
    std::optional<int> prune_percent_applied() const { return m_prune_percent; }
    void set_legality_pruned(bool v) { m_legality_pruned = v; }
    void set_prune_percent_applied(std::optional<int> p) { m_prune_percent = p; }

    bool operator==(const ScoreTable&) const = default;

private:
    std::vector<std::string> m_names;
    std::vector<std::vector<ScoredFamily>> m_entries;
    bool m_legality_pruned = false;
    std::optional<int> m_prune_percent;
};

/// Keeps (child, P) iff no proper subset of P in `raw` scores >= score(P).
ScoreTable legal_filter(const ScoreTable& raw);

/// Keeps the top ceil(m (100 - p) / 100) entries of each node's m ranked
/// entries, re-appending the empty set if it fell in the cut tail.
ScoreTable prune_percent(const ScoreTable& table, int percent);

/// Score-file text: "<n>" then per variable "<name> <count>" and `count`
/// lines of "<score> <k> <parent names...>", scores with 6 decimals.
void write_scores(const ScoreTable& table, std::ostream& out);
ScoreTable read_scores(std::istream& in);
void write_scores_file(const ScoreTable& table, const std::string& path);
ScoreTable read_scores_file(const std::string& path);

struct CpsStats {
    std::size_t total = 0;
    double per_node_mean = 0.0;
    /// Number of all possible CPSs at the given in-degree bound.
    double all_possible = 0.0;
    /// total / all_possible, as a fraction in [0, 1].
    double legal_rate = 0.0;
};

/// total / (n_vars * sum_{k <= max_indeg} C(n_vars - 1, k)).
double legal_rate(std::size_t total, int n_vars, int max_indeg);

CpsStats cps_stats(const ScoreTable& table, int n_vars, int max_indeg);

}  // namespace bnsl

#endif  // BNSL_CPS_HPP
