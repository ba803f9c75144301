#ifndef BNSL_SCORING_HPP
#define BNSL_SCORING_HPP

#include <span>
#include <vector>

#include "bnsl/dataset.hpp"

namespace bnsl {

using ParentSet = std::vector<NodeIndex>;

/// A (child, parent set) family with its log BDeu score. Parents are sorted
/// ascending and never contain the child.
struct ScoredFamily {
    NodeIndex child = 0;
    ParentSet parents;
    double score = 0.0;

    bool operator==(const ScoredFamily&) const = default;
};

/// Natural log of the gamma function for x > 0 (Lanczos, g = 7, 9 terms).
double log_gamma(double x);

/// Log BDeu of a family from its contingency table.
///
///   sum_j [ lnG(a_j) - lnG(a_j + N_j) + sum_k ( lnG(a_jk + N_jk) - lnG(a_jk) ) ]
///
/// with a_j = ess / q and a_jk = ess / (q r). Unobserved configurations and
/// zero cells contribute nothing and are skipped.
double bdeu_from_counts(const FamilyCounts& counts, double ess);

double bdeu_local(const Dataset& ds, NodeIndex child, std::span<const NodeIndex> parents, double ess);

/// Scores every family with at most `max_indeg` parents. Result index is the
/// child; each list is in canonical order (by size, then lexicographic).
/// `threads` > 1 scores nodes concurrently; output does not depend on it.
std::vector<std::vector<ScoredFamily>> score_all_families(const Dataset& ds, int max_indeg, double ess,
                                                          int threads = 1);

/// All subsets of `candidates` with size <= max_size, by size then lexicographic.
std::vector<ParentSet> enumerate_parent_sets(std::span<const NodeIndex> candidates, int max_size);

}  // namespace bnsl

#endif  // BNSL_SCORING_HPP
