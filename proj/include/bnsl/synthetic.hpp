#ifndef BNSL_SYNTHETIC_HPP
#define BNSL_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/scoring.hpp"

namespace bnsl {

/// A random discrete Bayesian network used to produce test data.
struct SyntheticNetwork {
    std::vector<ParentSet> parents;
    std::vector<int> cardinalities;
    /// cpt[v][config * card(v) + state], configurations in mixed radix over parents[v].
    std::vector<std::vector<double>> cpt;
};

struct SyntheticConfig {
    int n_vars = 30;
    int max_indeg = 3;
    int min_cardinality = 2;
    int max_cardinality = 3;
    std::uint64_t seed = 1;
};

SyntheticNetwork random_network(const SyntheticConfig& cfg);

/// Forward-samples `n_rows` observations; variables are named X0, X1, ...
Dataset sample_dataset(const SyntheticNetwork& net, std::size_t n_rows, std::uint64_t seed);

}  // namespace bnsl

#endif  // BNSL_SYNTHETIC_HPP
