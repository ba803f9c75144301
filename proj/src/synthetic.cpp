#include "bnsl/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "bnsl/error.hpp"
#include "bnsl/search.hpp"

namespace bnsl {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1)) % (hi - lo + 1);
}

}  // namespace

SyntheticNetwork random_network(const SyntheticConfig& cfg) {
    if (cfg.n_vars < 1 || cfg.max_indeg < 0 || cfg.min_cardinality < 1 || cfg.max_cardinality < cfg.min_cardinality)
        throw ParameterError("invalid synthetic network configuration");
    std::mt19937_64 rng(cfg.seed);
    const int n = cfg.n_vars;
    const auto order = random_permutation(n, cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    SyntheticNetwork net;
    net.parents.resize(n);
    net.cardinalities.resize(n);
    net.cpt.resize(n);
    for (int v = 0; v < n; ++v)
        net.cardinalities[v] = uniform_int(rng, cfg.min_cardinality, cfg.max_cardinality);

    for (int i = 0; i < n; ++i) {
        const NodeIndex v = order[i];
        std::vector<NodeIndex> pool(order.begin(), order.begin() + i);
        const int k = uniform_int(rng, 0, std::min(cfg.max_indeg, i));
        for (int j = 0; j < k; ++j) {
            const int pick = uniform_int(rng, j, static_cast<int>(pool.size()) - 1);
            std::swap(pool[j], pool[pick]);
        }
        net.parents[v].assign(pool.begin(), pool.begin() + k);
        std::sort(net.parents[v].begin(), net.parents[v].end());

        std::size_t q = 1;
        for (auto p : net.parents[v])
            q *= static_cast<std::size_t>(net.cardinalities[p]);
        const int r = net.cardinalities[v];
        auto& cpt = net.cpt[v];
        cpt.resize(q * static_cast<std::size_t>(r));
        for (std::size_t c = 0; c < q; ++c) {
            // Cubing spreads the mass so dependencies are visible in modest samples.
            double sum = 0.0;
            for (int s = 0; s < r; ++s) {
                const double u = uniform01(rng);
                cpt[c * r + s] = u * u * u + 1e-3;
                sum += cpt[c * r + s];
            }
            for (int s = 0; s < r; ++s)
                cpt[c * r + s] /= sum;
        }
    }
    return net;
}

Dataset sample_dataset(const SyntheticNetwork& net, std::size_t n_rows, std::uint64_t seed) {
    const int n = static_cast<int>(net.parents.size());
    // Any topological order works for forward sampling.
    std::vector<NodeIndex> topo;
    std::vector<bool> placed(static_cast<std::size_t>(n), false);
    while (static_cast<int>(topo.size()) < n) {
        for (NodeIndex v = 0; v < n; ++v) {
            if (placed[v])
                continue;
            if (std::all_of(net.parents[v].begin(), net.parents[v].end(), [&](NodeIndex p) { return placed[p]; })) {
                placed[v] = true;
                topo.push_back(v);
            }
        }
    }

    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> rows(n_rows, std::vector<int>(static_cast<std::size_t>(n)));
    for (auto& row : rows) {
        for (auto v : topo) {
            std::size_t config = 0;
            for (auto p : net.parents[v])
                config = config * static_cast<std::size_t>(net.cardinalities[p]) + static_cast<std::size_t>(row[p]);
            const int r = net.cardinalities[v];
            double u = uniform01(rng);
            int state = r - 1;
            for (int s = 0; s < r; ++s) {
                u -= net.cpt[v][config * r + s];
                if (u < 0.0) {
                    state = s;
                    break;
                }
            }
            row[v] = state;
        }
    }
    std::vector<std::string> names;
    for (int v = 0; v < n; ++v)
        names.push_back("X" + std::to_string(v));
    return Dataset::from_raw_columns(std::move(names), rows);
}

}  // namespace bnsl
