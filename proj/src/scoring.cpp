#include "bnsl/scoring.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <thread>

#include "bnsl/error.hpp"

namespace bnsl {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

void collect_subsets(std::span<const NodeIndex> candidates, std::size_t start, int size, ParentSet& current,
                     std::vector<ParentSet>& out) {
    if (static_cast<int>(current.size()) == size) {
        out.push_back(current);
        return;
    }
    for (std::size_t i = start; i < candidates.size(); ++i) {
        current.push_back(candidates[i]);
        collect_subsets(candidates, i + 1, size, current, out);
        current.pop_back();
    }
}

std::vector<ScoredFamily> score_node(const Dataset& ds, NodeIndex child, int max_indeg, double ess) {
    std::vector<NodeIndex> others;
    for (NodeIndex v = 0; v < ds.n_vars(); ++v)
        if (v != child)
            others.push_back(v);
    std::vector<ScoredFamily> out;
    for (auto& parents : enumerate_parent_sets(others, max_indeg)) {
        const double s = bdeu_local(ds, child, parents, ess);
        out.push_back({child, std::move(parents), s});
    }
    return out;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0))
        throw ParameterError("log_gamma: argument must be positive");
    // Shift small arguments up; the series is most accurate for x >= 1.
    double shift = 0.0;
    while (x < 1.0) {
        shift -= std::log(x);
        x += 1.0;
    }
    const double z = x - 1.0;
    double sum = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i)
        sum += kLanczosCoef[i] / (z + static_cast<double>(i));
    const double t = z + kLanczosG + 0.5;
    return shift + 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double bdeu_from_counts(const FamilyCounts& fc, double ess) {
    if (!(ess > 0.0) || !std::isfinite(ess))
        throw ParameterError("ess must be a positive finite number");
    const double q = static_cast<double>(fc.q);
    const double a_j = ess / q;
    const double a_jk = a_j / static_cast<double>(fc.r);
    const double lg_a_j = log_gamma(a_j);
    const double lg_a_jk = log_gamma(a_jk);

    double score = 0.0;
    for (const auto& [config, cells] : fc.counts) {
        std::int64_t n_j = 0;
        double inner = 0.0;
        for (auto n_jk : cells) {
            if (n_jk == 0)
                continue;
            n_j += n_jk;
            inner += log_gamma(a_jk + static_cast<double>(n_jk)) - lg_a_jk;
        }
        if (n_j == 0)
            continue;
        score += lg_a_j - log_gamma(a_j + static_cast<double>(n_j)) + inner;
    }
    return score;
}

double bdeu_local(const Dataset& ds, NodeIndex child, std::span<const NodeIndex> parents, double ess) {
    if (!(ess > 0.0) || !std::isfinite(ess))
        throw ParameterError("ess must be a positive finite number");
    return bdeu_from_counts(family_counts(ds, child, parents), ess);
}

std::vector<ParentSet> enumerate_parent_sets(std::span<const NodeIndex> candidates, int max_size) {
    std::vector<ParentSet> out;
    ParentSet current;
    const int top = std::min<int>(max_size, static_cast<int>(candidates.size()));
    for (int size = 0; size <= top; ++size)
        collect_subsets(candidates, 0, size, current, out);
    return out;
}

std::vector<std::vector<ScoredFamily>> score_all_families(const Dataset& ds, int max_indeg, double ess, int threads) {
    if (max_indeg < 0 || max_indeg >= std::max(1, ds.n_vars()))
        throw ParameterError("max in-degree must satisfy 0 <= k < n_vars");
    if (!(ess > 0.0) || !std::isfinite(ess))
        throw ParameterError("ess must be a positive finite number");

    const int n = ds.n_vars();
    std::vector<std::vector<ScoredFamily>> out(static_cast<std::size_t>(n));
    const int workers = std::clamp(threads, 1, std::max(1, n));
    if (workers == 1) {
        for (NodeIndex v = 0; v < n; ++v)
            out[v] = score_node(ds, v, max_indeg, ess);
        return out;
    }
    // Each worker owns a strided subset of nodes and writes only its own slots.
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (NodeIndex v = w; v < n; v += workers)
                    out[v] = score_node(ds, v, max_indeg, ess);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

}  // namespace bnsl
