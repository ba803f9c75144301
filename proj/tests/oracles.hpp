// Independent reference computations used only by the test suites.
#ifndef BNSL_TESTS_ORACLES_HPP
#define BNSL_TESTS_ORACLES_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include <mpfr.h>

#include "bnsl/cps.hpp"
#include "bnsl/dataset.hpp"

namespace oracle {

// RAII wrapper for a 256-bit MPFR value.
class Real {
public:
    Real() { mpfr_init2(m_v, 256); mpfr_set_zero(m_v, 1); }
    explicit Real(double x) : Real() { mpfr_set_d(m_v, x, MPFR_RNDN); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    ~Real() { mpfr_clear(m_v); }

    mpfr_ptr get() { return m_v; }
    double to_double() const { return mpfr_get_d(m_v, MPFR_RNDN); }

private:
    mpfr_t m_v;
};

// lnΓ(num / den) at 256 bits, accumulated into `acc` with the given sign.
inline void add_lngamma(Real& acc, double num, double den, int sign) {
    Real x;
    mpfr_set_d(x.get(), num, MPFR_RNDN);
    mpfr_div_d(x.get(), x.get(), den, MPFR_RNDN);
    int s = 0;
    mpfr_lgamma(x.get(), &s, x.get(), MPFR_RNDN);
    if (sign > 0)
        mpfr_add(acc.get(), acc.get(), x.get(), MPFR_RNDN);
    else
        mpfr_sub(acc.get(), acc.get(), x.get(), MPFR_RNDN);
}

inline double lngamma(double x) {
    Real acc;
    add_lngamma(acc, x, 1.0, +1);
    return acc.to_double();
}

// BDeu straight from the rows: counts keyed by the parent state tuple,
// every lnΓ evaluated at 256 bits. Arguments a + N are formed exactly as
// (ess + N q r) / (q r) so no double rounding enters before MPFR.
inline double bdeu(const bnsl::Dataset& ds, int child, const std::vector<int>& parents, double ess) {
    double q = 1.0;
    for (int p : parents)
        q *= ds.cardinality(p);
    const double r = ds.cardinality(child);
    std::map<std::vector<int>, std::vector<long>> table;
    for (std::size_t row = 0; row < ds.n_rows(); ++row) {
        std::vector<int> key;
        for (int p : parents)
            key.push_back(ds.at(row, p));
        auto& cell = table[key];
        cell.resize(static_cast<std::size_t>(r), 0);
        ++cell[ds.at(row, child)];
    }
    Real acc;
    for (const auto& [key, cells] : table) {
        long n_j = 0;
        for (long c : cells)
            n_j += c;
        add_lngamma(acc, ess, q, +1);
        add_lngamma(acc, ess + static_cast<double>(n_j) * q, q, -1);
        for (long c : cells) {
            add_lngamma(acc, ess + static_cast<double>(c) * q * r, q * r, +1);
            add_lngamma(acc, ess, q * r, -1);
        }
    }
    return acc.to_double();
}

// Random score table with every parent set up to max_indeg.
inline bnsl::ScoreTable random_full_table(int n, int max_indeg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> base(-120.0, -40.0);
    std::uniform_real_distribution<double> jitter(-15.0, 10.0);
    std::vector<std::string> names;
    std::vector<std::vector<bnsl::ScoredFamily>> entries(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        names.push_back("V" + std::to_string(v));
        const double b = base(rng);
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (mask & (1u << v) || __builtin_popcount(mask) > max_indeg)
                continue;
            bnsl::ParentSet ps;
            for (int p = 0; p < n; ++p)
                if (mask & (1u << p))
                    ps.push_back(p);
            entries[v].push_back({v, ps, b + jitter(rng)});
        }
    }
    return bnsl::ScoreTable(std::move(names), std::move(entries));
}

inline bool acyclic_adjacency(int n, const std::vector<std::uint32_t>& parent_masks) {
    std::uint32_t placed = 0;
    for (int round = 0; round < n; ++round) {
        bool progress = false;
        for (int v = 0; v < n; ++v) {
            if (!(placed & (1u << v)) && (parent_masks[v] & ~placed) == 0) {
                placed |= 1u << v;
                progress = true;
            }
        }
        if (!progress)
            break;
    }
    return placed == (1u << n) - 1;
}

// Calls f(parent_masks) for every labeled DAG on n nodes by enumerating all
// n(n-1) possible arcs and filtering by acyclicity.
template <typename F>
void for_each_dag(int n, F&& f) {
    std::vector<std::pair<int, int>> arcs;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b)
                arcs.emplace_back(a, b);
    std::vector<std::uint32_t> parents(static_cast<std::size_t>(n));
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << arcs.size()); ++bits) {
        std::fill(parents.begin(), parents.end(), 0u);
        for (std::size_t i = 0; i < arcs.size(); ++i)
            if (bits & (std::uint64_t{1} << i))
                parents[arcs[i].second] |= 1u << arcs[i].first;
        if (acyclic_adjacency(n, parents))
            f(parents);
    }
}

inline std::uint64_t brute_force_dag_count(int n) {
    std::uint64_t count = 0;
    for_each_dag(n, [&](const std::vector<std::uint32_t>&) { ++count; });
    return count;
}

// Best total score over every DAG whose families all appear in the table.
inline double brute_force_best(const bnsl::ScoreTable& table) {
    const int n = table.n_vars();
    std::vector<std::map<std::uint32_t, double>> lookup(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        for (const auto& fam : table.entries(v)) {
            std::uint32_t m = 0;
            for (int p : fam.parents)
                m |= 1u << p;
            lookup[v][m] = fam.score;
        }
    double best = -std::numeric_limits<double>::infinity();
    for_each_dag(n, [&](const std::vector<std::uint32_t>& parents) {
        double total = 0.0;
        for (int v = 0; v < n; ++v) {
            auto it = lookup[v].find(parents[v]);
            if (it == lookup[v].end())
                return;
            total += it->second;
        }
        best = std::max(best, total);
    });
    return best;
}

// Entries of `raw` that no proper subset (by pairwise check) dominates.
inline std::vector<std::vector<bnsl::ParentSet>> brute_force_legal(const bnsl::ScoreTable& raw) {
    std::vector<std::vector<bnsl::ParentSet>> out(static_cast<std::size_t>(raw.n_vars()));
    for (int v = 0; v < raw.n_vars(); ++v) {
        for (const auto& a : raw.entries(v)) {
            bool dominated = false;
            for (const auto& b : raw.entries(v)) {
                const bool proper_subset = b.parents.size() < a.parents.size() &&
                                           std::includes(a.parents.begin(), a.parents.end(), b.parents.begin(),
                                                         b.parents.end());
                if (proper_subset && b.score >= a.score)
                    dominated = true;
            }
            if (!dominated)
                out[v].push_back(a.parents);
        }
    }
    return out;
}

}  // namespace oracle

#endif  // BNSL_TESTS_ORACLES_HPP
