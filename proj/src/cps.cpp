#include "bnsl/cps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/container_hash/hash.hpp>
#include <fmt/format.h>

#include "bnsl/combinatorics.hpp"
#include "bnsl/error.hpp"

namespace bnsl {

namespace {

struct ParentSetHash {
    std::size_t operator()(const ParentSet& p) const { return boost::hash_range(p.begin(), p.end()); }
};

using ScoreIndex = std::unordered_map<ParentSet, double, ParentSetHash>;

// Best score over all subsets of `set` (including itself) present in `index`.
double best_at_or_below(const ParentSet& set, const ScoreIndex& index, ScoreIndex& memo) {
    if (auto it = memo.find(set); it != memo.end())
        return it->second;
    double best = -std::numeric_limits<double>::infinity();
    if (auto it = index.find(set); it != index.end())
        best = it->second;
    ParentSet sub(set.size() > 0 ? set.size() - 1 : 0);
    for (std::size_t drop = 0; drop < set.size(); ++drop) {
        std::size_t w = 0;
        for (std::size_t i = 0; i < set.size(); ++i)
            if (i != drop)
                sub[w++] = set[i];
        best = std::max(best, best_at_or_below(sub, index, memo));
    }
    memo.emplace(set, best);
    return best;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok)
        out.push_back(tok);
    return out;
}

template <typename T>
bool parse_number(const std::string& tok, T& value) {
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    return ec == std::errc() && ptr == end;
}

}  // namespace

bool ranks_before(const ScoredFamily& a, const ScoredFamily& b) {
    if (a.score != b.score)
        return a.score > b.score;
    if (a.parents.size() != b.parents.size())
        return a.parents.size() < b.parents.size();
    return a.parents < b.parents;
}

ScoreTable::ScoreTable(std::vector<std::string> names, std::vector<std::vector<ScoredFamily>> entries)
    : m_names(std::move(names)), m_entries(std::move(entries)) {
    const auto n = static_cast<NodeIndex>(m_names.size());
    if (static_cast<NodeIndex>(m_entries.size()) != n)
        throw MalformedTable("score table: entry lists do not match variable count");
    for (NodeIndex v = 0; v < n; ++v) {
        auto& list = m_entries[v];
        std::unordered_set<ParentSet, ParentSetHash> seen;
        bool has_empty = false;
        for (const auto& fam : list) {
            if (fam.child != v)
                throw MalformedTable("score table: entry filed under the wrong child");
            if (!std::is_sorted(fam.parents.begin(), fam.parents.end()) ||
                std::adjacent_find(fam.parents.begin(), fam.parents.end()) != fam.parents.end())
                throw MalformedTable("score table: parent set not strictly ascending");
            for (auto p : fam.parents)
                if (p < 0 || p >= n || p == v)
                    throw MalformedTable("score table: invalid parent for '" + m_names[v] + "'");
            if (!std::isfinite(fam.score))
                throw MalformedTable("score table: non-finite score for '" + m_names[v] + "'");
            if (!seen.insert(fam.parents).second)
                throw MalformedTable("score table: duplicate parent set for '" + m_names[v] + "'");
            has_empty = has_empty || fam.parents.empty();
        }
        if (!has_empty)
            throw MalformedTable("score table: node '" + m_names[v] + "' lacks the empty parent set");
        std::sort(list.begin(), list.end(), ranks_before);
    }
}

std::size_t ScoreTable::total_entries() const {
    std::size_t total = 0;
    for (const auto& list : m_entries)
        total += list.size();
    return total;
}

int ScoreTable::max_parent_set_size() const {
    std::size_t k = 0;
    for (const auto& list : m_entries)
        for (const auto& fam : list)
            k = std::max(k, fam.parents.size());
    return static_cast<int>(k);
}

ScoreTable legal_filter(const ScoreTable& raw) {
    std::vector<std::vector<ScoredFamily>> kept(static_cast<std::size_t>(raw.n_vars()));
    for (NodeIndex v = 0; v < raw.n_vars(); ++v) {
        ScoreIndex index;
        for (const auto& fam : raw.entries(v))
            index.emplace(fam.parents, fam.score);
        if (!index.contains(ParentSet{}))
            throw MalformedTable("legal_filter: node '" + raw.names()[v] + "' lacks the empty parent set");
        ScoreIndex memo;
        ParentSet sub;
        for (const auto& fam : raw.entries(v)) {
            double best_proper = -std::numeric_limits<double>::infinity();
            for (std::size_t drop = 0; drop < fam.parents.size(); ++drop) {
                sub = fam.parents;
                sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
                best_proper = std::max(best_proper, best_at_or_below(sub, index, memo));
            }
            if (!(best_proper >= fam.score))
                kept[v].push_back(fam);
        }
    }
    ScoreTable out(raw.names(), std::move(kept));
    out.set_legality_pruned(true);
    out.set_prune_percent_applied(raw.prune_percent_applied());
    return out;
}

ScoreTable prune_percent(const ScoreTable& table, int percent) {
    if (percent < 0 || percent > 99)
        throw ParameterError("prune percentage must be in [0, 99]");
    std::vector<std::vector<ScoredFamily>> kept(static_cast<std::size_t>(table.n_vars()));
    for (NodeIndex v = 0; v < table.n_vars(); ++v) {
        const auto& list = table.entries(v);
        const std::size_t m = list.size();
        const std::size_t keep = (m * static_cast<std::size_t>(100 - percent) + 99) / 100;
        kept[v].assign(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(keep));
        // The table is ranked, so a cut empty set sorts after everything kept.
        auto empty = std::find_if(list.begin() + static_cast<std::ptrdiff_t>(keep), list.end(),
                                  [](const ScoredFamily& f) { return f.parents.empty(); });
        if (empty != list.end())
            kept[v].push_back(*empty);
    }
    ScoreTable out(table.names(), std::move(kept));
    out.set_legality_pruned(table.legality_pruned());
    out.set_prune_percent_applied(percent);
    return out;
}

void write_scores(const ScoreTable& table, std::ostream& out) {
    const auto& names = table.names();
    std::string buf = fmt::format("{}\n", table.n_vars());
    for (NodeIndex v = 0; v < table.n_vars(); ++v) {
        const auto& list = table.entries(v);
        buf += fmt::format("{} {}\n", names[v], list.size());
        for (const auto& fam : list) {
            buf += fmt::format("{:.6f} {}", fam.score, fam.parents.size());
            for (auto p : fam.parents) {
                buf += ' ';
                buf += names[p];
            }
            buf += '\n';
        }
        out << buf;
        buf.clear();
    }
    out << buf;
}

ScoreTable read_scores(std::istream& in) {
    struct PendingEntry {
        double score;
        std::vector<std::string> parents;
        std::size_t line;
    };
    struct PendingNode {
        std::string name;
        std::size_t line;
        std::vector<PendingEntry> entries;
    };

    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&](std::vector<std::string>& tokens) {
        while (std::getline(in, line)) {
            ++line_no;
            tokens = tokenize(line);
            if (!tokens.empty())
                return true;
        }
        return false;
    };

    std::vector<std::string> tokens;
    if (!next_line(tokens))
        throw ParseError("empty score file", line_no);
    long long n_vars = 0;
    if (tokens.size() != 1 || !parse_number(tokens[0], n_vars) || n_vars < 0)
        throw ParseError("expected variable count", line_no);

    std::vector<PendingNode> nodes;
    std::unordered_map<std::string, NodeIndex> index;
    for (long long v = 0; v < n_vars; ++v) {
        if (!next_line(tokens))
            throw ParseError("expected " + std::to_string(n_vars) + " variables, found " + std::to_string(v),
                             line_no);
        long long count = 0;
        if (tokens.size() != 2 || !parse_number(tokens[1], count) || count < 0)
            throw ParseError("expected '<name> <count>'", line_no);
        if (!index.emplace(tokens[0], static_cast<NodeIndex>(v)).second)
            throw ParseError("duplicate variable '" + tokens[0] + "'", line_no);
        PendingNode node{tokens[0], line_no, {}};
        for (long long e = 0; e < count; ++e) {
            if (!next_line(tokens))
                throw ParseError("variable '" + node.name + "' declares " + std::to_string(count) +
                                     " parent sets, found " + std::to_string(e),
                                 line_no);
            PendingEntry entry{};
            long long k = 0;
            if (tokens.size() < 2 || !parse_number(tokens[0], entry.score) || !parse_number(tokens[1], k) || k < 0 ||
                static_cast<long long>(tokens.size()) != 2 + k)
                throw ParseError("variable '" + node.name + "' declares " + std::to_string(count) +
                                     " parent sets; malformed or missing score line",
                                 line_no);
            entry.parents.assign(tokens.begin() + 2, tokens.end());
            entry.line = line_no;
            node.entries.push_back(std::move(entry));
        }
        nodes.push_back(std::move(node));
    }
    if (next_line(tokens))
        throw ParseError("unexpected content after the last variable", line_no);

    std::vector<std::string> names;
    std::vector<std::vector<ScoredFamily>> entries(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        names.push_back(nodes[v].name);
        for (const auto& e : nodes[v].entries) {
            ScoredFamily fam{static_cast<NodeIndex>(v), {}, e.score};
            for (const auto& pname : e.parents) {
                auto it = index.find(pname);
                if (it == index.end())
                    throw ParseError("unknown parent '" + pname + "'", e.line);
                if (it->second == static_cast<NodeIndex>(v))
                    throw ParseError("variable '" + pname + "' listed as its own parent", e.line);
                fam.parents.push_back(it->second);
            }
            std::sort(fam.parents.begin(), fam.parents.end());
            if (std::adjacent_find(fam.parents.begin(), fam.parents.end()) != fam.parents.end())
                throw ParseError("repeated parent", e.line);
            entries[v].push_back(std::move(fam));
        }
    }
    try {
        return ScoreTable(std::move(names), std::move(entries));
    } catch (const MalformedTable& e) {
        throw ParseError(e.what(), 0);
    }
}

void write_scores_file(const ScoreTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    write_scores(table, out);
    if (!out)
        throw Error("failed writing '" + path + "'");
}

ScoreTable read_scores_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return read_scores(in);
}

double legal_rate(std::size_t total, int n_vars, int max_indeg) {
    return static_cast<double>(total) / count_all_cps(n_vars, max_indeg).convert_to<double>();
}

CpsStats cps_stats(const ScoreTable& table, int n_vars, int max_indeg) {
    CpsStats s;
    s.total = table.total_entries();
    s.per_node_mean = n_vars > 0 ? static_cast<double>(s.total) / n_vars : 0.0;
    s.all_possible = count_all_cps(n_vars, max_indeg).convert_to<double>();
    s.legal_rate = legal_rate(s.total, n_vars, max_indeg);
    return s;
}

}  // namespace bnsl
