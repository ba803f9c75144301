#include "bnsl/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "bnsl/error.hpp"

namespace bnsl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

double sum_scores(const ScoreTable& table, const std::vector<int>& choice) {
    double total = 0.0;
    for (NodeIndex v = 0; v < table.n_vars(); ++v)
        total += table.entries(v)[choice[v]].score;
    return total;
}

Dag make_dag(const ScoreTable& table, const std::vector<int>& choice) {
    Dag g;
    g.parent_choice.reserve(choice.size());
    for (NodeIndex v = 0; v < table.n_vars(); ++v)
        g.parent_choice.push_back(table.entries(v)[choice[v]].parents);
    g.total_score = sum_scores(table, choice);
    return g;
}

// Hill climber over orderings for one restart. Node choices are indices into
// the table's ranked lists, so the first consistent entry is the best one.
class OrderClimber {
public:
    OrderClimber(const ScoreTable& table, std::vector<NodeIndex> order)
        : m_table(table), m_n(table.n_vars()), m_order(std::move(order)), m_pos(m_n), m_choice(m_n) {
        refresh();
    }

    double total() const { return m_total; }
    const std::vector<NodeIndex>& order() const { return m_order; }
    const std::vector<int>& choice() const { return m_choice; }

    struct Move {
        int from = -1;
        int to = -1;
        double gain = 0.0;
    };

    // Best strictly improving insertion move; from == -1 if none. Stops early
    // (returning no move) when `expired` reports the deadline has passed.
    template <typename Expired>
    Move best_move(const Expired& expired, bool& timed_out) const {
        Move best;
        const double threshold = 1e-10 * std::max(1.0, std::abs(m_total));
        for (int i = 0; i < m_n; ++i) {
            if (expired()) {
                timed_out = true;
                return {};
            }
            const NodeIndex x = m_order[i];
            const double x_old = score_of(x);

            // Move right: nodes at i+1..j lose x as a predecessor.
            double others = 0.0;
            for (int j = i + 1; j < m_n; ++j) {
                const NodeIndex y = m_order[j];
                others += best_without(y, x) - score_of(y);
                const double gain = best_with_prefix(x, j, true) - x_old + others;
                if (gain > threshold && gain > best.gain)
                    best = {i, j, gain};
            }
            // Move left: nodes at j..i-1 gain x as a predecessor.
            others = 0.0;
            for (int j = i - 1; j >= 0; --j) {
                const NodeIndex y = m_order[j];
                others += best_with(y, x) - score_of(y);
                const double gain = best_with_prefix(x, j, false) - x_old + others;
                if (gain > threshold && gain > best.gain)
                    best = {i, j, gain};
            }
        }
        return best;
    }

    void apply(const Move& m) {
        const NodeIndex x = m_order[m.from];
        m_order.erase(m_order.begin() + m.from);
        m_order.insert(m_order.begin() + m.to, x);
        refresh();
    }

private:
    double score_of(NodeIndex v) const { return m_table.entries(v)[m_choice[v]].score; }

    void refresh() {
        for (int i = 0; i < m_n; ++i)
            m_pos[m_order[i]] = i;
        for (NodeIndex v = 0; v < m_n; ++v) {
            const auto& list = m_table.entries(v);
            int k = 0;
            while (!all_before(list[k].parents, m_pos[v]))
                ++k;
            m_choice[v] = k;
        }
        m_total = sum_scores(m_table, m_choice);
    }

    bool all_before(const ParentSet& parents, int position) const {
        return std::all_of(parents.begin(), parents.end(), [&](NodeIndex p) { return m_pos[p] < position; });
    }

    // y's best once x no longer precedes it.
    double best_without(NodeIndex y, NodeIndex x) const {
        const auto& list = m_table.entries(y);
        const auto& cur = list[m_choice[y]].parents;
        if (!std::binary_search(cur.begin(), cur.end(), x))
            return list[m_choice[y]].score;
        for (std::size_t k = m_choice[y] + 1; k < list.size(); ++k) {
            const auto& ps = list[k].parents;
            if (!std::binary_search(ps.begin(), ps.end(), x) && all_before(ps, m_pos[y]))
                return list[k].score;
        }
        return list[m_choice[y]].score;  // unreachable: the empty set qualifies
    }

    // y's best once x precedes it as well.
    double best_with(NodeIndex y, NodeIndex x) const {
        const auto& list = m_table.entries(y);
        for (int k = 0; k < m_choice[y]; ++k) {
            const auto& ps = list[k].parents;
            if (std::all_of(ps.begin(), ps.end(), [&](NodeIndex p) { return p == x || m_pos[p] < m_pos[y]; }))
                return list[k].score;
        }
        return list[m_choice[y]].score;
    }

    // x's best when inserted at position j; its predecessors are the nodes at
    // positions <= j (moving right) or < j (moving left), x excluded.
    double best_with_prefix(NodeIndex x, int j, bool right) const {
        for (const auto& fam : m_table.entries(x)) {
            const bool ok = std::all_of(fam.parents.begin(), fam.parents.end(),
                                        [&](NodeIndex p) { return right ? m_pos[p] <= j : m_pos[p] < j; });
            if (ok)
                return fam.score;
        }
        return -std::numeric_limits<double>::infinity();
    }

    const ScoreTable& m_table;
    int m_n;
    std::vector<NodeIndex> m_order;
    std::vector<int> m_pos;
    std::vector<int> m_choice;
    double m_total = 0.0;
};

struct RestartOutcome {
    double score = -std::numeric_limits<double>::infinity();
    std::vector<int> choice;
    double time_to_best = 0.0;
    std::vector<std::vector<NodeIndex>> trace;
    bool ran = false;
};

RestartOutcome run_restart(const ScoreTable& table, const SearchConfig& cfg, int restart, Clock::time_point start) {
    RestartOutcome out;
    auto expired = [&] { return cfg.time_limit && seconds_since(start) >= *cfg.time_limit; };
    if (expired())
        return out;

    OrderClimber climber(table, random_permutation(table.n_vars(), cfg.seed ^ static_cast<std::uint64_t>(restart)));
    out.ran = true;
    auto record = [&] {
        if (climber.total() > out.score) {
            out.score = climber.total();
            out.choice = climber.choice();
            out.time_to_best = seconds_since(start);
        }
        if (cfg.record_trace)
            out.trace.push_back(climber.order());
    };
    record();
    while (true) {
        bool timed_out = false;
        const auto move = climber.best_move(expired, timed_out);
        if (timed_out || move.from < 0)
            break;
        climber.apply(move);
        record();
    }
    return out;
}

}  // namespace

bool Dag::has_root() const {
    return std::any_of(parent_choice.begin(), parent_choice.end(), [](const ParentSet& p) { return p.empty(); });
}

bool Ordering::is_valid(int n_vars) const {
    if (static_cast<int>(perm.size()) != n_vars)
        return false;
    std::vector<bool> seen(static_cast<std::size_t>(n_vars), false);
    for (auto v : perm) {
        if (v < 0 || v >= n_vars || seen[v])
            return false;
        seen[v] = true;
    }
    return true;
}

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::Greedy:
        return "greedy";
    case Strategy::Order:
        return "order";
    case Strategy::Exact:
        return "exact";
    }
    return "unknown";
}

Strategy parse_strategy(const std::string& s) {
    if (s == "greedy")
        return Strategy::Greedy;
    if (s == "order")
        return Strategy::Order;
    if (s == "exact")
        return Strategy::Exact;
    throw ParameterError("unknown strategy '" + s + "'");
}

void SearchConfig::validate() const {
    if (restarts < 1)
        throw ParameterError("restarts must be at least 1");
    if (time_limit && !(*time_limit > 0.0))
        throw ParameterError("time limit must be positive");
    if (threads < 1)
        throw ParameterError("threads must be at least 1");
}

bool is_acyclic(const Dag& g) {
    const int n = g.n_vars();
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<NodeIndex>> children(static_cast<std::size_t>(n));
    for (NodeIndex v = 0; v < n; ++v) {
        for (auto p : g.parent_choice[v]) {
            if (p < 0 || p >= n)
                return false;
            children[p].push_back(v);
            ++indegree[v];
        }
    }
    std::vector<NodeIndex> ready;
    for (NodeIndex v = 0; v < n; ++v)
        if (indegree[v] == 0)
            ready.push_back(v);
    int visited = 0;
    while (!ready.empty()) {
        const auto v = ready.back();
        ready.pop_back();
        ++visited;
        for (auto c : children[v])
            if (--indegree[c] == 0)
                ready.push_back(c);
    }
    return visited == n;
}

double score_dag(const ScoreTable& table, const Dag& g) {
    if (g.n_vars() != table.n_vars())
        throw MalformedTable("network and score table sizes differ");
    double total = 0.0;
    for (NodeIndex v = 0; v < g.n_vars(); ++v) {
        const auto& list = table.entries(v);
        auto it = std::find_if(list.begin(), list.end(),
                               [&](const ScoredFamily& f) { return f.parents == g.parent_choice[v]; });
        if (it == list.end())
            throw MalformedTable("parent set of '" + table.names()[v] + "' is not in the score table");
        total += it->score;
    }
    return total;
}

Dag greedy_construct(const ScoreTable& table) {
    const int n = table.n_vars();
    std::vector<NodeIndex> nodes(static_cast<std::size_t>(n));
    std::iota(nodes.begin(), nodes.end(), 0);
    std::stable_sort(nodes.begin(), nodes.end(), [&](NodeIndex a, NodeIndex b) {
        return table.entries(a).front().score > table.entries(b).front().score;
    });

    std::vector<std::vector<NodeIndex>> children(static_cast<std::size_t>(n));
    std::vector<int> choice(static_cast<std::size_t>(n), 0);
    std::vector<int> mark(static_cast<std::size_t>(n), -1);
    std::vector<NodeIndex> stack;

    for (int step = 0; step < n; ++step) {
        const NodeIndex v = nodes[step];
        // Mark every node reachable from v; a parent among them closes a cycle.
        stack.assign(1, v);
        mark[v] = step;
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            for (auto c : children[u])
                if (mark[c] != step) {
                    mark[c] = step;
                    stack.push_back(c);
                }
        }
        const auto& list = table.entries(v);
        for (std::size_t k = 0; k < list.size(); ++k) {
            const auto& ps = list[k].parents;
            if (std::none_of(ps.begin(), ps.end(), [&](NodeIndex p) { return mark[p] == step; })) {
                choice[v] = static_cast<int>(k);
                for (auto p : ps)
                    children[p].push_back(v);
                break;
            }
        }
    }
    return make_dag(table, choice);
}

Dag best_net_for_order(const ScoreTable& table, const Ordering& order) {
    if (!order.is_valid(table.n_vars()))
        throw ParameterError("ordering is not a permutation of the table's nodes");
    std::vector<int> pos(static_cast<std::size_t>(table.n_vars()));
    for (std::size_t i = 0; i < order.perm.size(); ++i)
        pos[order.perm[i]] = static_cast<int>(i);
    std::vector<int> choice(static_cast<std::size_t>(table.n_vars()), 0);
    for (NodeIndex v = 0; v < table.n_vars(); ++v) {
        const auto& list = table.entries(v);
        for (std::size_t k = 0; k < list.size(); ++k) {
            const auto& ps = list[k].parents;
            if (std::all_of(ps.begin(), ps.end(), [&](NodeIndex p) { return pos[p] < pos[v]; })) {
                choice[v] = static_cast<int>(k);
                break;
            }
        }
    }
    return make_dag(table, choice);
}

std::vector<NodeIndex> random_permutation(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<NodeIndex> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

SearchResult order_search(const ScoreTable& table, const SearchConfig& cfg) {
    cfg.validate();
    const auto start = Clock::now();
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));

    const int workers = std::min(cfg.threads, cfg.restarts);
    if (workers <= 1) {
        for (int r = 0; r < cfg.restarts; ++r)
            outcomes[r] = run_restart(table, cfg, r, start);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int r = w; r < cfg.restarts; r += workers)
                    outcomes[r] = run_restart(table, cfg, r, start);
            });
        pool.clear();
    }

    SearchResult result;
    int winner = -1;
    for (int r = 0; r < cfg.restarts; ++r) {
        if (!outcomes[r].ran)
            continue;
        if (winner < 0 || outcomes[r].score > outcomes[winner].score)
            winner = r;
    }
    if (winner < 0) {
        // The deadline passed before any restart began; fall back to the
        // seeded start ordering.
        Ordering o{random_permutation(table.n_vars(), cfg.seed)};
        result.dag = best_net_for_order(table, o);
        result.time_to_best = seconds_since(start);
        return result;
    }
    result.dag = make_dag(table, outcomes[winner].choice);
    result.time_to_best = outcomes[winner].time_to_best;
    if (cfg.record_trace)
        for (auto& o : outcomes)
            for (auto& t : o.trace)
                result.trace.push_back(std::move(t));
    return result;
}

Dag exact_dp(const ScoreTable& table, int cap) {
    if (cap < 0 || cap > 30)
        throw ParameterError("exact search cap must lie in [0, 30]");
    const int n = table.n_vars();
    if (n > cap)
        throw CapacityError("exact search supports at most " + std::to_string(cap) + " variables, table has " +
                            std::to_string(n));
    if (n == 0)
        return {};

    using Mask = std::uint32_t;
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    const Mask full = (Mask{1} << n) - 1;
    const std::size_t sub_size = std::size_t{1} << (n - 1);

    // Drop bit v from a mask so that subsets of V \ {v} index densely.
    auto compress = [](Mask s, int v) -> Mask { return (s & ((Mask{1} << v) - 1)) | ((s >> (v + 1)) << v); };

    // best[v][S]: best entry of v whose parents are a subset of S.
    std::vector<std::vector<double>> best(static_cast<std::size_t>(n), std::vector<double>(sub_size, kNegInf));
    std::vector<std::vector<int>> arg(static_cast<std::size_t>(n), std::vector<int>(sub_size, -1));
    for (NodeIndex v = 0; v < n; ++v) {
        auto& bv = best[v];
        auto& av = arg[v];
        const auto& list = table.entries(v);
        for (std::size_t k = 0; k < list.size(); ++k) {
            Mask m = 0;
            for (auto p : list[k].parents)
                m |= Mask{1} << p;
            const auto c = compress(m, v);
            if (list[k].score > bv[c]) {
                bv[c] = list[k].score;
                av[c] = static_cast<int>(k);
            }
        }
        for (int b = 0; b < n - 1; ++b) {
            const Mask bit = Mask{1} << b;
            for (Mask s = 0; s < sub_size; ++s) {
                if ((s & bit) && bv[s ^ bit] > bv[s]) {
                    bv[s] = bv[s ^ bit];
                    av[s] = av[s ^ bit];
                }
            }
        }
    }

    // net[S]: best network over S; sink[S] is the last node of that network.
    std::vector<double> net(std::size_t{1} << n, kNegInf);
    std::vector<std::int8_t> sink(std::size_t{1} << n, -1);
    net[0] = 0.0;
    for (Mask s = 1; s <= full; ++s) {
        for (int v = 0; v < n; ++v) {
            const Mask bit = Mask{1} << v;
            if (!(s & bit))
                continue;
            const Mask rest = s ^ bit;
            const double cand = net[rest] + best[v][compress(rest, v)];
            if (cand > net[s]) {
                net[s] = cand;
                sink[s] = static_cast<std::int8_t>(v);
            }
        }
    }

    std::vector<int> choice(static_cast<std::size_t>(n), 0);
    for (Mask s = full; s != 0;) {
        const int v = sink[s];
        const Mask rest = s ^ (Mask{1} << v);
        choice[v] = arg[v][compress(rest, v)];
        s = rest;
    }
    return make_dag(table, choice);
}

SearchResult run_search(const ScoreTable& table, const SearchConfig& cfg) {
    cfg.validate();
    if (cfg.strategy == Strategy::Order)
        return order_search(table, cfg);
    const auto start = Clock::now();
    SearchResult r;
    r.dag = cfg.strategy == Strategy::Greedy ? greedy_construct(table) : exact_dp(table, cfg.exact_cap);
    r.time_to_best = seconds_since(start);
    return r;
}

}  // namespace bnsl
