#include "bnsl/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bnsl/combinatorics.hpp"
#include "bnsl/error.hpp"
#include "bnsl/experiment.hpp"

namespace bnsl {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    return out;
}

int thread_default() {
    if (const char* env = std::getenv("BNSL_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1)
            return v;
    }
    return 1;
}

struct SearchFlags {
    std::string strategy = "order";
    std::uint64_t seed = 0;
    int restarts = 20;
    double time_limit = 0.0;
    int exact_cap = 20;

    void attach(CLI::App* cmd) {
        cmd->add_option("--strategy", strategy, "Search strategy")
            ->check(CLI::IsMember({"greedy", "order", "exact"}))
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
        cmd->add_option("--restarts", restarts, "Order-search restarts")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--time-limit", time_limit, "Search time limit in seconds (0 = none)")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        cmd->add_option("--exact-cap", exact_cap, "Largest variable count accepted by exact search")
            ->check(CLI::Range(0, 30))
            ->capture_default_str();
    }

    SearchConfig config(int threads) const {
        SearchConfig cfg;
        cfg.strategy = parse_strategy(strategy);
        cfg.seed = seed;
        cfg.restarts = restarts;
        if (time_limit > 0.0)
            cfg.time_limit = time_limit;
        cfg.threads = threads;
        cfg.exact_cap = exact_cap;
        return cfg;
    }
};

}  // namespace

void write_dag(const ScoreTable& table, const Dag& g, std::ostream& out) {
    std::string buf;
    for (NodeIndex v = 0; v < g.n_vars(); ++v) {
        buf += table.names()[v];
        buf += " <-";
        for (auto p : g.parent_choice[v]) {
            buf += ' ';
            buf += table.names()[p];
        }
        buf += '\n';
    }
    buf += fmt::format("# score {:.6f}\n", g.total_score);
    out << buf;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bayesian network structure learning with candidate parent set pruning", "bnsl"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = thread_default();
    app.add_option("--threads", threads, "Worker thread cap (env BNSL_THREADS)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // score
    std::string data_path, out_path;
    int max_indeg = 3;
    double ess = 1.0;
    bool no_legal = false;
    std::string delimiter = "comma";
    auto* score_cmd = app.add_subcommand("score", "Compute BDeu scores of candidate parent sets");
    score_cmd->add_option("--data", data_path, "Delimited data file with header")->required();
    score_cmd->add_option("--max-indeg", max_indeg, "Maximum parent-set size")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    score_cmd->add_option("--ess", ess, "Equivalent sample size")->check(CLI::PositiveNumber)->capture_default_str();
    score_cmd->add_option("--out", out_path, "Score file to write")->required();
    score_cmd->add_flag("--no-legal-filter", no_legal, "Keep dominated parent sets");
    score_cmd->add_option("--delimiter", delimiter, "Column delimiter")
        ->check(CLI::IsMember({"comma", "whitespace"}))
        ->capture_default_str();

    // prune
    std::string scores_path;
    int percent = 0;
    auto* prune_cmd = app.add_subcommand("prune", "Drop the lowest-ranked percentage of each node's CPSs");
    prune_cmd->add_option("--scores", scores_path, "Input score file")->required();
    prune_cmd->add_option("--percent", percent, "Percentage to prune")->required()->check(CLI::Range(0, 99));
    prune_cmd->add_option("--out", out_path, "Score file to write")->required();

    // learn
    SearchFlags learn_flags;
    auto* learn_cmd = app.add_subcommand("learn", "Search for a high-scoring network");
    learn_cmd->add_option("--scores", scores_path, "Input score file")->required();
    learn_flags.attach(learn_cmd);
    learn_cmd->add_option("--out", out_path, "Network file to write");

    // sweep
    SearchFlags sweep_flags;
    std::vector<int> levels = {0, 10, 20, 30, 40, 50, 60, 70, 80, 90};
    bool no_timing = false;
    bool parallel = false;
    double sweep_ess = 0.0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Search at several pruning levels and report the loss");
    sweep_cmd->add_option("--scores", scores_path, "Input score file")->required();
    sweep_cmd->add_option("--levels", levels, "Comma-separated pruning percentages, must include 0")
        ->delimiter(',')
        ->check(CLI::Range(0, 99))
        ->capture_default_str();
    sweep_flags.attach(sweep_cmd);
    sweep_cmd->add_option("--out", out_path, "Report prefix; writes <prefix>.csv and <prefix>.txt")->required();
    sweep_cmd->add_flag("--no-timing", no_timing, "Write NA in the time column");
    sweep_cmd->add_flag("--parallel", parallel, "Run levels concurrently");
    sweep_cmd->add_option("--ess", sweep_ess, "Equivalent sample size used for the scores (echoed only)");

    // stats
    int stats_indeg = 3;
    auto* stats_cmd = app.add_subcommand("stats", "Count legal CPSs against all possible CPSs");
    stats_cmd->add_option("--scores", scores_path, "Input score file")->required();
    stats_cmd->add_option("--max-indeg", stats_indeg, "In-degree bound used when scoring")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    // count
    int count_dags = -1, count_orders = -1;
    std::string count_cps;
    auto* count_cmd = app.add_subcommand("count", "Exact structure and CPS counts");
    count_cmd->add_option("--dags", count_dags, "Labeled DAGs on N nodes")->check(CLI::NonNegativeNumber);
    count_cmd->add_option("--orders", count_orders, "DAGs consistent with one ordering of N nodes")
        ->check(CLI::NonNegativeNumber);
    count_cmd->add_option("--cps", count_cps, "All CPSs for N variables with in-degree <= K, as N,K");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*score_cmd) {
            const auto ds =
                load_dataset_file(data_path, delimiter == "comma" ? Delimiter::Comma : Delimiter::Whitespace);
            if (max_indeg >= ds.n_vars())
                throw ParameterError("--max-indeg must be smaller than the number of variables");
            ScoreTable table(ds.names(), score_all_families(ds, max_indeg, ess, threads));
            if (!no_legal)
                table = legal_filter(table);
            auto f = open_output(out_path);
            write_scores(table, f);
            err << fmt::format("scored {} variables, {} rows: {} CPSs written\n", ds.n_vars(), ds.n_rows(),
                               table.total_entries());
        } else if (*prune_cmd) {
            const auto table = read_scores_file(scores_path);
            auto f = open_output(out_path);
            write_scores(prune_percent(table, percent), f);
        } else if (*learn_cmd) {
            const auto table = read_scores_file(scores_path);
            const auto result = run_search(table, learn_flags.config(threads));
            if (!out_path.empty()) {
                auto f = open_output(out_path);
                write_dag(table, result.dag, f);
            }
            out << fmt::format("{:.6f}\n", result.dag.total_score);
            err << fmt::format("time to best: {:.3f} s\n", result.time_to_best);
        } else if (*sweep_cmd) {
            const auto table = read_scores_file(scores_path);
            SweepOptions opts;
            opts.parallel = parallel;
            if (sweep_ess > 0.0)
                opts.ess = sweep_ess;
            const auto report = run_pruning_sweep(table, levels, sweep_flags.config(threads), opts);
            {
                auto f = open_output(out_path + ".csv");
                write_sweep_csv(report, f, !no_timing);
            }
            {
                auto f = open_output(out_path + ".txt");
                write_sweep_table(report, f, !no_timing);
            }
            for (const auto& row : report.rows)
                if (row.anomalous)
                    err << fmt::format("warning: {}% pruning scored above the baseline\n", row.percent);
        } else if (*stats_cmd) {
            const auto table = read_scores_file(scores_path);
            const auto s = cps_stats(table, table.n_vars(), stats_indeg);
            out << fmt::format("variables      {}\n", table.n_vars());
            out << fmt::format("max in-degree  {}\n", stats_indeg);
            out << fmt::format("all possible   {}\n", count_all_cps(table.n_vars(), stats_indeg).str());
            out << fmt::format("legal CPSs     {}\n", s.total);
            out << fmt::format("per node       {:.2f}\n", s.per_node_mean);
            out << fmt::format("legal rate     {:.2f}%\n", 100.0 * s.legal_rate);
        } else if (*count_cmd) {
            if (count_dags < 0 && count_orders < 0 && count_cps.empty()) {
                err << "count: one of --dags, --orders or --cps is required\n";
                return kExitUsage;
            }
            if (count_dags >= 0)
                out << dag_count(static_cast<unsigned>(count_dags)).str() << '\n';
            if (count_orders >= 0)
                out << order_consistent_count(static_cast<unsigned>(count_orders)).str() << '\n';
            if (!count_cps.empty()) {
                const auto comma = count_cps.find(',');
                int n = 0, k = 0;
                try {
                    if (comma == std::string::npos)
                        throw std::invalid_argument("missing comma");
                    std::size_t used = 0;
                    n = std::stoi(count_cps.substr(0, comma), &used);
                    k = std::stoi(count_cps.substr(comma + 1));
                } catch (const std::exception&) {
                    err << "count: --cps expects N,K\n";
                    return kExitUsage;
                }
                out << count_all_cps(n, k).str() << '\n';
            }
        }
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace bnsl
