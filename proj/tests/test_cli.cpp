#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "bnsl/cli.hpp"
#include "bnsl/synthetic.hpp"

using namespace bnsl;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "bnsl_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::filesystem::path synthetic_csv(const std::string& name, int n_vars, std::size_t rows) {
    SyntheticConfig cfg;
    cfg.n_vars = n_vars;
    cfg.seed = 3;
    const auto ds = sample_dataset(random_network(cfg), rows, 4);
    std::ostringstream ss;
    for (int v = 0; v < ds.n_vars(); ++v)
        ss << (v ? "," : "") << ds.names()[v];
    ss << '\n';
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (int v = 0; v < ds.n_vars(); ++v)
            ss << (v ? "," : "") << ds.at(r, v);
        ss << '\n';
    }
    const auto path = scratch(name);
    write_text(path, ss.str());
    return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("count") {
    CHECK(cli({"count", "--dags", "10"}).out == "4175098976430598143\n");
    CHECK(cli({"count", "--cps", "100,3"}).out == "16180000\n");
    CHECK(cli({"count", "--orders", "10"}).out == "35184372088832\n");
    CHECK(cli({"count"}).code == 2);
    CHECK(cli({"count", "--cps", "5"}).code == 2);
    CHECK(cli({"count", "--cps", "3,3"}).code == 2);
}

TEST_CASE("usage errors exit 2, file errors exit 1") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"count", "--dags", "3", "--bogus"}).code == 2);
    CHECK(cli({"prune", "--scores", "x", "--percent", "100", "--out", "y"}).code == 2);
    CHECK(cli({"learn", "--scores", scratch("missing.scores").string()}).code == 1);
    const auto bad = scratch("bad.scores");
    write_text(bad, "1\nA 2\n-1.0 0\n");
    const auto r = cli({"learn", "--scores", bad.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("line") != std::string::npos);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("learn on a single variable prints its empty-set score") {
    const auto path = scratch("one.scores");
    write_text(path, "1\nA 1\n-2.079442 0\n");
    const auto dag = scratch("one.dag");
    const auto r = cli({"learn", "--scores", path.string(), "--strategy", "exact", "--out", dag.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "-2.079442\n");
    CHECK(slurp(dag) == "A <-\n# score -2.079442\n");
}

TEST_CASE("network file lists parents by name") {
    const ScoreTable t({"A", "B", "C"}, {{{0, {}, -1.0}}, {{1, {}, -1.0}, {1, {0}, -0.5}},
                                         {{2, {}, -3.0}, {2, {0, 1}, -2.25}}});
    const Dag g{{{}, {0}, {0, 1}}, -3.75};
    std::ostringstream out;
    write_dag(t, g, out);
    CHECK(out.str() == "A <-\nB <- A\nC <- A B\n# score -3.750000\n");
}

TEST_CASE("learn honours a time limit and thread cap") {
    const auto data = synthetic_csv("tl.csv", 10, 200);
    const auto scores = scratch("tl.scores");
    REQUIRE(cli({"score", "--data", data.string(), "--out", scores.string(), "--threads", "2"}).code == 0);
    const auto r = cli({"learn", "--scores", scores.string(), "--restarts", "100000", "--time-limit", "0.3",
                        "--threads", "2"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) < 0.0);
}

TEST_CASE("score, prune, stats, learn, sweep pipeline") {
    const auto data = synthetic_csv("pipe.csv", 8, 300);
    const auto scores = scratch("pipe.scores");
    REQUIRE(cli({"score", "--data", data.string(), "--max-indeg", "2", "--out", scores.string()}).code == 0);

    const auto raw = scratch("pipe_raw.scores");
    REQUIRE(cli({"score", "--data", data.string(), "--max-indeg", "2", "--no-legal-filter", "--out",
                 raw.string()})
                .code == 0);
    CHECK(slurp(raw).size() > slurp(scores).size());

    const auto stats = cli({"stats", "--scores", raw.string(), "--max-indeg", "2"});
    CHECK(stats.code == 0);
    CHECK(stats.out.find("legal rate     100.00%") != std::string::npos);

    const auto same = scratch("pipe_p0.scores");
    REQUIRE(cli({"prune", "--scores", scores.string(), "--percent", "0", "--out", same.string()}).code == 0);
    CHECK(slurp(same) == slurp(scores));

    const auto pruned = scratch("pipe_p50.scores");
    REQUIRE(cli({"prune", "--scores", scores.string(), "--percent", "50", "--out", pruned.string()}).code == 0);
    CHECK(slurp(pruned).size() < slurp(scores).size());

    const auto g1 = scratch("pipe1.dag"), g2 = scratch("pipe2.dag");
    const auto l1 = cli({"learn", "--scores", scores.string(), "--seed", "9", "--restarts", "5", "--out", g1.string()});
    const auto l2 = cli({"learn", "--scores", scores.string(), "--seed", "9", "--restarts", "5", "--out", g2.string()});
    CHECK(l1.code == 0);
    CHECK(l1.out == l2.out);
    CHECK(slurp(g1) == slurp(g2));

    const auto exact = cli({"learn", "--scores", scores.string(), "--strategy", "exact"});
    CHECK(exact.code == 0);
    CHECK(std::stod(l1.out) <= std::stod(exact.out) + 1e-6);

    const auto r1 = scratch("sweep1"), r2 = scratch("sweep2");
    for (const auto& r : {r1, r2})
        REQUIRE(cli({"sweep", "--scores", scores.string(), "--levels", "0,50,90", "--seed", "2", "--restarts", "3",
                     "--no-timing", "--out", r.string()})
                    .code == 0);
    CHECK(slurp(r1.string() + ".csv") == slurp(r2.string() + ".csv"));
    CHECK(slurp(r1.string() + ".txt") == slurp(r2.string() + ".txt"));
    CHECK(cli({"sweep", "--scores", scores.string(), "--levels", "10,50", "--out", r1.string()}).code == 2);
}

}  // TEST_SUITE
