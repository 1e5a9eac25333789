#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icsim/harness.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

using namespace icsim;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("pattern generators respect their budgets and shapes") {
    Rng rng(5);
    const uint64_t T = 40, horizon = 4000;
    const int k = 5;

    NoisePattern u = make_pattern({"uniform", 0}, T, horizon, k, rng);
    CHECK(u.rounds.size() == T);
    for (uint64_t r : u.rounds) CHECK((r >= 1 && r <= horizon));

    NoisePattern burst = make_pattern({"prefix_burst", 0}, T, horizon, k, rng);
    CHECK(burst.rounds.size() == T);
    CHECK(*burst.rounds.begin() == 1);
    CHECK(*burst.rounds.rbegin() == T);

    NoisePattern parity = make_pattern({"parity_targeting", 0}, T, horizon, k, rng);
    CHECK(parity.rounds.size() == T);
    for (uint64_t r : parity.rounds) CHECK(r % k == 0);

    NoisePattern budget = make_pattern({"per_iteration_budget", 2}, T, horizon, k, rng);
    CHECK(budget.rounds.size() == T);
    std::map<uint64_t, int> per_block;
    for (uint64_t r : budget.rounds) ++per_block[(r - 1) / (2 * k)];
    for (auto [block, count] : per_block) CHECK(count <= 2);

    CHECK_THROWS_AS(make_pattern({"martian", 0}, T, horizon, k, rng), std::invalid_argument);
}

TEST_CASE("noiseless trials succeed with the expected cost") {
    ExperimentConfig cfg;
    cfg.N = 16;
    cfg.scheme = "cr";
    TrialResult r = run_trial(cfg, 0, 0);
    CHECK(r.success);
    CHECK_FALSE(r.error);
    CHECK(r.f == 0);
    // All trials at T = 0 spend the same number of bits.
    TrialResult r2 = run_trial(cfg, 0, 1);
    CHECK(r2.comm_bits == r.comm_bits);
}

TEST_CASE("cells are reproducible and thread-count independent") {
    ExperimentConfig cfg;
    cfg.N = 16;
    cfg.trials = 12;
    cfg.master_seed = 99;

    cfg.threads = 1;
    auto a = run_cell(cfg, 8);
    auto b = run_cell(cfg, 8);
    cfg.threads = 4;
    auto c = run_cell(cfg, 8);

    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].to_json() == b[i].to_json());
        CHECK(a[i].to_json() == c[i].to_json());
    }
}

TEST_CASE("analysis-enabled trials attach lemma verdicts") {
    ExperimentConfig cfg;
    cfg.N = 16;
    cfg.analyze = true;
    TrialResult r = run_trial(cfg, 10, 3);
    CHECK_FALSE(r.error);
    CHECK(r.lemmas_pass);
}

TEST_CASE("iterative trials run under the mixed channel") {
    ExperimentConfig cfg;
    cfg.N = 16;
    cfg.scheme = "iter";
    TrialResult r = run_trial(cfg, 0, 0);
    CHECK(r.success);
    CHECK(r.alice_term == 0);
    CHECK(r.bob_term == 1);
    CHECK_FALSE(r.bob_before_alice);
}

TEST_CASE("aggregates summarize a cell") {
    ExperimentConfig cfg;
    cfg.N = 16;
    cfg.trials = 10;
    auto results = run_cell(cfg, 0);
    CellAggregate agg = aggregate(cfg, 0, results);
    CHECK(agg.trials == 10);
    CHECK(agg.successes == 10);
    CHECK(agg.success_rate == 1.0);
    CHECK(agg.mean_comm > 0);
    CHECK(agg.max_comm >= static_cast<uint64_t>(agg.mean_comm));
    CHECK(CellAggregate::csv_header().find("success_rate") != std::string::npos);
    CHECK(agg.csv_row().find("16") != std::string::npos);
}

TEST_CASE("config JSON round-trips") {
    ExperimentConfig cfg;
    cfg.scheme = "iter_uf";
    cfg.N = 32;
    cfg.T_values = {0, 7, 99};
    cfg.adversary = {"parity_targeting", 1.5};
    cfg.trials = 3;
    cfg.master_seed = 12345;
    cfg.analyze = true;
    ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.scheme == cfg.scheme);
    CHECK(back.N == cfg.N);
    CHECK(back.T_values == cfg.T_values);
    CHECK(back.adversary.name == cfg.adversary.name);
    CHECK(back.adversary.param == cfg.adversary.param);
    CHECK(back.trials == cfg.trials);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(back.analyze == cfg.analyze);
}

TEST_CASE("run command writes deterministic JSONL and CSV") {
    ExperimentConfig cfg;
    cfg.N = 16;
    cfg.trials = 5;
    cfg.T_values = {0, 4};
    cfg.out = "harness_run_a";
    std::ostringstream log;
    REQUIRE(cmd_run(cfg, log) == 0);
    cfg.out = "harness_run_b";
    REQUIRE(cmd_run(cfg, log) == 0);

    std::string ja = slurp("harness_run_a.jsonl");
    std::string jb = slurp("harness_run_b.jsonl");
    CHECK_FALSE(ja.empty());
    // The config line differs in its output name; the trials must not.
    CHECK(ja.substr(ja.find('\n')) == jb.substr(jb.find('\n')));
    std::string ca = slurp("harness_run_a.csv");
    CHECK(ca == slurp("harness_run_b.csv"));
    CHECK(ca.find("success_rate") != std::string::npos);
    // First JSONL line echoes the configuration.
    CHECK(ja.substr(0, ja.find('\n')).find("\"trials\"") != std::string::npos);

    for (const char* f : {"harness_run_a.jsonl", "harness_run_b.jsonl", "harness_run_a.csv",
                          "harness_run_b.csv"})
        std::remove(f);
}

TEST_CASE("trace analysis accepts good traces and localizes bad lines") {
    ExperimentConfig cfg;
    cfg.N = 16;
    CRSetup setup = make_cr_setup(cfg, 6, 555);
    CRTrace t = run_cr_trial(cfg, setup, 555);
    {
        std::ofstream out("harness_trace.jsonl");
        out << t.to_jsonl();
    }
    std::ostringstream rep;
    CHECK(cmd_analyze_trace("harness_trace.jsonl", rep) == 0);
    CHECK(rep.str().find("all_pass") != std::string::npos);

    std::string text = t.to_jsonl();
    text.insert(text.find('\n') + 1, "garbage\n");
    {
        std::ofstream out("harness_trace_bad.jsonl");
        out << text;
    }
    std::ostringstream rep2;
    CHECK(cmd_analyze_trace("harness_trace_bad.jsonl", rep2) == 2);
    CHECK(rep2.str().find("line 2") != std::string::npos);

    CHECK(cmd_analyze_trace("no_such_file.jsonl", rep2) == 2);
    std::remove("harness_trace.jsonl");
    std::remove("harness_trace_bad.jsonl");
}

TEST_CASE("codec self-test passes and prints verdicts") {
    std::ostringstream out;
    CHECK(cmd_codec_test({4, 8}, out) == 0);
    CHECK(out.str().find("PASS") != std::string::npos);
    CHECK(out.str().find("FAIL") == std::string::npos);
}

TEST_CASE("slope fitting recovers an exact affine law") {
    std::vector<std::pair<double, double>> pts = {{0, 5}, {1, 8}, {2, 11}, {3, 14}};
    CHECK(fit_slope(pts) == doctest::Approx(3.0));
}
