#pragma once

#include "icsim/scheme_cr.hpp"
#include "icsim/scheme_iter.hpp"
#include "icsim/trace_lab.hpp"
#include "icsim/uf_compile.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace icsim {

// Named oblivious-pattern generator. param meaning:
//   uniform: unused; prefix_burst: unused;
//   per_iteration_budget: max corruptions per 2k-bit iteration block;
//   parity_targeting: unused (targets every k-th wire bit).
struct AdversarySpec {
    std::string name = "uniform";
    double param = 0.0;
};

NoisePattern make_pattern(const AdversarySpec& a, uint64_t T, uint64_t horizon, int k_block,
                          Rng& rng);

struct ExperimentConfig {
    std::string scheme = "cr";    // cr | cr_uf | iter | iter_uf
    std::string channel = "upef"; // upef | mupef | clean (challenge-response only)
    int N = 64;
    std::vector<uint64_t> T_values = {0};
    AdversarySpec adversary;
    int trials = 100;
    uint64_t master_seed = 1;
    uint64_t horizon = 0; // 0 = derive from scheme size and T
    double C = 1.0 / 297.0;
    int repetition = 1;
    bool analyze = false; // run the trace checkers on every trial
    int threads = 0;      // 0 = hardware concurrency
    std::string out = "experiment";

    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;
};

struct TrialResult {
    uint64_t trial = 0;
    uint64_t seed = 0;
    std::string scheme;
    int N = 0;
    uint64_t T = 0;
    uint64_t comm_bits = 0;
    uint64_t wire_bits = 0;
    bool success = false;
    int64_t alice_term = -1;
    int64_t bob_term = -1;
    bool bob_before_alice = false;
    uint64_t f = 0;
    uint64_t d = 0;
    bool lemmas_pass = true;
    bool error = false;
    std::string error_text;

    std::string to_json() const;
};

struct CellAggregate {
    std::string scheme;
    int N = 0;
    uint64_t T = 0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    double mean_comm = 0.0;
    uint64_t max_comm = 0;
    int bob_before_alice = 0;
    int lemma_violations = 0;
    int errors = 0;

    static std::string csv_header();
    std::string csv_row() const;
};

// Everything a challenge-response trial needs, reproducible from one seed.
struct CRSetup {
    IndelRobustProtocol pi;
    Input x, y;
    NoisePattern pattern;
    uint64_t ceiling = 0;
    uint64_t inner_seed = 0;
};

CRSetup make_cr_setup(const ExperimentConfig& cfg, uint64_t T, uint64_t seed);
CRTrace run_cr_trial(const ExperimentConfig& cfg, const CRSetup& setup, uint64_t seed);

TrialResult run_trial(const ExperimentConfig& cfg, uint64_t T, uint64_t trial_index);
std::vector<TrialResult> run_cell(const ExperimentConfig& cfg, uint64_t T);
CellAggregate aggregate(const ExperimentConfig& cfg, uint64_t T,
                        const std::vector<TrialResult>& results);

// Subcommand bodies; return process exit codes (0 ok, 1 failed checks).
int cmd_run(const ExperimentConfig& cfg, std::ostream& log);
int cmd_analyze_trace(const std::string& path, std::ostream& out);
int cmd_codec_test(const std::vector<int>& ks, std::ostream& out);

// Least-squares slope of comm against T over (T, comm) points.
double fit_slope(const std::vector<std::pair<double, double>>& points);

} // namespace icsim
