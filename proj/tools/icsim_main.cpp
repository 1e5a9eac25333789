#include "icsim/harness.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int load_config(const std::string& path, icsim::ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open config file: " << path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        cfg = icsim::ExperimentConfig::from_json(buf.str());
    } catch (const std::exception& ex) {
        std::cerr << "config parse error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"interactive-coding simulation harness"};
    app.require_subcommand(1);

    std::string config_path;
    icsim::ExperimentConfig cfg;
    bool seed_set = false, trials_set = false, out_set = false;
    uint64_t seed = 0;
    int trials = 0;
    std::string out_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON experiment config");
        cmd->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--trials", trials, "trials per cell")->each([&](const std::string&) {
            trials_set = true;
        });
        cmd->add_option("--out", out_path, "output path prefix")->each([&](const std::string&) {
            out_set = true;
        });
    };

    auto* run = app.add_subcommand("run", "run one experiment cell");
    add_common(run);
    std::string scheme = "cr", channel = "upef", adversary = "uniform";
    int N = 64;
    uint64_t T = 0;
    bool analyze = false;
    run->add_option("--scheme", scheme, "cr | cr_uf | iter | iter_uf");
    run->add_option("--channel", channel, "upef | mupef | clean");
    run->add_option("--N", N, "inner protocol length");
    run->add_option("--T", T, "corruption budget");
    run->add_option("--adversary", adversary, "pattern generator name");
    run->add_flag("--analyze", analyze, "run trace checkers per trial");

    auto* sweep = app.add_subcommand("sweep", "run a T sweep");
    add_common(sweep);
    std::string sweep_scheme = "iter", sweep_adversary = "uniform";
    int sweep_N = 64;
    std::vector<uint64_t> T_values;
    sweep->add_option("--scheme", sweep_scheme, "cr | cr_uf | iter | iter_uf");
    sweep->add_option("--N", sweep_N, "inner protocol length");
    sweep->add_option("--T", T_values, "corruption budgets")->expected(-1);
    sweep->add_option("--adversary", sweep_adversary, "pattern generator name");

    auto* analyze_cmd = app.add_subcommand("analyze-trace", "check a serialized trace");
    std::string trace_path;
    analyze_cmd->add_option("trace", trace_path, "JSONL trace file")->required();

    auto* codec = app.add_subcommand("codec-test", "codec enumerations and vectors");
    std::vector<int> ks{4, 8, 16};
    codec->add_option("--k", ks, "field sizes for test vectors")->expected(-1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (!config_path.empty()) {
        int rc = load_config(config_path, cfg);
        if (rc != 0) return rc;
    }
    if (seed_set) cfg.master_seed = seed;
    if (trials_set) cfg.trials = trials;
    if (out_set) cfg.out = out_path;

    try {
        if (run->parsed()) {
            if (config_path.empty()) {
                cfg.scheme = scheme;
                cfg.channel = channel;
                cfg.N = N;
                cfg.T_values = {T};
                cfg.adversary.name = adversary;
                cfg.analyze = analyze;
            }
            return icsim::cmd_run(cfg, std::cout);
        }
        if (sweep->parsed()) {
            if (config_path.empty()) {
                cfg.scheme = sweep_scheme;
                cfg.N = sweep_N;
                cfg.T_values = T_values.empty() ? std::vector<uint64_t>{0, 64, 256, 1024}
                                                : T_values;
                cfg.adversary.name = sweep_adversary;
            }
            return icsim::cmd_run(cfg, std::cout);
        }
        if (analyze_cmd->parsed()) return icsim::cmd_analyze_trace(trace_path, std::cout);
        if (codec->parsed()) return icsim::cmd_codec_test(ks, std::cout);
    } catch (const std::invalid_argument& ex) {
        std::cerr << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << ex.what() << "\n";
        return 1;
    }
    return 2;
}
