#include "icsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

namespace icsim {

using nlohmann::json;

NoisePattern make_pattern(const AdversarySpec& a, uint64_t T, uint64_t horizon, int k_block,
                          Rng& rng) {
    NoisePattern e;
    if (horizon == 0 || T == 0) return e;
    auto choose = [&](uint64_t idx, MChoice c) {
        e.rounds.insert(idx);
        e.choices[idx] = c;
    };
    if (a.name == "uniform") {
        while (e.rounds.size() < std::min(T, horizon)) {
            uint64_t idx = rng.below(horizon) + 1;
            if (e.rounds.count(idx)) continue;
            choose(idx, rng.unit() < 2.0 / 3.0 ? MChoice::flip : MChoice::erase);
        }
    } else if (a.name == "prefix_burst") {
        for (uint64_t i = 1; i <= std::min(T, horizon); ++i) choose(i, MChoice::flip);
    } else if (a.name == "per_iteration_budget") {
        uint64_t block = 2ULL * static_cast<uint64_t>(k_block);
        uint64_t budget = a.param >= 1.0 ? static_cast<uint64_t>(a.param) : 1;
        for (uint64_t start = 0; start < horizon && e.rounds.size() < T; start += block) {
            uint64_t placed = 0;
            while (placed < budget && e.rounds.size() < T) {
                uint64_t idx = start + rng.below(std::min(block, horizon - start)) + 1;
                if (e.rounds.count(idx)) continue;
                choose(idx, MChoice::flip);
                ++placed;
            }
        }
    } else if (a.name == "parity_targeting") {
        for (uint64_t i = 1; e.rounds.size() < T; ++i) {
            uint64_t idx = i * static_cast<uint64_t>(k_block);
            if (idx > horizon) break;
            choose(idx, MChoice::flip);
        }
    } else {
        throw std::invalid_argument("unknown adversary generator: " + a.name);
    }
    return e;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig c;
    if (j.contains("scheme")) c.scheme = j["scheme"];
    if (j.contains("channel")) c.channel = j["channel"];
    if (j.contains("N")) c.N = j["N"];
    if (j.contains("T_values")) c.T_values = j["T_values"].get<std::vector<uint64_t>>();
    if (j.contains("adversary")) {
        c.adversary.name = j["adversary"].value("name", c.adversary.name);
        c.adversary.param = j["adversary"].value("param", c.adversary.param);
    }
    if (j.contains("trials")) c.trials = j["trials"];
    if (j.contains("master_seed")) c.master_seed = j["master_seed"];
    if (j.contains("horizon")) c.horizon = j["horizon"];
    if (j.contains("C")) c.C = j["C"];
    if (j.contains("repetition")) c.repetition = j["repetition"];
    if (j.contains("analyze")) c.analyze = j["analyze"];
    if (j.contains("threads")) c.threads = j["threads"];
    if (j.contains("out")) c.out = j["out"];
    return c;
}

std::string ExperimentConfig::to_json() const {
    json j{{"scheme", scheme},
           {"channel", channel},
           {"N", N},
           {"T_values", T_values},
           {"adversary", json{{"name", adversary.name}, {"param", adversary.param}}},
           {"trials", trials},
           {"master_seed", master_seed},
           {"horizon", horizon},
           {"C", C},
           {"repetition", repetition},
           {"analyze", analyze},
           {"threads", threads},
           {"out", out}};
    return j.dump();
}

std::string TrialResult::to_json() const {
    json j{{"trial", trial},
           {"seed", seed},
           {"scheme", scheme},
           {"N", N},
           {"T", T},
           {"comm_bits", comm_bits},
           {"wire_bits", wire_bits},
           {"success", success},
           {"alice_term", alice_term},
           {"bob_term", bob_term},
           {"bob_before_alice", bob_before_alice},
           {"f", f},
           {"d", d},
           {"lemmas_pass", lemmas_pass},
           {"error", error},
           {"error_text", error_text}};
    return j.dump();
}

std::string CellAggregate::csv_header() {
    return "scheme,N,T,trials,successes,success_rate,mean_comm,max_comm,"
           "bob_before_alice,lemma_violations,errors";
}

std::string CellAggregate::csv_row() const {
    std::ostringstream s;
    s << scheme << ',' << N << ',' << T << ',' << trials << ',' << successes << ','
      << success_rate << ',' << mean_comm << ',' << max_comm << ',' << bob_before_alice << ','
      << lemma_violations << ',' << errors;
    return s.str();
}

namespace {

Input random_input(uint64_t seed, size_t len = 8) {
    Rng rng(seed);
    Input v(len);
    for (auto& b : v) b = static_cast<uint8_t>(rng.below(256));
    return v;
}

} // namespace

CRSetup make_cr_setup(const ExperimentConfig& cfg, uint64_t T, uint64_t seed) {
    CRSetup s;
    s.inner_seed = mix64(seed, 101);
    Protocol inner = make_random_protocol(s.inner_seed, cfg.N, 2);
    s.pi = toy_indel_robust(inner, cfg.repetition);
    s.x = random_input(mix64(seed, 102));
    s.y = random_input(mix64(seed, 103));
    const uint64_t k = static_cast<uint64_t>(symbol_bits(s.pi.alphabet_Sigma_prime)) + 1;
    const uint64_t nprime = static_cast<uint64_t>(s.pi.length_Nprime);
    uint64_t horizon = cfg.horizon ? cfg.horizon : 2 * k * (nprime / 2 + 2 * T + 8);
    Rng prng(mix64(seed, 104));
    s.pattern = make_pattern(cfg.adversary, T, horizon, static_cast<int>(k), prng);
    s.ceiling = 10 * (nprime + T) + 16;
    return s;
}

CRTrace run_cr_trial(const ExperimentConfig& cfg, const CRSetup& setup, uint64_t seed) {
    UPEFSchedule sched{cfg.C, setup.pi.length_Nprime};
    BitChannel ch;
    auto wire = std::make_shared<uint64_t>(0);
    if (cfg.scheme == "cr_uf") {
        NoisePattern wire_e = lift_pattern_to_wire(setup.pattern, sched, mix64(seed, 105));
        ch = compile_uf_channel(std::move(wire_e), sched, mix64(seed, 106), wire);
    } else if (cfg.channel == "upef") {
        ch = make_upef_bit_channel(setup.pattern, sched, mix64(seed, 106));
    } else if (cfg.channel == "mupef") {
        ch = make_mupef_bit_channel(setup.pattern, mix64(seed, 106));
    } else if (cfg.channel == "clean") {
        ch = make_clean_bit_channel();
    } else {
        throw std::invalid_argument("unknown channel kind: " + cfg.channel);
    }
    CRTrace t = run_cr(setup.pi, setup.x, setup.y, ch, setup.ceiling);
    t.inner_seed = setup.inner_seed;
    t.inner_n = cfg.N;
    t.inner_alphabet = 2;
    t.repetition = cfg.repetition;
    t.x = setup.x;
    t.y = setup.y;
    t.pattern_json = setup.pattern.to_json();
    if (cfg.scheme == "cr_uf") t.outcome.total_bits = *wire;
    return t;
}

TrialResult run_trial(const ExperimentConfig& cfg, uint64_t T, uint64_t trial_index) {
    TrialResult r;
    r.trial = trial_index;
    r.seed = mix64(trial_seed(cfg.master_seed, trial_index), T);
    r.scheme = cfg.scheme;
    r.N = cfg.N;
    r.T = T;
    try {
        if (cfg.scheme == "cr" || cfg.scheme == "cr_uf") {
            CRSetup setup = make_cr_setup(cfg, T, r.seed);
            CRTrace t = run_cr_trial(cfg, setup, r.seed);
            r.comm_bits = 2ULL * static_cast<uint64_t>(t.k) * t.iterations.size();
            r.wire_bits = t.outcome.total_bits;
            r.success = t.outcome.success;
            r.alice_term = static_cast<int64_t>(t.outcome.ra);
            r.bob_term = static_cast<int64_t>(t.outcome.rb);
            r.f = t.f;
            r.d = t.d;
            if (cfg.analyze) {
                LemmaReport rep = check_lemmas(t);
                r.lemmas_pass = rep.all_pass;
                if (cfg.scheme == "cr") {
                    IndelRobustProtocol pi = rebuild_protocol(t);
                    ReplayResult rr = build_matching_execution(t, pi);
                    r.lemmas_pass = r.lemmas_pass && rr.transcripts_match &&
                                    rr.c <= 2 * rr.f && rr.per_frame_bound;
                }
            }
        } else if (cfg.scheme == "iter" || cfg.scheme == "iter_uf") {
            uint64_t inner_seed = mix64(r.seed, 101);
            Protocol inner = make_random_protocol(inner_seed, cfg.N, 2);
            SubstResilientProtocol robust = make_subst_resilient(inner);
            Input x = random_input(mix64(r.seed, 102));
            Input y = random_input(mix64(r.seed, 103));
            const uint64_t L0 = static_cast<uint64_t>(robust.length);
            uint64_t scale = cfg.scheme == "iter_uf" ? 5 : 1;
            uint64_t horizon = cfg.horizon ? cfg.horizon : scale * (4 * L0 + 24 * T);
            Rng prng(mix64(r.seed, 104));
            NoisePattern e = make_pattern(cfg.adversary, T, horizon, 1, prng);
            IterRunResult res;
            if (cfg.scheme == "iter_uf")
                res = run_iter_uf(robust, x, y, e, mix64(r.seed, 106));
            else
                res = run_iter(robust, x, y, make_mupef_bit_channel(e, mix64(r.seed, 106)));
            r.comm_bits = res.comm_bits;
            r.wire_bits = res.wire_bits;
            r.success = res.success;
            r.alice_term = res.terminated_i_alice;
            r.bob_term = res.terminated_i_bob;
            r.bob_before_alice = res.bob_before_alice;
        } else {
            throw std::invalid_argument("unknown scheme: " + cfg.scheme);
        }
    } catch (const std::exception& ex) {
        r.error = true;
        r.error_text = ex.what();
        r.success = false;
    }
    return r;
}

std::vector<TrialResult> run_cell(const ExperimentConfig& cfg, uint64_t T) {
    const int trials = cfg.trials;
    std::vector<TrialResult> results(static_cast<size_t>(trials));
    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max(trials, 1)));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= trials) break;
            results[static_cast<size_t>(i)] = run_trial(cfg, T, static_cast<uint64_t>(i));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t + 1 < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return results;
}

CellAggregate aggregate(const ExperimentConfig& cfg, uint64_t T,
                        const std::vector<TrialResult>& results) {
    CellAggregate a;
    a.scheme = cfg.scheme;
    a.N = cfg.N;
    a.T = T;
    a.trials = static_cast<int>(results.size());
    double comm_sum = 0.0;
    for (const auto& r : results) {
        if (r.success) ++a.successes;
        comm_sum += static_cast<double>(r.comm_bits);
        a.max_comm = std::max(a.max_comm, r.comm_bits);
        if (r.bob_before_alice) ++a.bob_before_alice;
        if (!r.lemmas_pass) ++a.lemma_violations;
        if (r.error) ++a.errors;
    }
    if (a.trials > 0) {
        a.success_rate = static_cast<double>(a.successes) / a.trials;
        a.mean_comm = comm_sum / a.trials;
    }
    return a;
}

int cmd_run(const ExperimentConfig& cfg, std::ostream& log) {
    std::ofstream jsonl(cfg.out + ".jsonl");
    std::ofstream csv(cfg.out + ".csv");
    if (!jsonl || !csv) {
        log << "cannot open output files at prefix: " << cfg.out << "\n";
        return 2;
    }
    jsonl << cfg.to_json() << "\n";
    csv << CellAggregate::csv_header() << "\n";
    for (uint64_t T : cfg.T_values) {
        auto results = run_cell(cfg, T);
        for (const auto& r : results) jsonl << r.to_json() << "\n";
        CellAggregate a = aggregate(cfg, T, results);
        csv << a.csv_row() << "\n";
        log << "T=" << T << " success_rate=" << a.success_rate << " mean_comm=" << a.mean_comm
            << " errors=" << a.errors << "\n";
    }
    return 0;
}

int cmd_analyze_trace(const std::string& path, std::ostream& out) {
    std::ifstream in(path);
    if (!in) {
        out << "cannot open trace file: " << path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    CRTrace t;
    try {
        t = CRTrace::from_jsonl(buf.str());
    } catch (const std::exception& ex) {
        out << ex.what() << "\n";
        return 2;
    }
    Decomposition d = decompose(t);
    LemmaReport rep = check_lemmas(t);
    json summary{{"iterations", t.iterations.size()},
                 {"analysis_end", d.analysis_end},
                 {"sequences", d.sequences.size()},
                 {"frames", d.frames.size()},
                 {"segments", d.segments.size()},
                 {"artificial_appended", d.artificial_appended},
                 {"decomposition_complete", d.complete}};
    bool ok = rep.all_pass && d.complete;
    try {
        IndelRobustProtocol pi = rebuild_protocol(t);
        ReplayResult rr = build_matching_execution(t, pi);
        summary["replay"] = json{{"transcripts_match", rr.transcripts_match},
                                 {"c", rr.c},
                                 {"f", rr.f},
                                 {"c_le_2f", rr.c <= 2 * rr.f},
                                 {"per_frame_bound", rr.per_frame_bound}};
        ok = ok && rr.transcripts_match && rr.c <= 2 * rr.f && rr.per_frame_bound;
    } catch (const std::exception& ex) {
        summary["replay_error"] = ex.what();
        ok = false;
    }
    out << summary.dump() << "\n";
    out << json::parse(rep.to_json()).dump() << "\n";
    return ok ? 0 : 1;
}

int cmd_codec_test(const std::vector<int>& ks, std::ostream& out) {
    bool ok = true;

    // 5-bit random code: every nonzero offset must erase at least 1 of the
    // 3 codewords for both bit values.
    bool rand5_ok = true;
    for (int delta = 1; delta < 32 && rand5_ok; ++delta) {
        for (int bit = 0; bit <= 1; ++bit) {
            const auto& set = bit ? rand5_one_set : rand5_zero_set;
            int erased = 0;
            for (int cw : set)
                if (rand5_decode(cw ^ delta) < 0) ++erased;
            if (erased < 1) rand5_ok = false;
        }
    }
    out << "rand5: erasure-prob >= 1/3 for all 31 offsets: " << (rand5_ok ? "PASS" : "FAIL")
        << "\n";
    ok = ok && rand5_ok;

    // Exhaustive detecting-code sweep at k=4.
    {
        AMDCodec codec(4);
        int worst = 0;
        for (uint64_t sv = 0; sv < 16; ++sv) {
            for (uint64_t delta = 1; delta < (1ULL << 12); ++delta) {
                uint64_t ds = delta >> 8, dx = (delta >> 4) & 0xF, dt = delta & 0xF;
                int miss = 0;
                for (uint64_t xv = 0; xv < 16; ++xv) {
                    AMDCodec::Word w{sv ^ ds, xv ^ dx, codec.tag(sv, xv) ^ dt};
                    auto dec = codec.decode(w);
                    if (dec && *dec != sv) ++miss;
                }
                worst = std::max(worst, miss);
            }
        }
        bool amd_ok = worst <= 2;
        out << "amd k=4: worst miss count over x = " << worst << "/16 (bound 2/16): "
            << (amd_ok ? "PASS" : "FAIL") << "\n";
        ok = ok && amd_ok;
    }

    for (int k : ks) {
        Rng rng(mix64(0xC0DEC, static_cast<uint64_t>(k)));
        AMDCodec codec(k);
        uint64_t s = rng.next_u64() & ((k == 64 ? ~0ULL : (1ULL << k) - 1));
        uint64_t x = rng.next_u64() & ((k == 64 ? ~0ULL : (1ULL << k) - 1));
        out << amd_test_vector_json(k, s, x) << "\n";
        AMDCodec::Word w{s, x, codec.tag(s, x)};
        auto dec = codec.decode(w);
        if (!dec || *dec != s) {
            out << "amd k=" << k << ": round-trip FAIL\n";
            ok = false;
        }
    }
    return ok ? 0 : 1;
}

double fit_slope(const std::vector<std::pair<double, double>>& points) {
    double n = static_cast<double>(points.size());
    if (points.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

} // namespace icsim
