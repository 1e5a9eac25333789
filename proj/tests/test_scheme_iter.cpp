#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icsim/scheme_iter.hpp"

#include <map>
#include <memory>

using namespace icsim;

namespace {

SubstResilientProtocol make_robust(uint64_t seed, int n) {
    return make_subst_resilient(make_random_protocol(seed, n, 2));
}

BitChannel scripted_channel(std::map<uint64_t, Corruption> script) {
    auto st = std::make_shared<std::pair<std::map<uint64_t, Corruption>, uint64_t>>(
        std::move(script), 0);
    return [st](int bit) {
        uint64_t idx = ++st->second;
        WireResult r{sym_of_bit(bit), Corruption::none, idx};
        auto it = st->first.find(idx);
        if (it == st->first.end()) return r;
        r.kind = it->second;
        r.value = it->second == Corruption::flip ? sym_of_bit(1 - bit) : Sym::erased;
        return r;
    };
}

} // namespace

TEST_CASE("doubling schedule and exact thresholds") {
    IterationParams prm{3000};
    CHECK(prm.L(0) == 3000);
    CHECK(prm.L(3) == 24000);
    // threshold at i=0 is exactly 1; the comparison is strict
    CHECK_FALSE(prm.erasures_below(1, 0));
    CHECK(prm.erasures_below(0, 0));
    CHECK(prm.erasures_below(1, 1));
    CHECK(prm.ones_terminal(1, 0));
    CHECK_FALSE(prm.ones_terminal(2, 0));
    CHECK(prm.ones_valid(75, 0));
    CHECK_FALSE(prm.ones_valid(74, 0));
}

TEST_CASE("zero noise: Alice quits immediately, Bob one iteration later") {
    SubstResilientProtocol robust = make_robust(91, 16);
    IterRunResult r = run_iter(robust, {1}, {2}, make_clean_bit_channel());
    CHECK(r.terminated_i_alice == 0);
    CHECK(r.terminated_i_bob == 1);
    CHECK(r.success);
    CHECK_FALSE(r.bob_before_alice);
    CHECK(r.comm_bits == 2ULL * robust.length + 4ULL * robust.length);
    CHECK(r.alice_output == r.expected_output);
    CHECK(r.bob_output == r.expected_output);
}

TEST_CASE("clean first part runs the resilient protocol exactly") {
    SubstResilientProtocol robust = make_robust(91, 16);
    IterOutcome o = run_part1(0, robust, {1}, {2}, make_clean_bit_channel());
    auto [wa, wb] = run_noiseless(robust.wrapped, {1}, {2});
    CHECK(o.part1_erasures_alice == 0);
    CHECK(o.part1_erasures_bob == 0);
    CHECK(o.alice_output == robust.output(wa));
    CHECK(o.bob_output == robust.output(wb));
    // Alice speaks half the rounds and at least an eighth of them carry a 1
    CHECK(o.ones_received_by_bob * 8 >= static_cast<uint64_t>(robust.length));
}

TEST_CASE("two-copy majority counts erased copies as zeros") {
    // One round, repetition 2: enumerate what reaches the decoder.
    SubstResilientProtocol robust = make_robust(91, 16);
    // Erase the first copy of the first bit at i=1; the surviving copy alone
    // must beat the tie rule to decode a 1.
    IterOutcome o = run_part1(1, robust, {1}, {2}, scripted_channel({{1, Corruption::erase}}));
    CHECK(o.part1_erasures_bob == 1);
    // Tie arithmetic: with 2 copies, one erased-as-zero and one equal to 1,
    // 2*ones == copies, so the decode defaults to 0.
    IterationParams prm{static_cast<uint64_t>(robust.length)};
    CHECK(prm.L(1) == 2ULL * robust.length);
}

TEST_CASE("part 2 reports and decodes the erasure verdict") {
    SubstResilientProtocol robust = make_robust(91, 16);
    IterationParams prm{static_cast<uint64_t>(robust.length)};
    IterOutcome o = run_part1(0, robust, {1}, {2}, make_clean_bit_channel());
    run_part2(0, o, prm, make_clean_bit_channel());
    CHECK(o.bob_string_success);
    CHECK(o.part2_zeros_alice == prm.L(0));
    CHECK(o.part2_ones_alice == 0);
    CHECK(alice_terminate(o, prm));
    CHECK_FALSE(bob_terminate(o, prm)); // Alice's genuine ones block him
    CHECK(bob_valid(o, prm));
}

TEST_CASE("part-2 ties decode to error") {
    IterationParams prm{4};
    IterOutcome o;
    o.i = 0;
    o.L = 4;
    o.part2_zeros_alice = 2;
    o.part2_ones_alice = 2;
    CHECK_FALSE(alice_terminate(o, prm));
    o.part2_zeros_alice = 3;
    o.part2_ones_alice = 1;
    CHECK(alice_terminate(o, prm));
}

TEST_CASE("Bob reports no output when no valid iteration precedes his quit") {
    SubstResilientProtocol robust = make_robust(91, 16);
    // Erase every bit Bob receives in part 1 of iteration 0 (Alice speaks the
    // odd wrapped rounds, wire index = round at i=0), making it invalid, then
    // force his part-1 view of later iterations quiet is impractical; instead
    // check the rule directly on a crafted history.
    IterationParams prm{static_cast<uint64_t>(robust.length)};
    IterOutcome bad;
    bad.i = 0;
    bad.L = prm.L(0);
    bad.part1_erasures_bob = bad.L; // invalid and non-terminal
    CHECK_FALSE(bob_valid(bad, prm));
    CHECK_FALSE(bob_terminate(bad, prm));
}

TEST_CASE("heavy early noise still simulates correctly most of the time") {
    Rng rng(606);
    int good = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        SubstResilientProtocol robust = make_robust(rng.next_u64(), 64);
        uint64_t T = rng.below(513);
        NoisePattern e;
        uint64_t horizon = 4ULL * robust.length + 24 * T;
        while (e.rounds.size() < T) {
            uint64_t idx = rng.below(horizon) + 1;
            e.rounds.insert(idx);
            e.choices[idx] = rng.below(2) ? MChoice::flip : MChoice::erase;
        }
        IterRunResult r = run_iter(robust, {1}, {2}, make_mupef_bit_channel(e, rng.next_u64()));
        if (r.success) ++good;
        CHECK_FALSE(r.bob_before_alice);
    }
    CHECK(good >= trials * 99 / 100);
}

TEST_CASE("rand5 decode membership") {
    CHECK(rand5_decode(0b00000) == 0);
    CHECK(rand5_decode(0b10000) == 0);
    CHECK(rand5_decode(0b01000) == 0);
    CHECK(rand5_decode(0b00100) == 1);
    CHECK(rand5_decode(0b10010) == 1);
    CHECK(rand5_decode(0b01001) == 1);
    CHECK(rand5_decode(0b11111) == -1);
}

TEST_CASE("rand5 round-trips and erases under every nonzero offset") {
    Rng rng(7);
    for (int b = 0; b <= 1; ++b)
        for (int i = 0; i < 100; ++i) CHECK(rand5_decode(rand5_encode(b, rng)) == b);

    for (int delta = 1; delta < 32; ++delta) {
        for (int b = 0; b <= 1; ++b) {
            const auto& set = b ? rand5_one_set : rand5_zero_set;
            int erased = 0;
            for (int cw : set)
                if (rand5_decode(cw ^ delta) < 0) ++erased;
            CHECK(erased >= 1); // probability >= 1/3 over the codeword choice
        }
    }
}

TEST_CASE("noiseless lift behaves like the bare run at five times the bits") {
    SubstResilientProtocol robust = make_robust(91, 16);
    IterRunResult bare = run_iter(robust, {1}, {2}, make_clean_bit_channel());
    IterRunResult lifted = run_iter_uf(robust, {1}, {2}, {}, 42);
    CHECK(lifted.success);
    CHECK(lifted.terminated_i_alice == bare.terminated_i_alice);
    CHECK(lifted.terminated_i_bob == bare.terminated_i_bob);
    CHECK(lifted.comm_bits == bare.comm_bits);
    CHECK(lifted.wire_bits == 5 * lifted.comm_bits);
}

TEST_CASE("a flip inside a code block lands on same, other, or erased") {
    Rng rng(11);
    for (int delta = 1; delta < 32; ++delta) {
        for (int b = 0; b <= 1; ++b) {
            const auto& set = b ? rand5_one_set : rand5_zero_set;
            for (int cw : set) {
                int dec = rand5_decode(cw ^ delta);
                CHECK((dec == 0 || dec == 1 || dec == -1));
            }
        }
    }
    (void)rng;
}

TEST_CASE("per-run JSON summary carries the termination fields") {
    SubstResilientProtocol robust = make_robust(91, 16);
    IterRunResult r = run_iter(robust, {1}, {2}, make_clean_bit_channel());
    r.N = 16;
    r.T = 0;
    std::string j = r.to_json();
    CHECK(j.find("terminated_i_A") != std::string::npos);
    CHECK(j.find("terminated_i_B") != std::string::npos);
    CHECK(j.find("comm_bits") != std::string::npos);
}

TEST_CASE("the iteration ceiling aborts runaway executions") {
    SubstResilientProtocol robust = make_robust(91, 16);
    // Erase everything forever.
    BitChannel ch = [](int) {
        return WireResult{Sym::erased, Corruption::erase, 0};
    };
    IterConfig cfg;
    cfg.max_iterations = 3;
    IterRunResult r = run_iter(robust, {1}, {2}, ch, cfg);
    CHECK(r.aborted);
    CHECK_FALSE(r.success);
}
