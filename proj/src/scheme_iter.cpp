#include "icsim/scheme_iter.hpp"

#include <algorithm>
#include <json.hpp>

namespace icsim {

IterOutcome run_part1(int i, const SubstResilientProtocol& robust, const Input& x, const Input& y,
                      const BitChannel& ch, bool alice_active) {
    IterationParams prm{static_cast<uint64_t>(robust.length)};
    IterOutcome o;
    o.i = i;
    o.L = prm.L(i);
    const uint64_t copies = 1ULL << i;

    Transcript ta, tb;
    for (int r = 1; r <= robust.length; ++r) {
        Party sp = robust.wrapped.speaker[r - 1];
        int bit;
        if (sp == Party::Alice)
            bit = alice_active ? robust.wrapped.next_symbol(x, ta) : 0;
        else
            bit = robust.wrapped.next_symbol(y, tb);

        uint64_t ones = 0, erased = 0;
        for (uint64_t c = 0; c < copies; ++c) {
            WireResult w = ch(bit);
            if (w.value == Sym::erased)
                ++erased;
            else
                ones += bit_of_sym(w.value);
        }
        int decoded = 2 * ones > copies ? 1 : 0;

        if (sp == Party::Alice) {
            if (alice_active) ta.append_sent(bit);
            tb.append_received(decoded);
            o.part1_erasures_bob += erased;
            o.ones_received_by_bob += ones;
        } else {
            tb.append_sent(bit);
            if (alice_active) {
                ta.append_received(decoded);
                o.part1_erasures_alice += erased;
            }
        }
    }
    if (alice_active) o.alice_output = robust.output(ta);
    o.bob_output = robust.output(tb);
    return o;
}

void run_part2(int i, IterOutcome& o, const IterationParams& prm, const BitChannel& ch,
               bool alice_active) {
    o.bob_string_success = prm.erasures_below(o.part1_erasures_bob, i);
    const int bit = o.bob_string_success ? 0 : 1;
    const uint64_t L = prm.L(i);
    for (uint64_t l = 0; l < L; ++l) {
        WireResult w = ch(bit);
        if (!alice_active) continue;
        if (w.value == Sym::erased)
            ++o.part2_erasures_alice;
        else if (bit_of_sym(w.value) == 0)
            ++o.part2_zeros_alice;
        else
            ++o.part2_ones_alice;
    }
}

bool alice_terminate(const IterOutcome& o, const IterationParams& prm) {
    return prm.erasures_below(o.part1_erasures_alice, o.i) &&
           prm.erasures_below(o.part2_erasures_alice, o.i) &&
           o.part2_zeros_alice > o.part2_ones_alice;
}

bool bob_terminate(const IterOutcome& o, const IterationParams& prm) {
    return prm.erasures_below(o.part1_erasures_bob, o.i) &&
           prm.ones_terminal(o.ones_received_by_bob, o.i);
}

bool bob_valid(const IterOutcome& o, const IterationParams& prm) {
    return prm.erasures_below(o.part1_erasures_bob, o.i) &&
           prm.ones_valid(o.ones_received_by_bob, o.i);
}

IterRunResult run_iter(const SubstResilientProtocol& robust, const Input& x, const Input& y,
                       const BitChannel& ch, const IterConfig& cfg) {
    IterationParams prm{static_cast<uint64_t>(robust.length)};
    IterRunResult r;

    auto [ref_a, ref_b] = run_noiseless(robust.wrapped, x, y);
    r.expected_output = robust.output(ref_a);

    bool alice_active = true;
    bool have_valid = false;
    std::vector<int> last_valid_output;

    for (int i = 0;; ++i) {
        if (i > cfg.max_iterations) {
            r.aborted = true;
            r.abort_reason = "iteration ceiling exceeded";
            break;
        }
        IterOutcome o = run_part1(i, robust, x, y, ch, alice_active);
        run_part2(i, o, prm, ch, alice_active);
        r.comm_bits += 2 * prm.L(i);

        if (alice_active && alice_terminate(o, prm)) {
            o.alice_terminated = true;
            r.terminated_i_alice = i;
            r.alice_output = o.alice_output;
        }
        o.bob_terminated = bob_terminate(o, prm);
        o.valid_for_bob = bob_valid(o, prm);
        r.iterations.push_back(o);

        if (o.bob_terminated) {
            r.terminated_i_bob = i;
            if (alice_active && !o.alice_terminated) r.bob_before_alice = true;
            if (have_valid)
                r.bob_output = last_valid_output;
            else
                r.no_output = true;
            break;
        }
        if (o.valid_for_bob) {
            have_valid = true;
            last_valid_output = o.bob_output;
        }
        if (o.alice_terminated) alice_active = false;
    }

    r.wire_bits = r.comm_bits;
    r.alice_ok = r.terminated_i_alice >= 0 && r.alice_output == r.expected_output;
    r.bob_ok = r.terminated_i_bob >= 0 && !r.no_output && r.bob_output == r.expected_output;
    r.success = !r.aborted && r.alice_ok && r.bob_ok;
    return r;
}

std::string IterRunResult::to_json() const {
    nlohmann::json its = nlohmann::json::array();
    for (const auto& o : iterations)
        its.push_back({{"i", o.i},
                       {"L", o.L},
                       {"p1_er_a", o.part1_erasures_alice},
                       {"p1_er_b", o.part1_erasures_bob},
                       {"p2_er_a", o.part2_erasures_alice},
                       {"ones_b", o.ones_received_by_bob},
                       {"bob_success_string", o.bob_string_success},
                       {"alice_terminated", o.alice_terminated},
                       {"bob_terminated", o.bob_terminated},
                       {"valid", o.valid_for_bob}});
    nlohmann::json j{{"N", N},
                     {"T", T},
                     {"iterations", its},
                     {"comm_bits", comm_bits},
                     {"wire_bits", wire_bits},
                     {"alice_ok", alice_ok},
                     {"bob_ok", bob_ok},
                     {"terminated_i_A", terminated_i_alice},
                     {"terminated_i_B", terminated_i_bob},
                     {"success", success},
                     {"no_output", no_output},
                     {"bob_before_alice", bob_before_alice},
                     {"aborted", aborted}};
    return j.dump();
}

const std::array<int, 3> rand5_zero_set{0b00000, 0b10000, 0b01000};
const std::array<int, 3> rand5_one_set{0b00100, 0b10010, 0b01001};

int rand5_encode(int bit, Rng& rng) {
    const auto& set = bit ? rand5_one_set : rand5_zero_set;
    return set[static_cast<size_t>(rng.below(3))];
}

int rand5_decode(int word) {
    for (int w : rand5_zero_set)
        if (w == word) return 0;
    for (int w : rand5_one_set)
        if (w == word) return 1;
    return -1;
}

BitChannel lift_rand5_over_uf(NoisePattern e, uint64_t seed, std::shared_ptr<uint64_t> wire_bits) {
    struct State {
        NoisePattern e;
        Rng rng;
        uint64_t wire_index = 0;
        uint64_t symbol_index = 0;
        std::shared_ptr<uint64_t> wire_bits;
        State(NoisePattern p, uint64_t s, std::shared_ptr<uint64_t> w)
            : e(std::move(p)), rng(s), wire_bits(std::move(w)) {}
    };
    auto st = std::make_shared<State>(std::move(e), seed, std::move(wire_bits));
    return [st](int bit) {
        int word = rand5_encode(bit, st->rng);
        int received = 0;
        for (int b = 4; b >= 0; --b) {
            ++st->wire_index;
            received = (received << 1) | transmit_uf((word >> b) & 1, st->wire_index, st->e);
        }
        if (st->wire_bits) *st->wire_bits += 5;
        ++st->symbol_index;
        int dec = rand5_decode(received);
        WireResult r;
        r.index = st->symbol_index;
        if (dec < 0) {
            r.value = Sym::erased;
            r.kind = Corruption::erase;
        } else {
            r.value = sym_of_bit(dec);
            r.kind = dec == bit ? Corruption::none : Corruption::flip;
        }
        return r;
    };
}

IterRunResult run_iter_uf(const SubstResilientProtocol& robust, const Input& x, const Input& y,
                          const NoisePattern& e, uint64_t seed, const IterConfig& cfg) {
    auto wire = std::make_shared<uint64_t>(0);
    IterRunResult r = run_iter(robust, x, y, lift_rand5_over_uf(e, seed, wire), cfg);
    r.wire_bits = *wire;
    return r;
}

} // namespace icsim
