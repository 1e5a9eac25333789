#pragma once

#include "icsim/amd.hpp"
#include "icsim/channels.hpp"

#include <deque>
#include <memory>

namespace icsim {

// Bits of the detecting code protecting round i at the schedule's p(i).
int compiled_k(const UPEFSchedule& s, uint64_t round);

// Total wire bits spent on the first `rounds` protocol rounds: sum of 3*k_i.
uint64_t compiled_wire_bits(const UPEFSchedule& s, uint64_t rounds);

// Flip-only wire carrying each protocol-level bit as a fresh 3*k_i-bit
// detecting codeword; decoding yields {0, 1, erased} back at the protocol
// level. Pattern indices address individual wire bits. Throws when more than
// `horizon` protocol rounds are pushed through.
BitChannel compile_uf_channel(NoisePattern e_wire, UPEFSchedule s, uint64_t seed,
                              std::shared_ptr<uint64_t> wire_bits = nullptr,
                              uint64_t horizon = 1ULL << 22);

// Translates a protocol-level corruption set into wire-level flips: each
// targeted round i gets a uniformly random nonzero offset over its codeword's
// 3*k_i wire positions, chosen obliviously from the given seed.
NoisePattern lift_pattern_to_wire(const NoisePattern& e_pi, const UPEFSchedule& s, uint64_t seed);

// Receiver-side quit rule: at the start of each round where the peer is the
// sender, open a window over the next window_len(N, round) received wire
// bits; quit at the first window that is all zeros (or, in the relaxed
// variant, at least `fraction` zeros).
class ZeroRunMonitor {
public:
    explicit ZeroRunMonitor(int N, bool relaxed = false, double fraction = 0.9)
        : N_(N), relaxed_(relaxed), fraction_(fraction) {}

    static uint64_t window_len(int N, uint64_t round);

    void begin_sender_round(uint64_t round);
    void observe(int bit);
    bool terminated() const { return terminated_; }

private:
    struct Window {
        uint64_t remaining = 0;
        uint64_t zeros = 0;
        uint64_t len = 0;
    };
    int N_;
    bool relaxed_;
    double fraction_;
    bool terminated_ = false;
    std::deque<Window> windows_;
};

} // namespace icsim
