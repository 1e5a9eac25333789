#pragma once

#include "icsim/channels.hpp"
#include "icsim/robust.hpp"

#include <functional>
#include <string>

namespace icsim {

// One direction of one challenge-response iteration. The wire carries the
// message symbol bits (most significant first) followed by the parity bit.
struct IterationHalf {
    int m_sent = 0;
    int parity_sent = 0;
    int m_received = 0; // erased bits decoded as 0; see m_erased
    int r_received = 0;
    bool m_erased = false;
    bool r_erased = false;
    std::vector<Corruption> m_flags;
    Corruption r_flag = Corruption::none;

    bool any_corruption() const;
    uint64_t flips() const;
    uint64_t erasures() const;
};

struct IterationRecord {
    uint64_t index = 0; // 1-based
    IterationHalf a2b;
    IterationHalf b2a;
    bool bob_resent = false;   // Bob rejected and replayed his stored message
    bool alice_progress = false;
    bool bob_progress = false;
    uint64_t ra_end = 0;
    uint64_t rb_end = 0;
};

struct CROutcome {
    std::vector<int> alice_output;
    std::vector<int> bob_output;
    std::vector<int> expected_output; // noiseless reference
    bool success = false;
    uint64_t ra = 0;
    uint64_t rb = 0;
    uint64_t total_bits = 0;
    bool aborted = false;
    std::string abort_reason;
};

struct CRTrace {
    int Nprime = 0;
    int k = 0; // bits per direction per iteration
    uint64_t f = 0;
    uint64_t d = 0;
    std::vector<IterationRecord> iterations;
    CROutcome outcome;

    // enough to rebuild the driving protocol for offline analysis
    uint64_t inner_seed = 0;
    int inner_n = 0;
    int inner_alphabet = 2;
    int repetition = 1;
    Input x, y;
    std::string pattern_json;

    std::string to_jsonl() const;
    static CRTrace from_jsonl(const std::string& text);
};

// Runs the challenge-response simulation of pi over a bit channel until
// Alice's counter reaches Nprime/2, then delivers the silence marker to Bob.
// ceiling > 0 aborts runaway executions after that many iterations.
CRTrace run_cr(const IndelRobustProtocol& pi, const Input& x, const Input& y,
               const BitChannel& channel, uint64_t ceiling);

// Bits needed to carry one symbol of an alphabet of the given size.
int symbol_bits(int alphabet);

} // namespace icsim
