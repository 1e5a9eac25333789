#pragma once

#include "icsim/channels.hpp"
#include "icsim/robust.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace icsim {

// Doubling schedule over the mixed flip/erase channel: iteration i spends
// 2*L(i) transmissions, L(i) = base_len * 2^i. Thresholds compare exactly
// against 0.001 * p_e * L(i) = L(i)/3000 at p_e = 1/3.
struct IterationParams {
    uint64_t base_len = 0;
    double p_e = 1.0 / 3.0;

    uint64_t L(int i) const { return base_len << i; }
    bool erasures_below(uint64_t count, int i) const { return count * 3000 < L(i); }
    bool ones_terminal(uint64_t ones, int i) const { return ones * 3000 <= L(i); }
    bool ones_valid(uint64_t ones, int i) const { return ones * 40 >= L(i); }
};

struct IterOutcome {
    int i = 0;
    uint64_t L = 0;
    uint64_t part1_erasures_alice = 0;
    uint64_t part1_erasures_bob = 0;
    uint64_t part2_erasures_alice = 0;
    uint64_t ones_received_by_bob = 0;
    bool bob_string_success = false; // Bob reported low erasures (sent the 0-string)
    uint64_t part2_zeros_alice = 0;
    uint64_t part2_ones_alice = 0;
    bool alice_terminated = false;
    bool bob_terminated = false;
    bool valid_for_bob = false;
    std::vector<int> alice_output;
    std::vector<int> bob_output;
};

// Part 1: a fresh run of the resilient protocol with 2^i-fold repetition per
// bit, majority decode (ties to 0, erased copies as 0). When alice_active is
// false her rounds are sourced as channel zeros and her side records nothing.
IterOutcome run_part1(int i, const SubstResilientProtocol& robust, const Input& x, const Input& y,
                      const BitChannel& ch, bool alice_active = true);

// Part 2: Bob floods his one-bit erasure report L(i) times; Alice tallies
// zeros, ones, and erasures of what she receives.
void run_part2(int i, IterOutcome& o, const IterationParams& prm, const BitChannel& ch,
               bool alice_active = true);

// Alice quits iff both parts stayed under the erasure threshold and the
// report decoded to strictly more zeros than ones (erasures count as neither).
bool alice_terminate(const IterOutcome& o, const IterationParams& prm);
// Bob quits iff part 1 stayed under the erasure threshold and carried at most
// L(i)/3000 ones.
bool bob_terminate(const IterOutcome& o, const IterationParams& prm);
// An iteration Bob may output from: low erasures, at least L(i)/40 ones.
bool bob_valid(const IterOutcome& o, const IterationParams& prm);

struct IterConfig {
    int max_iterations = 24;
};

struct IterRunResult {
    int N = 0;      // echoed by the caller
    uint64_t T = 0; // echoed by the caller
    std::vector<IterOutcome> iterations;
    int terminated_i_alice = -1;
    int terminated_i_bob = -1;
    uint64_t comm_bits = 0; // protocol-level transmissions, sum of 2*L(i)
    uint64_t wire_bits = 0; // equals comm_bits unless a lift inflates the wire
    std::vector<int> alice_output;
    std::vector<int> bob_output;
    std::vector<int> expected_output;
    bool alice_ok = false;
    bool bob_ok = false;
    bool success = false;
    bool no_output = false; // Bob quit with no prior valid iteration
    bool bob_before_alice = false;
    bool aborted = false;
    std::string abort_reason;

    std::string to_json() const;
};

IterRunResult run_iter(const SubstResilientProtocol& robust, const Input& x, const Input& y,
                       const BitChannel& ch, const IterConfig& cfg = {});

// 5-bit random code; words are 5 bits, most significant wire bit first.
extern const std::array<int, 3> rand5_zero_set; // 00000, 10000, 01000
extern const std::array<int, 3> rand5_one_set;  // 00100, 10010, 01001

int rand5_encode(int bit, Rng& rng);
int rand5_decode(int word); // 0, 1, or -1 for erasure

// Flip-only wire carrying each protocol-level bit as a fresh 5-bit codeword.
// Pattern indices address individual wire bits. wire_bits, when given,
// accumulates the raw transmission count.
BitChannel lift_rand5_over_uf(NoisePattern e, uint64_t seed,
                              std::shared_ptr<uint64_t> wire_bits = nullptr);

IterRunResult run_iter_uf(const SubstResilientProtocol& robust, const Input& x, const Input& y,
                          const NoisePattern& e, uint64_t seed, const IterConfig& cfg = {});

} // namespace icsim
