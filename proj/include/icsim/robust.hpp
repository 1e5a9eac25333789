#pragma once

#include "icsim/proto.hpp"

namespace icsim {

// Repetition-with-majority wrapper standing in for an insertion-deletion
// robust protocol. Each inner exchange (one Alice round + one Bob round)
// is carried by a block of 2*repetition alternating rounds; the receiver
// decodes by majority over the copies seen so far. Resilient only to
// corruption bounded per block, not to an arbitrary delta-fraction.
struct IndelRobustProtocol {
    Protocol inner;
    Protocol wrapped; // alternating, length_Nprime rounds over Sigma'
    int length_Nprime = 0;
    int alphabet_Sigma_prime = 2;
    int repetition = 1;
    double delta = 1.0 / 45.0;
    double epsilon = 1.0 / 1980.0;
    // Decodes a wrapped transcript back to the inner symbol sequence.
    std::function<std::vector<int>(const Transcript&)> output;
    // Flags any block whose received copies disagree (conservative: fires
    // on a single in-budget substitution too).
    std::function<bool(const Transcript&)> budget_exceeded;
};

IndelRobustProtocol toy_indel_robust(const Protocol& p, int repetition);

// Binary alternating wrapper with a forced 1 in every fourth round of each
// party, so Alice transmits at least length/8 ones in every execution.
// Data rounds carry each inner bit three times, decoded by majority.
struct SubstResilientProtocol {
    Protocol inner;
    Protocol wrapped; // binary alternating, `length` rounds
    int length = 0;
    double resilience_fraction = 0.1;
    double ones_density_floor = 0.125;
    std::function<std::vector<int>(const Transcript&)> output;
};

SubstResilientProtocol make_subst_resilient(const Protocol& p);

} // namespace icsim
