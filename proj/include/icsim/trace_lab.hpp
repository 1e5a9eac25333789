#pragma once

#include "icsim/scheme_cr.hpp"

#include <string>
#include <vector>

namespace icsim {

enum class ProgressKind : uint8_t {
    same_progress,
    substitution,
    insertion_alice,
    insertion_bob,
    no_progress
};
std::string progress_name(ProgressKind k);

// Maximal span of iterations with the parties' counters in parity agreement
// at the start and at the end, but nowhere strictly inside.
struct SequenceSpan {
    uint64_t first = 0;
    uint64_t last = 0;
    bool good = false; // Alice progresses at `last`
    bool has_progress = false;
};

// Run of bad sequences capped by a good one; the reduction unit.
struct FrameSpan {
    uint64_t first = 0; // first iteration
    uint64_t last = 0;  // last iteration
    size_t first_seq = 0;
    size_t last_seq = 0;
};

// Alice-progress anchor plus the Bob insertions feeding it.
struct SegmentSpan {
    uint64_t first = 0;
    uint64_t last = 0; // Alice progresses exactly here
    int type = 1;      // 1: lone Alice insert; 2: joint progress; 3,4: with Bob inserts
    std::vector<uint64_t> bob_inserts; // the set P, for types 3 and 4
};

struct Decomposition {
    // Trace iterations restricted to [1, analysis_end], plus one appended
    // noiseless iteration when Alice quits mid-sequence.
    std::vector<IterationRecord> iterations;
    std::vector<ProgressKind> classes;
    std::vector<SequenceSpan> sequences;
    std::vector<FrameSpan> frames;
    std::vector<SegmentSpan> segments;
    uint64_t analysis_end = 0; // Alice's last active iteration
    bool artificial_appended = false;
    bool complete = true; // structural coverage held
    std::vector<std::string> problems;
};

std::vector<ProgressKind> classify_iterations(const CRTrace& t);
Decomposition decompose(const CRTrace& t);

// Outcome of replaying a trace as a substitution/out-of-sync execution.
struct ReplayResult {
    IndelExecution exec;
    bool transcripts_match = false;
    bool per_frame_bound = true; // each frame's c stays within twice its flips
    uint64_t c = 0;
    uint64_t f = 0; // flips over the analyzed span
    std::vector<std::string> problems;
};

ReplayResult build_matching_execution(const CRTrace& t, const IndelRobustProtocol& pi);

struct LemmaResult {
    std::string lemma_id;
    bool pass = true;
    std::vector<uint64_t> witness_iterations;
};

struct LemmaReport {
    std::vector<LemmaResult> results;
    bool all_pass = true;
    std::string to_json() const;
};

LemmaReport check_lemmas(const CRTrace& t);

// Rebuilds the protocol that drove a serialized trace.
IndelRobustProtocol rebuild_protocol(const CRTrace& t);

} // namespace icsim
