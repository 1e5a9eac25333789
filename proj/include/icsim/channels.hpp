#pragma once

#include "icsim/proto.hpp"
#include "icsim/rng.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>

namespace icsim {

// Wire symbol: data bit, erasure, or the post-termination silence marker.
enum class Sym : uint8_t { zero = 0, one = 1, erased = 2, silence = 3 };

inline Sym sym_of_bit(int b) { return b ? Sym::one : Sym::zero; }
inline bool sym_is_bit(Sym s) { return s == Sym::zero || s == Sym::one; }
inline int bit_of_sym(Sym s) { return s == Sym::one ? 1 : 0; }
std::string sym_name(Sym s);

enum class Corruption : uint8_t { none = 0, flip = 1, erase = 2 };
std::string corruption_name(Corruption c);

// Adversary's per-round instruction for the mixed channel.
enum class MChoice : uint8_t { flip = 0, erase = 1, pass = 2 };
std::string mchoice_name(MChoice c);
MChoice mchoice_parse(const std::string& s);

// Oblivious corruption set: fixed before the run, indexed by global
// transmission count (both directions share one counter).
struct NoisePattern {
    std::set<uint64_t> rounds;
    std::map<uint64_t, MChoice> choices; // consulted by the mixed channel only

    uint64_t budget_T() const { return rounds.size(); }
    bool contains(uint64_t index) const { return rounds.count(index) != 0; }

    std::string to_json() const;
    static NoisePattern from_json(const std::string& text);
};

// Per-index flip probability p(i) = min{C*N/i^2, 1/2}.
struct UPEFSchedule {
    double C = 1.0 / (90.0 * 1.1 * 3.0);
    int N = 0;

    double p(uint64_t index) const;
};

struct MUPEFParams {
    double p_corrupt = 2.0 / 3.0;
    double p_e = 1.0 / 3.0;
};

// Partial sum of the schedule plus the analytic tail bound C*N/horizon.
double schedule_tail_sum(const UPEFSchedule& s, uint64_t horizon);

struct WireResult {
    Sym value = Sym::zero;
    Corruption kind = Corruption::none;
    uint64_t index = 0;
};

// One bit in, one observation out; implementations own counter and RNG state.
using BitChannel = std::function<WireResult(int)>;

// Stateless single-transmission primitives.
int transmit_uf(int bit, uint64_t index, const NoisePattern& e);
WireResult transmit_upef(int bit, uint64_t index, const NoisePattern& e, const UPEFSchedule& s,
                         Rng& rng);
WireResult transmit_mupef(int bit, uint64_t index, const NoisePattern& e, MChoice choice, Rng& rng);

// Stateful adapters owning the global transmission counter.
class UFChannel {
public:
    explicit UFChannel(NoisePattern e) : e_(std::move(e)) {}
    WireResult send(int bit);
    uint64_t sent() const { return index_; }

private:
    NoisePattern e_;
    uint64_t index_ = 0;
};

class UPEFChannel {
public:
    UPEFChannel(NoisePattern e, UPEFSchedule s, uint64_t seed)
        : e_(std::move(e)), s_(s), rng_(seed) {}
    WireResult send(int bit);
    uint64_t sent() const { return index_; }

private:
    NoisePattern e_;
    UPEFSchedule s_;
    Rng rng_;
    uint64_t index_ = 0;
};

class MUPEFChannel {
public:
    MUPEFChannel(NoisePattern e, uint64_t seed) : e_(std::move(e)), rng_(seed) {}
    WireResult send(int bit);
    uint64_t sent() const { return index_; }

private:
    NoisePattern e_;
    Rng rng_;
    uint64_t index_ = 0;
};

// Closures over fresh channel state, suitable as BitChannel arguments.
BitChannel make_clean_bit_channel();
BitChannel make_uf_bit_channel(NoisePattern e);
BitChannel make_upef_bit_channel(NoisePattern e, UPEFSchedule s, uint64_t seed);
BitChannel make_mupef_bit_channel(NoisePattern e, uint64_t seed);

// ---- message-driven insertion-deletion execution ----

struct IndelEvent {
    enum class Kind : uint8_t { substitution, out_of_sync };
    Kind kind = Kind::substitution;
    uint64_t round_index = 0; // 1-based delivery index
    int injected_symbol = 0;  // substitution: delivered value; out_of_sync: value injected to sender
};

// One fully scripted delivery slot.
struct IndelDelivery {
    enum class Kind : uint8_t { clean, subst, oos };
    Kind kind = Kind::clean;
    int value = 0; // subst: delivered symbol; oos: symbol injected back to the sender
};

struct IndelExecution {
    struct Round {
        Party sender = Party::Alice;
        int sent = 0;
        int delivered = 0; // subst/clean: what the receiver got; oos: what the sender got back
        bool out_of_sync = false;
    };
    std::vector<Round> rounds;
    uint64_t c = 0; // substitutions + out-of-sync events
    Transcript ta, tb;
};

// Runs the alternating protocol `alt` message-driven under a fully scripted
// delivery sequence. An out-of-sync slot deletes the in-flight symbol and
// injects `value` back toward its sender, so the sender's local round count
// advances by 2 while the receiver's does not.
IndelExecution run_indel(const Protocol& alt, const Input& x, const Input& y,
                         const std::vector<IndelDelivery>& script);

// Convenience wrapper: sparse round-indexed events over a full run of `alt`.
IndelExecution run_indel_events(const Protocol& alt, const Input& x, const Input& y,
                                const std::vector<IndelEvent>& events);

} // namespace icsim
