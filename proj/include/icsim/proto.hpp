#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace icsim {

enum class Party : uint8_t { Alice = 0, Bob = 1 };

inline Party other(Party p) { return p == Party::Alice ? Party::Bob : Party::Alice; }

// Opaque party input.
using Input = std::vector<uint8_t>;

// One recorded symbol in a party's transcript.
struct TranscriptEntry {
    int symbol = 0;
    bool sent = false; // sent by this party (else received)
};

// A party's view of an execution: one entry per round, in round order.
class Transcript {
public:
    void append_sent(int symbol) { entries_.push_back({symbol, true}); }
    void append_received(int symbol) { entries_.push_back({symbol, false}); }
    void drop_last() { entries_.pop_back(); }

    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const TranscriptEntry& operator[](size_t i) const { return entries_[i]; }

    std::vector<int> symbols() const {
        std::vector<int> s;
        s.reserve(entries_.size());
        for (const auto& e : entries_) s.push_back(e.symbol);
        return s;
    }

    bool same_symbols(const Transcript& o) const {
        if (entries_.size() != o.entries_.size()) return false;
        for (size_t i = 0; i < entries_.size(); ++i)
            if (entries_[i].symbol != o.entries_[i].symbol) return false;
        return true;
    }

private:
    std::vector<TranscriptEntry> entries_;
};

// A deterministic two-party protocol with a fixed speaking order.
// next_symbol must be a pure function of (input, own transcript).
struct Protocol {
    int length = 0;
    int alphabet = 2;
    // speaker per round, 1-based round r -> speaker[r-1]
    std::vector<Party> speaker;
    std::function<int(const Input&, const Transcript&)> next_symbol;

    bool alternating() const {
        for (int r = 1; r <= length; ++r)
            if (speaker[r - 1] != (r % 2 == 1 ? Party::Alice : Party::Bob)) return false;
        return true;
    }
};

std::vector<Party> alternating_order(int n);

// Runs p over a noiseless channel; returns (Alice transcript, Bob transcript).
std::pair<Transcript, Transcript> run_noiseless(const Protocol& p, const Input& x, const Input& y);

// Converts a fixed-order protocol to an alternating one (length <= 2N).
// Padding rounds transmit symbol 0 and are dropped when the other party's
// next_symbol consults the stripped history.
Protocol to_alternating(const Protocol& p);

// Removes the padding rounds introduced by to_alternating from a transcript
// of the converted protocol, recovering the original protocol's transcript.
std::vector<int> strip_padding(const Protocol& original, const std::vector<int>& alt_symbols);

// Deterministic pseudorandom test protocol (alternating, seeded).
Protocol make_random_protocol(uint64_t seed, int n, int alphabet);

} // namespace icsim
