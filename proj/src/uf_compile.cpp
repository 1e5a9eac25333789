#include "icsim/uf_compile.hpp"

#include <cmath>
#include <stdexcept>

namespace icsim {

int compiled_k(const UPEFSchedule& s, uint64_t round) {
    return amd_k_for(s.p(round));
}

uint64_t compiled_wire_bits(const UPEFSchedule& s, uint64_t rounds) {
    uint64_t total = 0;
    for (uint64_t i = 1; i <= rounds; ++i) total += 3ULL * static_cast<uint64_t>(compiled_k(s, i));
    return total;
}

BitChannel compile_uf_channel(NoisePattern e_wire, UPEFSchedule s, uint64_t seed,
                              std::shared_ptr<uint64_t> wire_bits, uint64_t horizon) {
    struct State {
        NoisePattern e;
        UPEFSchedule s;
        Rng rng;
        uint64_t round = 0;
        uint64_t wire_index = 0;
        uint64_t horizon;
        std::shared_ptr<uint64_t> wire_bits;
        State(NoisePattern p, UPEFSchedule sc, uint64_t sd, uint64_t h,
              std::shared_ptr<uint64_t> w)
            : e(std::move(p)), s(sc), rng(sd), horizon(h), wire_bits(std::move(w)) {}
    };
    auto st = std::make_shared<State>(std::move(e_wire), s, seed, horizon, std::move(wire_bits));
    return [st](int bit) {
        ++st->round;
        if (st->round > st->horizon)
            throw std::runtime_error("compiled channel: round horizon exceeded");
        AMDCodec codec(compiled_k(st->s, st->round));
        std::vector<int> sent = codec.to_bits(codec.encode_bit(bit, st->rng));
        std::vector<int> received(sent.size());
        for (size_t b = 0; b < sent.size(); ++b) {
            ++st->wire_index;
            received[b] = transmit_uf(sent[b], st->wire_index, st->e);
        }
        if (st->wire_bits) *st->wire_bits += sent.size();
        auto dec = codec.decode_bit(codec.from_bits(received));
        WireResult r;
        r.index = st->round;
        if (!dec) {
            r.value = Sym::erased;
            r.kind = Corruption::erase;
        } else {
            r.value = sym_of_bit(*dec);
            r.kind = *dec == bit ? Corruption::none : Corruption::flip;
        }
        return r;
    };
}

NoisePattern lift_pattern_to_wire(const NoisePattern& e_pi, const UPEFSchedule& s, uint64_t seed) {
    NoisePattern wire;
    if (e_pi.rounds.empty()) return wire;
    Rng rng(seed);
    uint64_t offset = 0; // wire bits before the current round's codeword
    uint64_t next = 1;
    for (uint64_t round : e_pi.rounds) {
        for (; next < round; ++next) offset += 3ULL * static_cast<uint64_t>(compiled_k(s, next));
        int bits = 3 * compiled_k(s, round);
        std::vector<int> delta(static_cast<size_t>(bits));
        bool nonzero = false;
        while (!nonzero)
            for (auto& d : delta) nonzero |= (d = static_cast<int>(rng.next_u64() & 1)) != 0;
        for (int b = 0; b < bits; ++b)
            if (delta[static_cast<size_t>(b)])
                wire.rounds.insert(offset + static_cast<uint64_t>(b) + 1);
    }
    return wire;
}

uint64_t ZeroRunMonitor::window_len(int N, uint64_t round) {
    if (round == 0) throw std::invalid_argument("window_len: rounds are 1-based");
    return static_cast<uint64_t>(
        std::ceil(static_cast<double>(N) + 4.0 * std::log2(static_cast<double>(round))));
}

void ZeroRunMonitor::begin_sender_round(uint64_t round) {
    uint64_t len = window_len(N_, round);
    windows_.push_back(Window{len, 0, len});
}

void ZeroRunMonitor::observe(int bit) {
    if (terminated_) return;
    for (auto& w : windows_) {
        if (w.remaining == 0) continue;
        --w.remaining;
        if (bit == 0) ++w.zeros;
        if (w.remaining == 0) {
            bool hit = relaxed_ ? static_cast<double>(w.zeros) >=
                                      fraction_ * static_cast<double>(w.len)
                                : w.zeros == w.len;
            if (hit) terminated_ = true;
        }
    }
    while (!windows_.empty() && windows_.front().remaining == 0) windows_.pop_front();
}

} // namespace icsim
